#include <cmath>
#include <filesystem>
#include <map>

#include "doctest.h"
#include "songsieve/error.hpp"
#include "songsieve/split.hpp"

using namespace songsieve;

namespace {

Annotation ann(const std::string& source_id, const std::string& label) {
    Annotation a;
    a.source_id = source_id;
    a.label = label;
    a.start_s = 0.0;
    a.end_s = 1.0;
    return a;
}

/// Unweighted per-class deviation objective used by the exhaustive oracle.
double assignment_deviation(const std::vector<Annotation>& annotations,
                            const std::map<std::string, Subset>& assignment,
                            const std::array<double, 3>& targets) {
    std::map<std::string, std::array<long, 3>> counts;
    std::map<std::string, long> totals;
    for (const Annotation& a : annotations) {
        counts[a.label][static_cast<int>(assignment.at(a.source_id))] += 1;
        ++totals[a.label];
    }
    double dev = 0.0;
    for (const auto& [label, per_subset] : counts) {
        for (int s = 0; s < 3; ++s)
            dev += std::abs(per_subset[s] / static_cast<double>(totals[label]) - targets[s]);
    }
    return dev;
}

}  // namespace

TEST_CASE("ten unit files split 8/1/1") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 10; ++i) annotations.push_back(ann("f" + std::to_string(i), "A"));
    const SplitPlan plan = plan_split(annotations);

    std::array<long, 3> files_per_subset = {0, 0, 0};
    for (const auto& [source_id, subset] : plan.assignment) {
        (void)source_id;
        files_per_subset[static_cast<int>(subset)] += 1;
    }
    CHECK(files_per_subset[0] == 8);
    CHECK(files_per_subset[1] == 1);
    CHECK(files_per_subset[2] == 1);
    CHECK(plan.per_class_counts.at("A") == std::array<long, 3>{8, 1, 1});
}

TEST_CASE("divisible single-label fixtures hit targets exactly for any seed") {
    for (int n_files : {10, 20, 50}) {
        for (std::uint64_t seed : {1ull, 42ull, 777ull}) {
            std::vector<Annotation> annotations;
            for (int i = 0; i < n_files; ++i) annotations.push_back(ann("f" + std::to_string(i), "A"));
            const SplitPlan plan = plan_split(annotations, {0.8, 0.1, 0.1}, seed);
            const auto& counts = plan.per_class_counts.at("A");
            CHECK(counts[0] == n_files * 8 / 10);
            CHECK(counts[1] == n_files / 10);
            CHECK(counts[2] == n_files / 10);
        }
    }
}

TEST_CASE("every file is assigned exactly once") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 30; ++i) {
        const std::string f = "f" + std::to_string(i);
        annotations.push_back(ann(f, i % 3 == 0 ? "A" : "B"));
        if (i % 4 == 0) annotations.push_back(ann(f, "C"));
    }
    const SplitPlan plan = plan_split(annotations);
    std::set<std::string> sources;
    for (const Annotation& a : annotations) sources.insert(a.source_id);
    CHECK(plan.assignment.size() == sources.size());
    for (const std::string& s : sources) CHECK(plan.assignment.count(s) == 1);

    // per-class counts tally with the assignment
    for (const auto& [label, counts] : plan.per_class_counts) {
        long total = 0;
        for (const Annotation& a : annotations)
            if (a.label == label) ++total;
        CHECK(counts[0] + counts[1] + counts[2] == total);
    }
}

TEST_CASE("single-file class is confined to one subset and flagged") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 9; ++i) annotations.push_back(ann("f" + std::to_string(i), "Common"));
    // the rare class shares its only file with the common one
    annotations.push_back(ann("f0", "Upupa epops"));
    annotations.push_back(ann("f0", "Upupa epops"));

    const SplitPlan plan = plan_split(annotations);
    const auto& rare = plan.per_class_counts.at("Upupa epops");
    int nonzero_subsets = 0;
    for (long c : rare)
        if (c > 0) ++nonzero_subsets;
    CHECK(nonzero_subsets == 1);
    REQUIRE(plan.warnings.size() == 1);
    CHECK(plan.warnings[0].find("Upupa epops") != std::string::npos);
}

TEST_CASE("four-file instance matches the exhaustive optimum") {
    // two interleaved classes with equal totals
    std::vector<Annotation> annotations;
    for (int i = 0; i < 8; ++i) annotations.push_back(ann("f_a", "A"));
    annotations.push_back(ann("f_mix1", "A"));
    annotations.push_back(ann("f_mix1", "B"));
    for (int i = 0; i < 8; ++i) annotations.push_back(ann("f_b", "B"));
    annotations.push_back(ann("f_mix2", "A"));
    annotations.push_back(ann("f_mix2", "B"));

    const std::array<double, 3> targets = {0.8, 0.1, 0.1};
    const std::vector<std::string> files = {"f_a", "f_b", "f_mix1", "f_mix2"};

    double best = 1e300;
    for (int mask = 0; mask < 81; ++mask) {
        std::map<std::string, Subset> assignment;
        int m = mask;
        for (const std::string& f : files) {
            assignment[f] = static_cast<Subset>(m % 3);
            m /= 3;
        }
        best = std::min(best, assignment_deviation(annotations, assignment, targets));
    }

    const SplitPlan plan = plan_split(annotations, targets);
    const double achieved = assignment_deviation(annotations, plan.assignment, targets);
    CHECK(achieved == doctest::Approx(best).epsilon(1e-9));
    CHECK(achieved == doctest::Approx(0.0).epsilon(1e-9));  // this instance is exactly solvable
}

TEST_CASE("plan is deterministic per seed") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 25; ++i) annotations.push_back(ann("f" + std::to_string(i), i % 2 ? "A" : "B"));
    const SplitPlan a = plan_split(annotations, {0.8, 0.1, 0.1}, 7);
    const SplitPlan b = plan_split(annotations, {0.8, 0.1, 0.1}, 7);
    CHECK(a.assignment == b.assignment);
}

TEST_CASE("empty input is rejected") {
    try {
        plan_split({});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::empty_input);
    }
}

TEST_CASE("split csv round trip") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 10; ++i) annotations.push_back(ann("f" + std::to_string(i), "A"));
    const SplitPlan plan = plan_split(annotations);
    const std::string path =
        (std::filesystem::temp_directory_path() / "ss_split.csv").string();
    write_split_csv(plan, path);
    write_split_class_report(plan, (std::filesystem::temp_directory_path() / "ss_split_report.csv").string());
    const SplitPlan back = read_split_csv(path);
    CHECK(back.assignment == plan.assignment);
}

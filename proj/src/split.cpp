#include "songsieve/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "songsieve/csv.hpp"
#include "songsieve/error.hpp"

namespace songsieve {

const char* subset_name(Subset subset) noexcept {
    switch (subset) {
        case Subset::train: return "train";
        case Subset::validation: return "validation";
        case Subset::test: return "test";
    }
    return "?";
}

SplitPlan plan_split(const std::vector<Annotation>& annotations, std::array<double, 3> targets,
                     std::uint64_t seed) {
    if (annotations.empty()) throw error(errc::empty_input, "no annotations to split");
    const double target_sum = targets[0] + targets[1] + targets[2];
    if (std::abs(target_sum - 1.0) > 1e-9)
        throw error(errc::invalid_config, "split targets must sum to 1");

    // per-file and global class tallies
    std::map<std::string, std::map<std::string, long>> file_class_counts;
    std::map<std::string, long> class_totals;
    std::map<std::string, std::set<std::string>> class_files;
    for (const Annotation& a : annotations) {
        if (a.source_id.empty()) throw error(errc::empty_input, "annotation without source_id");
        ++file_class_counts[a.source_id][a.label];
        ++class_totals[a.label];
        class_files[a.label].insert(a.source_id);
    }

    struct FileInfo {
        std::string source_id;
        long difficulty = 0;  // annotations of the file's globally rarest class
        long total = 0;
    };
    std::vector<FileInfo> files;
    files.reserve(file_class_counts.size());
    for (const auto& [source_id, counts] : file_class_counts) {
        FileInfo info;
        info.source_id = source_id;
        long rarest_total = -1;
        for (const auto& [label, count] : counts) {
            info.total += count;
            if (rarest_total < 0 || class_totals.at(label) < rarest_total) {
                rarest_total = class_totals.at(label);
                info.difficulty = count;
            }
        }
        files.push_back(std::move(info));
    }
    std::sort(files.begin(), files.end(), [](const FileInfo& a, const FileInfo& b) {
        if (a.difficulty != b.difficulty) return a.difficulty > b.difficulty;
        if (a.total != b.total) return a.total > b.total;
        return a.source_id < b.source_id;
    });

    SplitPlan plan;
    for (const auto& [label, total] : class_totals) {
        (void)total;
        plan.per_class_counts[label] = {0, 0, 0};
    }

    Rng rng(seed);
    const auto deviation = [&](const std::map<std::string, std::array<long, 3>>& counts) {
        double dev = 0.0;
        for (const auto& [label, per_subset] : counts) {
            const double total = static_cast<double>(class_totals.at(label));
            double class_dev = 0.0;
            for (int s = 0; s < 3; ++s)
                class_dev += std::abs(per_subset[s] / total - targets[s]);
            dev += class_dev / total;  // inverse-size weight protects rare classes
        }
        return dev;
    };

    for (const FileInfo& file : files) {
        const auto& counts = file_class_counts.at(file.source_id);
        double best_dev = 0.0;
        std::vector<int> best_subsets;
        for (int s = 0; s < 3; ++s) {
            for (const auto& [label, count] : counts) plan.per_class_counts[label][s] += count;
            const double dev = deviation(plan.per_class_counts);
            for (const auto& [label, count] : counts) plan.per_class_counts[label][s] -= count;
            if (best_subsets.empty() || dev < best_dev - 1e-12) {
                best_dev = dev;
                best_subsets = {s};
            } else if (dev <= best_dev + 1e-12) {
                best_subsets.push_back(s);
            }
        }
        const int chosen = best_subsets[best_subsets.size() == 1
                                            ? 0
                                            : static_cast<std::size_t>(rng.below(best_subsets.size()))];
        plan.assignment[file.source_id] = static_cast<Subset>(chosen);
        for (const auto& [label, count] : counts) plan.per_class_counts[label][chosen] += count;
    }

    for (const auto& [label, sources] : class_files) {
        if (sources.size() != 1) continue;
        const Subset subset = plan.assignment.at(*sources.begin());
        plan.warnings.push_back("class '" + label + "' occurs only in file '" + *sources.begin() +
                                "'; all its annotations land in the " + subset_name(subset) +
                                " set");
    }
    return plan;
}

void write_split_csv(const SplitPlan& plan, const std::string& path) {
    std::vector<csv::Row> rows;
    rows.push_back({"source_id", "subset"});
    for (const auto& [source_id, subset] : plan.assignment)
        rows.push_back({source_id, subset_name(subset)});
    csv::write_file(path, rows);
}

void write_split_class_report(const SplitPlan& plan, const std::string& path) {
    std::vector<csv::Row> rows;
    rows.push_back({"class", "train", "validation", "test", "total"});
    for (const auto& [label, counts] : plan.per_class_counts) {
        const long total = counts[0] + counts[1] + counts[2];
        rows.push_back({label, std::to_string(counts[0]), std::to_string(counts[1]),
                        std::to_string(counts[2]), std::to_string(total)});
    }
    csv::write_file(path, rows);
}

SplitPlan read_split_csv(const std::string& path) {
    const std::vector<csv::Row> rows = csv::read_file(path);
    if (rows.empty() || rows.front().size() < 2 || rows.front()[0] != "source_id")
        throw error(errc::malformed_row, path + ": missing split CSV header");
    SplitPlan plan;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        if (row.size() != 2) throw error(errc::malformed_row, path + ": expected 2 columns");
        Subset subset;
        if (row[1] == "train") subset = Subset::train;
        else if (row[1] == "validation") subset = Subset::validation;
        else if (row[1] == "test") subset = Subset::test;
        else throw error(errc::malformed_row, path + ": unknown subset '" + row[1] + "'");
        plan.assignment[row[0]] = subset;
    }
    return plan;
}

}  // namespace songsieve

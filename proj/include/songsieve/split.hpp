#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "songsieve/annotations.hpp"
#include "songsieve/rng.hpp"

namespace songsieve {

enum class Subset { train = 0, validation = 1, test = 2 };

const char* subset_name(Subset subset) noexcept;

/// Train/validation/test assignment of whole files. Every source_id appears
/// exactly once; per-class counts are tallied against the assignment.
struct SplitPlan {
    std::map<std::string, Subset> assignment;
    std::map<std::string, std::array<long, 3>> per_class_counts;  // class -> (train, val, test)
    std::vector<std::string> warnings;
};

/// Greedy per-file split aiming at per-class target proportions (80-10-10 by
/// default) under hard file exclusivity. Files are processed in descending
/// constraint difficulty (the in-file annotation count of the globally rarest
/// class they contain; ties by total annotations, then source_id); each goes
/// to the subset minimizing the per-class deviation sum weighted by inverse
/// class size. Residual ties are broken by the seed. Classes confined to a
/// single file land wholly in one subset and are flagged in warnings.
///
/// Throws: EmptyInput.
SplitPlan plan_split(const std::vector<Annotation>& annotations,
                     std::array<double, 3> targets = {0.8, 0.1, 0.1},
                     std::uint64_t seed = kDefaultSeed);

/// split.csv (source_id,subset) and the per-class count report.
void write_split_csv(const SplitPlan& plan, const std::string& path);
void write_split_class_report(const SplitPlan& plan, const std::string& path);
SplitPlan read_split_csv(const std::string& path);

}  // namespace songsieve

#pragma once

#include "semtag/condition.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace semtag::stats {

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::int64_t>> counts;  // rows x cols
};

/// How often each condition received each rank: conditions x ranks.
struct RankCountMatrix {
    std::vector<std::string> conditions;
    std::vector<std::vector<std::int64_t>> counts;
    std::int64_t participants = 0;
};

struct TestResult {
    std::string name;
    double statistic = 0.0;
    int df = 0;
    double p = 1.0;
};

/// Regularized lower/upper incomplete gamma P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Upper tail P(X > x) of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, double df);

/// Pearson chi-square test of independence without continuity correction.
/// Throws DegenerateTable on a zero marginal, Validation on malformed tables.
TestResult chi_square(const ContingencyTable& table);

/// Friedman rank-sum statistic computed from rank counts (no ties).
/// Throws InvalidMatrix when a row or a rank column does not sum to the participant count.
TestResult friedman_from_rank_counts(const RankCountMatrix& m);

/// Chance-corrected agreement between two coders. Throws Validation on length
/// mismatch or empty input.
double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b);

/// Per-annotation tag counts; the input shape for the descriptive reports.
struct AnnotationTally {
    Condition condition = Condition::LT;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

struct ConditionMeans {
    Condition condition = Condition::LT;
    std::size_t annotations = 0;
    std::optional<double> accepted;  // absent when the condition has no annotations
    std::optional<double> rejected;
};

std::vector<ConditionMeans> mean_tags_per_condition(std::span<const AnnotationTally> annotations);

/// Label counts ordered by (count desc, label asc); labels are case-sensitive.
std::vector<std::pair<std::string, std::size_t>> tag_frequency(std::span<const std::string> labels);

/// Cumulative accepted-tag series per condition over the global annotation index.
/// Every series has one entry per input annotation.
std::map<Condition, std::vector<std::size_t>> cumulative_evolution(std::span<const AnnotationTally> ordered);

/// Balanced Latin square for an even number of conditions (Williams design).
/// Entry [row][col] is the condition index presented at position `col` in sequence `row`.
std::vector<std::vector<int>> balanced_latin_square(int k);

/// Delimited text: a header row of column labels (first cell is a corner label),
/// then one row per label with integer counts. Comma, tab or whitespace separated;
/// `#` starts a comment line.
ContingencyTable parse_table(std::istream& in);

/// Same layout as parse_table with conditions as rows and ranks as columns.
RankCountMatrix parse_rank_counts(std::istream& in);

/// Two columns of codes (one pair per line), same delimiter rules; optional header
/// line starting with `#`.
std::pair<std::vector<std::string>, std::vector<std::string>> parse_code_pairs(std::istream& in);

} // namespace semtag::stats

#include "semtag/stats.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace semtag::stats {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) by modified Lentz; used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    if (line.find(',') != std::string::npos) {
        for (auto& f : split(line, ',')) fields.push_back(trim(f));
    } else if (line.find('\t') != std::string::npos) {
        for (auto& f : split(line, '\t')) fields.push_back(trim(f));
    } else {
        std::istringstream ss(line);
        std::string f;
        while (ss >> f) fields.push_back(f);
    }
    return fields;
}

std::int64_t parse_count(const std::string& s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 0) {
        throw Error(ErrorCode::Validation, "'" + s + "' is not a non-negative integer count");
    }
    return v;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.push_back(split_fields(line));
    }
    return rows;
}

ContingencyTable rows_to_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.size() < 2) throw Error(ErrorCode::Validation, "table needs a header and at least one row");
    ContingencyTable t;
    const auto& header = rows.front();
    // A header with one field fewer than the data rows has no corner cell.
    const std::size_t width = rows[1].size();
    const std::size_t skip = header.size() == width ? 1 : 0;
    t.col_labels.assign(header.begin() + static_cast<std::ptrdiff_t>(skip), header.end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != t.col_labels.size() + 1) {
            throw Error(ErrorCode::Validation, "row " + std::to_string(r) + " has the wrong number of fields");
        }
        t.row_labels.push_back(row.front());
        std::vector<std::int64_t> counts;
        for (std::size_t c = 1; c < row.size(); ++c) counts.push_back(parse_count(row[c]));
        t.counts.push_back(std::move(counts));
    }
    return t;
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0 || std::isnan(x)) throw Error(ErrorCode::Validation, "invalid incomplete gamma arguments");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0 || std::isnan(x)) throw Error(ErrorCode::Validation, "invalid incomplete gamma arguments");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(df / 2.0, x / 2.0);
}

TestResult chi_square(const ContingencyTable& table) {
    const auto rows = table.counts.size();
    if (rows < 2) throw Error(ErrorCode::Validation, "contingency table needs at least 2 rows");
    const auto cols = table.counts.front().size();
    if (cols < 2) throw Error(ErrorCode::Validation, "contingency table needs at least 2 columns");

    std::vector<double> row_total(rows, 0.0);
    std::vector<double> col_total(cols, 0.0);
    double n = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (table.counts[r].size() != cols) throw Error(ErrorCode::Validation, "ragged contingency table");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = table.counts[r][c];
            if (v < 0) throw Error(ErrorCode::Validation, "negative count");
            row_total[r] += static_cast<double>(v);
            col_total[c] += static_cast<double>(v);
            n += static_cast<double>(v);
        }
    }
    const auto zero = [](double v) { return v == 0.0; };
    if (std::any_of(row_total.begin(), row_total.end(), zero) ||
        std::any_of(col_total.begin(), col_total.end(), zero)) {
        throw Error(ErrorCode::DegenerateTable, "contingency table has a zero marginal total");
    }

    double stat = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double expected = row_total[r] * col_total[c] / n;
            const double diff = static_cast<double>(table.counts[r][c]) - expected;
            stat += diff * diff / expected;
        }
    }
    const int df = static_cast<int>((rows - 1) * (cols - 1));
    return {"chi-square", stat, df, chi_square_sf(stat, df)};
}

TestResult friedman_from_rank_counts(const RankCountMatrix& m) {
    const auto k = m.counts.size();
    if (k < 2) throw Error(ErrorCode::InvalidMatrix, "need at least 2 conditions");
    const auto n = m.participants;
    if (n <= 0) throw Error(ErrorCode::InvalidMatrix, "participant count must be positive");
    for (const auto& row : m.counts) {
        if (row.size() != k) throw Error(ErrorCode::InvalidMatrix, "rank count matrix must be square (conditions x ranks)");
        std::int64_t sum = 0;
        for (auto v : row) {
            if (v < 0) throw Error(ErrorCode::InvalidMatrix, "negative rank count");
            sum += v;
        }
        if (sum != n) throw Error(ErrorCode::InvalidMatrix, "condition row does not sum to the participant count");
    }
    for (std::size_t r = 0; r < k; ++r) {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < k; ++j) sum += m.counts[j][r];
        if (sum != n) throw Error(ErrorCode::InvalidMatrix, "rank column does not sum to the participant count");
    }

    double sum_sq = 0.0;
    for (const auto& row : m.counts) {
        double rank_sum = 0.0;
        for (std::size_t r = 0; r < k; ++r) rank_sum += static_cast<double>(row[r]) * static_cast<double>(r + 1);
        sum_sq += rank_sum * rank_sum;
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    double stat = 12.0 / (nd * kd * (kd + 1.0)) * sum_sq - 3.0 * nd * (kd + 1.0);
    // Equal rank sums give exactly zero; clear floating-point residue.
    if (std::abs(stat) < 1e-9) stat = 0.0;
    const int df = static_cast<int>(k) - 1;
    return {"friedman", stat, df, chi_square_sf(stat, df)};
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::Validation, "code lists differ in length");
    if (a.empty()) throw Error(ErrorCode::Validation, "code lists are empty");
    const double n = static_cast<double>(a.size());
    std::map<std::string, double> freq_a, freq_b;
    double agree = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) agree += 1.0;
        freq_a[a[i]] += 1.0;
        freq_b[b[i]] += 1.0;
    }
    const double p_o = agree / n;
    double p_e = 0.0;
    for (const auto& [code, fa] : freq_a) {
        if (auto it = freq_b.find(code); it != freq_b.end()) p_e += (fa / n) * (it->second / n);
    }
    if (p_e >= 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

std::vector<ConditionMeans> mean_tags_per_condition(std::span<const AnnotationTally> annotations) {
    std::vector<ConditionMeans> out;
    for (auto cond : kAllConditions) {
        ConditionMeans m;
        m.condition = cond;
        std::size_t accepted = 0, rejected = 0;
        for (const auto& a : annotations) {
            if (a.condition != cond) continue;
            ++m.annotations;
            accepted += a.accepted;
            rejected += a.rejected;
        }
        if (m.annotations > 0) {
            m.accepted = static_cast<double>(accepted) / static_cast<double>(m.annotations);
            m.rejected = static_cast<double>(rejected) / static_cast<double>(m.annotations);
        }
        out.push_back(m);
    }
    return out;
}

std::vector<std::pair<std::string, std::size_t>> tag_frequency(std::span<const std::string> labels) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    return out;
}

std::map<Condition, std::vector<std::size_t>> cumulative_evolution(std::span<const AnnotationTally> ordered) {
    std::map<Condition, std::vector<std::size_t>> series;
    for (auto cond : kAllConditions) {
        auto& s = series[cond];
        s.reserve(ordered.size());
        std::size_t running = 0;
        for (const auto& a : ordered) {
            if (a.condition == cond) running += a.accepted;
            s.push_back(running);
        }
    }
    return series;
}

std::vector<std::vector<int>> balanced_latin_square(int k) {
    if (k < 2 || k % 2 != 0) {
        throw Error(ErrorCode::Unsupported, "balanced Latin squares are built for even k >= 2 only");
    }
    // First sequence 0, 1, k-1, 2, k-2, ...; later rows shift it cyclically.
    std::vector<int> first;
    first.reserve(static_cast<std::size_t>(k));
    int lo = 1, hi = k - 1;
    first.push_back(0);
    for (int i = 1; i < k; ++i) first.push_back(i % 2 == 1 ? lo++ : hi--);

    std::vector<std::vector<int>> square(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        for (int v : first) square[static_cast<std::size_t>(r)].push_back((v + r) % k);
    }
    return square;
}

ContingencyTable parse_table(std::istream& in) { return rows_to_table(read_rows(in)); }

RankCountMatrix parse_rank_counts(std::istream& in) {
    auto t = rows_to_table(read_rows(in));
    RankCountMatrix m;
    m.conditions = std::move(t.row_labels);
    m.counts = std::move(t.counts);
    for (auto v : m.counts.front()) m.participants += v;
    return m;
}

std::pair<std::vector<std::string>, std::vector<std::string>> parse_code_pairs(std::istream& in) {
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    for (auto& row : read_rows(in)) {
        if (row.size() != 2) throw Error(ErrorCode::Validation, "code pair lines need exactly two fields");
        out.first.push_back(std::move(row[0]));
        out.second.push_back(std::move(row[1]));
    }
    return out;
}

} // namespace semtag::stats

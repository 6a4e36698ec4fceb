#pragma once
// Test helpers and independent reference computations. Nothing here calls into
// the library code it is used to check.

#include "semtag/geo.hpp"
#include "semtag/suggest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path source_dir() { return SEMTAG_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "data" / "fixtures" / name; }
inline std::filesystem::path table(const std::string& name) { return source_dir() / "data" / "tables" / name; }

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("semtag-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// -- geometry ---------------------------------------------------------------

inline double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Normal equations (A^T A) p = A^T y for each output row, solved by Cramer's rule.
/// Returns {a, b, c, d, e, f}. Targets are Mercator meters computed from the
/// closed-form projection below.
inline std::array<double, 6> cramer_affine(const std::vector<std::array<double, 4>>& px_py_X_Y) {
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> atx{}, aty{};
    for (const auto& r : px_py_X_Y) {
        const double v[3] = {r[0], r[1], 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += v[i] * v[j];
            atx[i] += v[i] * r[2];
            aty[i] += v[i] * r[3];
        }
    }
    const double d = det3(ata);
    auto solve = [&](const std::array<double, 3>& rhs) {
        std::array<double, 3> out{};
        for (int k = 0; k < 3; ++k) {
            auto m = ata;
            for (int i = 0; i < 3; ++i) m[i][k] = rhs[i];
            out[k] = det3(m) / d;
        }
        return out;
    };
    const auto p = solve(atx);
    const auto q = solve(aty);
    return {p[0], p[1], p[2], q[0], q[1], q[2]};
}

/// x = R * lon_rad, y = R * ln(tan(pi/4 + lat_rad/2)).
inline std::array<double, 2> mercator_oracle(double lon, double lat) {
    constexpr double R = 6378137.0;
    const double pi = std::acos(-1.0);
    return {R * lon * pi / 180.0, R * std::log(std::tan(pi / 4.0 + lat * pi / 360.0))};
}

inline bool in_box(double lon, double lat, const semtag::geo::GeoBBox& b) {
    return !(lon < b.min_lon || lon > b.max_lon || lat < b.min_lat || lat > b.max_lat);
}

// -- suggestions ------------------------------------------------------------

/// Quadratic dedupe: an item survives when no other item with its key scores
/// higher and no earlier one scores the same; then a full sort and truncation.
inline std::vector<semtag::suggest::Suggestion> merge_oracle(
    const std::vector<std::vector<semtag::suggest::Suggestion>>& lists, std::size_t cap,
    const std::set<std::string>& exclude) {
    std::vector<semtag::suggest::Suggestion> flat;
    for (const auto& l : lists) flat.insert(flat.end(), l.begin(), l.end());
    auto key_of = [](const semtag::suggest::Suggestion& s) {
        if (!s.resource.uri.empty()) return s.resource.uri;
        std::string k = s.resource.label;
        for (auto& ch : k) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return "label:" + k;
    };
    std::vector<semtag::suggest::Suggestion> kept;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const auto ki = key_of(flat[i]);
        if (exclude.count(ki)) continue;
        bool survives = true;
        for (std::size_t j = 0; j < flat.size() && survives; ++j) {
            if (j == i || key_of(flat[j]) != ki) continue;
            if (flat[j].score > flat[i].score) survives = false;
            if (j < i && flat[j].score == flat[i].score) survives = false;
        }
        if (survives) kept.push_back(flat[i]);
    }
    // Selection sort by (score desc, label asc, key asc).
    for (std::size_t i = 0; i < kept.size(); ++i) {
        std::size_t best = i;
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
            const auto& a = kept[j];
            const auto& b = kept[best];
            bool before = a.score != b.score ? a.score > b.score
                          : a.resource.label != b.resource.label ? a.resource.label < b.resource.label
                                                                 : key_of(a) < key_of(b);
            if (before) best = j;
        }
        std::swap(kept[i], kept[best]);
    }
    if (kept.size() > cap) kept.resize(cap);
    return kept;
}

// -- statistics -------------------------------------------------------------

/// Closed-form upper tail of chi-square with 3 degrees of freedom.
inline double chi2_sf_df3(double x) {
    const double pi = std::acos(-1.0);
    return std::erfc(std::sqrt(x / 2.0)) + std::sqrt(2.0 * x / pi) * std::exp(-x / 2.0);
}

/// Friedman statistic from rank sums: 12/(n k (k+1)) * sum R_j^2 - 3 n (k+1).
/// counts[cond][rank-1] = participants giving that rank.
inline double friedman_rank_sum_oracle(const std::vector<std::vector<long>>& counts, long n) {
    const double k = static_cast<double>(counts.size());
    double sum_sq = 0.0;
    for (const auto& row : counts) {
        double r = 0.0;
        for (std::size_t rank = 0; rank < row.size(); ++rank) r += static_cast<double>(rank + 1) * row[rank];
        sum_sq += r * r;
    }
    return 12.0 / (n * k * (k + 1.0)) * sum_sq - 3.0 * n * (k + 1.0);
}

/// Kappa from an explicit confusion matrix.
inline double kappa_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::set<std::string> cats(a.begin(), a.end());
    cats.insert(b.begin(), b.end());
    std::vector<std::string> c(cats.begin(), cats.end());
    const std::size_t m = c.size();
    std::vector<std::vector<double>> conf(m, std::vector<double>(m, 0.0));
    auto idx = [&](const std::string& s) { return std::find(c.begin(), c.end(), s) - c.begin(); };
    for (std::size_t i = 0; i < a.size(); ++i) conf[idx(a[i])][idx(b[i])] += 1.0;
    const double n = static_cast<double>(a.size());
    double po = 0.0, pe = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        po += conf[i][i];
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            row += conf[i][j];
            col += conf[j][i];
        }
        pe += row * col;
    }
    po /= n;
    pe /= n * n;
    return pe >= 1.0 ? 1.0 : (po - pe) / (1.0 - pe);
}

/// Brute-force checks of a Williams design. Returns which properties hold:
/// [0] every row is a permutation, [1] every column is a permutation,
/// [2] every ordered pair of distinct conditions is adjacent exactly once.
inline std::array<bool, 3> latin_square_properties(const std::vector<std::vector<int>>& sq, int k) {
    std::array<bool, 3> ok{true, true, true};
    if (static_cast<int>(sq.size()) != k) return {false, false, false};
    for (const auto& row : sq) {
        if (static_cast<int>(row.size()) != k) return {false, false, false};
        std::set<int> s(row.begin(), row.end());
        if (static_cast<int>(s.size()) != k || *s.begin() != 0 || *s.rbegin() != k - 1) ok[0] = false;
    }
    for (int c = 0; c < k; ++c) {
        std::set<int> s;
        for (int r = 0; r < k; ++r) s.insert(sq[r][c]);
        if (static_cast<int>(s.size()) != k) ok[1] = false;
    }
    std::map<std::pair<int, int>, int> adj;
    for (const auto& row : sq)
        for (int c = 0; c + 1 < k; ++c) ++adj[{row[c], row[c + 1]}];
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b && adj[{a, b}] != 1) ok[2] = false;
    return ok;
}

} // namespace testsupport

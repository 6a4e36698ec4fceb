#include "support.hpp"

#include "semtag/error.hpp"
#include "semtag/stats.hpp"

#include <doctest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace semtag;
using namespace semtag::stats;

namespace {

ContingencyTable table_of(std::vector<std::vector<std::int64_t>> counts) {
    ContingencyTable t;
    for (std::size_t r = 0; r < counts.size(); ++r) t.row_labels.push_back("r" + std::to_string(r));
    for (std::size_t c = 0; c < counts.at(0).size(); ++c) t.col_labels.push_back("c" + std::to_string(c));
    t.counts = std::move(counts);
    return t;
}

ContingencyTable load_table(const std::string& name) {
    std::ifstream in(testsupport::table(name));
    REQUIRE(in);
    return parse_table(in);
}

RankCountMatrix load_ranks(const std::string& name) {
    std::ifstream in(testsupport::table(name));
    REQUIRE(in);
    return parse_rank_counts(in);
}

std::vector<std::vector<long>> as_long(const std::vector<std::vector<std::int64_t>>& v) {
    std::vector<std::vector<long>> out;
    for (const auto& r : v) out.emplace_back(r.begin(), r.end());
    return out;
}

/// x with chi2_sf_df3(x) = alpha, by bisection on the closed form.
double critical_df3(double alpha) {
    double lo = 0.0, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2.0;
        (testsupport::chi2_sf_df3(mid) > alpha ? lo : hi) = mid;
    }
    return (lo + hi) / 2.0;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("chi-square on the tag type and category tables") {
    const auto types = chi_square(load_table("tag_types.csv"));
    CHECK(types.df == 3);
    CHECK(types.statistic == doctest::Approx(1.0516).epsilon(0.005 / 1.0516));
    CHECK(types.p > 0.78);
    CHECK(types.p < 0.79);

    const auto cats = chi_square(load_table("tag_categories.csv"));
    CHECK(cats.df == 12);
    CHECK(std::abs(cats.statistic - 17.30) < 0.05);
    CHECK(std::abs(cats.p - 0.14) < 0.005);
}

TEST_CASE("chi-square properties") {
    CHECK(chi_square(table_of({{2, 4, 6}, {2, 4, 6}, {1, 2, 3}})).statistic == doctest::Approx(0.0));
    CHECK(code_of([] { chi_square(table_of({{0, 0}, {1, 2}})); }) == ErrorCode::DegenerateTable);
    CHECK(code_of([] { chi_square(table_of({{1, 2}})); }) == ErrorCode::Validation);
    CHECK(code_of([] { chi_square(table_of({{1, -2}, {3, 4}})); }) == ErrorCode::Validation);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 2 + rng() % 4, cols = 2 + rng() % 4;
        std::vector<std::vector<std::int64_t>> c(rows, std::vector<std::int64_t>(cols));
        for (auto& r : c)
            for (auto& v : r) v = 1 + static_cast<std::int64_t>(rng() % 40);
        const auto base = chi_square(table_of(c));
        auto permuted = c;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        std::vector<std::size_t> order(cols);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (auto& r : permuted) {
            auto copy = r;
            for (std::size_t j = 0; j < cols; ++j) r[j] = copy[order[j]];
        }
        CHECK(chi_square(table_of(permuted)).statistic == doctest::Approx(base.statistic).epsilon(1e-12));
        if (base.df == 3) CHECK(base.p == doctest::Approx(testsupport::chi2_sf_df3(base.statistic)).epsilon(1e-9));
    }
}

TEST_CASE("chi-square tail agrees with the closed form for three degrees of freedom") {
    for (double x = 0.01; x < 60.0; x *= 1.37) {
        CHECK(chi_square_sf(x, 3) == doctest::Approx(testsupport::chi2_sf_df3(x)).epsilon(1e-10));
    }
    CHECK(chi_square_sf(0.0, 3) == 1.0);
    // df = 2 is exponential: sf(x) = exp(-x/2).
    for (double x = 0.1; x < 50.0; x += 2.3) CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    CHECK(regularized_gamma_p(2.5, 1.5) + regularized_gamma_q(2.5, 1.5) == doctest::Approx(1.0));
}

TEST_CASE("Friedman on the four ranking blocks") {
    const double critical = critical_df3(0.01);
    CHECK(critical == doctest::Approx(11.345).epsilon(1e-4));
    for (const auto* name : {"ranking_intuitiveness.csv", "ranking_influence.csv", "ranking_mental_effort.csv",
                             "ranking_usefulness.csv"}) {
        CAPTURE(name);
        const auto m = load_ranks(name);
        CHECK(m.participants == 24);
        const auto r = friedman_from_rank_counts(m);
        CHECK(r.df == 3);
        CHECK(r.statistic > critical);
        CHECK(r.p < 0.01);
        CHECK(r.statistic == doctest::Approx(testsupport::friedman_rank_sum_oracle(as_long(m.counts), 24)).epsilon(1e-12));
    }
    CHECK(std::abs(friedman_from_rank_counts(load_ranks("ranking_intuitiveness.csv")).statistic - 16.05) < 0.01);
}

TEST_CASE("Friedman edge cases") {
    RankCountMatrix uniform{{"A", "B", "C", "D"}, {{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}}, 4};
    const auto r = friedman_from_rank_counts(uniform);
    CHECK(r.statistic == 0.0);
    CHECK(r.p == doctest::Approx(1.0));

    RankCountMatrix bad{{"A", "B"}, {{2, 0}, {1, 1}}, 2};
    CHECK(code_of([&] { friedman_from_rank_counts(bad); }) == ErrorCode::InvalidMatrix);

    // Relabeling conditions does not change the statistic.
    auto m = load_ranks("ranking_usefulness.csv");
    const auto before = friedman_from_rank_counts(m).statistic;
    std::reverse(m.counts.begin(), m.counts.end());
    std::reverse(m.conditions.begin(), m.conditions.end());
    CHECK(friedman_from_rank_counts(m).statistic == doctest::Approx(before));
}

TEST_CASE("Cohen's kappa") {
    const std::vector<std::string> a{"X", "X", "Y", "Y"}, b{"X", "Y", "X", "Y"};
    CHECK(cohens_kappa(a, b) == doctest::Approx(0.0));
    CHECK(cohens_kappa(a, a) == 1.0);
    const std::vector<std::string> constant{"X", "X", "X"};
    CHECK(cohens_kappa(constant, constant) == 1.0);
    const std::vector<std::string> shorter{"X"};
    CHECK(code_of([&] { cohens_kappa(a, shorter); }) == ErrorCode::Validation);
    CHECK(code_of([] { cohens_kappa({}, {}); }) == ErrorCode::Validation);

    std::mt19937_64 rng(6);
    const std::vector<std::string> codes{"factual", "personal", "other", "event"};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        std::vector<std::string> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = codes[rng() % codes.size()];
            y[i] = rng() % 3 ? x[i] : codes[rng() % codes.size()];
        }
        const double k = cohens_kappa(x, y);
        CHECK(k <= 1.0 + 1e-12);
        CHECK(k == doctest::Approx(testsupport::kappa_oracle(x, y)).epsilon(1e-12));
        CHECK(k == doctest::Approx(cohens_kappa(y, x)).epsilon(1e-12));
    }
}

TEST_CASE("means per condition") {
    // Accepted counts per LT annotation 1,2,3,6 -> 3; ST 0,0,1,1 -> 0.5; SMT 2,2,2,3 -> 2.25.
    std::vector<AnnotationTally> t;
    for (auto [c, acc, rej] : std::vector<std::tuple<Condition, std::size_t, std::size_t>>{
             {Condition::LT, 1, 0}, {Condition::LT, 2, 0}, {Condition::LT, 3, 0}, {Condition::LT, 6, 0},
             {Condition::ST, 0, 5}, {Condition::ST, 0, 7}, {Condition::ST, 1, 6}, {Condition::ST, 1, 4},
             {Condition::SMT, 2, 1}, {Condition::SMT, 2, 0}, {Condition::SMT, 2, 2}, {Condition::SMT, 3, 0}})
        t.push_back({c, acc, rej});
    const auto m = mean_tags_per_condition(t);
    REQUIRE(m.size() == 4);
    CHECK(*m[0].accepted == 3.0);
    CHECK(*m[0].rejected == 0.0);
    CHECK(*m[1].accepted == 0.5);
    CHECK(*m[1].rejected == 5.5);
    CHECK(*m[2].accepted == 2.25);
    CHECK(*m[2].rejected == 0.75);
    CHECK(m[3].condition == Condition::SMT_CTX);
    CHECK_FALSE(m[3].accepted.has_value());
    CHECK(m[3].annotations == 0);

    const std::vector<AnnotationTally> one{{Condition::SMT, 3, 0}};
    CHECK(*mean_tags_per_condition(one)[2].accepted == 3.0);
}

TEST_CASE("tag frequency") {
    std::vector<std::string> labels{"New York", "Ithaca", "Cornell University", "Ithaca", "Ithaca", "New York",
                                    "Cornell University", "Ithaca", "Ithaca", "Cornell University", "Ithaca", "gorges",
                                    "ithaca"};
    const auto f = tag_frequency(labels);
    REQUIRE(f.size() == 5);
    CHECK(f[0] == std::pair<std::string, std::size_t>{"Ithaca", 6});
    CHECK(f[1] == std::pair<std::string, std::size_t>{"Cornell University", 3});
    CHECK(f[2] == std::pair<std::string, std::size_t>{"New York", 2});
    CHECK(f[3].first == "gorges");
    CHECK(f[4].first == "ithaca");
    std::size_t total = 0;
    for (const auto& [_, n] : f) total += n;
    CHECK(total == labels.size());
    CHECK(tag_frequency(std::vector<std::string>{}).empty());
}

TEST_CASE("cumulative evolution") {
    const std::vector<AnnotationTally> three{{Condition::LT, 2, 0}, {Condition::LT, 0, 0}, {Condition::LT, 3, 0}};
    CHECK(cumulative_evolution(three).at(Condition::LT) == std::vector<std::size_t>{2, 2, 5});

    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AnnotationTally> t(rng() % 30);
        for (auto& a : t) a = {kAllConditions[rng() % 4], rng() % 8, rng() % 3};
        const auto s = cumulative_evolution(t);
        for (auto c : kAllConditions) {
            std::size_t running = 0;
            const auto& series = s.at(c);
            REQUIRE(series.size() == t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i].condition == c) running += t[i].accepted;
                CHECK(series[i] == running);
                if (i) CHECK(series[i] >= series[i - 1]);
            }
        }
    }
}

TEST_CASE("balanced Latin squares") {
    CHECK(balanced_latin_square(2) == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
    CHECK(balanced_latin_square(4) == std::vector<std::vector<int>>{{0, 1, 3, 2}, {1, 2, 0, 3}, {2, 3, 1, 0}, {3, 0, 2, 1}});
    for (int k : {2, 4, 6, 8, 10}) {
        CAPTURE(k);
        const auto p = testsupport::latin_square_properties(balanced_latin_square(k), k);
        CHECK(p[0]);
        CHECK(p[1]);
        CHECK(p[2]);
    }
    CHECK(code_of([] { balanced_latin_square(3); }) == ErrorCode::Unsupported);
    CHECK(code_of([] { balanced_latin_square(0); }) == ErrorCode::Unsupported);
}

TEST_CASE("table parsing") {
    std::istringstream tabs("# c\n\tA\tB\nx\t1\t2\ny\t3\t4\n");
    const auto t = parse_table(tabs);
    CHECK(t.row_labels == std::vector<std::string>{"x", "y"});
    CHECK(t.col_labels == std::vector<std::string>{"A", "B"});
    CHECK(t.counts == std::vector<std::vector<std::int64_t>>{{1, 2}, {3, 4}});

    std::istringstream spaces("cond  A B\nx 1 2\ny 3 4\n");
    CHECK(parse_table(spaces).counts == t.counts);

    std::istringstream bad("c,A,B\nx,1,two\n");
    CHECK_THROWS_AS(parse_table(bad), Error);

    std::istringstream pairs("# coder1 coder2\nfactual,factual\npersonal factual\n");
    const auto [a, b] = parse_code_pairs(pairs);
    CHECK(a == std::vector<std::string>{"factual", "personal"});
    CHECK(b == std::vector<std::string>{"factual", "factual"});
}

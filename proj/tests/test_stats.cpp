#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "infmax/random.hpp"
#include "infmax/stats.hpp"

using infmax::ResultMatrix;

namespace {

ResultMatrix matrix(std::vector<std::string> methods, std::vector<std::vector<double>> values) {
    ResultMatrix m;
    m.methods = std::move(methods);
    m.values = std::move(values);
    for (std::size_t i = 0; i < m.values.size(); ++i) m.problems.push_back("p" + std::to_string(i));
    return m;
}

ResultMatrix random_matrix(std::size_t n, std::size_t k, std::uint64_t seed, bool with_ties) {
    auto rng = infmax::make_engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 3);
    std::vector<std::vector<double>> values(n, std::vector<double>(k));
    for (auto& row : values)
        for (double& v : row) v = with_ties ? static_cast<double>(coarse(rng)) : unit(rng);
    std::vector<std::string> methods;
    for (std::size_t j = 0; j < k; ++j) methods.push_back("m" + std::to_string(j));
    return matrix(std::move(methods), std::move(values));
}

}  // namespace

TEST_CASE("rank averaging on dominance, ties and identical columns") {
    const auto dominant = matrix({"a", "b", "c"}, {{9, 5, 1}, {8, 4, 2}, {7, 6, 3}});
    CHECK(infmax::friedman_ranks(dominant) == std::vector<double>{1.0, 2.0, 3.0});

    const auto tied = matrix({"a", "b", "c"}, {{5, 5, 3}, {5, 5, 3}});
    CHECK(infmax::friedman_ranks(tied) == std::vector<double>{1.5, 1.5, 3.0});

    const auto flat = matrix({"a", "b", "c", "d"}, {{1, 1, 1, 1}, {2, 2, 2, 2}});
    CHECK(infmax::friedman_ranks(flat) == std::vector<double>(4, 2.5));

    // Lower-is-better flips the ordering.
    auto lower = matrix({"a", "b"}, {{1.0, 2.0}, {1.5, 2.5}});
    lower.higher_is_better = false;
    CHECK(infmax::friedman_ranks(lower) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("rank computation validates its input") {
    CHECK_THROWS_AS(infmax::friedman_ranks(matrix({"only"}, {{1}, {2}})), std::invalid_argument);
    CHECK_THROWS_AS(infmax::friedman_ranks(matrix({"a", "b"}, {{1, 2}})), std::invalid_argument);
    auto ragged = matrix({"a", "b"}, {{1, 2}, {1}});
    CHECK_THROWS_AS(infmax::friedman_ranks(ragged), std::invalid_argument);
}

TEST_CASE("mean ranks always sum to k(k+1)/2") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + trial % 5;
        const auto m = random_matrix(6, k, infmax::mix_seed(191, trial), trial % 2 == 0);
        const auto ranks = infmax::friedman_ranks(m);
        double sum = 0.0;
        for (double r : ranks) sum += r;
        CHECK(sum == doctest::Approx(static_cast<double>(k * (k + 1)) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("ranks are invariant under monotone transforms of the values") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(5, 4, infmax::mix_seed(201, trial), false);
        const auto base = infmax::friedman_ranks(m);
        for (auto& row : m.values)
            for (double& v : row) v = std::exp(3.0 * v) - 1.0;
        CHECK(infmax::friedman_ranks(m) == base);
    }
}

TEST_CASE("Friedman statistic on pinned cases") {
    // Three problems, three methods, perfectly consistent ranking.
    CHECK(infmax::friedman_statistic({1.0, 2.0, 3.0}, 3, 3) == doctest::Approx(6.0));
    // Complete tie carries no signal.
    CHECK(infmax::friedman_statistic({2.0, 2.0, 2.0}, 3, 3) == doctest::Approx(0.0));
    CHECK_THROWS_AS(infmax::friedman_statistic({1.0}, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(infmax::friedman_statistic({1.0, 2.0}, 1, 2), std::invalid_argument);
}

TEST_CASE("Iman-Davenport refinement and its degenerate cap") {
    // chi2 = 4 with n = 3, k = 3: (n-1)*chi2 / (n(k-1) - chi2) = 8/2.
    CHECK(infmax::iman_davenport(4.0, 3, 3) == doctest::Approx(4.0));
    // Perfect consistency saturates the statistic.
    CHECK(std::isinf(infmax::iman_davenport(6.0, 3, 3)));
    CHECK(infmax::f_pvalue(infmax::iman_davenport(6.0, 3, 3), 2, 4) == 0.0);
}

TEST_CASE("chi-square tail matches the two-degree closed form") {
    // Survival of chi2(2) is exp(-x/2).
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.991464547, 10.0})
        CHECK(infmax::chi_squared_pvalue(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    CHECK(infmax::chi_squared_pvalue(0.0, 4) == doctest::Approx(1.0));
}

TEST_CASE("F tail matches the (2,2) closed form") {
    // Survival of F(2,2) is 1/(1+x).
    for (double x : {0.2, 1.0, 3.0, 19.0})
        CHECK(infmax::f_pvalue(x, 2, 2) == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-10));
}

TEST_CASE("normal tail values") {
    CHECK(infmax::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(infmax::normal_cdf(-1.959964) == doctest::Approx(0.025).epsilon(1e-4));
    CHECK(infmax::normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-4));
    CHECK(infmax::normal_cdf(-5.16) == doctest::Approx(1.23e-7).epsilon(0.01));
}

TEST_CASE("Holm adjustment on a published seven-method table") {
    const std::vector<double> p{9.89e-13, 1.56e-12, 2.12e-09, 1.20e-07,
                                1.00e-02, 1.65e-02, 3.06e-02};
    const auto adj = infmax::holm_adjust(p, 7);
    REQUIRE(adj.size() == 7);
    CHECK(adj[0] == doctest::Approx(6.92e-12).epsilon(0.05));
    CHECK(adj[1] == doctest::Approx(9.41e-12).epsilon(0.05));
    CHECK(adj[2] == doctest::Approx(1.06e-08).epsilon(0.05));
    CHECK(adj[3] == doctest::Approx(4.71e-07).epsilon(0.05));
    CHECK(adj[4] == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(adj[5] == doctest::Approx(0.033).epsilon(1e-9));
    CHECK(adj[6] == doctest::Approx(0.033).epsilon(1e-9));
}

TEST_CASE("Holm adjustment edge cases") {
    CHECK(infmax::holm_adjust({0.04}, 1) == std::vector<double>{0.04});
    CHECK(infmax::holm_adjust({1.0, 1.0}, 2) == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(infmax::holm_adjust({0.5, 0.1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(infmax::holm_adjust({0.1, 0.5}, 1), std::invalid_argument);
}

TEST_CASE("Holm output is monotone and never below the raw p-values") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = infmax::make_engine(infmax::mix_seed(211, trial));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> p(1 + trial % 8);
        for (double& v : p) v = unit(rng);
        std::sort(p.begin(), p.end());
        const auto adj = infmax::holm_adjust(p, p.size() + trial % 3);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            CHECK(adj[i] >= p[i]);
            CHECK(adj[i] <= 1.0);
            if (i) CHECK(adj[i] >= adj[i - 1]);
        }
    }
}

TEST_CASE("full comparison on a hand-checked dominance table") {
    // Method a wins every problem, b is always second, c always last.
    const auto m = matrix({"a", "b", "c"},
                          {{9, 5, 1}, {8, 4, 2}, {7, 6, 3}, {10, 9, 8}});
    const auto report = infmax::compare_methods(m);
    CHECK(report.mean_ranks == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(report.friedman_stat == doctest::Approx(8.0));
    CHECK(std::isinf(report.iman_davenport_stat));
    CHECK(report.iman_davenport_p == 0.0);
    CHECK(report.control == "a");

    REQUIRE(report.posthoc.size() == 2);
    // SE = sqrt(k(k+1)/(6n)) = sqrt(1/2); worst method is most significant.
    CHECK(report.posthoc[0].method == "c");
    CHECK(report.posthoc[0].z == doctest::Approx(-2.0 / std::sqrt(0.5)));
    CHECK(report.posthoc[0].p == doctest::Approx(0.0023388).epsilon(1e-3));
    CHECK(report.posthoc[0].adjusted == doctest::Approx(2 * 0.0023388).epsilon(1e-3));
    CHECK(report.posthoc[1].method == "b");
    CHECK(report.posthoc[1].z == doctest::Approx(-1.0 / std::sqrt(0.5)));
    CHECK(report.posthoc[1].p == doctest::Approx(0.0786496).epsilon(1e-3));
    CHECK(report.posthoc[1].adjusted == doctest::Approx(0.0786496).epsilon(1e-3));
}

TEST_CASE("comparing two indistinguishable methods yields a null result") {
    const auto m = matrix({"x", "y"}, {{1, 1}, {2, 2}, {3, 3}});
    const auto report = infmax::compare_methods(m);
    CHECK(report.mean_ranks == std::vector<double>{1.5, 1.5});
    CHECK(report.friedman_stat == doctest::Approx(0.0));
    CHECK(report.friedman_p == doctest::Approx(1.0));
    CHECK(report.control == "x");
    REQUIRE(report.posthoc.size() == 1);
    CHECK(report.posthoc[0].z == doctest::Approx(0.0));
    CHECK(report.posthoc[0].p == doctest::Approx(0.5));
}

TEST_CASE("result matrix CSV round trip") {
    const auto m = matrix({"a", "b"}, {{1.25, -3.5}, {0.001, 42.0}});
    std::ostringstream out;
    infmax::write_result_matrix_csv(m, out);
    std::istringstream in(out.str());
    const auto back = infmax::read_result_matrix_csv(in);
    CHECK(back.methods == m.methods);
    CHECK(back.problems == m.problems);
    REQUIRE(back.values.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(back.values[i][j] == doctest::Approx(m.values[i][j]).epsilon(1e-12));
}

TEST_CASE("result matrix CSV rejects malformed input") {
    std::istringstream missing_field("problem,a,b\nrow1,1.0\n");
    CHECK_THROWS_WITH_AS(infmax::read_result_matrix_csv(missing_field),
                         doctest::Contains("line 2"), std::runtime_error);
    std::istringstream bad_number("problem,a\nrow1,abc\n");
    CHECK_THROWS_WITH_AS(infmax::read_result_matrix_csv(bad_number),
                         doctest::Contains("bad number"), std::runtime_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(infmax::read_result_matrix_csv(empty), std::runtime_error);
}

TEST_CASE("report CSV carries every section") {
    const auto m = matrix({"a", "b", "c"}, {{3, 2, 1}, {3, 2, 1}});
    std::ostringstream out;
    infmax::write_report_csv(infmax::compare_methods(m), out);
    const std::string text = out.str();
    CHECK(text.rfind("section,method,stat,p,adjusted\n", 0) == 0);
    CHECK(text.find("mean_rank,a,1") != std::string::npos);
    CHECK(text.find("friedman,,") != std::string::npos);
    CHECK(text.find("iman_davenport,,") != std::string::npos);
    CHECK(text.find("control,a") != std::string::npos);
    CHECK(text.find("holm,b") != std::string::npos);
    CHECK(text.find("holm,c") != std::string::npos);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "wordrank/asymptotics.hpp"
#include "wordrank/regime.hpp"
#include "wordrank/spectral.hpp"

#include "fixtures.hpp"

using namespace wordrank;

namespace {

std::vector<SeriesPoint> synthetic(std::uint64_t n, double (*log_p)(double)) {
    std::vector<SeriesPoint> s(n);
    for (std::uint64_t t = 1; t <= n; ++t) {
        double lp = log_p(static_cast<double>(t));
        s[t - 1] = {t, std::exp(lp), lp};
    }
    return s;
}

}  // namespace

TEST_CASE("rate of the parallel loops is ln sqrt 2") {
    auto rate = compute_nu(fixtures::parallel_loops());
    CHECK(rate.nu == Catch::Approx(std::log(std::sqrt(2.0))).margin(1e-12));
    CHECK(rate.alpha == 0.5);
    REQUIRE(rate.table.size() == 2);
    CHECK(rate.table[0].k == 1);
    CHECK(rate.table[1].k == 1);
    // 1/nu is the sum of the contributions, exactly.
    CHECK(rate.inv_nu == rate.table[0].contribution + rate.table[1].contribution);
}

TEST_CASE("rate of the single cycle depends on the initial support") {
    auto full = compute_nu(fixtures::single_cycle());
    CHECK(full.nu == Catch::Approx(std::log(std::sqrt(2.0))).margin(1e-12));
    REQUIRE(full.table.size() == 1);
    CHECK(full.table[0].k == 4);

    auto start1 = compute_nu(fixtures::single_cycle(false));
    CHECK(start1.nu == Catch::Approx(std::log(2.0)).margin(1e-12));
    REQUIRE(start1.table.size() == 1);
    CHECK(start1.table[0].k == 2);

    // The exponent, by contrast, ignores the support entirely.
    CHECK(solve_beta(fixtures::single_cycle()).beta ==
          solve_beta(fixtures::single_cycle(false)).beta);
}

TEST_CASE("rate is rejected outside the exponential regime") {
    CHECK_THROWS_WITH(compute_nu(fixtures::golden_mean()),
                      Catch::Matchers::ContainsSubstring("regime mismatch"));
    CHECK_THROWS_WITH(compute_nu(fixtures::cascaded_loops()),
                      Catch::Matchers::ContainsSubstring("regime mismatch"));
    CHECK_THROWS_WITH(compute_nu(fixtures::acyclic()),
                      Catch::Matchers::ContainsSubstring("regime mismatch"));
}

TEST_CASE("parallel composition adds rate contributions") {
    auto composed =
        compose_parallel({fixtures::loop_state(), fixtures::loop_state()}, {0.5, 0.5});
    auto direct = compute_nu(fixtures::parallel_loops());
    auto via_composition = compute_nu(composed);
    CHECK(via_composition.inv_nu == Catch::Approx(direct.inv_nu).margin(1e-15));
    // Each loop contributes 1/ln 2 on its own; the union doubles it.
    auto single = compute_nu(fixtures::loop_state());
    CHECK(via_composition.inv_nu == Catch::Approx(2.0 * single.inv_nu).margin(1e-15));
}

TEST_CASE("power fit recovers an exact power law") {
    auto series = synthetic(2000, [](double t) { return -2.0 * std::log(t); });
    auto fit = fit_power_exponent(series);
    CHECK(fit.slope == Catch::Approx(-2.0).margin(1e-9));
    CHECK(fit.residual <= 1e-9);
    CHECK(fit.samples >= 10);
}

TEST_CASE("exponential fit recovers an exact exponential law") {
    auto series = synthetic(2000, [](double t) { return -0.5 * t; });
    auto fit = fit_exponential_rate(series);
    CHECK(fit.slope == Catch::Approx(-0.5).margin(1e-9));
    CHECK(fit.residual <= 1e-9);
}

TEST_CASE("fits reject short or degenerate series") {
    auto series = synthetic(50, [](double t) { return -t; });
    CHECK_THROWS_AS(fit_power_exponent(series), ValidationError);
}

TEST_CASE("power fit on the golden-mean series lands near the predicted exponent") {
    auto spec = fixtures::golden_mean();
    double beta = solve_beta(spec).beta;
    auto series = enumerate_series(spec, 20000);
    auto fit = fit_power_exponent(series);
    CHECK(fit.slope == Catch::Approx(-1.0 / beta).margin(0.3));
}

TEST_CASE("exponential fit on the parallel loops beats the power model") {
    auto series = enumerate_series(fixtures::parallel_loops(), 2000);
    auto exp_fit = fit_exponential_rate(series);
    auto pow_fit = fit_power_exponent(series);
    CHECK(-exp_fit.slope == Catch::Approx(std::log(std::sqrt(2.0))).epsilon(0.05));
    CHECK(exp_fit.residual < pow_fit.residual);
}

TEST_CASE("intermediate diagnostics flag synthetic laws correctly") {
    auto power = synthetic(5000, [](double t) { return -3.0 * std::log(t); });
    auto d1 = intermediate_diagnostics(power);
    CHECK(d1.hint == "power-like");
    CHECK(d1.t2_eventually_decreasing);
    CHECK_FALSE(d1.t5_eventually_decreasing);  // t^5 t^-3 grows

    auto expo = synthetic(5000, [](double t) { return -t; });
    auto d2 = intermediate_diagnostics(expo);
    CHECK(d2.hint == "exponential-like");
    CHECK(d2.t5_eventually_decreasing);
}

TEST_CASE("cascaded loops look intermediate at desk scale") {
    auto series = enumerate_series(fixtures::cascaded_loops(), 20000);
    auto d = intermediate_diagnostics(series);
    CHECK(d.t5_eventually_decreasing);
    CHECK(d.t2_eventually_decreasing);
    CHECK(d.sup_log_inv_p_over_sqrt_t <= 2.0);
    CHECK(d.hint == "intermediate-like");
}

TEST_CASE("series round-trips through write and read byte-identically") {
    auto series = enumerate_series(fixtures::golden_mean(), 3);
    std::ostringstream first;
    emit_series(series, first);

    std::istringstream back(first.str());
    auto reread = read_series(back);
    REQUIRE(reread.size() == series.size());
    std::ostringstream second;
    emit_series(reread, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("empty series writes a bare header") {
    std::ostringstream os;
    emit_series({}, os);
    CHECK(os.str() == "t,p,log_t,log_p\n");
    std::istringstream is(os.str());
    CHECK(read_series(is).empty());
}

TEST_CASE("series with a theory overlay column") {
    auto spec = fixtures::golden_mean();
    double beta = solve_beta(spec).beta;
    auto series = enumerate_series(spec, 200);
    // Pin the overlay coefficient at the middle of the series.
    const auto& mid = series[series.size() / 2];
    double c = std::exp(mid.log_p) * std::pow(static_cast<double>(mid.t), 1.0 / beta);
    std::ostringstream os;
    emit_series(series, os, [&](std::uint64_t t) {
        return c * std::pow(static_cast<double>(t), -1.0 / beta);
    });
    const std::string text = os.str();
    CHECK(text.rfind("t,p,log_t,log_p,theory_p\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 201);
}

TEST_CASE("ranked-count cross-check for exponential chains") {
    // Q(exp(-nu x)) - x stays bounded for exponential decay.
    for (bool full : {true, false}) {
        auto spec = fixtures::single_cycle(full);
        double nu = compute_nu(spec).nu;
        for (int x = 5; x <= 40; x += 5) {
            double q = std::exp(-nu * x);
            auto Q = count_words_with_probability_at_least(spec, q);
            CHECK(std::abs(static_cast<double>(Q) - x) <= 10.0);
        }
    }
}

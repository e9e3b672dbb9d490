#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "respgraph/rng.hpp"
#include "respgraph/statfit.hpp"

using namespace respgraph;

TEST_CASE("hurwitz zeta sanity values") {
    // zeta(2) = pi^2/6, zeta(3) ~ 1.2020569; Hurwitz shifts drop leading terms.
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.0, 1.0) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
    CHECK(hurwitz_zeta(2.0, 3.0) ==
          doctest::Approx(1.6449340668482264 - 1.0 - 0.25).epsilon(1e-12));
    // Finite power sums agree with the zeta difference.
    CHECK(power_sum(2.5, 1, 1000) ==
          doctest::Approx(hurwitz_zeta(2.5, 1.0) - hurwitz_zeta(2.5, 1001.0)).epsilon(1e-12));
}

TEST_CASE("discrete MLE recovers the exponent from power-law samples") {
    std::mt19937_64 rng(2024);
    std::vector<std::int64_t> samples(100000);
    for (auto& s : samples) s = oracle::power_law_draw(rng, 2.5, 100000);
    const PowerLawFit fit = fit_power_law(samples, PowerLawMethod::mle_discrete, 1, 100000);
    CHECK(fit.alpha > 2.45);
    CHECK(fit.alpha < 2.55);
    CHECK(fit.n == samples.size());
}

TEST_CASE("truncated MLE handles exponents below one") {
    std::mt19937_64 rng(555);
    std::vector<std::int64_t> samples(100000);
    for (auto& s : samples) s = oracle::power_law_draw(rng, 0.7, 1000);
    const PowerLawFit fit = fit_power_law(samples, PowerLawMethod::mle_discrete, 1, 1000);
    CHECK(fit.alpha > 0.65);
    CHECK(fit.alpha < 0.75);
}

TEST_CASE("mle recovery holds across seeds") {
    // Statistical property: alpha within +-0.05 in at least 19 of 20 seeds.
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<std::int64_t> samples(100000);
        for (auto& s : samples) s = oracle::power_law_draw(rng, 2.1, 10000);
        const PowerLawFit fit =
            fit_power_law(samples, PowerLawMethod::mle_discrete, 1, 10000);
        if (std::abs(fit.alpha - 2.1) <= 0.05) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("all-equal samples are degenerate support") {
    const std::vector<std::int64_t> samples(50, 7);
    CHECK_THROWS_AS(fit_power_law(samples, PowerLawMethod::mle_discrete), DegenerateSupport);
}

TEST_CASE("too few usable samples is insufficient data") {
    const std::vector<std::int64_t> samples = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(fit_power_law(samples, PowerLawMethod::mle_discrete), InsufficientData);
    // Samples below x_min do not count.
    std::vector<std::int64_t> low(100, 1);
    low.push_back(20);
    CHECK_THROWS_AS(fit_power_law(low, PowerLawMethod::mle_discrete, 10), InsufficientData);
}

TEST_CASE("log-log regression fits exact power-law data closely") {
    std::mt19937_64 rng(8);
    std::vector<std::int64_t> samples(100000);
    for (auto& s : samples) s = oracle::power_law_draw(rng, 2.2, 10000);
    const PowerLawFit fit = fit_power_law(samples, PowerLawMethod::loglog_ls, 1);
    CHECK(fit.method == PowerLawMethod::loglog_ls);
    CHECK(fit.alpha == doctest::Approx(2.2).epsilon(0.15));
    CHECK(fit.r_squared > 0.95);
}

TEST_CASE("exponential-tail samples score a visibly worse log-log R^2") {
    std::mt19937_64 rng(9);
    std::vector<std::int64_t> power(20000), geometric(20000);
    for (auto& s : power) s = oracle::power_law_draw(rng, 2.0, 10000);
    for (auto& s : geometric) {
        // Geometric with mean ~20, shifted to >= 1.
        s = 1 + static_cast<std::int64_t>(std::floor(-20.0 * std::log(uniform01_open(rng))));
    }
    const PowerLawFit fit_power = fit_power_law(power, PowerLawMethod::loglog_ls, 1);
    const PowerLawFit fit_geom = fit_power_law(geometric, PowerLawMethod::loglog_ls, 1);
    CHECK(fit_power.r_squared > fit_geom.r_squared + 0.05);
}

TEST_CASE("model ccdf and quantile invert each other") {
    PowerLawFit fit;
    fit.alpha = 2.3;
    fit.x_min = 1;
    fit.x_max = 50000;
    for (double p : {0.5, 0.1, 0.01, 0.001, 1e-4}) {
        const double x = power_law_quantile(fit, p);
        CHECK(power_law_ccdf(fit, x) == doctest::Approx(p).epsilon(1e-6));
    }
    CHECK(power_law_ccdf(fit, 1.0) == 1.0);
}

TEST_CASE("weibull MLE recovers an exponential as shape 1") {
    std::mt19937_64 rng(3);
    std::vector<double> samples(100000);
    for (auto& s : samples) s = -std::log(uniform01_open(rng)); // Exp(1) = Weibull(1, 1)
    const WeibullFit fit = fit_weibull(samples);
    CHECK(fit.shape == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fit.scale == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("weibull MLE recovers shape 1.35 scale 300") {
    std::mt19937_64 rng(4);
    std::vector<double> samples(100000);
    for (auto& s : samples) s = weibull(rng, 1.35, 300.0);
    const WeibullFit fit = fit_weibull(samples);
    CHECK(fit.shape > 1.32);
    CHECK(fit.shape < 1.38);
    CHECK(fit.scale == doctest::Approx(300.0).epsilon(0.02));
}

TEST_CASE("weibull first-order optimality by finite differences") {
    std::mt19937_64 rng(6);
    std::vector<double> samples(50000);
    for (auto& s : samples) s = weibull(rng, 1.15, 120.0);
    const WeibullFit fit = fit_weibull(samples);

    const double h_shape = 1e-5 * fit.shape;
    const double h_scale = 1e-5 * fit.scale;
    const double d_shape =
        (weibull_mean_log_likelihood(samples, fit.shape + h_shape, fit.scale) -
         weibull_mean_log_likelihood(samples, fit.shape - h_shape, fit.scale)) /
        (2.0 * h_shape);
    const double d_scale =
        (weibull_mean_log_likelihood(samples, fit.shape, fit.scale + h_scale) -
         weibull_mean_log_likelihood(samples, fit.shape, fit.scale - h_scale)) /
        (2.0 * h_scale);
    CHECK(std::abs(d_shape) < 1e-6);
    CHECK(std::abs(d_scale * fit.scale) < 1e-6); // gradient in log-scale units
}

TEST_CASE("constant samples diverge the shape solve") {
    const std::vector<double> samples(100, 42.0);
    CHECK_THROWS_AS(fit_weibull(samples), NonPositiveVariance);
}

TEST_CASE("non-positive samples are rejected") {
    std::vector<double> samples(20, 1.0);
    samples[3] = 0.0;
    CHECK_THROWS_AS(fit_weibull(samples), NonPositiveSample);
    samples[3] = -2.0;
    CHECK_THROWS_AS(fit_weibull(samples), NonPositiveSample);
}

TEST_CASE("weibull on too few samples") {
    CHECK_THROWS_AS(fit_weibull({1.0, 2.0, 3.0}), InsufficientData);
}

TEST_CASE("pearson of an affine image is exactly one") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 25; ++i) {
        xs.push_back(i);
        ys.push_back(2.0 * i + 1.0);
    }
    CHECK(pearson(xs, ys).c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pearson of a negated series is minus one") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 25; ++i) {
        xs.push_back(i * 0.5 + 3.0);
        ys.push_back(-xs.back());
    }
    CHECK(pearson(xs, ys).c == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson matches the direct formula on a 20-point series") {
    std::mt19937_64 rng(12);
    std::vector<double> xs, ys;
    for (int i = 0; i < 20; ++i) {
        xs.push_back(uniform01(rng) * 10.0);
        ys.push_back(uniform01(rng) * 5.0 + 0.3 * xs.back());
    }
    const double expected = oracle::pearson_direct(xs, ys);
    CHECK(pearson(xs, ys).c == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pearson error paths") {
    CHECK_THROWS_AS(pearson({1.0, 2.0}, {1.0}), LengthMismatch);
    CHECK_THROWS_AS(pearson({1.0}, {1.0}), InsufficientData);
    CHECK_THROWS_AS(pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), ZeroVariance);
}

TEST_CASE("pearson is invariant under positive affine transforms") {
    std::mt19937_64 rng(13);
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(uniform01(rng));
        ys.push_back(uniform01(rng) + 0.5 * xs.back());
    }
    const double base = pearson(xs, ys).c;
    std::vector<double> scaled = xs;
    for (auto& x : scaled) x = 3.5 * x + 11.0;
    CHECK(pearson(scaled, ys).c == doctest::Approx(base).epsilon(1e-12));
    for (auto& x : scaled) x = -x;
    CHECK(pearson(scaled, ys).c == doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("ccdf under the >= convention") {
    const auto points = ccdf({1.0, 2.0, 3.0});
    REQUIRE(points.size() == 3);
    CHECK(points[0] == std::pair<double, double>{1.0, 1.0});
    CHECK(points[1].second == doctest::Approx(2.0 / 3.0));
    CHECK(points[2].second == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ccdf of a constant series is a single full-mass point") {
    const auto points = ccdf({5.0, 5.0, 5.0});
    REQUIRE(points.size() == 1);
    CHECK(points[0] == std::pair<double, double>{5.0, 1.0});
}

TEST_CASE("ccdf matches a counting oracle and is monotone from 1.0") {
    std::mt19937_64 rng(14);
    std::vector<double> samples(500);
    for (auto& s : samples) s = std::floor(uniform01(rng) * 30.0);
    const auto points = ccdf(samples);
    REQUIRE(!points.empty());
    CHECK(points.front().second == 1.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::size_t count = 0;
        for (double s : samples) {
            if (s >= points[i].first) ++count;
        }
        CHECK(points[i].second ==
              doctest::Approx(static_cast<double>(count) / samples.size()));
        if (i > 0) CHECK(points[i].second < points[i - 1].second);
    }
    CHECK_THROWS_AS(ccdf({}), InsufficientData);
}

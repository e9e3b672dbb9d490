#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "respgraph/errors.hpp"

namespace respgraph {

enum class PowerLawMethod { loglog_ls, mle_discrete };

struct PowerLawFit {
    double alpha = 0.0;     // exponent of P(k) ~ k^-alpha
    double r_squared = 0.0; // of the companion log-log regression
    PowerLawMethod method = PowerLawMethod::mle_discrete;
    std::int64_t x_min = 1;
    std::optional<std::int64_t> x_max; // support truncation, when known
    std::size_t n = 0;                 // samples used (>= x_min)
};

/// Fits P(k) ~ k^-alpha to positive integer counts.
///
/// loglog_ls regresses log10(frequency density) on log10(value) over
/// log-spaced bins; mle_discrete maximizes the zeta-normalized discrete
/// likelihood (truncated at x_max when given; x_max is required to fit
/// exponents <= 1, which are only normalizable on finite support). Both
/// report the regression R^2 for comparability.
PowerLawFit fit_power_law(const std::vector<std::int64_t>& samples, PowerLawMethod method,
                          std::int64_t x_min = 1,
                          std::optional<std::int64_t> x_max = std::nullopt);

/// Model CCDF P(X >= x) of a fitted discrete power law, log-interpolated
/// between integer support points so it is continuous and invertible.
double power_law_ccdf(const PowerLawFit& fit, double x);
/// Inverse of power_law_ccdf: the value whose upper-tail mass is p.
double power_law_quantile(const PowerLawFit& fit, double p);

struct WeibullFit {
    double shape = 0.0; // beta
    double scale = 0.0; // lambda
    double log_likelihood = 0.0;
    std::size_t n = 0;
};

/// Maximum-likelihood Weibull fit under f(x) = (b/l)(x/l)^(b-1) exp(-(x/l)^b).
/// The shape equation is solved to relative tolerance 1e-12 (tighter than the
/// 1e-8 contract) so first-order optimality survives finite-difference checks.
WeibullFit fit_weibull(const std::vector<double>& samples);

/// Mean log-likelihood (per sample) of a Weibull model on the given data;
/// used by gradient checks and comparisons.
double weibull_mean_log_likelihood(const std::vector<double>& samples, double shape,
                                   double scale);

struct CorrelationResult {
    double c = 0.0; // Pearson coefficient in [-1, 1]
    std::size_t n = 0;
};

CorrelationResult pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Complementary CDF under the >= convention: for each distinct sorted value
/// v, the fraction of samples >= v. First point is always 1.0 and the
/// sequence is non-increasing, so every point plots on a log axis.
std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples);

// Exposed for reuse by samplers and tests.

/// Hurwitz zeta sum_{k=0..inf} (q+k)^-s for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);
/// sum_{k=lo..hi} k^-s with hi possibly unbounded (requires s > 1 then).
double power_sum(double s, std::int64_t lo, std::optional<std::int64_t> hi);

} // namespace respgraph

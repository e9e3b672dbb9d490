#include "respgraph/statfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace respgraph {

double hurwitz_zeta(double s, double q) {
    // Euler-Maclaurin: direct sum over the first terms, then tail expansion.
    constexpr int kDirect = 16;
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) {
        sum += std::pow(q + k, -s);
    }
    const double a = q + kDirect;
    sum += std::pow(a, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(a, -s);
    // Bernoulli corrections B2, B4, B6.
    sum += s / 12.0 * std::pow(a, -s - 1.0);
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(a, -s - 3.0);
    sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * std::pow(a, -s - 5.0);
    return sum;
}

double power_sum(double s, std::int64_t lo, std::optional<std::int64_t> hi) {
    if (!hi) {
        return hurwitz_zeta(s, static_cast<double>(lo));
    }
    const std::int64_t n = *hi - lo + 1;
    if (n <= 0) return 0.0;
    if (n <= 100000) {
        double sum = 0.0;
        for (std::int64_t k = *hi; k >= lo; --k) { // small terms first
            sum += std::pow(static_cast<double>(k), -s);
        }
        return sum;
    }
    if (s > 1.0) {
        return hurwitz_zeta(s, static_cast<double>(lo)) -
               hurwitz_zeta(s, static_cast<double>(*hi + 1));
    }
    // s <= 1 with a huge range: Euler-Maclaurin on the finite sum.
    const double a = static_cast<double>(lo);
    const double b = static_cast<double>(*hi);
    auto f = [s](double x) { return std::pow(x, -s); };
    double sum = (std::pow(b, 1.0 - s) - std::pow(a, 1.0 - s)) / (1.0 - s);
    sum += 0.5 * (f(a) + f(b));
    sum += -s / 12.0 * (std::pow(b, -s - 1.0) - std::pow(a, -s - 1.0));
    return sum;
}

namespace {

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

Regression linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    Regression reg;
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    reg.slope = sxy / sxx;
    reg.intercept = my - reg.slope * mx;
    reg.r_squared = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
    return reg;
}

/// Log-log regression over log-spaced bins of the count frequencies.
/// Returns (alpha, r_squared).
std::pair<double, double> loglog_regression(const std::map<std::int64_t, std::int64_t>& freq,
                                            std::int64_t x_min) {
    const double max_val = static_cast<double>(freq.rbegin()->first);
    // Ten bins per decade, edges kept on integer boundaries so the first
    // bins (width 1) stay exact.
    std::vector<std::int64_t> edges;
    edges.push_back(x_min);
    double edge = static_cast<double>(x_min);
    const double ratio = std::pow(10.0, 0.1);
    while (edges.back() <= static_cast<std::int64_t>(max_val)) {
        edge *= ratio;
        const auto next = static_cast<std::int64_t>(std::ceil(edge));
        if (next > edges.back()) edges.push_back(next);
    }

    std::vector<double> xs, ys;
    auto it = freq.begin();
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        const std::int64_t lo = edges[b];
        const std::int64_t hi = edges[b + 1]; // exclusive
        double count = 0.0;
        while (it != freq.end() && it->first < hi) {
            if (it->first >= lo) count += static_cast<double>(it->second);
            ++it;
        }
        if (count <= 0.0) continue;
        const double width = static_cast<double>(hi - lo);
        const double center = std::sqrt(static_cast<double>(lo) * static_cast<double>(hi - 1));
        xs.push_back(std::log10(center));
        ys.push_back(std::log10(count / width));
    }
    if (xs.size() < 2) {
        // Fall back to the raw distinct-value frequencies.
        xs.clear();
        ys.clear();
        for (const auto& [value, count] : freq) {
            xs.push_back(std::log10(static_cast<double>(value)));
            ys.push_back(std::log10(static_cast<double>(count)));
        }
    }
    const Regression reg = linear_fit(xs, ys);
    return {-reg.slope, reg.r_squared};
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double golden_minimize(F f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

PowerLawFit fit_power_law(const std::vector<std::int64_t>& samples, PowerLawMethod method,
                          std::int64_t x_min, std::optional<std::int64_t> x_max) {
    if (x_min < 1) throw ConfigError("x_min must be >= 1");
    if (x_max && *x_max < x_min) throw ConfigError("x_max must be >= x_min");

    std::map<std::int64_t, std::int64_t> freq;
    std::size_t n = 0;
    double sum_log = 0.0;
    for (auto v : samples) {
        if (v < x_min) continue;
        if (x_max && v > *x_max) {
            throw ConfigError("sample " + std::to_string(v) + " above declared x_max");
        }
        ++freq[v];
        ++n;
        sum_log += std::log(static_cast<double>(v));
    }
    if (n < 10) {
        throw InsufficientData("need >= 10 samples >= x_min, got " + std::to_string(n));
    }
    if (freq.size() < 2) {
        throw DegenerateSupport("all samples share a single value");
    }

    PowerLawFit fit;
    fit.method = method;
    fit.x_min = x_min;
    fit.x_max = x_max;
    fit.n = n;

    const auto regression = loglog_regression(freq, x_min);
    if (method == PowerLawMethod::loglog_ls) {
        fit.alpha = regression.first;
        fit.r_squared = regression.second;
        return fit;
    }

    // Discrete MLE: maximize -n*log Z(alpha) - alpha * sum(log x). Without a
    // truncation bound the law is only normalizable for alpha > 1.
    const double mean_log = sum_log / static_cast<double>(n);
    auto nll = [&](double alpha) {
        return std::log(power_sum(alpha, x_min, x_max)) + alpha * mean_log;
    };
    const double lo = x_max ? 1e-6 : 1.0 + 1e-6;
    fit.alpha = golden_minimize(nll, lo, 25.0, 1e-10);
    fit.r_squared = regression.second; // companion regression, for comparability
    return fit;
}

double power_law_ccdf(const PowerLawFit& fit, double x) {
    if (x <= static_cast<double>(fit.x_min)) return 1.0;
    const double z = power_sum(fit.alpha, fit.x_min, fit.x_max);
    const auto k = static_cast<std::int64_t>(std::floor(x));
    const double upper = power_sum(fit.alpha, k, fit.x_max);
    const double next = power_sum(fit.alpha, k + 1, fit.x_max);
    if (x == static_cast<double>(k) || next <= 0.0 || upper <= next) {
        return std::max(0.0, upper / z);
    }
    // Log-linear interpolation between integer support points keeps the
    // function continuous and strictly decreasing, hence invertible.
    const double t = (x - static_cast<double>(k));
    const double lu = std::log(upper), ln = std::log(next);
    return std::exp(lu + t * (ln - lu)) / z;
}

double power_law_quantile(const PowerLawFit& fit, double p) {
    if (p >= 1.0) return static_cast<double>(fit.x_min);
    // Bracket the integer cell containing the quantile, then invert the
    // log-linear interpolation within it.
    const double z = power_sum(fit.alpha, fit.x_min, fit.x_max);
    const double target = p * z;
    std::int64_t lo = fit.x_min;
    std::int64_t hi = fit.x_max ? *fit.x_max : fit.x_min;
    if (!fit.x_max) {
        while (power_sum(fit.alpha, hi, std::nullopt) > target) hi *= 2;
    }
    // Largest k with tail(k) >= target.
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (power_sum(fit.alpha, mid, fit.x_max) >= target) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    const double upper = power_sum(fit.alpha, lo, fit.x_max);
    const double next = power_sum(fit.alpha, lo + 1, fit.x_max);
    if (next <= 0.0 || upper <= next || target >= upper) {
        return static_cast<double>(lo);
    }
    const double t = (std::log(upper) - std::log(target)) / (std::log(upper) - std::log(next));
    return static_cast<double>(lo) + std::min(1.0, std::max(0.0, t));
}

WeibullFit fit_weibull(const std::vector<double>& samples) {
    if (samples.size() < 10) {
        throw InsufficientData("need >= 10 samples, got " + std::to_string(samples.size()));
    }
    for (double x : samples) {
        if (!(x > 0.0)) throw NonPositiveSample("samples must be positive");
    }
    const double first = samples.front();
    const bool constant =
        std::all_of(samples.begin(), samples.end(), [&](double x) { return x == first; });
    if (constant) {
        throw NonPositiveVariance("constant samples: shape equation diverges");
    }

    const std::size_t n = samples.size();
    std::vector<double> logs(n);
    double mean_log = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        logs[i] = std::log(samples[i]);
        mean_log += logs[i];
    }
    mean_log /= static_cast<double>(n);
    const double max_log = *std::max_element(logs.begin(), logs.end());

    // Profile equation g(beta) = sum(x^b ln x)/sum(x^b) - 1/b - mean(ln x),
    // computed in a shifted log domain for overflow safety. g is increasing.
    auto g = [&](double beta) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::exp(beta * (logs[i] - max_log));
            s0 += w;
            s1 += w * logs[i];
        }
        return s1 / s0 - 1.0 / beta - mean_log;
    };

    double lo = 1e-3, hi = 1.0;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw NonPositiveVariance("shape solve diverged");
    }
    while (g(lo) > 0.0) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-9) throw NonPositiveVariance("shape solve diverged");
    }

    // Bisection to relative tolerance 1e-12; g is monotone so this is safe
    // and converges in ~60 iterations.
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double beta = 0.5 * (lo + hi);

    double s0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) s0 += std::exp(beta * (logs[i] - max_log));
    const double log_lambda = max_log + std::log(s0 / static_cast<double>(n)) / beta;

    WeibullFit fit;
    fit.shape = beta;
    fit.scale = std::exp(log_lambda);
    fit.n = n;
    fit.log_likelihood =
        static_cast<double>(n) * weibull_mean_log_likelihood(samples, fit.shape, fit.scale);
    return fit;
}

double weibull_mean_log_likelihood(const std::vector<double>& samples, double shape,
                                   double scale) {
    const double log_scale = std::log(scale);
    double acc = 0.0;
    for (double x : samples) {
        const double t = std::log(x) - log_scale;
        acc += std::log(shape) - log_scale + (shape - 1.0) * t - std::exp(shape * t);
    }
    return acc / static_cast<double>(samples.size());
}

CorrelationResult pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw LengthMismatch("series lengths differ: " + std::to_string(xs.size()) + " vs " +
                             std::to_string(ys.size()));
    }
    const std::size_t n = xs.size();
    if (n < 2) throw InsufficientData("need >= 2 paired samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw ZeroVariance("a series has zero variance");

    CorrelationResult result;
    result.c = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    result.n = n;
    return result;
}

std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples) {
    if (samples.empty()) throw InsufficientData("ccdf of empty series");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        // fraction of samples >= sorted[i]
        points.emplace_back(sorted[i], (n - static_cast<double>(i)) / n);
    }
    return points;
}

} // namespace respgraph

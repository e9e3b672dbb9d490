#include "respgraph/rankdetect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace respgraph {

RankResult user_rank(const ResponseGraph& graph, const RankOptions& opts) {
    const std::size_t n = graph.node_count();
    if (n == 0) throw DegenerateInput("user_rank on empty graph");

    RankResult result;
    result.ids = graph.node_ids();
    result.damping = opts.damping;

    std::vector<double> out_mass(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& arc : graph.out_arcs(static_cast<std::int32_t>(u))) {
            out_mass[u] += opts.weighted ? static_cast<double>(arc.weight) : 1.0;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> score(n, inv_n), next(n);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (out_mass[u] == 0.0) dangling += score[u];
        }
        const double base = (1.0 - opts.damping) * inv_n + opts.damping * dangling * inv_n;
        std::fill(next.begin(), next.end(), base);
        for (std::size_t u = 0; u < n; ++u) {
            if (out_mass[u] == 0.0) continue;
            const double push = opts.damping * score[u] / out_mass[u];
            for (const auto& arc : graph.out_arcs(static_cast<std::int32_t>(u))) {
                next[static_cast<std::size_t>(arc.target)] +=
                    push * (opts.weighted ? static_cast<double>(arc.weight) : 1.0);
            }
        }
        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - score[v]);
        score.swap(next);
        result.iterations = iter;
        result.residual = delta;
        if (delta < opts.tol) {
            result.converged = true;
            break;
        }
    }
    result.score = std::move(score);
    return result;
}

CorrelationResult rank_vs_views(const RankResult& rank, const InteractionTrace& trace) {
    std::unordered_map<UserId, double> views;
    for (const auto& v : trace.videos()) {
        views[v.owner] += static_cast<double>(v.views);
    }
    std::vector<double> xs, ys;
    xs.reserve(rank.ids.size());
    ys.reserve(rank.ids.size());
    for (std::size_t i = 0; i < rank.ids.size(); ++i) {
        xs.push_back(rank.score[i]);
        auto it = views.find(rank.ids[i]);
        ys.push_back(it != views.end() ? it->second : 0.0);
    }
    return pearson(xs, ys);
}

CorrelationResult rank_vs_indegree(const RankResult& rank, const DegreeView& deg) {
    if (rank.ids.size() != deg.ids.size()) {
        throw LengthMismatch("rank and degree views cover different node sets");
    }
    std::vector<double> xs(rank.score.begin(), rank.score.end());
    std::vector<double> ys;
    ys.reserve(deg.in_distinct.size());
    for (auto d : deg.in_distinct) ys.push_back(static_cast<double>(d));
    return pearson(xs, ys);
}

std::string rule_names(unsigned rules) {
    if (rules == 0) return "clean";
    std::string out;
    auto append = [&](const char* name) {
        if (!out.empty()) out += '+';
        out += name;
    };
    if (rules & static_cast<unsigned>(FlagRule::ird_threshold)) append("ird_threshold");
    if (rules & static_cast<unsigned>(FlagRule::inout_ratio)) append("inout_ratio");
    if (rules & static_cast<unsigned>(FlagRule::powerlaw_outlier)) append("powerlaw_outlier");
    return out;
}

std::vector<FlagReport> flag_ird(const std::vector<UserBehaviorProfile>& profiles,
                                 double ird_max, double resp_min) {
    std::vector<FlagReport> reports;
    reports.reserve(profiles.size());
    for (const auto& p : profiles) {
        FlagReport report;
        report.user = p.user;
        report.avg_ird = p.avg_ird;
        report.avg_resp_per_video = p.avg_responses_per_video;
        // Strict inequalities; an undefined IRD can never trip the rule.
        if (p.avg_ird && *p.avg_ird < ird_max && p.avg_responses_per_video > resp_min) {
            report.rules |= static_cast<unsigned>(FlagRule::ird_threshold);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<FlagReport> flag_inout(const DegreeView& deg, double ratio_min,
                                   std::int64_t min_out) {
    std::vector<FlagReport> reports;
    reports.reserve(deg.ids.size());
    for (std::size_t i = 0; i < deg.ids.size(); ++i) {
        FlagReport report;
        report.user = deg.ids[i];
        const auto out = deg.out_weighted[i];
        const auto in = deg.in_weighted[i];
        bool hit = false;
        if (in == 0) {
            report.infinite_ratio = out > 0;
            hit = out >= min_out;
        } else {
            report.out_in_ratio = static_cast<double>(out) / static_cast<double>(in);
            hit = out >= min_out && *report.out_in_ratio >= ratio_min;
        }
        if (hit) report.rules |= static_cast<unsigned>(FlagRule::inout_ratio);
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<FlagReport> flag_powerlaw_outliers(
    const std::vector<std::pair<UserId, std::int64_t>>& response_counts,
    const PowerLawFit& fit, std::size_t top_k, double spread_mult) {
    const std::size_t n = response_counts.size();
    if (n < 20) {
        throw InsufficientData("need >= 20 users for outlier screening, got " +
                               std::to_string(n));
    }

    std::vector<std::pair<UserId, std::int64_t>> sorted = response_counts;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    // Normalized log-residuals: observed vs the model quantile at the rank's
    // plotting position, divided by the order-statistic scale
    // sqrt(sum_{j=r..n} 1/j^2) so the tail is homoscedastic.
    const std::size_t window = std::min(n, top_k + 60);
    std::vector<double> suffix(n + 2, 0.0);
    for (std::size_t j = n; j >= 1; --j) {
        suffix[j] = suffix[j + 1] + 1.0 / (static_cast<double>(j) * static_cast<double>(j));
    }
    std::vector<double> z(window);
    for (std::size_t r = 1; r <= window; ++r) {
        const double p = (static_cast<double>(r) - 0.5) / static_cast<double>(n);
        const double expected = power_law_quantile(fit, p);
        const double observed = static_cast<double>(sorted[r - 1].second);
        z[r - 1] = (std::log(observed) - std::log(expected)) / std::sqrt(suffix[r]);
    }

    // Tail spread from the non-candidate window: median center, IQR spread.
    std::vector<double> tail(z.begin() + static_cast<std::ptrdiff_t>(std::min(top_k, window)),
                             z.end());
    std::sort(tail.begin(), tail.end());
    auto quantile = [&](double q) {
        if (tail.empty()) return 0.0;
        const double pos = q * static_cast<double>(tail.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, tail.size() - 1);
        const double t = pos - static_cast<double>(lo);
        return tail[lo] * (1.0 - t) + tail[hi] * t;
    };
    const double center = quantile(0.5);
    const double spread = std::max(quantile(0.75) - quantile(0.25), 1e-9);
    const double threshold = center + spread_mult * spread;

    std::vector<FlagReport> reports;
    for (std::size_t r = 0; r < std::min(top_k, window); ++r) {
        FlagReport report;
        report.user = sorted[r].first;
        report.powerlaw_residual = z[r];
        if (z[r] > threshold) {
            report.rules |= static_cast<unsigned>(FlagRule::powerlaw_outlier);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<FlagReport> merge_flag_reports(const std::vector<std::vector<FlagReport>>& parts,
                                           bool keep_clean) {
    std::map<UserId, FlagReport> merged;
    for (const auto& part : parts) {
        for (const auto& report : part) {
            auto [it, inserted] = merged.try_emplace(report.user, report);
            if (inserted) continue;
            FlagReport& into = it->second;
            into.rules |= report.rules;
            if (!into.avg_ird) into.avg_ird = report.avg_ird;
            if (!into.avg_resp_per_video) into.avg_resp_per_video = report.avg_resp_per_video;
            if (!into.out_in_ratio) into.out_in_ratio = report.out_in_ratio;
            into.infinite_ratio = into.infinite_ratio || report.infinite_ratio;
            if (!into.user_rank) into.user_rank = report.user_rank;
            if (!into.powerlaw_residual) into.powerlaw_residual = report.powerlaw_residual;
        }
    }
    std::vector<FlagReport> out;
    out.reserve(merged.size());
    for (auto& [user, report] : merged) {
        if (keep_clean || report.flagged()) out.push_back(std::move(report));
    }
    return out;
}

} // namespace respgraph

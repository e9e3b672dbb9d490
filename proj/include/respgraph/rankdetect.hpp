#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "respgraph/graph.hpp"
#include "respgraph/sequences.hpp"
#include "respgraph/statfit.hpp"

namespace respgraph {

struct RankOptions {
    double damping = 0.85;
    double tol = 1e-12;   // L1 change between iterations
    int max_iter = 500;
    bool weighted = true; // response multiplicities as transition weights
};

struct RankResult {
    std::vector<UserId> ids;    // graph node order
    std::vector<double> score;  // sums to 1
    double damping = 0.85;
    int iterations = 0;
    double residual = 0.0;      // L1 change at the final iteration
    bool converged = false;
};

/// UserRank: PageRank power iteration along responder -> responded arcs, so
/// receiving responses confers rank. Dangling mass is redistributed
/// uniformly. Never throws on non-convergence; the result carries the flag.
RankResult user_rank(const ResponseGraph& graph, const RankOptions& opts = {});

/// Pearson correlation between UserRank and the total views of each ranked
/// user's uploaded videos.
CorrelationResult rank_vs_views(const RankResult& rank, const InteractionTrace& trace);

/// Pearson correlation between UserRank and distinct in-degree.
CorrelationResult rank_vs_indegree(const RankResult& rank, const DegreeView& deg);

enum class FlagRule : unsigned {
    ird_threshold = 1u << 0,
    inout_ratio = 1u << 1,
    powerlaw_outlier = 1u << 2,
};

struct FlagReport {
    UserId user;
    unsigned rules = 0; // FlagRule bitmask; flagged iff non-zero
    std::optional<double> avg_ird;
    std::optional<double> avg_resp_per_video;
    std::optional<double> out_in_ratio; // weighted; infinity encoded as nullopt + infinite_ratio
    bool infinite_ratio = false;
    std::optional<double> user_rank;
    std::optional<double> powerlaw_residual;

    bool flagged() const noexcept { return rules != 0; }
};

/// Rule names joined with '+', or "clean".
std::string rule_names(unsigned rules);

/// Flags users whose average IRD is defined and < ird_max while their average
/// responses per video exceed resp_min (both strict). Users without a defined
/// IRD are never flagged. Returns a report for every profile.
std::vector<FlagReport> flag_ird(const std::vector<UserBehaviorProfile>& profiles,
                                 double ird_max = 3.0, double resp_min = 10.0);

/// Flags users with weighted out-degree >= min_out whose weighted out/in
/// ratio is >= ratio_min (in-degree 0 counts as infinite ratio). Returns a
/// report for every node.
std::vector<FlagReport> flag_inout(const DegreeView& deg, double ratio_min,
                                   std::int64_t min_out);

/// Flags the top-k users by response count whose upper-tail log-residual
/// against the fitted power law exceeds spread_mult times the tail residual
/// spread. Residuals are normalized by the order-statistic scale
/// sqrt(sum_{j>=r} 1/j^2); the spread is the interquartile range of the
/// normalized residuals over the non-candidate tail window. Requires at
/// least 20 users.
std::vector<FlagReport> flag_powerlaw_outliers(
    const std::vector<std::pair<UserId, std::int64_t>>& response_counts,
    const PowerLawFit& fit, std::size_t top_k = 3, double spread_mult = 2.0);

/// Merges per-rule reports into one report per user (rule union, field
/// union), sorted by user id. Reports with no triggered rule and no values
/// are dropped unless keep_clean is set.
std::vector<FlagReport> merge_flag_reports(const std::vector<std::vector<FlagReport>>& parts,
                                           bool keep_clean = false);

} // namespace respgraph

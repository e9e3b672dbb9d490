#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "respgraph/graph.hpp"

namespace respgraph {

struct ClusteringResult {
    std::vector<double> cc;  // per node, aligned with graph indexing, in [0,1]
    double mean_cc = 0.0;    // arithmetic mean over all nodes
    /// (out-degree, mean cc of nodes with that out-degree), ascending degree.
    std::vector<std::pair<std::int64_t, double>> mean_cc_by_out_degree;
};

/// Clustering coefficient on the undirected projection: neighbors of i are
/// the union of its in- and out-neighbors (self excluded); cc(i) = existing
/// undirected links among them / (d*(d-1)/2). Nodes with fewer than two
/// neighbors get cc = 0.
ClusteringResult clustering(const ResponseGraph& graph);

/// Which excess degree is read off which endpoint of each arc.
/// TargetInSourceOut pairs the target's excess in-degree with the source's
/// excess out-degree; SourceInTargetOut is the transposed reading.
enum class ExcessPairing { TargetInSourceOut, SourceInTargetOut };

struct AssortativityResult {
    std::optional<double> r; // empty = undefined (zero variance in a term)
    std::uint64_t edges = 0; // arcs used (M)
};

/// Pearson correlation of excess degrees across directed arcs. Distinct
/// degrees; self-loops must already be excluded from the graph. Requires
/// M >= 2; a regular graph yields the undefined state.
AssortativityResult assortativity(const ResponseGraph& graph,
                                  ExcessPairing pairing = ExcessPairing::TargetInSourceOut);

struct RatioCdf {
    /// (ratio, fraction of finite-ratio nodes with ratio <= x), ascending.
    std::vector<std::pair<double, double>> points;
    std::size_t finite_nodes = 0;
    std::size_t infinite_nodes = 0; // k_out == 0 bucket
};

/// Empirical CDF of k_in/k_out over nodes with k_out >= 1 (distinct degrees).
RatioCdf in_out_ratio_cdf(const DegreeView& deg);

} // namespace respgraph

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "respgraph/trace.hpp"

namespace respgraph {

struct Arc {
    std::int32_t target = 0;
    std::int64_t weight = 0; // response multiplicity, >= 1

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Weighted directed user graph: arc u -> v means u responded to a video
/// owned by v. Nodes are exactly the users that appear as responder or as
/// owner of a responded video, in lexicographic id order (canonical indexing
/// makes every downstream computation order-independent). Immutable after
/// construction.
class ResponseGraph {
public:
    ResponseGraph() = default;

    /// arcs: (source index, target index, weight) triples, deduplicated.
    ResponseGraph(std::vector<UserId> ids,
                  std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs);

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t arc_count() const noexcept { return arc_count_; }
    std::int64_t total_weight() const noexcept { return total_weight_; }

    const std::vector<UserId>& node_ids() const noexcept { return ids_; }
    const UserId& id_of(std::int32_t node) const { return ids_[static_cast<std::size_t>(node)]; }
    std::optional<std::int32_t> index_of(const UserId& id) const;

    const std::vector<Arc>& out_arcs(std::int32_t node) const {
        return out_[static_cast<std::size_t>(node)];
    }
    const std::vector<Arc>& in_arcs(std::int32_t node) const {
        return in_[static_cast<std::size_t>(node)];
    }
    bool has_arc(std::int32_t src, std::int32_t dst) const;

private:
    std::vector<UserId> ids_; // sorted
    std::unordered_map<UserId, std::int32_t> index_;
    std::vector<std::vector<Arc>> out_; // sorted by target
    std::vector<std::vector<Arc>> in_;  // sorted by source (Arc::target = source)
    std::size_t arc_count_ = 0;
    std::int64_t total_weight_ = 0;
};

/// Builds the response graph from a trace. Arc (u,v) exists iff u responded
/// at least once to a video owned by v; weight is the response count.
/// Self-responses become self-loops only when include_self_loops is set;
/// the node set does not depend on the flag.
ResponseGraph build_graph(const InteractionTrace& trace, bool include_self_loops);

/// Induced subgraph on the given node indices (ids keep their names).
ResponseGraph induced_subgraph(const ResponseGraph& graph,
                               const std::vector<std::int32_t>& nodes);

/// Per-node degrees, aligned with the graph's node indexing. Distinct
/// variants count neighbors; weighted variants count responses.
struct DegreeView {
    std::vector<UserId> ids;
    std::vector<std::int64_t> in_distinct;
    std::vector<std::int64_t> out_distinct;
    std::vector<std::int64_t> in_weighted;
    std::vector<std::int64_t> out_weighted;
};

DegreeView degrees(const ResponseGraph& graph);

/// Mean and coefficient of variation (stddev/mean) of a degree vector.
struct MeanCv {
    double mean = 0.0;
    double cv = 0.0;
};
MeanCv mean_cv(const std::vector<std::int64_t>& values);

struct ComponentDecomposition {
    /// Strongly connected components, sorted by size descending, ties broken
    /// by the lexicographically smallest member id. Node indices within a
    /// component are sorted ascending.
    std::vector<std::vector<std::int32_t>> sccs;
    /// Weakly connected components, same ordering rules.
    std::vector<std::vector<std::int32_t>> wccs;
    /// node index -> position in sccs / wccs
    std::vector<std::int32_t> scc_of;
    std::vector<std::int32_t> wcc_of;
};

ComponentDecomposition scc_decompose(const ResponseGraph& graph);

/// Subgraph induced by the largest SCC (empty graph when there are none).
ResponseGraph largest_scc_subgraph(const ResponseGraph& graph,
                                   const ComponentDecomposition& decomp);

/// (rank, size) pairs, rank starting at 1, sizes non-increasing.
std::vector<std::pair<std::size_t, std::size_t>>
component_size_rank(const ComponentDecomposition& decomp);

struct DistanceEstimate {
    double mean = 0.0;           // over reachable ordered pairs from the sources
    std::uint64_t pairs = 0;     // reachable (source, target) pairs, target != source
    std::size_t sources = 0;     // BFS sources actually used
    bool exact = false;          // true when every node served as a source
};

/// Mean directed shortest-path length, estimated by BFS from sample_size
/// uniformly drawn source nodes (exact when sample_size >= node count).
/// Unreachable pairs are excluded. Throws DegenerateInput when the graph has
/// no arcs.
DistanceEstimate average_distance(const ResponseGraph& graph, std::size_t sample_size,
                                  std::uint64_t seed);

/// Edge list as "src,dst,weight" CSV rows (with header), canonical order.
std::string edge_list_csv(const ResponseGraph& graph);

} // namespace respgraph

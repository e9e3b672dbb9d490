#include "respgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "respgraph/errors.hpp"
#include "respgraph/rng.hpp"

namespace respgraph {

ResponseGraph::ResponseGraph(
    std::vector<UserId> ids,
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs)
    : ids_(std::move(ids)) {
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        index_.emplace(ids_[i], static_cast<std::int32_t>(i));
    }
    out_.assign(ids_.size(), {});
    in_.assign(ids_.size(), {});
    for (const auto& [src, dst, weight] : arcs) {
        out_[static_cast<std::size_t>(src)].push_back({dst, weight});
        in_[static_cast<std::size_t>(dst)].push_back({src, weight});
        ++arc_count_;
        total_weight_ += weight;
    }
    auto by_target = [](const Arc& a, const Arc& b) { return a.target < b.target; };
    for (auto& arcs_of : out_) std::sort(arcs_of.begin(), arcs_of.end(), by_target);
    for (auto& arcs_of : in_) std::sort(arcs_of.begin(), arcs_of.end(), by_target);
}

std::optional<std::int32_t> ResponseGraph::index_of(const UserId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool ResponseGraph::has_arc(std::int32_t src, std::int32_t dst) const {
    const auto& arcs = out_[static_cast<std::size_t>(src)];
    auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                               [](const Arc& a, std::int32_t t) { return a.target < t; });
    return it != arcs.end() && it->target == dst;
}

ResponseGraph build_graph(const InteractionTrace& trace, bool include_self_loops) {
    // Node set: responders plus owners of responded videos, independent of
    // the self-loop flag.
    std::vector<UserId> ids;
    ids.reserve(trace.responses().size());
    for (const auto& r : trace.responses()) {
        ids.push_back(r.responder);
        ids.push_back(trace.video(r.parent_video).owner);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::unordered_map<UserId, std::int32_t> index;
    index.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index.emplace(ids[i], static_cast<std::int32_t>(i));
    }

    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> weights;
    for (const auto& r : trace.responses()) {
        const std::int32_t src = index.at(r.responder);
        const std::int32_t dst = index.at(trace.video(r.parent_video).owner);
        if (src == dst && !include_self_loops) continue;
        ++weights[{src, dst}];
    }

    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs;
    arcs.reserve(weights.size());
    for (const auto& [key, w] : weights) arcs.emplace_back(key.first, key.second, w);
    return ResponseGraph(std::move(ids), std::move(arcs));
}

ResponseGraph induced_subgraph(const ResponseGraph& graph,
                               const std::vector<std::int32_t>& nodes) {
    std::vector<UserId> ids;
    ids.reserve(nodes.size());
    for (auto n : nodes) ids.push_back(graph.id_of(n));
    std::sort(ids.begin(), ids.end());

    std::unordered_map<std::int32_t, std::int32_t> remap; // old -> new
    remap.reserve(nodes.size());
    for (auto n : nodes) {
        const auto& id = graph.id_of(n);
        const auto pos = std::lower_bound(ids.begin(), ids.end(), id) - ids.begin();
        remap.emplace(n, static_cast<std::int32_t>(pos));
    }

    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs;
    for (auto n : nodes) {
        for (const auto& arc : graph.out_arcs(n)) {
            auto it = remap.find(arc.target);
            if (it != remap.end()) {
                arcs.emplace_back(remap.at(n), it->second, arc.weight);
            }
        }
    }
    std::sort(arcs.begin(), arcs.end());
    return ResponseGraph(std::move(ids), std::move(arcs));
}

DegreeView degrees(const ResponseGraph& graph) {
    const std::size_t n = graph.node_count();
    DegreeView view;
    view.ids = graph.node_ids();
    view.in_distinct.assign(n, 0);
    view.out_distinct.assign(n, 0);
    view.in_weighted.assign(n, 0);
    view.out_weighted.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto node = static_cast<std::int32_t>(i);
        view.out_distinct[i] = static_cast<std::int64_t>(graph.out_arcs(node).size());
        view.in_distinct[i] = static_cast<std::int64_t>(graph.in_arcs(node).size());
        for (const auto& arc : graph.out_arcs(node)) view.out_weighted[i] += arc.weight;
        for (const auto& arc : graph.in_arcs(node)) view.in_weighted[i] += arc.weight;
    }
    return view;
}

MeanCv mean_cv(const std::vector<std::int64_t>& values) {
    MeanCv result;
    if (values.empty()) return result;
    const double n = static_cast<double>(values.size());
    double sum = 0.0, sq = 0.0;
    for (auto v : values) {
        const double x = static_cast<double>(v);
        sum += x;
        sq += x * x;
    }
    result.mean = sum / n;
    const double var = std::max(0.0, sq / n - result.mean * result.mean);
    result.cv = result.mean != 0.0 ? std::sqrt(var) / result.mean : 0.0;
    return result;
}

namespace {

// Iterative Tarjan; recursion would overflow on long path graphs.
std::vector<std::vector<std::int32_t>> tarjan_sccs(const ResponseGraph& graph) {
    const auto n = static_cast<std::int32_t>(graph.node_count());
    std::vector<std::int32_t> dfs_number(n, -1), low(n, 0), on_stack_pos(n, -1);
    std::vector<std::int32_t> stack;
    std::vector<std::vector<std::int32_t>> sccs;
    std::int32_t counter = 0;

    struct Frame {
        std::int32_t node;
        std::size_t next_arc;
    };
    std::vector<Frame> call_stack;

    for (std::int32_t root = 0; root < n; ++root) {
        if (dfs_number[root] != -1) continue;
        call_stack.push_back({root, 0});
        dfs_number[root] = low[root] = counter++;
        on_stack_pos[root] = static_cast<std::int32_t>(stack.size());
        stack.push_back(root);

        while (!call_stack.empty()) {
            auto& frame = call_stack.back();
            const auto& arcs = graph.out_arcs(frame.node);
            if (frame.next_arc < arcs.size()) {
                const std::int32_t succ = arcs[frame.next_arc++].target;
                if (dfs_number[succ] == -1) {
                    dfs_number[succ] = low[succ] = counter++;
                    on_stack_pos[succ] = static_cast<std::int32_t>(stack.size());
                    stack.push_back(succ);
                    call_stack.push_back({succ, 0});
                } else if (on_stack_pos[succ] != -1) {
                    low[frame.node] = std::min(low[frame.node], dfs_number[succ]);
                }
            } else {
                const std::int32_t node = frame.node;
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    low[call_stack.back().node] = std::min(low[call_stack.back().node], low[node]);
                }
                if (low[node] == dfs_number[node]) {
                    std::vector<std::int32_t> scc;
                    const auto from = static_cast<std::size_t>(on_stack_pos[node]);
                    for (std::size_t i = from; i < stack.size(); ++i) {
                        scc.push_back(stack[i]);
                        on_stack_pos[stack[i]] = -1;
                    }
                    stack.resize(from);
                    std::sort(scc.begin(), scc.end());
                    sccs.push_back(std::move(scc));
                }
            }
        }
    }
    return sccs;
}

void sort_components(std::vector<std::vector<std::int32_t>>& comps, const ResponseGraph& graph) {
    std::stable_sort(comps.begin(), comps.end(),
                     [&](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
                         if (a.size() != b.size()) return a.size() > b.size();
                         return graph.id_of(a.front()) < graph.id_of(b.front());
                     });
}

} // namespace

ComponentDecomposition scc_decompose(const ResponseGraph& graph) {
    const auto n = static_cast<std::int32_t>(graph.node_count());
    ComponentDecomposition decomp;
    decomp.sccs = tarjan_sccs(graph);
    sort_components(decomp.sccs, graph);

    // WCCs by union-find over the undirected view.
    std::vector<std::int32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::int32_t(std::int32_t)> find = [&](std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::int32_t u = 0; u < n; ++u) {
        for (const auto& arc : graph.out_arcs(u)) {
            const std::int32_t a = find(u), b = find(arc.target);
            if (a != b) parent[a] = b;
        }
    }
    std::map<std::int32_t, std::vector<std::int32_t>> groups;
    for (std::int32_t u = 0; u < n; ++u) groups[find(u)].push_back(u);
    for (auto& [root, members] : groups) decomp.wccs.push_back(std::move(members));
    sort_components(decomp.wccs, graph);

    decomp.scc_of.assign(n, -1);
    for (std::size_t i = 0; i < decomp.sccs.size(); ++i) {
        for (auto node : decomp.sccs[i]) decomp.scc_of[node] = static_cast<std::int32_t>(i);
    }
    decomp.wcc_of.assign(n, -1);
    for (std::size_t i = 0; i < decomp.wccs.size(); ++i) {
        for (auto node : decomp.wccs[i]) decomp.wcc_of[node] = static_cast<std::int32_t>(i);
    }
    return decomp;
}

ResponseGraph largest_scc_subgraph(const ResponseGraph& graph,
                                   const ComponentDecomposition& decomp) {
    if (decomp.sccs.empty()) return ResponseGraph();
    return induced_subgraph(graph, decomp.sccs.front());
}

std::vector<std::pair<std::size_t, std::size_t>>
component_size_rank(const ComponentDecomposition& decomp) {
    std::vector<std::pair<std::size_t, std::size_t>> ranked;
    ranked.reserve(decomp.sccs.size());
    for (std::size_t i = 0; i < decomp.sccs.size(); ++i) {
        ranked.emplace_back(i + 1, decomp.sccs[i].size());
    }
    return ranked;
}

DistanceEstimate average_distance(const ResponseGraph& graph, std::size_t sample_size,
                                  std::uint64_t seed) {
    if (sample_size < 1) throw DegenerateInput("sample_size must be >= 1");
    if (graph.arc_count() == 0) throw DegenerateInput("graph has no arcs");

    const std::size_t n = graph.node_count();
    std::vector<std::int32_t> sources;
    DistanceEstimate est;
    if (sample_size >= n) {
        sources.resize(n);
        std::iota(sources.begin(), sources.end(), 0);
        est.exact = true;
    } else {
        std::mt19937_64 rng(seed);
        for (auto i : sample_indices(rng, n, sample_size)) {
            sources.push_back(static_cast<std::int32_t>(i));
        }
        std::sort(sources.begin(), sources.end());
    }
    est.sources = sources.size();

    std::vector<std::int32_t> dist(n);
    std::deque<std::int32_t> queue;
    long double total = 0.0L;
    for (auto src : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            const std::int32_t u = queue.front();
            queue.pop_front();
            for (const auto& arc : graph.out_arcs(u)) {
                if (dist[arc.target] == -1) {
                    dist[arc.target] = dist[u] + 1;
                    queue.push_back(arc.target);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (dist[v] > 0) {
                total += dist[v];
                ++est.pairs;
            }
        }
    }
    est.mean = est.pairs > 0 ? static_cast<double>(total / est.pairs) : 0.0;
    return est;
}

std::string edge_list_csv(const ResponseGraph& graph) {
    std::ostringstream out;
    out << "src,dst,weight\n";
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        const auto node = static_cast<std::int32_t>(u);
        for (const auto& arc : graph.out_arcs(node)) {
            out << graph.id_of(node) << ',' << graph.id_of(arc.target) << ',' << arc.weight
                << '\n';
        }
    }
    return out.str();
}

} // namespace respgraph

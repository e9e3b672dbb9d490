#include "respgraph/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "respgraph/errors.hpp"

namespace respgraph {

ClusteringResult clustering(const ResponseGraph& graph) {
    const std::size_t n = graph.node_count();
    ClusteringResult result;
    result.cc.assign(n, 0.0);

    // Undirected projection: sorted neighbor lists plus a packed link set for
    // O(1) pair membership checks.
    std::vector<std::vector<std::int32_t>> neighbors(n);
    std::unordered_set<std::uint64_t> links;
    for (std::size_t u = 0; u < n; ++u) {
        const auto node = static_cast<std::int32_t>(u);
        auto& nb = neighbors[u];
        for (const auto& arc : graph.out_arcs(node)) {
            if (arc.target != node) nb.push_back(arc.target);
        }
        for (const auto& arc : graph.in_arcs(node)) {
            if (arc.target != node) nb.push_back(arc.target);
        }
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        for (auto v : nb) {
            const auto a = static_cast<std::uint64_t>(std::min(node, v));
            const auto b = static_cast<std::uint64_t>(std::max(node, v));
            links.insert((a << 32) | b);
        }
    }

    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const auto& nb = neighbors[u];
        const std::size_t d = nb.size();
        if (d < 2) continue; // cc stays 0
        std::uint64_t present = 0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i + 1; j < d; ++j) {
                const auto a = static_cast<std::uint64_t>(nb[i]);
                const auto b = static_cast<std::uint64_t>(nb[j]);
                if (links.contains((a << 32) | b)) ++present;
            }
        }
        const double possible = static_cast<double>(d) * static_cast<double>(d - 1) / 2.0;
        result.cc[u] = static_cast<double>(present) / possible;
        total += result.cc[u];
    }
    result.mean_cc = n > 0 ? total / static_cast<double>(n) : 0.0;

    std::map<std::int64_t, std::pair<double, std::int64_t>> by_out; // degree -> (sum, count)
    for (std::size_t u = 0; u < n; ++u) {
        const auto k_out = static_cast<std::int64_t>(graph.out_arcs(static_cast<std::int32_t>(u)).size());
        auto& slot = by_out[k_out];
        slot.first += result.cc[u];
        slot.second += 1;
    }
    for (const auto& [k, slot] : by_out) {
        result.mean_cc_by_out_degree.emplace_back(k, slot.first / static_cast<double>(slot.second));
    }
    return result;
}

AssortativityResult assortativity(const ResponseGraph& graph, ExcessPairing pairing) {
    AssortativityResult result;
    DegreeView deg = degrees(graph);

    // One (j, k) pair per directed arc. The default reads the excess
    // in-degree off the vertex the arc leads into and the excess out-degree
    // off the vertex it leads out of; the alternative pairing transposes the
    // endpoints.
    double sum_j = 0.0, sum_k = 0.0, sum_jk = 0.0, sum_j2 = 0.0, sum_k2 = 0.0;
    std::uint64_t m = 0;
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        const auto src = static_cast<std::int32_t>(u);
        for (const auto& arc : graph.out_arcs(src)) {
            const auto dst = static_cast<std::size_t>(arc.target);
            double j, k;
            if (pairing == ExcessPairing::TargetInSourceOut) {
                j = static_cast<double>(deg.in_distinct[dst] - 1);
                k = static_cast<double>(deg.out_distinct[u] - 1);
            } else {
                j = static_cast<double>(deg.in_distinct[u] - 1);
                k = static_cast<double>(deg.out_distinct[dst] - 1);
            }
            sum_j += j;
            sum_k += k;
            sum_jk += j * k;
            sum_j2 += j * j;
            sum_k2 += k * k;
            ++m;
        }
    }
    result.edges = m;
    if (m < 2) return result;

    const double inv_m = 1.0 / static_cast<double>(m);
    const double var_j = sum_j2 - inv_m * sum_j * sum_j;
    const double var_k = sum_k2 - inv_m * sum_k * sum_k;
    if (var_j <= 0.0 || var_k <= 0.0) return result; // regular graph: undefined
    result.r = (sum_jk - inv_m * sum_j * sum_k) / std::sqrt(var_j * var_k);
    return result;
}

RatioCdf in_out_ratio_cdf(const DegreeView& deg) {
    RatioCdf result;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < deg.ids.size(); ++i) {
        if (deg.out_distinct[i] >= 1) {
            ratios.push_back(static_cast<double>(deg.in_distinct[i]) /
                             static_cast<double>(deg.out_distinct[i]));
        } else {
            ++result.infinite_nodes;
        }
    }
    result.finite_nodes = ratios.size();
    std::sort(ratios.begin(), ratios.end());
    const double n = static_cast<double>(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (i + 1 < ratios.size() && ratios[i + 1] == ratios[i]) continue;
        result.points.emplace_back(ratios[i], static_cast<double>(i + 1) / n);
    }
    return result;
}

} // namespace respgraph

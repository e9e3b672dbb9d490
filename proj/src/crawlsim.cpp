#include "respgraph/crawlsim.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "respgraph/errors.hpp"
#include "respgraph/rng.hpp"

namespace respgraph {

SyntheticDataSource::SyntheticDataSource(const InteractionTrace& trace)
    : SyntheticDataSource(trace, {}, 0) {}

SyntheticDataSource::SyntheticDataSource(const InteractionTrace& trace,
                                         const std::vector<std::string>& tag_words,
                                         std::uint64_t tag_seed)
    : trace_(trace) {
    for (const auto& v : trace.videos()) {
        videos_by_user_[v.owner].push_back(v.video_id);
    }
    for (const auto& r : trace.responses()) {
        responses_by_video_[r.parent_video].push_back(r);
        responsive_.insert(r.responder);
        responded_.insert(trace.video(r.parent_video).owner);
        auto& parents = parents_of_response_[r.response_video];
        const auto& owner = trace.video(r.parent_video).owner;
        if (std::find(parents.begin(), parents.end(), owner) == parents.end()) {
            parents.push_back(owner);
        }
    }
    for (auto& [video, records] : responses_by_video_) {
        std::sort(records.begin(), records.end(),
                  [](const ResponseRecord& a, const ResponseRecord& b) {
                      return a.position < b.position;
                  });
    }

    if (!tag_words.empty()) {
        std::mt19937_64 rng(tag_seed);
        for (const auto& v : trace.videos()) {
            const std::size_t n_tags = 1 + uniform_below(rng, 2);
            for (std::size_t t = 0; t < n_tags; ++t) {
                const auto& word = tag_words[uniform_below(rng, tag_words.size())];
                auto& contributors = contributors_by_tag_[word];
                if (std::find(contributors.begin(), contributors.end(), v.owner) ==
                    contributors.end()) {
                    contributors.push_back(v.owner);
                }
            }
        }
    }
}

UserInfo SyntheticDataSource::get_user_info(const UserId& user) const {
    UserInfo info;
    info.user = user;
    info.is_responsive = responsive_.contains(user);
    info.is_responded = responded_.contains(user);
    info.exists = info.is_responsive || info.is_responded || videos_by_user_.contains(user);
    return info;
}

std::vector<VideoId> SyntheticDataSource::get_user_videos(const UserId& user) const {
    auto it = videos_by_user_.find(user);
    return it != videos_by_user_.end() ? it->second : std::vector<VideoId>{};
}

std::vector<ResponseRecord> SyntheticDataSource::get_video_responses(const VideoId& video) const {
    auto it = responses_by_video_.find(video);
    return it != responses_by_video_.end() ? it->second : std::vector<ResponseRecord>{};
}

std::vector<UserId> SyntheticDataSource::get_responded_users(const VideoId& video) const {
    auto it = parents_of_response_.find(video);
    return it != parents_of_response_.end() ? it->second : std::vector<UserId>{};
}

std::vector<UserId> SyntheticDataSource::tag_search(const std::string& word) const {
    auto it = contributors_by_tag_.find(word);
    return it != contributors_by_tag_.end() ? it->second : std::vector<UserId>{};
}

namespace {

ResponseGraph graph_from_arc_records(
    const std::vector<std::pair<UserId, UserId>>& arc_records) {
    std::vector<UserId> ids;
    ids.reserve(arc_records.size() * 2);
    for (const auto& [src, dst] : arc_records) {
        ids.push_back(src);
        ids.push_back(dst);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::unordered_map<UserId, std::int32_t> index;
    index.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index.emplace(ids[i], static_cast<std::int32_t>(i));
    }
    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> weights;
    for (const auto& [src, dst] : arc_records) {
        if (src == dst) continue; // self-responses stay out of the sampled structure
        ++weights[{index.at(src), index.at(dst)}];
    }
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs;
    arcs.reserve(weights.size());
    for (const auto& [key, w] : weights) arcs.emplace_back(key.first, key.second, w);
    return ResponseGraph(std::move(ids), std::move(arcs));
}

} // namespace

CrawlResult crawl(const DataSource& source, const std::vector<UserId>& seeds) {
    if (seeds.empty()) throw DegenerateInput("crawl requires a non-empty seed list");

    CrawlResult result;
    CrawlState& state = result.state;
    std::deque<UserId> frontier(seeds.begin(), seeds.end());
    std::vector<std::pair<UserId, UserId>> arc_records; // responder -> responded owner

    while (!frontier.empty()) {
        const UserId user = std::move(frontier.front());
        frontier.pop_front();
        if (state.visited.contains(user)) continue;
        state.visited.insert(user);
        state.processed.push_back(user);

        const UserInfo info = source.get_user_info(user);
        ++state.queries;
        if (!info.exists) continue;

        const auto videos = source.get_user_videos(user);
        ++state.queries;
        for (const auto& video : videos) {
            const auto responses = source.get_video_responses(video);
            ++state.queries;
            if (!responses.empty()) {
                state.collected_videos.push_back(video);
                for (const auto& r : responses) {
                    state.collected_responses.push_back(r);
                    arc_records.emplace_back(r.responder, user);
                    frontier.push_back(r.responder);
                }
            }
            const auto responded_users = source.get_responded_users(video);
            ++state.queries;
            for (const auto& owner : responded_users) {
                frontier.push_back(owner);
            }
        }
    }

    result.graph = graph_from_arc_records(arc_records);
    return result;
}

std::vector<UserId> random_seeds(const DataSource& source,
                                 const std::vector<std::string>& dictionary,
                                 std::size_t count, std::uint64_t seed) {
    if (count == 0) return {};
    std::mt19937_64 rng(seed);
    std::vector<std::string> remaining = dictionary;
    std::vector<UserId> candidates;
    std::unordered_set<UserId> seen;

    while (candidates.size() < count && !remaining.empty()) {
        const auto pick = uniform_below(rng, remaining.size());
        const std::string word = std::move(remaining[pick]);
        remaining[pick] = std::move(remaining.back());
        remaining.pop_back();

        for (const auto& contributor : source.tag_search(word)) {
            if (seen.contains(contributor)) continue;
            const UserInfo info = source.get_user_info(contributor);
            if (info.is_responded || info.is_responsive) {
                seen.insert(contributor);
                candidates.push_back(contributor);
            }
        }
    }
    if (candidates.size() < count) {
        throw ExhaustedDictionary("dictionary produced " + std::to_string(candidates.size()) +
                                  " candidates, need " + std::to_string(count));
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<UserId> out;
    out.reserve(count);
    for (auto idx : sample_indices(rng, candidates.size(), count)) {
        out.push_back(candidates[idx]);
    }
    return out;
}

SamplingReport verify_sampling(const ResponseGraph& sample, const ResponseGraph& truth,
                               const std::vector<std::size_t>& top_k_list) {
    SamplingReport report;
    report.sample_users = sample.node_count();
    report.truth_users = truth.node_count();
    report.coverage = truth.node_count() > 0
                          ? static_cast<double>(sample.node_count()) /
                                static_cast<double>(truth.node_count())
                          : 0.0;

    const auto sample_decomp = scc_decompose(sample);
    const auto truth_decomp = scc_decompose(truth);

    report.property1 = true;
    for (const auto& wcc : sample_decomp.wccs) {
        std::int32_t truth_component = -2;
        bool ok = true;
        for (auto node : wcc) {
            const auto truth_node = truth.index_of(sample.id_of(node));
            if (!truth_node) {
                ok = false;
                break;
            }
            const auto c = truth_decomp.wcc_of[static_cast<std::size_t>(*truth_node)];
            if (truth_component == -2) truth_component = c;
            else if (truth_component != c) {
                ok = false;
                break;
            }
        }
        if (ok && truth_component >= 0) {
            ok = truth_decomp.wccs[static_cast<std::size_t>(truth_component)].size() ==
                 wcc.size();
        }
        if (!ok) {
            report.property1 = false;
            report.violations.push_back("component containing '" + sample.id_of(wcc.front()) +
                                        "' is not an entire ground-truth component");
        }
    }

    // Most-responded truth users: weighted in-degree, ties by id.
    const DegreeView deg = degrees(truth);
    std::vector<std::size_t> order(truth.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (deg.in_weighted[a] != deg.in_weighted[b]) {
            return deg.in_weighted[a] > deg.in_weighted[b];
        }
        return deg.ids[a] < deg.ids[b];
    });
    for (auto k : top_k_list) {
        const std::size_t limit = std::min(k, order.size());
        if (limit == 0) {
            report.top_k_capture.emplace_back(k, 0.0);
            continue;
        }
        std::size_t captured = 0;
        for (std::size_t i = 0; i < limit; ++i) {
            if (sample.index_of(deg.ids[order[i]])) ++captured;
        }
        report.top_k_capture.emplace_back(
            k, static_cast<double>(captured) / static_cast<double>(limit));
    }
    return report;
}

std::string sampling_report_json(const SamplingReport& report, std::uint64_t queries) {
    nlohmann::json j;
    j["visited"] = report.sample_users;
    j["truth_users"] = report.truth_users;
    j["coverage"] = report.coverage;
    j["property1"] = report.property1;
    j["violations"] = report.violations;
    nlohmann::json topk = nlohmann::json::object();
    for (const auto& [k, fraction] : report.top_k_capture) {
        topk[std::to_string(k)] = fraction;
    }
    j["property3"] = std::move(topk);
    j["queries"] = queries;
    return j.dump(2) + "\n";
}

} // namespace respgraph

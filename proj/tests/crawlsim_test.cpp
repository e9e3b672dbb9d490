#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "respgraph/crawlsim.hpp"
#include "respgraph/rng.hpp"
#include "respgraph/synthgen.hpp"

using namespace respgraph;

namespace {

VideoMeta video(const std::string& id, const std::string& owner) {
    VideoMeta v;
    v.video_id = id;
    v.owner = owner;
    v.upload_time = 0;
    v.duration_s = 1;
    return v;
}

// Components described as (responder, owner) response pairs; every pair adds
// one response video.
InteractionTrace trace_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<VideoMeta> videos;
    std::vector<ResponseRecord> responses;
    std::map<std::string, std::string> parent_of;
    std::map<std::string, std::int32_t> next_pos;
    int vid = 0, rid = 0;
    for (const auto& [responder, owner] : pairs) {
        if (!parent_of.contains(owner)) {
            const std::string id = "p" + std::to_string(vid++);
            parent_of[owner] = id;
            videos.push_back(video(id, owner));
        }
    }
    for (const auto& [responder, owner] : pairs) {
        const std::string id = "r" + std::to_string(rid++);
        videos.push_back(video(id, responder));
        const auto& parent = parent_of[owner];
        responses.push_back({parent, id, responder, ++next_pos[parent]});
    }
    return InteractionTrace(std::move(videos), std::move(responses));
}

} // namespace

TEST_CASE("crawl of an isolated two-user component returns exactly it") {
    const auto trace = trace_of({{"a", "b"}, {"x", "y"}});
    const SyntheticDataSource source(trace);
    const auto result = crawl(source, {"a"});
    CHECK(result.graph.node_count() == 2);
    CHECK(result.graph.index_of("a").has_value());
    CHECK(result.graph.index_of("b").has_value());
    CHECK_FALSE(result.graph.index_of("x").has_value());
    CHECK(result.state.queries > 0);
}

TEST_CASE("crawl captures a whole weakly connected component and nothing else") {
    // Component 1: a chain of five users; components 2 and 3: pairs.
    const auto trace = trace_of({{"a", "b"},
                                 {"b", "c"},
                                 {"c", "d"},
                                 {"d", "e"},
                                 {"m", "n"},
                                 {"x", "y"}});
    const SyntheticDataSource source(trace);
    const auto result = crawl(source, {"c"});
    CHECK(result.graph.node_count() == 5);
    for (const char* id : {"a", "b", "c", "d", "e"}) {
        CHECK(result.graph.index_of(id).has_value());
    }
    for (const char* id : {"m", "n", "x", "y"}) {
        CHECK_FALSE(result.graph.index_of(id).has_value());
    }
}

TEST_CASE("empty seed list is rejected") {
    const auto trace = trace_of({{"a", "b"}});
    const SyntheticDataSource source(trace);
    CHECK_THROWS_AS(crawl(source, {}), DegenerateInput);
}

TEST_CASE("crawl is deterministic given the seed order") {
    const auto trace = trace_of(
        {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "a"}, {"e", "b"}, {"f", "c"}});
    const SyntheticDataSource source(trace);
    const auto r1 = crawl(source, {"d", "e"});
    const auto r2 = crawl(source, {"d", "e"});
    CHECK(r1.state.processed == r2.state.processed);
    CHECK(r1.state.queries == r2.state.queries);
    CHECK(edge_list_csv(r1.graph) == edge_list_csv(r2.graph));
}

TEST_CASE("random_seeds returns a deterministic uniform sample of matching users") {
    GenConfig cfg;
    cfg.seed = 3;
    cfg.n_users = 120;
    cfg.n_videos = 150;
    const auto [trace, truth] = generate(cfg);
    const std::vector<std::string> dictionary = {"alpha", "beta", "gamma", "delta"};
    const SyntheticDataSource source(trace, dictionary, 11);

    const auto seeds_a = random_seeds(source, dictionary, 20, 42);
    const auto seeds_b = random_seeds(source, dictionary, 20, 42);
    CHECK(seeds_a == seeds_b);
    CHECK(seeds_a.size() == 20);
    std::set<UserId> unique(seeds_a.begin(), seeds_a.end());
    CHECK(unique.size() == 20);
    for (const auto& user : seeds_a) {
        const auto info = source.get_user_info(user);
        CHECK((info.is_responded || info.is_responsive));
    }
}

TEST_CASE("random_seeds exhausts a dictionary of non-participants") {
    // Videos exist but nothing has responses, so no contributor qualifies.
    InteractionTrace trace({video("p0", "loner")}, {});
    const std::vector<std::string> dictionary = {"alpha", "beta"};
    const SyntheticDataSource source(trace, dictionary, 1);
    CHECK_THROWS_AS(random_seeds(source, dictionary, 5, 9), ExhaustedDictionary);
}

TEST_CASE("verify_sampling on the identity sample") {
    const auto trace = trace_of({{"a", "b"}, {"b", "c"}, {"x", "y"}});
    const ResponseGraph truth = build_graph(trace, false);
    const auto report = verify_sampling(truth, truth, {1, 3, 10});
    CHECK(report.property1);
    CHECK(report.violations.empty());
    CHECK(report.coverage == doctest::Approx(1.0));
    for (const auto& [k, fraction] : report.top_k_capture) {
        CHECK(fraction == doctest::Approx(1.0));
    }
}

TEST_CASE("a truncated component is called out as a violation") {
    const auto trace = trace_of({{"a", "b"}, {"b", "c"}});
    const ResponseGraph truth = build_graph(trace, false);
    // Sample misses node c.
    const ResponseGraph sample({"a", "b"}, {{0, 1, 1}});
    const auto report = verify_sampling(sample, truth, {2});
    CHECK_FALSE(report.property1);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].find("a") != std::string::npos);
}

TEST_CASE("crawl output always satisfies property 1 on random ground truths") {
    std::mt19937_64 rng(61);
    for (int round = 0; round < 30; ++round) {
        // Random trace over a small user pool; many weak components.
        const int n_users = 12 + static_cast<int>(uniform_below(rng, 20));
        std::vector<std::pair<std::string, std::string>> pairs;
        const int n_pairs = 5 + static_cast<int>(uniform_below(rng, 40));
        for (int i = 0; i < n_pairs; ++i) {
            const auto a = "u" + std::to_string(uniform_below(rng, n_users));
            auto b = "u" + std::to_string(uniform_below(rng, n_users));
            if (a == b) continue;
            pairs.emplace_back(a, b);
        }
        if (pairs.empty()) continue;
        const auto trace = trace_of(pairs);
        const SyntheticDataSource source(trace);
        const ResponseGraph truth = build_graph(trace, false);

        // Random non-empty seed set drawn from the whole user pool.
        std::vector<UserId> seeds;
        const auto n_seeds = 1 + uniform_below(rng, 4);
        for (std::uint64_t s = 0; s < n_seeds; ++s) {
            seeds.push_back("u" + std::to_string(uniform_below(rng, n_users)));
        }
        const auto result = crawl(source, seeds);
        const auto report = verify_sampling(result.graph, truth, {5});
        CHECK(report.property1);
    }
}

TEST_CASE("verify_sampling coverage and top-k agree with exhaustive recomputation") {
    GenConfig cfg;
    cfg.seed = 29;
    cfg.n_users = 200;
    cfg.n_videos = 250;
    const auto [trace, truth_box] = generate(cfg);
    const SyntheticDataSource source(trace);
    const ResponseGraph truth = build_graph(trace, false);

    const auto result = crawl(source, {trace.videos()[0].owner});
    const auto report = verify_sampling(result.graph, truth, {10, 50});

    CHECK(report.coverage == doctest::Approx(static_cast<double>(result.graph.node_count()) /
                                             static_cast<double>(truth.node_count())));
    // Exhaustive top-k: responses received per user, zero-received included.
    std::map<UserId, std::int64_t> received;
    for (const auto& id : truth.node_ids()) received[id] = 0;
    for (const auto& r : trace.responses()) {
        const auto& owner = trace.video(r.parent_video).owner;
        if (owner != r.responder) ++received[owner];
    }
    std::vector<std::pair<std::int64_t, UserId>> ranked;
    for (const auto& [user, count] : received) ranked.emplace_back(-count, user);
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [k, fraction] : report.top_k_capture) {
        const std::size_t limit = std::min<std::size_t>(k, ranked.size());
        std::size_t captured = 0;
        for (std::size_t i = 0; i < limit; ++i) {
            if (result.graph.index_of(ranked[i].second)) ++captured;
        }
        CHECK(fraction ==
              doctest::Approx(static_cast<double>(captured) / static_cast<double>(limit)));
    }
}

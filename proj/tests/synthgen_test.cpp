#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "respgraph/netmetrics.hpp"
#include "respgraph/rng.hpp"
#include "respgraph/sequences.hpp"
#include "respgraph/statfit.hpp"
#include "respgraph/synthgen.hpp"

using namespace respgraph;

namespace {

bool traces_equal(const InteractionTrace& a, const InteractionTrace& b) {
    if (a.videos().size() != b.videos().size()) return false;
    if (a.responses().size() != b.responses().size()) return false;
    for (std::size_t i = 0; i < a.videos().size(); ++i) {
        const auto& x = a.videos()[i];
        const auto& y = b.videos()[i];
        if (x.video_id != y.video_id || x.owner != y.owner || x.upload_time != y.upload_time ||
            x.duration_s != y.duration_s || x.views != y.views || x.country != y.country) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.responses().size(); ++i) {
        const auto& x = a.responses()[i];
        const auto& y = b.responses()[i];
        if (x.parent_video != y.parent_video || x.response_video != y.response_video ||
            x.responder != y.responder || x.position != y.position) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
    GenConfig cfg;
    cfg.seed = 99;
    cfg.n_users = 150;
    cfg.n_videos = 200;
    cfg.spammers.count = 2;
    cfg.self_response_rate = 0.2;
    const auto [trace_a, truth_a] = generate(cfg);
    const auto [trace_b, truth_b] = generate(cfg);
    CHECK(traces_equal(trace_a, trace_b));
    CHECK(ground_truth_json(truth_a) == ground_truth_json(truth_b));

    cfg.seed = 100; // and actually changes with the seed
    const auto [trace_c, truth_c] = generate(cfg);
    CHECK_FALSE(traces_equal(trace_a, trace_c));
}

TEST_CASE("invalid configs are rejected") {
    GenConfig cfg;
    cfg.self_response_rate = 1.5;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = GenConfig{};
    cfg.response_exponent = 0.0;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = GenConfig{};
    cfg.n_users = 0;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = GenConfig{};
    cfg.spammers.count = 1;
    cfg.spammers.responses_per_video_max = 2;
    cfg.spammers.responses_per_video_min = 5;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
}

TEST_CASE("ground truth tallies equal independent recounts") {
    GenConfig cfg;
    cfg.seed = 7;
    cfg.n_users = 200;
    cfg.n_videos = 300;
    cfg.self_response_rate = 0.15;
    cfg.spammers.count = 3;
    const auto [trace, truth] = generate(cfg);

    // The trace passed ingest validation inside the constructor already;
    // recount everything the generator claims.
    CHECK(static_cast<std::int64_t>(trace.videos().size()) == truth.videos);
    CHECK(static_cast<std::int64_t>(trace.responses().size()) == truth.responses);

    std::map<UserId, std::int64_t> per_user;
    std::map<VideoId, std::int64_t> per_video;
    std::int64_t self = 0, local = 0;
    std::uint64_t views = 0;
    for (const auto& r : trace.responses()) {
        ++per_user[r.responder];
        ++per_video[r.parent_video];
        const auto& parent = trace.video(r.parent_video);
        if (parent.owner == r.responder) ++self;
        if (parent.country == trace.video(r.response_video).country) ++local;
    }
    for (const auto& v : trace.videos()) views += v.views;
    CHECK(per_user == truth.responses_per_user);
    CHECK(per_video == truth.responses_per_video);
    CHECK(self == truth.self_responses);
    CHECK(local == truth.local_responses);
    CHECK(views == truth.total_views);

    const auto stats = vri(trace);
    std::int64_t negative = 0;
    for (double v : stats.intervals_s) {
        if (v < 0) ++negative;
    }
    CHECK(negative == truth.negative_vri);

    // Roles partition the users.
    for (const auto& spammer : truth.spammer_users) {
        CHECK(truth.responses_per_user.contains(spammer));
    }
}

TEST_CASE("spammer bursts have zero IRD and exceed the response floor") {
    GenConfig cfg;
    cfg.seed = 15;
    cfg.n_users = 300;
    cfg.n_videos = 400;
    cfg.spammers.count = 4;
    cfg.spammers.responses_per_video_min = 12;
    cfg.spammers.responses_per_video_max = 18;
    const auto [trace, truth] = generate(cfg);
    const auto profiles = behavior_profiles(trace);
    for (const auto& spammer : truth.spammer_users) {
        const auto it = std::find_if(profiles.begin(), profiles.end(),
                                     [&](const auto& p) { return p.user == spammer; });
        REQUIRE(it != profiles.end());
        REQUIRE(it->avg_ird.has_value());
        CHECK(*it->avg_ird == 0.0);
        CHECK(it->avg_responses_per_video >= 12.0);
    }
}

TEST_CASE("interleaved bursts scatter spam through normal traffic") {
    GenConfig cfg;
    cfg.seed = 16;
    cfg.n_users = 200;
    cfg.n_videos = 50; // dense per-video traffic so interleaving bites
    cfg.spammers.count = 3;
    cfg.spammers.interleave = true;
    const auto [trace, truth] = generate(cfg);
    const auto profiles = behavior_profiles(trace);
    double max_ird = 0.0;
    for (const auto& spammer : truth.spammer_users) {
        const auto it = std::find_if(profiles.begin(), profiles.end(),
                                     [&](const auto& p) { return p.user == spammer; });
        REQUIRE(it != profiles.end());
        if (it->avg_ird) max_ird = std::max(max_ird, *it->avg_ird);
    }
    CHECK(max_ird > 0.0);
}

TEST_CASE("mle recovers the configured exponent end to end") {
    GenConfig cfg;
    cfg.seed = 41;
    cfg.n_users = 100000;
    cfg.n_videos = 100000;
    cfg.response_exponent = 2.1;
    cfg.max_responses_per_user = 1000;
    const auto [trace, truth] = generate(cfg);
    std::vector<std::int64_t> counts;
    counts.reserve(truth.responses_per_user.size());
    for (const auto& [user, count] : truth.responses_per_user) counts.push_back(count);
    const auto fit = fit_power_law(counts, PowerLawMethod::mle_discrete, 1, 1000);
    CHECK(fit.alpha > 2.05);
    CHECK(fit.alpha < 2.15);
}

TEST_CASE("rewiring preserves every node's distinct degrees") {
    std::mt19937_64 rng(26);
    for (int round = 0; round < 5; ++round) {
        const ResponseGraph g = oracle::random_digraph(rng, 40, 0.1);
        if (g.arc_count() < 2) continue;
        const auto rewired = configuration_model_rewire(g, 1234 + round, 2000);
        const DegreeView before = degrees(g);
        const DegreeView after = degrees(rewired.graph);
        CHECK(before.in_distinct == after.in_distinct);
        CHECK(before.out_distinct == after.out_distinct);
        CHECK(rewired.applied + rewired.skipped == 2000);
    }
}

TEST_CASE("a directed 2-cycle cannot be rewired") {
    const ResponseGraph g(
        {"a", "b"}, {{0, 1, 1}, {1, 0, 1}});
    const auto rewired = configuration_model_rewire(g, 5, 500);
    CHECK(rewired.applied == 0);
    CHECK(rewired.skipped == 500);
    CHECK(rewired.graph.has_arc(0, 1));
    CHECK(rewired.graph.has_arc(1, 0));
}

TEST_CASE("rewiring destroys planted triangles") {
    // Twenty disjoint directed triangles plus cross arcs to give swaps room.
    std::vector<std::string> ids;
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs;
    const int triangles = 20;
    for (int t = 0; t < triangles; ++t) {
        for (int j = 0; j < 3; ++j) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "t%02d%d", t, j);
            ids.emplace_back(buf);
        }
        const int base = 3 * t;
        // Mutual arcs make the undirected projection a true triangle.
        arcs.emplace_back(base, base + 1, 1);
        arcs.emplace_back(base + 1, base, 1);
        arcs.emplace_back(base + 1, base + 2, 1);
        arcs.emplace_back(base + 2, base + 1, 1);
        arcs.emplace_back(base + 2, base, 1);
        arcs.emplace_back(base, base + 2, 1);
    }
    const ResponseGraph g(std::move(ids), std::move(arcs));
    const double cc_before = clustering(g).mean_cc;
    CHECK(cc_before == doctest::Approx(1.0));
    const auto rewired = configuration_model_rewire(g, 77, 100000);
    const double cc_after = clustering(rewired.graph).mean_cc;
    CHECK(cc_after < cc_before);
}

TEST_CASE("powerlaw sampler stays within the truncation bound") {
    PowerLawSampler sampler(0.8, 500);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const auto v = sampler.sample(rng);
        CHECK(v >= 1);
        CHECK(v <= 500);
    }
}

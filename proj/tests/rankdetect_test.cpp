#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "oracles.hpp"
#include "respgraph/rankdetect.hpp"
#include "respgraph/rng.hpp"
#include "respgraph/synthgen.hpp"

using namespace respgraph;

namespace {

ResponseGraph graph_of(int n, const std::vector<std::tuple<int, int, std::int64_t>>& arcs,
                       const char* prefix = "n") {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%s%02d", prefix, i);
        ids.emplace_back(buf);
    }
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> tuples;
    for (const auto& [u, v, w] : arcs) tuples.emplace_back(u, v, w);
    return ResponseGraph(std::move(ids), std::move(tuples));
}

UserBehaviorProfile profile(const std::string& user, std::optional<double> avg_ird,
                            double avg_resp) {
    UserBehaviorProfile p;
    p.user = user;
    p.avg_ird = avg_ird;
    p.avg_responses_per_video = avg_resp;
    return p;
}

} // namespace

TEST_CASE("a directed N-cycle ranks uniformly") {
    for (int n : {3, 7, 12}) {
        std::vector<std::tuple<int, int, std::int64_t>> arcs;
        for (int i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n, 1);
        const RankResult result = user_rank(graph_of(n, arcs));
        REQUIRE(result.converged);
        for (double s : result.score) {
            CHECK(s == doctest::Approx(1.0 / n).epsilon(1e-12));
        }
    }
}

TEST_CASE("two sources into a sink: frozen fixed point 10/47, 10/47, 27/47") {
    // a -> c, b -> c at damping 0.85. Solving the stationary equations with
    // uniform dangling redistribution gives x_c = 27/47, x_a = x_b = 10/47.
    const ResponseGraph g = graph_of(3, {{0, 2, 1}, {1, 2, 1}});
    RankOptions opts;
    opts.tol = 1e-14;
    const RankResult result = user_rank(g, opts);
    REQUIRE(result.converged);
    CHECK(result.score[0] == doctest::Approx(10.0 / 47.0).epsilon(1e-8));
    CHECK(result.score[1] == doctest::Approx(10.0 / 47.0).epsilon(1e-8));
    CHECK(result.score[2] == doctest::Approx(27.0 / 47.0).epsilon(1e-8));

    const auto expected = oracle::pagerank_dense(oracle::densify(g), 0.85, 300);
    for (int i = 0; i < 3; ++i) {
        CHECK(result.score[i] == doctest::Approx(expected[i]).epsilon(1e-10));
    }
}

TEST_CASE("scores sum to one on random graphs") {
    std::mt19937_64 rng(18);
    for (int round = 0; round < 20; ++round) {
        const ResponseGraph g = oracle::random_digraph(rng, 25, 0.1);
        const RankResult result = user_rank(g);
        double sum = 0.0;
        for (double s : result.score) {
            sum += s;
            CHECK(s > 0.0);
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("user_rank matches the dense oracle on weighted graphs") {
    std::mt19937_64 rng(19);
    for (int round = 0; round < 10; ++round) {
        const ResponseGraph g = oracle::random_digraph(rng, 12, 0.25);
        RankOptions opts;
        opts.tol = 1e-14;
        const RankResult result = user_rank(g, opts);
        const auto expected = oracle::pagerank_dense(oracle::densify(g), 0.85, 500);
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            CHECK(result.score[i] == doctest::Approx(expected[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("rank is equivariant under user relabeling") {
    const ResponseGraph g =
        graph_of(5, {{0, 1, 2}, {1, 2, 1}, {2, 0, 1}, {3, 2, 4}, {4, 3, 1}}, "a");
    const ResponseGraph relabeled =
        graph_of(5, {{0, 1, 2}, {1, 2, 1}, {2, 0, 1}, {3, 2, 4}, {4, 3, 1}}, "zz");
    const RankResult r1 = user_rank(g);
    const RankResult r2 = user_rank(relabeled);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(r1.score[i] == doctest::Approx(r2.score[i]).epsilon(1e-14));
    }
}

TEST_CASE("iterating past convergence moves nothing beyond tol") {
    std::mt19937_64 rng(20);
    const ResponseGraph g = oracle::random_digraph(rng, 20, 0.15);
    RankOptions opts;
    opts.tol = 1e-10;
    const RankResult base = user_rank(g, opts);
    RankOptions more = opts;
    more.max_iter = base.iterations * 2 + 50;
    const RankResult extended = user_rank(g, more);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK(std::abs(base.score[i] - extended.score[i]) <= opts.tol);
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    std::mt19937_64 rng(21);
    const ResponseGraph g = oracle::random_digraph(rng, 30, 0.1);
    RankOptions opts;
    opts.tol = 1e-16; // unreachable in 3 iterations
    opts.max_iter = 3;
    const RankResult result = user_rank(g, opts);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 3);
    CHECK(result.residual > 0.0);
}

TEST_CASE("rank_vs_views: views proportional to rank correlate near one") {
    const ResponseGraph g =
        graph_of(6, {{0, 1, 1}, {2, 1, 1}, {3, 1, 1}, {4, 5, 1}, {0, 5, 1}, {3, 4, 2}});
    const RankResult rank = user_rank(g);
    std::vector<VideoMeta> videos;
    for (std::size_t i = 0; i < rank.ids.size(); ++i) {
        VideoMeta v;
        v.video_id = "v" + std::to_string(i);
        v.owner = rank.ids[i];
        v.upload_time = 0;
        v.duration_s = 1;
        v.views = static_cast<std::uint64_t>(rank.score[i] * 1e9);
        videos.push_back(v);
    }
    const InteractionTrace trace(videos, {});
    const auto c = rank_vs_views(rank, trace);
    CHECK(c.c > 0.999);
}

TEST_CASE("rank_vs_views with constant views is a zero-variance error") {
    const ResponseGraph g = graph_of(3, {{0, 1, 1}, {1, 2, 1}});
    const RankResult rank = user_rank(g);
    std::vector<VideoMeta> videos;
    for (const auto& id : rank.ids) {
        VideoMeta v;
        v.video_id = "v_" + id;
        v.owner = id;
        v.upload_time = 0;
        v.duration_s = 1;
        v.views = 100;
        videos.push_back(v);
    }
    CHECK_THROWS_AS(rank_vs_views(rank, InteractionTrace(videos, {})), ZeroVariance);
}

TEST_CASE("rank_vs_views on shuffled views is weak") {
    std::mt19937_64 rng(22);
    const ResponseGraph g = oracle::random_digraph(rng, 60, 0.08);
    const RankResult rank = user_rank(g);
    std::vector<double> scores = rank.score;
    shuffle(rng, scores); // independent permutation
    std::vector<VideoMeta> videos;
    for (std::size_t i = 0; i < rank.ids.size(); ++i) {
        VideoMeta v;
        v.video_id = "v" + std::to_string(i);
        v.owner = rank.ids[i];
        v.upload_time = 0;
        v.duration_s = 1;
        v.views = static_cast<std::uint64_t>(scores[i] * 1e9);
        videos.push_back(v);
    }
    const auto c = rank_vs_views(rank, InteractionTrace(videos, {}));
    CHECK(std::abs(c.c) < 0.5);
}

TEST_CASE("rank_vs_indegree error and oracle paths") {
    // Directed cycle: in-degrees constant.
    std::vector<std::tuple<int, int, std::int64_t>> cycle;
    for (int i = 0; i < 5; ++i) cycle.emplace_back(i, (i + 1) % 5, 1);
    const ResponseGraph g = graph_of(5, cycle);
    const RankResult rank = user_rank(g);
    CHECK_THROWS_AS(rank_vs_indegree(rank, degrees(g)), ZeroVariance);

    std::mt19937_64 rng(23);
    const ResponseGraph random_graph = oracle::random_digraph(rng, 40, 0.1);
    const RankResult rank2 = user_rank(random_graph);
    const DegreeView deg = degrees(random_graph);
    std::vector<double> xs = rank2.score, ys;
    for (auto d : deg.in_distinct) ys.push_back(static_cast<double>(d));
    const double expected = oracle::pearson_direct(xs, ys);
    CHECK(rank_vs_indegree(rank2, deg).c == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ird flag thresholds are strict and respect undefined") {
    const std::vector<UserBehaviorProfile> profiles = {
        profile("hot", 2.0, 15.0),          // flagged
        profile("slow", 5.0, 15.0),         // avg_ird too high
        profile("shy", std::nullopt, 50.0), // undefined IRD is never flagged
        profile("edge", 3.0, 15.0),         // not < 3
        profile("few", 1.0, 10.0),
    };
    const auto reports = flag_ird(profiles, 3.0, 10.0);
    REQUIRE(reports.size() == 5);
    CHECK(reports[0].flagged());
    CHECK(reports[0].rules == static_cast<unsigned>(FlagRule::ird_threshold));
    CHECK_FALSE(reports[1].flagged());
    CHECK_FALSE(reports[2].flagged());
    CHECK_FALSE(reports[3].flagged());
    CHECK_FALSE(reports[4].flagged()); // not > 10
}

TEST_CASE("ird flag is monotone in its thresholds") {
    std::mt19937_64 rng(24);
    std::vector<UserBehaviorProfile> profiles;
    for (int i = 0; i < 100; ++i) {
        profiles.push_back(profile("u" + std::to_string(i), uniform01(rng) * 6.0,
                                   uniform01(rng) * 20.0));
    }
    const auto base = flag_ird(profiles, 3.0, 10.0);
    const auto tighter_ird = flag_ird(profiles, 2.0, 10.0);
    const auto tighter_resp = flag_ird(profiles, 3.0, 12.0);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (tighter_ird[i].flagged()) CHECK(base[i].flagged());
        if (tighter_resp[i].flagged()) CHECK(base[i].flagged());
    }
}

TEST_CASE("inout flag: infinite ratio and balanced users") {
    const ResponseGraph g = graph_of(3, {{0, 1, 50}});
    const auto reports = flag_inout(degrees(g), 10.0, 20);
    const auto by_user = [&](const std::string& id) {
        return *std::find_if(reports.begin(), reports.end(),
                             [&](const auto& r) { return r.user == id; });
    };
    CHECK(by_user("n00").flagged()); // out 50, in 0
    CHECK(by_user("n00").infinite_ratio);
    CHECK_FALSE(by_user("n01").flagged());

    const ResponseGraph balanced = graph_of(2, {{0, 1, 5}, {1, 0, 5}});
    for (const auto& r : flag_inout(degrees(balanced), 1.5, 1)) {
        CHECK_FALSE(r.flagged());
    }
}

TEST_CASE("synthetic spammers trip the inout rule") {
    GenConfig cfg;
    cfg.seed = 77;
    cfg.n_users = 500;
    cfg.n_videos = 700;
    cfg.spammers.count = 5;
    cfg.spammers.videos_per_spammer = 3;
    cfg.spammers.responses_per_video_min = 12;
    cfg.spammers.responses_per_video_max = 15;
    const auto [trace, truth] = generate(cfg);
    const ResponseGraph g = build_graph(trace, true);
    const auto reports = flag_inout(degrees(g), 10.0, 20);
    std::map<UserId, bool> flagged;
    for (const auto& r : reports) flagged[r.user] = r.flagged();
    for (const auto& spammer : truth.spammer_users) {
        CHECK(flagged[spammer]);
    }
}

TEST_CASE("powerlaw outliers: plant and recover exactly") {
    std::mt19937_64 rng(31);
    std::vector<std::pair<UserId, std::int64_t>> counts;
    std::int64_t max_count = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto c = oracle::power_law_draw(rng, 0.7, 1000);
        max_count = std::max(max_count, c);
        counts.emplace_back("u" + std::to_string(i), c);
    }
    counts.emplace_back("plant_a", 50 * max_count);
    counts.emplace_back("plant_b", 55 * max_count);
    counts.emplace_back("plant_c", 60 * max_count);

    std::vector<std::int64_t> values;
    for (const auto& [user, c] : counts) values.push_back(c);
    const auto fit =
        fit_power_law(values, PowerLawMethod::mle_discrete, 1, 60 * max_count);
    const auto reports = flag_powerlaw_outliers(counts, fit, 3, 2.0);
    std::size_t flagged = 0;
    for (const auto& r : reports) {
        if (r.flagged()) {
            ++flagged;
            CHECK(r.user.substr(0, 6) == "plant_");
        }
    }
    CHECK(flagged == 3);
}

TEST_CASE("powerlaw outliers: clean data is quiet in at least 95% of seeds") {
    int quiet = 0;
    const int n_seeds = 40;
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        std::mt19937_64 rng(seed * 13 + 5);
        std::vector<std::pair<UserId, std::int64_t>> counts;
        for (int i = 0; i < 5000; ++i) {
            counts.emplace_back("u" + std::to_string(i),
                                oracle::power_law_draw(rng, 0.7, 1000));
        }
        std::vector<std::int64_t> values;
        for (const auto& [user, c] : counts) values.push_back(c);
        const auto fit = fit_power_law(values, PowerLawMethod::mle_discrete, 1, 1000);
        const auto reports = flag_powerlaw_outliers(counts, fit, 3, 2.0);
        const bool any = std::any_of(reports.begin(), reports.end(),
                                     [](const auto& r) { return r.flagged(); });
        if (!any) ++quiet;
    }
    CHECK(quiet >= 38); // >= 95% of 40
}

TEST_CASE("powerlaw outliers need at least 20 users") {
    std::vector<std::pair<UserId, std::int64_t>> counts;
    std::vector<std::int64_t> values;
    for (int i = 0; i < 19; ++i) {
        counts.emplace_back("u" + std::to_string(i), i + 1);
        values.push_back(i + 1);
    }
    const auto fit = fit_power_law(values, PowerLawMethod::mle_discrete, 1, 19);
    CHECK_THROWS_AS(flag_powerlaw_outliers(counts, fit, 3, 2.0), InsufficientData);
}

TEST_CASE("merged reports carry every triggered rule once per user") {
    std::vector<FlagReport> a(1), b(1);
    a[0].user = "dual";
    a[0].rules = static_cast<unsigned>(FlagRule::ird_threshold);
    a[0].avg_ird = 1.0;
    b[0].user = "dual";
    b[0].rules = static_cast<unsigned>(FlagRule::inout_ratio);
    b[0].out_in_ratio = 42.0;
    const auto merged = merge_flag_reports({a, b});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].user == "dual");
    CHECK(merged[0].rules ==
          (static_cast<unsigned>(FlagRule::ird_threshold) |
           static_cast<unsigned>(FlagRule::inout_ratio)));
    CHECK(merged[0].avg_ird == 1.0);
    CHECK(merged[0].out_in_ratio == 42.0);
    CHECK(rule_names(merged[0].rules) == "ird_threshold+inout_ratio");
    CHECK(rule_names(0) == "clean");
}

#include "respgraph/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "respgraph/errors.hpp"
#include "respgraph/rng.hpp"

namespace respgraph {

PowerLawSampler::PowerLawSampler(double alpha, std::int64_t x_max) {
    if (!(alpha > 0.0)) throw ConfigError("power-law exponent must be > 0");
    if (x_max < 1) throw ConfigError("power-law truncation must be >= 1");
    cumulative_.reserve(static_cast<std::size_t>(x_max));
    double total = 0.0;
    for (std::int64_t k = 1; k <= x_max; ++k) {
        total += std::pow(static_cast<double>(k), -alpha);
        cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
}

std::int64_t PowerLawSampler::sample(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return 1 + (it - cumulative_.begin());
}

namespace {

void validate(const GenConfig& c) {
    if (c.n_users < 1) throw ConfigError("n_users must be >= 1");
    if (c.n_videos < 1) throw ConfigError("n_videos must be >= 1");
    if (!(c.response_exponent > 0.0)) throw ConfigError("response_exponent must be > 0");
    if (c.max_responses_per_user < 1) throw ConfigError("max_responses_per_user must be >= 1");
    if (c.self_response_rate < 0.0 || c.self_response_rate > 1.0) {
        throw ConfigError("self_response_rate must be in [0,1]");
    }
    if (c.locality_rate < 0.0 || c.locality_rate > 1.0) {
        throw ConfigError("locality_rate must be in [0,1]");
    }
    if (c.vri.negative_fraction < 0.0 || c.vri.negative_fraction > 1.0) {
        throw ConfigError("vri.negative_fraction must be in [0,1]");
    }
    if (!(c.vri.decay_scale_s > 0.0)) throw ConfigError("vri.decay_scale_s must be > 0");
    if (!(c.parent_duration.shape > 0.0) || !(c.parent_duration.scale > 0.0) ||
        !(c.response_duration.shape > 0.0) || !(c.response_duration.scale > 0.0)) {
        throw ConfigError("Weibull duration parameters must be > 0");
    }
    if (c.countries.empty()) throw ConfigError("country pool must not be empty");
    for (const auto& [code, weight] : c.countries) {
        if (!(weight >= 0.0)) throw ConfigError("country weights must be >= 0");
    }
    if (c.spammers.count < 0) throw ConfigError("spammers.count must be >= 0");
    if (c.spammers.count > 0) {
        if (c.spammers.videos_per_spammer < 1) {
            throw ConfigError("spammers.videos_per_spammer must be >= 1");
        }
        if (c.spammers.responses_per_video_min < 1 ||
            c.spammers.responses_per_video_max < c.spammers.responses_per_video_min) {
            throw ConfigError("invalid spammer responses-per-video range");
        }
    }
}

std::string padded_id(const char* prefix, std::int64_t value, int width) {
    std::string digits = std::to_string(value);
    std::string out = prefix;
    for (int i = static_cast<int>(digits.size()); i < width; ++i) out += '0';
    return out + digits;
}

int width_for(std::int64_t n) {
    int w = 1;
    while (n >= 10) {
        n /= 10;
        ++w;
    }
    return w;
}

struct Unit {
    std::int32_t user = 0;   // index into the combined user table
    std::int32_t parent = 0; // parent video index
    std::int32_t count = 1;  // responses emitted back to back
};

} // namespace

std::pair<InteractionTrace, GroundTruth> generate(const GenConfig& config) {
    validate(config);
    std::mt19937_64 rng(config.seed);

    const std::int32_t n_normal = config.n_users;
    const std::int32_t n_total_users = n_normal + config.spammers.count;
    const int user_width = width_for(n_total_users);

    std::vector<UserId> users;
    users.reserve(static_cast<std::size_t>(n_total_users));
    for (std::int32_t i = 0; i < n_normal; ++i) users.push_back(padded_id("u", i, user_width));
    for (std::int32_t i = 0; i < config.spammers.count; ++i) {
        users.push_back(padded_id("spam", i, width_for(config.spammers.count)));
    }

    // Per-user country from the weighted pool.
    std::vector<double> country_cum;
    double weight_total = 0.0;
    for (const auto& [code, weight] : config.countries) {
        weight_total += weight;
        country_cum.push_back(weight_total);
    }
    if (!(weight_total > 0.0)) throw ConfigError("country weights sum to zero");
    std::vector<std::int32_t> user_country(static_cast<std::size_t>(n_total_users));
    for (auto& c : user_country) {
        const double u = uniform01(rng) * weight_total;
        c = static_cast<std::int32_t>(
            std::lower_bound(country_cum.begin(), country_cum.end(), u) - country_cum.begin());
        if (c >= static_cast<std::int32_t>(config.countries.size())) {
            c = static_cast<std::int32_t>(config.countries.size()) - 1;
        }
    }
    auto country_of = [&](std::int32_t user) -> const std::string& {
        return config.countries[static_cast<std::size_t>(user_country[user])].first;
    };

    constexpr std::int64_t kBaseTime = 1160000000; // fixed epoch anchor
    constexpr std::int64_t kTimeSpread = 180LL * 86400LL;

    // Seed videos. When there are at least as many videos as normal users,
    // the first block is assigned round-robin so every user owns one (this is
    // what makes an exact self-response quota feasible).
    const int video_width = width_for(config.n_videos);
    std::vector<VideoMeta> videos;
    videos.reserve(static_cast<std::size_t>(config.n_videos));
    std::vector<std::int32_t> video_owner(static_cast<std::size_t>(config.n_videos));
    std::vector<std::vector<std::int32_t>> videos_of_user(
        static_cast<std::size_t>(n_total_users));
    std::vector<std::vector<std::int32_t>> parents_by_country(config.countries.size());
    std::uint64_t total_views = 0;

    for (std::int32_t i = 0; i < config.n_videos; ++i) {
        const std::int32_t owner = (config.n_videos >= n_normal && i < n_normal)
                                       ? i
                                       : static_cast<std::int32_t>(uniform_below(
                                             rng, static_cast<std::uint64_t>(n_normal)));
        video_owner[static_cast<std::size_t>(i)] = owner;
        videos_of_user[static_cast<std::size_t>(owner)].push_back(i);
        parents_by_country[static_cast<std::size_t>(user_country[owner])].push_back(i);

        VideoMeta v;
        v.video_id = padded_id("v", i, video_width);
        v.owner = users[static_cast<std::size_t>(owner)];
        v.upload_time = kBaseTime + static_cast<std::int64_t>(uniform_below(
                                        rng, static_cast<std::uint64_t>(kTimeSpread)));
        v.duration_s = std::max<std::int64_t>(
            1, std::llround(weibull(rng, config.parent_duration.shape,
                                    config.parent_duration.scale)));
        v.views = static_cast<std::uint64_t>(
            std::floor(std::exp(standard_normal(rng) * 2.0 + 3.0)));
        v.country = country_of(owner);
        total_views += v.views;
        videos.push_back(std::move(v));
    }

    // Normal response plan: counts from the truncated power law.
    PowerLawSampler count_sampler(config.response_exponent, config.max_responses_per_user);
    std::vector<Unit> units;
    std::vector<std::int64_t> planned(static_cast<std::size_t>(n_total_users), 0);
    for (std::int32_t u = 0; u < n_normal; ++u) {
        const std::int64_t m = count_sampler.sample(rng);
        planned[static_cast<std::size_t>(u)] = m;
        for (std::int64_t j = 0; j < m; ++j) units.push_back({u, -1, 1});
    }
    const std::size_t n_normal_slots = units.size();

    // Spammer bursts; interleave mode scatters the burst into single slots.
    for (std::int32_t s = 0; s < config.spammers.count; ++s) {
        const std::int32_t user = n_normal + s;
        const auto n_targets = static_cast<std::size_t>(
            std::min<std::int32_t>(config.spammers.videos_per_spammer, config.n_videos));
        const auto targets =
            sample_indices(rng, static_cast<std::size_t>(config.n_videos), n_targets);
        for (auto t : targets) {
            const std::int64_t span = config.spammers.responses_per_video_max -
                                      config.spammers.responses_per_video_min + 1;
            const std::int32_t burst =
                config.spammers.responses_per_video_min +
                static_cast<std::int32_t>(uniform_below(rng, static_cast<std::uint64_t>(span)));
            planned[static_cast<std::size_t>(user)] += burst;
            if (config.spammers.interleave) {
                for (std::int32_t j = 0; j < burst; ++j) {
                    units.push_back({user, static_cast<std::int32_t>(t), 1});
                }
            } else {
                units.push_back({user, static_cast<std::int32_t>(t), burst});
            }
        }
    }

    std::int64_t total_responses = 0;
    for (const auto& unit : units) total_responses += unit.count;

    // Exact self-response quota over eligible normal slots (responder must
    // own a seed video).
    const auto target_self = static_cast<std::int64_t>(
        std::llround(config.self_response_rate * static_cast<double>(total_responses)));
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n_normal_slots; ++i) {
        if (!videos_of_user[static_cast<std::size_t>(units[i].user)].empty()) {
            eligible.push_back(i);
        }
    }
    shuffle(rng, eligible);
    std::vector<bool> is_self(units.size(), false);
    const auto n_self =
        std::min<std::int64_t>(target_self, static_cast<std::int64_t>(eligible.size()));
    for (std::int64_t i = 0; i < n_self; ++i) is_self[eligible[static_cast<std::size_t>(i)]] = true;

    // Parent assignment for normal slots.
    auto pick_nonown = [&](std::int32_t user, const std::vector<std::int32_t>& pool)
        -> std::optional<std::int32_t> {
        if (pool.empty()) return std::nullopt;
        for (int attempt = 0; attempt < 32; ++attempt) {
            const auto idx = pool[uniform_below(rng, pool.size())];
            if (video_owner[static_cast<std::size_t>(idx)] != user) return idx;
        }
        for (auto idx : pool) { // dense ownership: fall back to a scan
            if (video_owner[static_cast<std::size_t>(idx)] != user) return idx;
        }
        return std::nullopt;
    };
    std::vector<std::int32_t> all_parents(static_cast<std::size_t>(config.n_videos));
    for (std::int32_t i = 0; i < config.n_videos; ++i) all_parents[static_cast<std::size_t>(i)] = i;

    for (std::size_t i = 0; i < n_normal_slots; ++i) {
        Unit& unit = units[i];
        const std::int32_t user = unit.user;
        if (is_self[i]) {
            const auto& own = videos_of_user[static_cast<std::size_t>(user)];
            unit.parent = own[uniform_below(rng, own.size())];
            continue;
        }
        std::optional<std::int32_t> parent;
        if (uniform01(rng) < config.locality_rate) {
            parent = pick_nonown(
                user, parents_by_country[static_cast<std::size_t>(user_country[user])]);
        }
        if (!parent) parent = pick_nonown(user, all_parents);
        if (!parent) parent = all_parents[uniform_below(rng, all_parents.size())];
        unit.parent = *parent;
    }

    shuffle(rng, units);

    // Emission: response videos and records, positions per parent.
    GroundTruth truth;
    std::vector<ResponseRecord> responses;
    responses.reserve(static_cast<std::size_t>(total_responses));
    videos.reserve(videos.size() + static_cast<std::size_t>(total_responses));
    std::vector<std::int32_t> next_position(static_cast<std::size_t>(config.n_videos), 1);
    const int response_width = width_for(total_responses > 0 ? total_responses : 1);
    std::int64_t emitted = 0;

    for (const auto& unit : units) {
        const auto parent_idx = static_cast<std::size_t>(unit.parent);
        const std::int32_t owner = video_owner[parent_idx];
        const std::int64_t parent_time = *videos[parent_idx].upload_time;
        const bool self = owner == unit.user;
        const bool local = user_country[static_cast<std::size_t>(owner)] ==
                           user_country[static_cast<std::size_t>(unit.user)];
        for (std::int32_t j = 0; j < unit.count; ++j) {
            VideoMeta rv;
            rv.video_id = padded_id("r", emitted, response_width);
            rv.owner = users[static_cast<std::size_t>(unit.user)];
            const bool negative = uniform01(rng) < config.vri.negative_fraction;
            const auto magnitude = std::max<std::int64_t>(
                1, std::llround(std::ceil(exponential(rng, config.vri.decay_scale_s))));
            rv.upload_time = parent_time + (negative ? -magnitude : magnitude);
            rv.duration_s = std::max<std::int64_t>(
                1, std::llround(weibull(rng, config.response_duration.shape,
                                        config.response_duration.scale)));
            rv.views = static_cast<std::uint64_t>(
                std::floor(std::exp(standard_normal(rng) * 2.0 + 3.0)));
            rv.country = country_of(unit.user);
            total_views += rv.views;

            ResponseRecord record;
            record.parent_video = videos[parent_idx].video_id;
            record.response_video = rv.video_id;
            record.responder = rv.owner;
            record.position = next_position[parent_idx]++;

            videos.push_back(std::move(rv));
            responses.push_back(std::move(record));

            if (negative) ++truth.negative_vri;
            if (self) ++truth.self_responses;
            if (local) ++truth.local_responses;
            ++emitted;
        }
        truth.responses_per_video[videos[parent_idx].video_id] += unit.count;
    }

    for (std::int32_t u = 0; u < n_total_users; ++u) {
        if (planned[static_cast<std::size_t>(u)] > 0) {
            truth.responses_per_user[users[static_cast<std::size_t>(u)]] =
                planned[static_cast<std::size_t>(u)];
        }
    }
    for (std::int32_t s = 0; s < config.spammers.count; ++s) {
        truth.spammer_users.push_back(users[static_cast<std::size_t>(n_normal + s)]);
    }
    truth.videos = static_cast<std::int64_t>(videos.size());
    truth.responses = total_responses;
    truth.total_views = total_views;

    return {InteractionTrace(std::move(videos), std::move(responses)), std::move(truth)};
}

std::string ground_truth_json(const GroundTruth& truth) {
    nlohmann::json j;
    j["videos"] = truth.videos;
    j["responses"] = truth.responses;
    j["self_responses"] = truth.self_responses;
    j["negative_vri"] = truth.negative_vri;
    j["local_responses"] = truth.local_responses;
    j["total_views"] = truth.total_views;
    j["spammers"] = truth.spammer_users;
    nlohmann::json per_user = nlohmann::json::object();
    for (const auto& [user, count] : truth.responses_per_user) per_user[user] = count;
    j["responses_per_user"] = std::move(per_user);
    nlohmann::json per_video = nlohmann::json::object();
    for (const auto& [video, count] : truth.responses_per_video) per_video[video] = count;
    j["responses_per_video"] = std::move(per_video);
    return j.dump(2) + "\n";
}

RewireResult configuration_model_rewire(const ResponseGraph& graph, std::uint64_t seed,
                                        std::uint64_t swaps) {
    if (swaps < 1) throw ConfigError("swaps must be >= 1");

    struct Edge {
        std::int32_t src, dst;
        std::int64_t weight;
    };
    std::vector<Edge> edges;
    edges.reserve(graph.arc_count());
    std::unordered_set<std::uint64_t> present;
    present.reserve(graph.arc_count() * 2);
    auto key = [](std::int32_t a, std::int32_t b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
        for (const auto& arc : graph.out_arcs(static_cast<std::int32_t>(u))) {
            edges.push_back({static_cast<std::int32_t>(u), arc.target, arc.weight});
            present.insert(key(static_cast<std::int32_t>(u), arc.target));
        }
    }

    RewireResult result;
    std::mt19937_64 rng(seed);
    if (edges.size() >= 2) {
        for (std::uint64_t step = 0; step < swaps; ++step) {
            const auto i = uniform_below(rng, edges.size());
            const auto j = uniform_below(rng, edges.size());
            if (i == j) {
                ++result.skipped;
                continue;
            }
            Edge& e1 = edges[i];
            Edge& e2 = edges[j];
            // Proposed: (e1.src -> e2.dst), (e2.src -> e1.dst).
            if (e1.src == e2.src || e1.dst == e2.dst) {
                ++result.skipped; // identity swap
                continue;
            }
            if (e1.src == e2.dst || e2.src == e1.dst) {
                ++result.skipped; // would create a self-loop
                continue;
            }
            if (present.contains(key(e1.src, e2.dst)) || present.contains(key(e2.src, e1.dst))) {
                ++result.skipped; // would collapse into an existing arc
                continue;
            }
            present.erase(key(e1.src, e1.dst));
            present.erase(key(e2.src, e2.dst));
            std::swap(e1.dst, e2.dst);
            present.insert(key(e1.src, e1.dst));
            present.insert(key(e2.src, e2.dst));
            ++result.applied;
        }
    } else {
        result.skipped = swaps;
    }

    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> arcs;
    arcs.reserve(edges.size());
    for (const auto& e : edges) arcs.emplace_back(e.src, e.dst, e.weight);
    std::sort(arcs.begin(), arcs.end());
    return {ResponseGraph(graph.node_ids(), std::move(arcs)), result.applied, result.skipped};
}

} // namespace respgraph

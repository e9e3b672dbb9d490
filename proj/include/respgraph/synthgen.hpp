#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "respgraph/graph.hpp"
#include "respgraph/trace.hpp"

namespace respgraph {

struct WeibullParams {
    double shape = 1.0;
    double scale = 1.0;
};

struct SpammerSpec {
    std::int32_t count = 0;
    std::int32_t videos_per_spammer = 3;      // parent videos each spammer bursts at
    std::int32_t responses_per_video_min = 12;
    std::int32_t responses_per_video_max = 20;
    /// When set, burst responses are scattered through normal traffic instead
    /// of being emitted back to back (stresses the IRD heuristic).
    bool interleave = false;
};

struct VriMix {
    double negative_fraction = 0.27;
    double decay_scale_s = 30.0 * 86400.0; // mean |VRI|
};

struct GenConfig {
    std::uint64_t seed = 1;
    std::int32_t n_users = 1000;  // normal users; spammers come on top
    std::int32_t n_videos = 500;  // seed videos (responses add their own)
    double response_exponent = 2.1;          // P(count = k) ~ k^-alpha
    std::int64_t max_responses_per_user = 1000; // power-law truncation
    WeibullParams parent_duration{1.35, 300.0};
    WeibullParams response_duration{1.15, 200.0};
    double self_response_rate = 0.0;
    double locality_rate = 0.5;
    /// Country pool with sampling weights for user profiles.
    std::vector<std::pair<std::string, double>> countries = {
        {"US", 4.0}, {"BR", 2.0}, {"GB", 1.5}, {"JP", 1.0}, {"DE", 0.5}};
    SpammerSpec spammers;
    VriMix vri;
};

/// Exact bookkeeping of everything the generator planted; tallies equal
/// independent recounts over the emitted trace.
struct GroundTruth {
    std::vector<UserId> spammer_users;            // everyone else is normal
    std::map<UserId, std::int64_t> responses_per_user;
    std::map<VideoId, std::int64_t> responses_per_video;
    std::int64_t videos = 0;    // including response videos
    std::int64_t responses = 0;
    std::int64_t self_responses = 0;
    std::int64_t negative_vri = 0;
    std::int64_t local_responses = 0; // responder country == parent owner country
    std::uint64_t total_views = 0;
};

/// Deterministic synthetic trace: response counts from a truncated discrete
/// power law, durations from the configured Weibulls, spammers emitting
/// consecutive bursts. Throws ConfigError on invalid parameters.
std::pair<InteractionTrace, GroundTruth> generate(const GenConfig& config);

std::string ground_truth_json(const GroundTruth& truth);

struct RewireResult {
    ResponseGraph graph;
    std::uint64_t applied = 0;
    std::uint64_t skipped = 0; // proposals rejected (self-loop / duplicate / degenerate)
};

/// Degree-preserving randomization by directed double-edge swaps: arcs
/// (a->b), (c->d) become (a->d), (c->b) unless that would create a self-loop
/// or a duplicate arc. Distinct in/out degrees are preserved exactly per
/// node; weights travel with their source.
RewireResult configuration_model_rewire(const ResponseGraph& graph, std::uint64_t seed,
                                        std::uint64_t swaps);

/// Truncated discrete power-law sampler used by the generator: values in
/// [1, x_max] with P(k) ~ k^-alpha. Exposed for reuse in tests and tools.
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, std::int64_t x_max);
    std::int64_t sample(std::mt19937_64& rng) const;

private:
    std::vector<double> cumulative_;
};

} // namespace respgraph

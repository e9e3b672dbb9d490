#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "respgraph/trace.hpp"

namespace respgraph {

/// Maximal run of consecutive responses by one user within a video's
/// position-ordered response list.
struct Run {
    UserId user;
    std::int32_t length = 0;
    std::int32_t start_position = 0;
};

struct ResponseSequence {
    VideoId video;
    UserId owner;
    std::vector<ResponseRecord> ordered; // sorted by position
    std::vector<Run> runs;               // adjacent runs have different owners
};

/// One sequence per responded video, sorted by video id.
std::vector<ResponseSequence> build_sequences(const InteractionTrace& trace);

struct InteractionProfile {
    VideoId video;
    std::size_t unique_users = 0; // U
    std::size_t runs = 0;         // S
    double ratio = 0.0;           // U/S, in (0, 1]
};

InteractionProfile us_ratio(const ResponseSequence& seq);

struct VriStats {
    std::vector<double> intervals_s; // signed, response order; negative = predates parent
    std::size_t skipped = 0;         // responses lacking an upload time on either side
    double fraction_negative = 0.0;
    double fraction_100d_plus = 0.0; // VRI >= 100 days
    std::vector<std::pair<double, double>> cdf; // (seconds, P[VRI <= x])
};

/// Video-Response-Interval: response upload time minus parent upload time.
VriStats vri(const InteractionTrace& trace);

struct SelfResponseStats {
    double response_fraction = 0.0;    // self-responses / all responses
    double videos_with_self = 0.0;     // responded videos with >= 1 self-response
    double videos_only_self = 0.0;     // responded videos with only self-responses
    std::uint64_t self_responses = 0;
    std::uint64_t responded_videos = 0;
};

SelfResponseStats self_response_stats(const InteractionTrace& trace);

struct LocalityStats {
    /// (video, percentage of local responses among known-country responses),
    /// sorted by video id. Local = responder country equals owner country.
    std::vector<std::pair<VideoId, double>> per_video_pct;
    std::size_t skipped_videos = 0; // owner country unknown or no known-country response
    std::vector<std::pair<double, double>> cdf; // (pct, P[pct <= x])
};

LocalityStats geo_locality(const InteractionTrace& trace);

struct UserBehaviorProfile {
    UserId user;
    std::int64_t total_responses = 0;
    std::int64_t distinct_videos_responded = 0;
    double avg_responses_per_video = 0.0;
    /// Pooled inter-reference gaps: responses by others appearing between two
    /// consecutive responses of this user within one video.
    std::vector<std::int64_t> ird_gaps;
    std::optional<double> avg_ird; // empty when the user never repeated within a video
    std::int64_t self_response_count = 0;
    std::int64_t in_degree = 0;  // responses received on own videos (weighted, self included)
    std::int64_t out_degree = 0; // responses posted (weighted, self included)
};

/// One profile per responsive user, sorted by user id.
std::vector<UserBehaviorProfile> behavior_profiles(const InteractionTrace& trace);

} // namespace respgraph

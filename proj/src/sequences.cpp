#include "respgraph/sequences.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace respgraph {

std::vector<ResponseSequence> build_sequences(const InteractionTrace& trace) {
    std::map<VideoId, std::vector<ResponseRecord>> by_video;
    for (const auto& r : trace.responses()) {
        by_video[r.parent_video].push_back(r);
    }

    std::vector<ResponseSequence> sequences;
    sequences.reserve(by_video.size());
    for (auto& [video, records] : by_video) {
        std::sort(records.begin(), records.end(),
                  [](const ResponseRecord& a, const ResponseRecord& b) {
                      return a.position < b.position;
                  });
        ResponseSequence seq;
        seq.video = video;
        seq.owner = trace.video(video).owner;
        seq.ordered = std::move(records);
        for (const auto& r : seq.ordered) {
            if (!seq.runs.empty() && seq.runs.back().user == r.responder) {
                ++seq.runs.back().length;
            } else {
                seq.runs.push_back({r.responder, 1, r.position});
            }
        }
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

InteractionProfile us_ratio(const ResponseSequence& seq) {
    InteractionProfile profile;
    profile.video = seq.video;
    std::unordered_set<UserId> users;
    for (const auto& run : seq.runs) users.insert(run.user);
    profile.unique_users = users.size();
    profile.runs = seq.runs.size();
    profile.ratio = profile.runs > 0
                        ? static_cast<double>(profile.unique_users) /
                              static_cast<double>(profile.runs)
                        : 0.0;
    return profile;
}

VriStats vri(const InteractionTrace& trace) {
    VriStats stats;
    constexpr double kHundredDays = 100.0 * 86400.0;
    std::size_t negative = 0, long_tail = 0;
    for (const auto& r : trace.responses()) {
        const auto& parent = trace.video(r.parent_video);
        const auto& response = trace.video(r.response_video);
        if (!parent.upload_time || !response.upload_time) {
            ++stats.skipped;
            continue;
        }
        const double interval =
            static_cast<double>(*response.upload_time - *parent.upload_time);
        stats.intervals_s.push_back(interval);
        if (interval < 0.0) ++negative;
        if (interval >= kHundredDays) ++long_tail;
    }
    if (!stats.intervals_s.empty()) {
        const double n = static_cast<double>(stats.intervals_s.size());
        stats.fraction_negative = static_cast<double>(negative) / n;
        stats.fraction_100d_plus = static_cast<double>(long_tail) / n;
        std::vector<double> sorted = stats.intervals_s;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
            stats.cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
        }
    }
    return stats;
}

SelfResponseStats self_response_stats(const InteractionTrace& trace) {
    SelfResponseStats stats;
    struct VideoTally {
        std::uint64_t total = 0;
        std::uint64_t self = 0;
    };
    std::unordered_map<VideoId, VideoTally> per_video;
    std::uint64_t self_count = 0;
    for (const auto& r : trace.responses()) {
        auto& tally = per_video[r.parent_video];
        ++tally.total;
        if (trace.video(r.parent_video).owner == r.responder) {
            ++tally.self;
            ++self_count;
        }
    }
    stats.self_responses = self_count;
    stats.responded_videos = per_video.size();
    if (trace.responses().empty()) return stats;

    stats.response_fraction =
        static_cast<double>(self_count) / static_cast<double>(trace.responses().size());
    std::uint64_t with_self = 0, only_self = 0;
    for (const auto& [video, tally] : per_video) {
        if (tally.self > 0) ++with_self;
        if (tally.self == tally.total) ++only_self;
    }
    stats.videos_with_self =
        static_cast<double>(with_self) / static_cast<double>(per_video.size());
    stats.videos_only_self =
        static_cast<double>(only_self) / static_cast<double>(per_video.size());
    return stats;
}

LocalityStats geo_locality(const InteractionTrace& trace) {
    LocalityStats stats;
    struct VideoTally {
        std::uint64_t known = 0;
        std::uint64_t local = 0;
    };
    std::map<VideoId, VideoTally> per_video;
    std::unordered_set<VideoId> responded;

    // Responder country comes from the responder's profile; the response
    // video carries it (its owner is the responder).
    for (const auto& r : trace.responses()) {
        responded.insert(r.parent_video);
        const auto& owner_country = trace.video(r.parent_video).country;
        if (owner_country == kUnknownCountry) continue;
        const auto& responder_country = trace.video(r.response_video).country;
        if (responder_country == kUnknownCountry) continue;
        auto& tally = per_video[r.parent_video];
        ++tally.known;
        if (responder_country == owner_country) ++tally.local;
    }

    std::vector<double> pcts;
    for (const auto& [video, tally] : per_video) {
        const double pct =
            100.0 * static_cast<double>(tally.local) / static_cast<double>(tally.known);
        stats.per_video_pct.emplace_back(video, pct);
        pcts.push_back(pct);
    }
    stats.skipped_videos = responded.size() - per_video.size();

    std::sort(pcts.begin(), pcts.end());
    const double n = static_cast<double>(pcts.size());
    for (std::size_t i = 0; i < pcts.size(); ++i) {
        if (i + 1 < pcts.size() && pcts[i + 1] == pcts[i]) continue;
        stats.cdf.emplace_back(pcts[i], static_cast<double>(i + 1) / n);
    }
    return stats;
}

std::vector<UserBehaviorProfile> behavior_profiles(const InteractionTrace& trace) {
    // Positions of each responsive user's responses, per video.
    std::map<UserId, std::map<VideoId, std::vector<std::int32_t>>> positions;
    std::map<UserId, std::int64_t> self_counts, received;
    for (const auto& r : trace.responses()) {
        positions[r.responder][r.parent_video].push_back(r.position);
        const auto& owner = trace.video(r.parent_video).owner;
        ++received[owner];
        if (owner == r.responder) ++self_counts[r.responder];
    }

    std::vector<UserBehaviorProfile> profiles;
    profiles.reserve(positions.size());
    for (auto& [user, videos] : positions) {
        UserBehaviorProfile p;
        p.user = user;
        p.distinct_videos_responded = static_cast<std::int64_t>(videos.size());
        for (auto& [video, pos] : videos) {
            p.total_responses += static_cast<std::int64_t>(pos.size());
            std::sort(pos.begin(), pos.end());
            for (std::size_t i = 1; i < pos.size(); ++i) {
                p.ird_gaps.push_back(pos[i] - pos[i - 1] - 1);
            }
        }
        p.avg_responses_per_video = static_cast<double>(p.total_responses) /
                                    static_cast<double>(p.distinct_videos_responded);
        if (!p.ird_gaps.empty()) {
            double sum = 0.0;
            for (auto g : p.ird_gaps) sum += static_cast<double>(g);
            p.avg_ird = sum / static_cast<double>(p.ird_gaps.size());
        }
        auto self_it = self_counts.find(user);
        p.self_response_count = self_it != self_counts.end() ? self_it->second : 0;
        auto recv_it = received.find(user);
        p.in_degree = recv_it != received.end() ? recv_it->second : 0;
        p.out_degree = p.total_responses;
        profiles.push_back(std::move(p));
    }
    return profiles;
}

} // namespace respgraph

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "respgraph/errors.hpp"

namespace respgraph {

using UserId = std::string;
using VideoId = std::string;

inline constexpr const char* kUnknownCountry = "UNKNOWN";

struct VideoMeta {
    VideoId video_id;
    UserId owner;
    std::optional<std::int64_t> upload_time; // seconds since epoch; may be absent
    std::int64_t duration_s = 0;
    std::uint64_t views = 0;
    std::string country = kUnknownCountry; // ISO-3166 alpha-2 or UNKNOWN
};

struct ResponseRecord {
    VideoId parent_video;
    VideoId response_video;
    UserId responder;
    std::int32_t position = 0; // 1-based index in the parent's response list
};

/// Validated, immutable record set. Construction checks every trace
/// invariant: unique video ids, no dangling references, per-parent positions
/// forming a contiguous 1..n range, response != parent, non-negative
/// duration. Safe for concurrent reads once built.
class InteractionTrace {
public:
    InteractionTrace() = default;
    InteractionTrace(std::vector<VideoMeta> videos, std::vector<ResponseRecord> responses);

    const std::vector<VideoMeta>& videos() const noexcept { return videos_; }
    const std::vector<ResponseRecord>& responses() const noexcept { return responses_; }

    const VideoMeta* find_video(const VideoId& id) const;
    /// Throws IntegrityError if the id is unknown.
    const VideoMeta& video(const VideoId& id) const;

private:
    void validate() const;

    std::vector<VideoMeta> videos_;
    std::vector<ResponseRecord> responses_;
    std::unordered_map<VideoId, std::size_t> index_;
};

enum class TraceFormat { csv, jsonl };

/// Loads a trace. For csv, `path` is a directory holding videos.csv and
/// responses.csv; for jsonl it is a single file with one object per line
/// carrying a "kind" field ("video" | "response").
InteractionTrace load_trace(const std::filesystem::path& path, TraceFormat format);

/// Writes the trace in the same layout load_trace expects (round-trippable).
void save_trace(const InteractionTrace& trace, const std::filesystem::path& path,
                TraceFormat format);

/// Exhaustive tallies over a trace, one field per dataset-summary row.
struct SummaryStats {
    std::uint64_t videos = 0;
    std::uint64_t responses = 0;
    std::uint64_t total_views = 0;
    std::uint64_t views_of_responses = 0; // distinct response videos
    std::uint64_t videos_without_response = 0;
    std::uint64_t users = 0; // owners plus responders, distinct
};

SummaryStats trace_summary(const InteractionTrace& trace);

} // namespace respgraph

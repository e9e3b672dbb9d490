#include "respgraph/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace respgraph {

namespace {

// Minimal CSV splitting: fields are ids, integers and country codes, but
// quoted fields are accepted so exported data stays round-trippable.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::int64_t parse_int(const std::string& field, const std::string& file, std::size_t line,
                       const char* what) {
    std::int64_t value = 0;
    const auto* begin = field.data();
    const auto* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(file, line, std::string("invalid ") + what + ": '" + field + "'");
    }
    return value;
}

std::string normalize_country(const std::string& raw, const std::string& file,
                              std::size_t line) {
    if (raw.empty()) return kUnknownCountry;
    std::string up = raw;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == kUnknownCountry) return kUnknownCountry;
    if (up.size() == 2 && std::isalpha(static_cast<unsigned char>(up[0])) &&
        std::isalpha(static_cast<unsigned char>(up[1]))) {
        return up;
    }
    throw ParseError(file, line, "invalid country code: '" + raw + "'");
}

void expect_header(const std::string& got, const std::string& want, const std::string& file) {
    std::string trimmed = got;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == '\n')) {
        trimmed.pop_back();
    }
    if (trimmed != want) {
        throw ParseError(file, 1, "expected header '" + want + "', got '" + trimmed + "'");
    }
}

std::vector<VideoMeta> load_videos_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string(), 1, "empty file");
    expect_header(line, "video_id,owner,upload_time,duration_s,views,country", path.string());

    std::vector<VideoMeta> videos;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_row(line);
        if (fields.size() != 6) {
            throw ParseError(path.string(), lineno,
                             "expected 6 fields, got " + std::to_string(fields.size()));
        }
        VideoMeta v;
        v.video_id = fields[0];
        v.owner = fields[1];
        if (v.video_id.empty()) throw ParseError(path.string(), lineno, "empty video_id");
        if (v.owner.empty()) throw ParseError(path.string(), lineno, "empty owner");
        if (!fields[2].empty()) {
            v.upload_time = parse_int(fields[2], path.string(), lineno, "upload_time");
        }
        v.duration_s = parse_int(fields[3], path.string(), lineno, "duration_s");
        const std::int64_t views = parse_int(fields[4], path.string(), lineno, "views");
        if (views < 0) throw ParseError(path.string(), lineno, "negative views");
        v.views = static_cast<std::uint64_t>(views);
        v.country = normalize_country(fields[5], path.string(), lineno);
        videos.push_back(std::move(v));
    }
    return videos;
}

std::vector<ResponseRecord> load_responses_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string(), 1, "empty file");
    expect_header(line, "parent_video,response_video,responder,position", path.string());

    std::vector<ResponseRecord> responses;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_row(line);
        if (fields.size() != 4) {
            throw ParseError(path.string(), lineno,
                             "expected 4 fields, got " + std::to_string(fields.size()));
        }
        ResponseRecord r;
        r.parent_video = fields[0];
        r.response_video = fields[1];
        r.responder = fields[2];
        if (r.parent_video.empty() || r.response_video.empty() || r.responder.empty()) {
            throw ParseError(path.string(), lineno, "empty id field");
        }
        const std::int64_t pos = parse_int(fields[3], path.string(), lineno, "position");
        if (pos < 1 || pos > INT32_MAX) {
            throw ParseError(path.string(), lineno, "position out of range: " + fields[3]);
        }
        r.position = static_cast<std::int32_t>(pos);
        responses.push_back(std::move(r));
    }
    return responses;
}

InteractionTrace load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::vector<VideoMeta> videos;
    std::vector<ResponseRecord> responses;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
        try {
            const std::string kind = obj.at("kind").get<std::string>();
            if (kind == "video") {
                VideoMeta v;
                v.video_id = obj.at("video_id").get<std::string>();
                v.owner = obj.at("owner").get<std::string>();
                if (obj.contains("upload_time") && !obj["upload_time"].is_null()) {
                    v.upload_time = obj["upload_time"].get<std::int64_t>();
                }
                v.duration_s = obj.at("duration_s").get<std::int64_t>();
                v.views = obj.at("views").get<std::uint64_t>();
                v.country = normalize_country(obj.value("country", std::string()),
                                              path.string(), lineno);
                videos.push_back(std::move(v));
            } else if (kind == "response") {
                ResponseRecord r;
                r.parent_video = obj.at("parent_video").get<std::string>();
                r.response_video = obj.at("response_video").get<std::string>();
                r.responder = obj.at("responder").get<std::string>();
                r.position = obj.at("position").get<std::int32_t>();
                responses.push_back(std::move(r));
            } else {
                throw ParseError(path.string(), lineno, "unknown kind: '" + kind + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
    }
    return InteractionTrace(std::move(videos), std::move(responses));
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace

InteractionTrace::InteractionTrace(std::vector<VideoMeta> videos,
                                   std::vector<ResponseRecord> responses)
    : videos_(std::move(videos)), responses_(std::move(responses)) {
    index_.reserve(videos_.size());
    for (std::size_t i = 0; i < videos_.size(); ++i) {
        auto [it, inserted] = index_.emplace(videos_[i].video_id, i);
        if (!inserted) {
            throw IntegrityError("duplicate video_id: '" + videos_[i].video_id + "'");
        }
    }
    validate();
}

const VideoMeta* InteractionTrace::find_video(const VideoId& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &videos_[it->second];
}

const VideoMeta& InteractionTrace::video(const VideoId& id) const {
    const VideoMeta* v = find_video(id);
    if (!v) throw IntegrityError("unknown video_id: '" + id + "'");
    return *v;
}

void InteractionTrace::validate() const {
    for (const auto& v : videos_) {
        if (v.duration_s < 0) {
            throw IntegrityError("negative duration for video '" + v.video_id + "'");
        }
    }

    // Positions per parent must form the contiguous range 1..n.
    std::unordered_map<VideoId, std::vector<std::int32_t>> positions;
    for (const auto& r : responses_) {
        if (!index_.contains(r.parent_video)) {
            throw IntegrityError("dangling parent_video reference: '" + r.parent_video + "'");
        }
        if (!index_.contains(r.response_video)) {
            throw IntegrityError("dangling response_video reference: '" + r.response_video +
                                 "'");
        }
        if (r.parent_video == r.response_video) {
            throw IntegrityError("video '" + r.parent_video + "' posted as response to itself");
        }
        positions[r.parent_video].push_back(r.position);
    }
    for (auto& [parent, pos] : positions) {
        std::sort(pos.begin(), pos.end());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const auto want = static_cast<std::int32_t>(i + 1);
            if (pos[i] != want) {
                if (i > 0 && pos[i] == pos[i - 1]) {
                    throw IntegrityError("duplicate position " + std::to_string(pos[i]) +
                                         " for parent_video '" + parent + "'");
                }
                throw IntegrityError("position gap for parent_video '" + parent +
                                     "': expected " + std::to_string(want) + ", got " +
                                     std::to_string(pos[i]));
            }
        }
    }
}

InteractionTrace load_trace(const std::filesystem::path& path, TraceFormat format) {
    if (format == TraceFormat::jsonl) return load_jsonl(path);
    auto videos = load_videos_csv(path / "videos.csv");
    auto responses = load_responses_csv(path / "responses.csv");
    return InteractionTrace(std::move(videos), std::move(responses));
}

void save_trace(const InteractionTrace& trace, const std::filesystem::path& path,
                TraceFormat format) {
    if (format == TraceFormat::csv) {
        std::filesystem::create_directories(path);
        {
            std::ofstream out(path / "videos.csv", std::ios::trunc);
            out << "video_id,owner,upload_time,duration_s,views,country\n";
            for (const auto& v : trace.videos()) {
                out << csv_escape(v.video_id) << ',' << csv_escape(v.owner) << ',';
                if (v.upload_time) out << *v.upload_time;
                out << ',' << v.duration_s << ',' << v.views << ',' << v.country << '\n';
            }
        }
        {
            std::ofstream out(path / "responses.csv", std::ios::trunc);
            out << "parent_video,response_video,responder,position\n";
            for (const auto& r : trace.responses()) {
                out << csv_escape(r.parent_video) << ',' << csv_escape(r.response_video) << ','
                    << csv_escape(r.responder) << ',' << r.position << '\n';
            }
        }
        return;
    }

    std::ofstream out(path, std::ios::trunc);
    for (const auto& v : trace.videos()) {
        nlohmann::json obj;
        obj["kind"] = "video";
        obj["video_id"] = v.video_id;
        obj["owner"] = v.owner;
        if (v.upload_time) obj["upload_time"] = *v.upload_time;
        else obj["upload_time"] = nullptr;
        obj["duration_s"] = v.duration_s;
        obj["views"] = v.views;
        obj["country"] = v.country;
        out << obj.dump() << '\n';
    }
    for (const auto& r : trace.responses()) {
        nlohmann::json obj;
        obj["kind"] = "response";
        obj["parent_video"] = r.parent_video;
        obj["response_video"] = r.response_video;
        obj["responder"] = r.responder;
        obj["position"] = r.position;
        out << obj.dump() << '\n';
    }
}

SummaryStats trace_summary(const InteractionTrace& trace) {
    SummaryStats s;
    s.videos = trace.videos().size();
    s.responses = trace.responses().size();

    std::unordered_set<std::string> users;
    for (const auto& v : trace.videos()) {
        s.total_views += v.views;
        users.insert(v.owner);
    }
    std::unordered_set<VideoId> responded, response_videos;
    for (const auto& r : trace.responses()) {
        responded.insert(r.parent_video);
        response_videos.insert(r.response_video);
        users.insert(r.responder);
    }
    for (const auto& id : response_videos) {
        s.views_of_responses += trace.video(id).views;
    }
    s.videos_without_response = s.videos - responded.size();
    s.users = users.size();
    return s;
}

} // namespace respgraph

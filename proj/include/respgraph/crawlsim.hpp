#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "respgraph/graph.hpp"
#include "respgraph/trace.hpp"

namespace respgraph {

struct UserInfo {
    UserId user;
    bool exists = false;
    bool is_responded = false;  // owns a video with >= 1 response
    bool is_responsive = false; // posted >= 1 response
};

/// Read-only query surface the crawler runs against. Deterministic over a
/// fixed backing network; list results come back in a stable order.
class DataSource {
public:
    virtual ~DataSource() = default;

    virtual UserInfo get_user_info(const UserId& user) const = 0;
    virtual std::vector<VideoId> get_user_videos(const UserId& user) const = 0;
    /// Responses posted to the given video, in position order.
    virtual std::vector<ResponseRecord> get_video_responses(const VideoId& video) const = 0;
    /// Owners of the videos this video was posted as a response to.
    virtual std::vector<UserId> get_responded_users(const VideoId& video) const = 0;
    /// Contributors of videos tagged with the word.
    virtual std::vector<UserId> tag_search(const std::string& word) const = 0;
};

/// DataSource backed by an in-memory trace. Tags are assigned per video from
/// a word list (deterministic, seeded) so tag_search has something to find.
class SyntheticDataSource final : public DataSource {
public:
    explicit SyntheticDataSource(const InteractionTrace& trace);
    SyntheticDataSource(const InteractionTrace& trace,
                        const std::vector<std::string>& tag_words, std::uint64_t tag_seed);

    UserInfo get_user_info(const UserId& user) const override;
    std::vector<VideoId> get_user_videos(const UserId& user) const override;
    std::vector<ResponseRecord> get_video_responses(const VideoId& video) const override;
    std::vector<UserId> get_responded_users(const VideoId& video) const override;
    std::vector<UserId> tag_search(const std::string& word) const override;

private:
    const InteractionTrace& trace_;
    std::map<UserId, std::vector<VideoId>> videos_by_user_;
    std::unordered_map<VideoId, std::vector<ResponseRecord>> responses_by_video_;
    std::unordered_map<VideoId, std::vector<UserId>> parents_of_response_;
    std::unordered_set<UserId> responsive_, responded_;
    std::map<std::string, std::vector<UserId>> contributors_by_tag_;
};

struct CrawlState {
    std::vector<UserId> processed;             // processing order
    std::unordered_set<UserId> visited;
    std::vector<VideoId> collected_videos;     // in collection order
    std::vector<ResponseRecord> collected_responses;
    std::uint64_t queries = 0;
};

struct CrawlResult {
    ResponseGraph graph; // sampled (A,B), built without self-loops
    CrawlState state;
};

/// Snowball crawl: for each frontier user, fetch their videos; responded
/// videos enqueue all responsive users, response videos enqueue the
/// responded user; runs until the frontier is exhausted (FIFO order).
/// Throws DegenerateInput on an empty seed list.
CrawlResult crawl(const DataSource& source, const std::vector<UserId>& seeds);

/// Repeated seeded random tag searches, accumulating responded/responsive
/// contributors until `count` distinct candidates exist, then a uniform
/// sample of `count`. Throws ExhaustedDictionary when the dictionary cannot
/// produce enough candidates.
std::vector<UserId> random_seeds(const DataSource& source,
                                 const std::vector<std::string>& dictionary,
                                 std::size_t count, std::uint64_t seed);

struct SamplingReport {
    bool property1 = false; // every sampled WCC is an entire truth WCC
    std::vector<std::string> violations;
    double coverage = 0.0;  // sampled users / truth users
    std::size_t sample_users = 0;
    std::size_t truth_users = 0;
    /// (k, fraction of the k most-responded truth users present in the sample)
    std::vector<std::pair<std::size_t, double>> top_k_capture;
};

/// Checks the three sampling properties of the crawl output against the full
/// ground-truth graph. Most-responded = weighted in-degree, ties by id.
SamplingReport verify_sampling(const ResponseGraph& sample, const ResponseGraph& truth,
                               const std::vector<std::size_t>& top_k_list);

std::string sampling_report_json(const SamplingReport& report, std::uint64_t queries);

} // namespace respgraph

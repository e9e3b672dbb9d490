#include "respgraph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "respgraph/crawlsim.hpp"
#include "respgraph/netmetrics.hpp"
#include "respgraph/rankdetect.hpp"
#include "respgraph/sequences.hpp"
#include "respgraph/statfit.hpp"

namespace respgraph {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        out << content;
        if (!out) throw Error("failed to write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

struct StageWriter {
    const std::filesystem::path& out_dir;
    std::vector<std::string> files;

    void write(const std::string& name, const std::string& content) {
        atomic_write(out_dir / name, content);
        files.push_back(name);
    }
};

std::string points_csv(const char* header, const std::vector<std::pair<double, double>>& points) {
    std::ostringstream out;
    out << header << '\n';
    for (const auto& [x, y] : points) {
        out << format_double(x) << ',' << format_double(y) << '\n';
    }
    return out.str();
}

nlohmann::json fit_record(const char* model, const PowerLawFit& fit) {
    nlohmann::json j;
    j["model"] = model;
    j["params"] = {{"alpha", fit.alpha},
                   {"x_min", fit.x_min},
                   {"x_max", fit.x_max ? nlohmann::json(*fit.x_max) : nlohmann::json(nullptr)}};
    j["gof"] = {{"r_squared", fit.r_squared}};
    j["n"] = fit.n;
    j["method"] = fit.method == PowerLawMethod::mle_discrete ? "mle_discrete" : "loglog_ls";
    return j;
}

nlohmann::json fit_record(const char* model, const WeibullFit& fit) {
    nlohmann::json j;
    j["model"] = model;
    j["params"] = {{"shape", fit.shape}, {"scale", fit.scale}};
    j["gof"] = {{"log_likelihood", fit.log_likelihood}};
    j["n"] = fit.n;
    j["method"] = "mle";
    return j;
}

std::string gnuplot_stub(const char* title, const char* data_file, const char* using_spec,
                         bool loglog) {
    std::ostringstream out;
    out << "set datafile separator ','\n";
    out << "set title '" << title << "'\n";
    if (loglog) out << "set logscale xy\n";
    out << "plot '" << data_file << "' every ::1 using " << using_spec << " with points\n";
    return out.str();
}

std::vector<std::int64_t> values_ge_one(const std::vector<std::int64_t>& raw) {
    std::vector<std::int64_t> out;
    out.reserve(raw.size());
    for (auto v : raw) {
        if (v >= 1) out.push_back(v);
    }
    return out;
}

PowerLawMethod fit_method(const RunConfig& cfg) {
    return cfg.paper_mode ? PowerLawMethod::loglog_ls : PowerLawMethod::mle_discrete;
}

nlohmann::json try_power_law(const std::vector<std::int64_t>& samples, const char* model,
                             const RunConfig& cfg) {
    try {
        return fit_record(model, fit_power_law(samples, fit_method(cfg)));
    } catch (const Error& e) {
        nlohmann::json j;
        j["model"] = model;
        j["error"] = e.what();
        return j;
    }
}

nlohmann::json try_weibull(const std::vector<double>& samples, const char* model) {
    try {
        return fit_record(model, fit_weibull(samples));
    } catch (const Error& e) {
        nlohmann::json j;
        j["model"] = model;
        j["error"] = e.what();
        return j;
    }
}

nlohmann::json try_pearson(const std::vector<double>& xs, const std::vector<double>& ys,
                           const char* name) {
    nlohmann::json j;
    j["name"] = name;
    try {
        const auto c = pearson(xs, ys);
        j["c"] = c.c;
        j["n"] = c.n;
    } catch (const Error& e) {
        j["error"] = e.what();
    }
    return j;
}

} // namespace

std::vector<std::string> run_summary(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    const SummaryStats s = trace_summary(trace);
    nlohmann::json j;
    j["videos"] = s.videos;
    j["responses"] = s.responses;
    j["views"] = s.total_views;
    j["views_of_responses"] = s.views_of_responses;
    j["videos_without_response"] = s.videos_without_response;
    j["users"] = s.users;
    w.write("summary.json", j.dump(2) + "\n");
    return w.files;
}

std::vector<std::string> run_graph(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    const ResponseGraph graph = build_graph(trace, /*include_self_loops=*/false);
    w.write("edges.csv", edge_list_csv(graph));

    const auto decomp = scc_decompose(graph);
    {
        std::ostringstream out;
        out << "rank,size\n";
        for (const auto& [rank, size] : component_size_rank(decomp)) {
            out << rank << ',' << size << '\n';
        }
        w.write("component_rank.csv", out.str());
    }

    const DegreeView deg = degrees(graph);
    nlohmann::json j;
    j["nodes"] = graph.node_count();
    j["arcs"] = graph.arc_count();
    j["total_weight"] = graph.total_weight();
    const auto in_stats = mean_cv(deg.in_distinct);
    const auto out_stats = mean_cv(deg.out_distinct);
    j["avg_k_in"] = in_stats.mean;
    j["cv_k_in"] = in_stats.cv;
    j["avg_k_out"] = out_stats.mean;
    j["cv_k_out"] = out_stats.cv;
    j["avg_k"] = in_stats.mean + out_stats.mean;
    j["scc_count"] = decomp.sccs.size();
    j["wcc_count"] = decomp.wccs.size();
    j["largest_scc"] = decomp.sccs.empty() ? 0 : decomp.sccs.front().size();
    if (graph.arc_count() > 0) {
        const auto dist = average_distance(graph, cfg.distance_sample, cfg.seed);
        j["avg_distance"] = dist.mean;
        j["avg_distance_exact"] = dist.exact;
        j["avg_distance_sources"] = dist.sources;
    }
    if (!decomp.sccs.empty() && decomp.sccs.front().size() > 1) {
        const auto scc_graph = largest_scc_subgraph(graph, decomp);
        const DegreeView scc_deg = degrees(scc_graph);
        const auto scc_in = mean_cv(scc_deg.in_distinct);
        j["largest_scc_avg_k_in"] = scc_in.mean;
        j["largest_scc_arcs"] = scc_graph.arc_count();
    }
    w.write("graph_summary.json", j.dump(2) + "\n");
    w.write("component_rank.gp",
            gnuplot_stub("Component size vs rank", "component_rank.csv", "1:2", true));
    return w.files;
}

std::vector<std::string> run_metrics(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    const ResponseGraph graph = build_graph(trace, /*include_self_loops=*/false);
    const ClusteringResult cc = clustering(graph);
    {
        std::ostringstream out;
        out << "node,cc\n";
        for (std::size_t i = 0; i < graph.node_count(); ++i) {
            out << graph.id_of(static_cast<std::int32_t>(i)) << ',' << format_double(cc.cc[i])
                << '\n';
        }
        w.write("node_cc.csv", out.str());
    }
    {
        std::ostringstream out;
        out << "k_out,mean_cc\n";
        for (const auto& [k, mean] : cc.mean_cc_by_out_degree) {
            out << k << ',' << format_double(mean) << '\n';
        }
        w.write("cc_by_outdegree.csv", out.str());
    }

    const DegreeView deg = degrees(graph);
    const RatioCdf ratio = in_out_ratio_cdf(deg);
    w.write("ratio_cdf.csv", points_csv("ratio,cdf", ratio.points));

    const AssortativityResult assort = assortativity(graph);
    nlohmann::json j;
    j["cc"] = cc.mean_cc;
    j["r"] = assort.r ? nlohmann::json(*assort.r) : nlohmann::json(nullptr);
    j["m"] = assort.edges;
    j["ratio_infinite_nodes"] = ratio.infinite_nodes;
    j["ratio_finite_nodes"] = ratio.finite_nodes;
    w.write("metrics.json", j.dump(2) + "\n");
    return w.files;
}

std::vector<std::string> run_fit(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};

    // Count series: responses per responsive user, per responded user, per
    // responded video.
    std::map<UserId, std::int64_t> per_responsive, per_responded;
    std::map<VideoId, std::int64_t> per_video;
    for (const auto& r : trace.responses()) {
        ++per_responsive[r.responder];
        ++per_responded[trace.video(r.parent_video).owner];
        ++per_video[r.parent_video];
    }
    auto values = [](const auto& m) {
        std::vector<std::int64_t> out;
        out.reserve(m.size());
        for (const auto& [key, count] : m) out.push_back(count);
        return out;
    };

    nlohmann::json fits = nlohmann::json::array();
    fits.push_back(try_power_law(values(per_responsive), "responses_per_responsive_user", cfg));
    fits.push_back(try_power_law(values(per_responded), "responses_per_responded_user", cfg));
    fits.push_back(try_power_law(values(per_video), "responses_per_video", cfg));

    const ResponseGraph graph = build_graph(trace, false);
    const DegreeView deg = degrees(graph);
    fits.push_back(try_power_law(values_ge_one(deg.in_distinct), "in_degree", cfg));
    fits.push_back(try_power_law(values_ge_one(deg.out_distinct), "out_degree", cfg));

    // Durations of responded videos and of responses.
    std::vector<double> parent_durations, response_durations;
    {
        std::unordered_set<VideoId> responded, response_videos;
        for (const auto& r : trace.responses()) {
            responded.insert(r.parent_video);
            response_videos.insert(r.response_video);
        }
        for (const auto& v : trace.videos()) {
            if (v.duration_s <= 0) continue;
            if (responded.contains(v.video_id)) {
                parent_durations.push_back(static_cast<double>(v.duration_s));
            }
            if (response_videos.contains(v.video_id)) {
                response_durations.push_back(static_cast<double>(v.duration_s));
            }
        }
    }
    fits.push_back(try_weibull(parent_durations, "responded_video_duration"));
    fits.push_back(try_weibull(response_durations, "response_duration"));

    // Correlations: parent duration vs response count, parent duration vs
    // mean response duration, response count vs views.
    std::vector<double> dur_x, count_y, mean_resp_dur, views_y;
    for (const auto& [video, count] : per_video) {
        const auto& meta = trace.video(video);
        dur_x.push_back(static_cast<double>(meta.duration_s));
        count_y.push_back(static_cast<double>(count));
        views_y.push_back(static_cast<double>(meta.views));
    }
    {
        std::map<VideoId, std::pair<double, std::int64_t>> acc;
        for (const auto& r : trace.responses()) {
            auto& slot = acc[r.parent_video];
            slot.first += static_cast<double>(trace.video(r.response_video).duration_s);
            slot.second += 1;
        }
        for (const auto& [video, slot] : acc) {
            mean_resp_dur.push_back(slot.first / static_cast<double>(slot.second));
        }
    }
    nlohmann::json correlations = nlohmann::json::array();
    correlations.push_back(try_pearson(dur_x, count_y, "duration_vs_response_count"));
    correlations.push_back(try_pearson(dur_x, mean_resp_dur, "duration_vs_mean_response_duration"));
    correlations.push_back(try_pearson(count_y, views_y, "response_count_vs_views"));

    nlohmann::json j;
    j["fits"] = std::move(fits);
    j["correlations"] = std::move(correlations);
    w.write("fits.json", j.dump(2) + "\n");

    auto count_ccdf = [&](const std::vector<std::int64_t>& counts) {
        std::vector<double> xs;
        xs.reserve(counts.size());
        for (auto c : counts) xs.push_back(static_cast<double>(c));
        return ccdf(xs);
    };
    if (!deg.in_distinct.empty()) {
        w.write("degree_ccdf_in.csv", points_csv("k_in,ccdf", count_ccdf(deg.in_distinct)));
        w.write("degree_ccdf_out.csv", points_csv("k_out,ccdf", count_ccdf(deg.out_distinct)));
        w.write("degree_ccdf.gp",
                gnuplot_stub("Degree CCDF", "degree_ccdf_in.csv", "1:2", true));
    }
    if (!per_responsive.empty()) {
        w.write("responses_per_user_ccdf.csv",
                points_csv("responses,ccdf", count_ccdf(values(per_responsive))));
    }
    return w.files;
}

std::vector<std::string> run_sequences(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    const auto sequences = build_sequences(trace);
    {
        std::ostringstream out;
        out << "video,unique_users,sequences,ratio\n";
        for (const auto& seq : sequences) {
            const auto profile = us_ratio(seq);
            out << profile.video << ',' << profile.unique_users << ',' << profile.runs << ','
                << format_double(profile.ratio) << '\n';
        }
        w.write("us_ratio.csv", out.str());
    }

    const auto profiles = behavior_profiles(trace);
    {
        std::ostringstream out;
        out << "user,avg_ird,avg_resp_per_video,total_responses\n";
        for (const auto& p : profiles) {
            out << p.user << ',';
            if (p.avg_ird) out << format_double(*p.avg_ird);
            else out << "undefined";
            out << ',' << format_double(p.avg_responses_per_video) << ',' << p.total_responses
                << '\n';
        }
        w.write("ird.csv", out.str());
        w.write("ird_scatter.gp",
                gnuplot_stub("Avg IRD vs avg responses per video", "ird.csv", "3:2", false));
    }

    const auto locality = geo_locality(trace);
    {
        std::ostringstream out;
        out << "video,local_pct\n";
        for (const auto& [video, pct] : locality.per_video_pct) {
            out << video << ',' << format_double(pct) << '\n';
        }
        w.write("locality.csv", out.str());
    }

    const auto intervals = vri(trace);
    w.write("vri_cdf.csv", points_csv("vri_s,cdf", intervals.cdf));
    {
        // Day-resolution histogram, negative days included.
        std::map<std::int64_t, std::int64_t> hist;
        for (double v : intervals.intervals_s) {
            ++hist[static_cast<std::int64_t>(std::floor(v / 86400.0))];
        }
        std::ostringstream out;
        out << "day,count\n";
        for (const auto& [day, count] : hist) out << day << ',' << count << '\n';
        w.write("vri_hist.csv", out.str());
    }

    const auto self_stats = self_response_stats(trace);
    nlohmann::json j;
    j["self_response_fraction"] = self_stats.response_fraction;
    j["videos_with_self"] = self_stats.videos_with_self;
    j["videos_only_self"] = self_stats.videos_only_self;
    j["vri_fraction_negative"] = intervals.fraction_negative;
    j["vri_fraction_100d_plus"] = intervals.fraction_100d_plus;
    j["vri_skipped"] = intervals.skipped;
    j["locality_skipped_videos"] = locality.skipped_videos;
    w.write("sequences_summary.json", j.dump(2) + "\n");
    return w.files;
}

std::vector<std::string> run_detect(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};

    // Behavior metrics keep self-loops: self-responses are part of the signal.
    const ResponseGraph graph = build_graph(trace, /*include_self_loops=*/true);
    RankOptions rank_opts;
    rank_opts.damping = cfg.damping;
    const RankResult rank = user_rank(graph, rank_opts);
    {
        std::ostringstream out;
        out << "user,score\n";
        for (std::size_t i = 0; i < rank.ids.size(); ++i) {
            out << rank.ids[i] << ',' << format_double(rank.score[i]) << '\n';
        }
        w.write("rank.csv", out.str());
    }
    {
        std::vector<double> scores = rank.score;
        w.write("userrank_ccdf.csv", points_csv("score,ccdf", ccdf(scores)));
        w.write("userrank_ccdf.gp",
                gnuplot_stub("UserRank CCDF", "userrank_ccdf.csv", "1:2", true));
    }

    const auto profiles = behavior_profiles(trace);
    const DegreeView deg = degrees(graph);

    std::vector<std::vector<FlagReport>> parts;
    parts.push_back(flag_ird(profiles, cfg.ird_max, cfg.resp_min));
    parts.push_back(flag_inout(deg, cfg.ratio_min, cfg.min_out));

    std::vector<std::pair<UserId, std::int64_t>> response_counts;
    for (const auto& p : profiles) response_counts.emplace_back(p.user, p.total_responses);
    nlohmann::json outlier_note;
    try {
        std::vector<std::int64_t> counts;
        counts.reserve(response_counts.size());
        std::int64_t max_count = 1;
        for (const auto& [user, c] : response_counts) {
            counts.push_back(c);
            max_count = std::max(max_count, c);
        }
        const auto fit = fit_power_law(counts, PowerLawMethod::mle_discrete, 1, max_count);
        parts.push_back(
            flag_powerlaw_outliers(response_counts, fit, cfg.outlier_top_k,
                                   cfg.outlier_spread_mult));
    } catch (const Error& e) {
        outlier_note = e.what();
    }

    const auto merged = merge_flag_reports(parts);
    std::unordered_map<UserId, double> rank_of;
    for (std::size_t i = 0; i < rank.ids.size(); ++i) rank_of[rank.ids[i]] = rank.score[i];
    {
        std::ostringstream out;
        out << "user,rules,avg_ird,avg_resp_per_video,out_in_ratio,user_rank\n";
        for (const auto& report : merged) {
            out << report.user << ',' << rule_names(report.rules) << ',';
            if (report.avg_ird) out << format_double(*report.avg_ird);
            out << ',';
            if (report.avg_resp_per_video) out << format_double(*report.avg_resp_per_video);
            out << ',';
            if (report.infinite_ratio) out << "inf";
            else if (report.out_in_ratio) out << format_double(*report.out_in_ratio);
            out << ',';
            auto it = rank_of.find(report.user);
            if (it != rank_of.end()) out << format_double(it->second);
            out << '\n';
        }
        w.write("flags.csv", out.str());
    }

    nlohmann::json j;
    std::size_t ird_count = 0, inout_count = 0, outlier_count = 0;
    for (const auto& report : merged) {
        if (report.rules & static_cast<unsigned>(FlagRule::ird_threshold)) ++ird_count;
        if (report.rules & static_cast<unsigned>(FlagRule::inout_ratio)) ++inout_count;
        if (report.rules & static_cast<unsigned>(FlagRule::powerlaw_outlier)) ++outlier_count;
    }
    j["flagged_users"] = merged.size();
    j["rule_counts"] = {{"ird_threshold", ird_count},
                        {"inout_ratio", inout_count},
                        {"powerlaw_outlier", outlier_count}};
    j["rank_iterations"] = rank.iterations;
    j["rank_converged"] = rank.converged;
    if (!outlier_note.is_null()) j["powerlaw_outlier_note"] = outlier_note;
    try {
        const auto c = rank_vs_views(rank, trace);
        j["rank_vs_views"] = c.c;
    } catch (const Error& e) {
        j["rank_vs_views_error"] = e.what();
    }
    try {
        const auto c = rank_vs_indegree(rank, deg);
        j["rank_vs_indegree"] = c.c;
    } catch (const Error& e) {
        j["rank_vs_indegree_error"] = e.what();
    }
    w.write("detect_summary.json", j.dump(2) + "\n");

    {
        std::ostringstream out;
        out << "user,score,views\n";
        std::unordered_map<UserId, double> views;
        for (const auto& v : trace.videos()) views[v.owner] += static_cast<double>(v.views);
        for (std::size_t i = 0; i < rank.ids.size(); ++i) {
            auto it = views.find(rank.ids[i]);
            out << rank.ids[i] << ',' << format_double(rank.score[i]) << ','
                << format_double(it != views.end() ? it->second : 0.0) << '\n';
        }
        w.write("rank_vs_views.csv", out.str());
        w.write("rank_vs_views.gp",
                gnuplot_stub("UserRank vs views", "rank_vs_views.csv", "2:3", true));
    }
    return w.files;
}

std::vector<std::string> run_crawlsim(const InteractionTrace& trace, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    const SyntheticDataSource source(trace);
    const ResponseGraph truth = build_graph(trace, false);

    // Seeds: contributors of the most responded videos (top-100 style).
    std::map<VideoId, std::int64_t> response_counts;
    for (const auto& r : trace.responses()) ++response_counts[r.parent_video];
    std::vector<std::pair<std::int64_t, VideoId>> ranked;
    ranked.reserve(response_counts.size());
    for (const auto& [video, count] : response_counts) ranked.emplace_back(-count, video);
    std::sort(ranked.begin(), ranked.end());
    std::vector<UserId> seeds;
    for (std::size_t i = 0; i < ranked.size() && seeds.size() < 100; ++i) {
        const auto& owner = trace.video(ranked[i].second).owner;
        if (std::find(seeds.begin(), seeds.end(), owner) == seeds.end()) {
            seeds.push_back(owner);
        }
    }
    if (seeds.empty()) {
        w.write("crawl_report.json", "{\n  \"error\": \"trace has no responses\"\n}\n");
        return w.files;
    }

    const CrawlResult result = crawl(source, seeds);
    const auto report = verify_sampling(result.graph, truth, {10, 100, 1000});
    w.write("crawl_report.json", sampling_report_json(report, result.state.queries));
    return w.files;
}

std::vector<std::string> run_generate(const GenConfig& gen, const RunConfig& cfg) {
    StageWriter w{cfg.out_dir};
    auto [trace, truth] = generate(gen);
    save_trace(trace, cfg.out_dir, TraceFormat::csv);
    w.files.push_back("videos.csv");
    w.files.push_back("responses.csv");
    w.write("ground_truth.json", ground_truth_json(truth));
    return w.files;
}

std::vector<std::string> run_all(const InteractionTrace& trace, const RunConfig& cfg) {
    std::vector<std::string> files;
    auto append = [&](std::vector<std::string> stage_files) {
        files.insert(files.end(), stage_files.begin(), stage_files.end());
    };
    append(run_summary(trace, cfg));
    append(run_graph(trace, cfg));
    append(run_metrics(trace, cfg));
    append(run_fit(trace, cfg));
    append(run_sequences(trace, cfg));
    append(run_detect(trace, cfg));
    append(run_crawlsim(trace, cfg));

    nlohmann::json manifest;
    manifest["config"] = {{"ird_max", cfg.ird_max},
                          {"resp_min", cfg.resp_min},
                          {"ratio_min", cfg.ratio_min},
                          {"min_out", cfg.min_out},
                          {"paper_mode", cfg.paper_mode},
                          {"damping", cfg.damping},
                          {"seed", cfg.seed},
                          {"distance_sample", cfg.distance_sample}};
    manifest["version"] = "0.1.0";
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<std::string> sorted_files = files;
    std::sort(sorted_files.begin(), sorted_files.end());
    for (const auto& name : sorted_files) {
        std::ifstream in(cfg.out_dir / name, std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        outputs[name] = fnv1a64_hex(content.str());
    }
    manifest["outputs"] = std::move(outputs);
    atomic_write(cfg.out_dir / "run.json", manifest.dump(2) + "\n");
    files.push_back("run.json");
    return files;
}

} // namespace respgraph

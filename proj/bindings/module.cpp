#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "respgraph/crawlsim.hpp"
#include "respgraph/netmetrics.hpp"
#include "respgraph/pipeline.hpp"
#include "respgraph/rankdetect.hpp"
#include "respgraph/sequences.hpp"
#include "respgraph/statfit.hpp"
#include "respgraph/synthgen.hpp"

namespace py = pybind11;
using namespace respgraph;

PYBIND11_MODULE(_respgraph, m) {
    m.doc() = "Video-response social graph analytics core";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    // Data model
    py::class_<VideoMeta>(m, "VideoMeta")
        .def(py::init<>())
        .def_readwrite("video_id", &VideoMeta::video_id)
        .def_readwrite("owner", &VideoMeta::owner)
        .def_readwrite("upload_time", &VideoMeta::upload_time)
        .def_readwrite("duration_s", &VideoMeta::duration_s)
        .def_readwrite("views", &VideoMeta::views)
        .def_readwrite("country", &VideoMeta::country);

    py::class_<ResponseRecord>(m, "ResponseRecord")
        .def(py::init<>())
        .def_readwrite("parent_video", &ResponseRecord::parent_video)
        .def_readwrite("response_video", &ResponseRecord::response_video)
        .def_readwrite("responder", &ResponseRecord::responder)
        .def_readwrite("position", &ResponseRecord::position);

    py::class_<InteractionTrace>(m, "InteractionTrace")
        .def(py::init<std::vector<VideoMeta>, std::vector<ResponseRecord>>(),
             py::arg("videos"), py::arg("responses"))
        .def_property_readonly("videos", &InteractionTrace::videos)
        .def_property_readonly("responses", &InteractionTrace::responses);

    py::enum_<TraceFormat>(m, "TraceFormat")
        .value("csv", TraceFormat::csv)
        .value("jsonl", TraceFormat::jsonl);

    m.def("load_trace", &load_trace, py::arg("path"), py::arg("format") = TraceFormat::csv);
    m.def("save_trace", &save_trace, py::arg("trace"), py::arg("path"),
          py::arg("format") = TraceFormat::csv);

    py::class_<SummaryStats>(m, "SummaryStats")
        .def_readonly("videos", &SummaryStats::videos)
        .def_readonly("responses", &SummaryStats::responses)
        .def_readonly("total_views", &SummaryStats::total_views)
        .def_readonly("views_of_responses", &SummaryStats::views_of_responses)
        .def_readonly("videos_without_response", &SummaryStats::videos_without_response)
        .def_readonly("users", &SummaryStats::users);
    m.def("trace_summary", &trace_summary);

    // Graph
    py::class_<Arc>(m, "Arc")
        .def_readonly("target", &Arc::target)
        .def_readonly("weight", &Arc::weight);

    py::class_<ResponseGraph>(m, "ResponseGraph")
        .def_property_readonly("node_count", &ResponseGraph::node_count)
        .def_property_readonly("arc_count", &ResponseGraph::arc_count)
        .def_property_readonly("total_weight", &ResponseGraph::total_weight)
        .def_property_readonly("node_ids", &ResponseGraph::node_ids)
        .def("id_of", &ResponseGraph::id_of)
        .def("index_of", &ResponseGraph::index_of)
        .def("out_arcs", &ResponseGraph::out_arcs)
        .def("in_arcs", &ResponseGraph::in_arcs)
        .def("has_arc", &ResponseGraph::has_arc);

    m.def("build_graph", &build_graph, py::arg("trace"), py::arg("include_self_loops") = false);
    m.def("edge_list_csv", &edge_list_csv);

    py::class_<DegreeView>(m, "DegreeView")
        .def_readonly("ids", &DegreeView::ids)
        .def_readonly("in_distinct", &DegreeView::in_distinct)
        .def_readonly("out_distinct", &DegreeView::out_distinct)
        .def_readonly("in_weighted", &DegreeView::in_weighted)
        .def_readonly("out_weighted", &DegreeView::out_weighted);
    m.def("degrees", &degrees);

    py::class_<MeanCv>(m, "MeanCv")
        .def_readonly("mean", &MeanCv::mean)
        .def_readonly("cv", &MeanCv::cv);
    m.def("mean_cv", &mean_cv);

    py::class_<ComponentDecomposition>(m, "ComponentDecomposition")
        .def_readonly("sccs", &ComponentDecomposition::sccs)
        .def_readonly("wccs", &ComponentDecomposition::wccs);
    m.def("scc_decompose", &scc_decompose);
    m.def("component_size_rank", &component_size_rank);
    m.def("largest_scc_subgraph", &largest_scc_subgraph);

    py::class_<DistanceEstimate>(m, "DistanceEstimate")
        .def_readonly("mean", &DistanceEstimate::mean)
        .def_readonly("pairs", &DistanceEstimate::pairs)
        .def_readonly("sources", &DistanceEstimate::sources)
        .def_readonly("exact", &DistanceEstimate::exact);
    m.def("average_distance", &average_distance, py::arg("graph"), py::arg("sample_size"),
          py::arg("seed") = 1);

    // Network metrics
    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_readonly("cc", &ClusteringResult::cc)
        .def_readonly("mean_cc", &ClusteringResult::mean_cc)
        .def_readonly("mean_cc_by_out_degree", &ClusteringResult::mean_cc_by_out_degree);
    m.def("clustering", &clustering);

    py::enum_<ExcessPairing>(m, "ExcessPairing")
        .value("target_in_source_out", ExcessPairing::TargetInSourceOut)
        .value("source_in_target_out", ExcessPairing::SourceInTargetOut);

    py::class_<AssortativityResult>(m, "AssortativityResult")
        .def_readonly("r", &AssortativityResult::r)
        .def_readonly("edges", &AssortativityResult::edges);
    m.def("assortativity", &assortativity, py::arg("graph"),
          py::arg("pairing") = ExcessPairing::TargetInSourceOut);

    py::class_<RatioCdf>(m, "RatioCdf")
        .def_readonly("points", &RatioCdf::points)
        .def_readonly("finite_nodes", &RatioCdf::finite_nodes)
        .def_readonly("infinite_nodes", &RatioCdf::infinite_nodes);
    m.def("in_out_ratio_cdf", &in_out_ratio_cdf);

    // Fits
    py::enum_<PowerLawMethod>(m, "PowerLawMethod")
        .value("loglog_ls", PowerLawMethod::loglog_ls)
        .value("mle_discrete", PowerLawMethod::mle_discrete);

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("alpha", &PowerLawFit::alpha)
        .def_readonly("r_squared", &PowerLawFit::r_squared)
        .def_readonly("method", &PowerLawFit::method)
        .def_readonly("x_min", &PowerLawFit::x_min)
        .def_readonly("x_max", &PowerLawFit::x_max)
        .def_readonly("n", &PowerLawFit::n);
    m.def("fit_power_law", &fit_power_law, py::arg("samples"),
          py::arg("method") = PowerLawMethod::mle_discrete, py::arg("x_min") = 1,
          py::arg("x_max") = std::nullopt);

    py::class_<WeibullFit>(m, "WeibullFit")
        .def_readonly("shape", &WeibullFit::shape)
        .def_readonly("scale", &WeibullFit::scale)
        .def_readonly("log_likelihood", &WeibullFit::log_likelihood)
        .def_readonly("n", &WeibullFit::n);
    m.def("fit_weibull", &fit_weibull);

    py::class_<CorrelationResult>(m, "CorrelationResult")
        .def_readonly("c", &CorrelationResult::c)
        .def_readonly("n", &CorrelationResult::n);
    m.def("pearson", &pearson);
    m.def("ccdf", &ccdf);

    // Sequences
    py::class_<Run>(m, "Run")
        .def_readonly("user", &Run::user)
        .def_readonly("length", &Run::length)
        .def_readonly("start_position", &Run::start_position);

    py::class_<ResponseSequence>(m, "ResponseSequence")
        .def_readonly("video", &ResponseSequence::video)
        .def_readonly("owner", &ResponseSequence::owner)
        .def_readonly("ordered", &ResponseSequence::ordered)
        .def_readonly("runs", &ResponseSequence::runs);
    m.def("build_sequences", &build_sequences);

    py::class_<InteractionProfile>(m, "InteractionProfile")
        .def_readonly("video", &InteractionProfile::video)
        .def_readonly("unique_users", &InteractionProfile::unique_users)
        .def_readonly("runs", &InteractionProfile::runs)
        .def_readonly("ratio", &InteractionProfile::ratio);
    m.def("us_ratio", &us_ratio);

    py::class_<VriStats>(m, "VriStats")
        .def_readonly("intervals_s", &VriStats::intervals_s)
        .def_readonly("skipped", &VriStats::skipped)
        .def_readonly("fraction_negative", &VriStats::fraction_negative)
        .def_readonly("fraction_100d_plus", &VriStats::fraction_100d_plus)
        .def_readonly("cdf", &VriStats::cdf);
    m.def("vri", &vri);

    py::class_<SelfResponseStats>(m, "SelfResponseStats")
        .def_readonly("response_fraction", &SelfResponseStats::response_fraction)
        .def_readonly("videos_with_self", &SelfResponseStats::videos_with_self)
        .def_readonly("videos_only_self", &SelfResponseStats::videos_only_self)
        .def_readonly("self_responses", &SelfResponseStats::self_responses)
        .def_readonly("responded_videos", &SelfResponseStats::responded_videos);
    m.def("self_response_stats", &self_response_stats);

    py::class_<LocalityStats>(m, "LocalityStats")
        .def_readonly("per_video_pct", &LocalityStats::per_video_pct)
        .def_readonly("skipped_videos", &LocalityStats::skipped_videos)
        .def_readonly("cdf", &LocalityStats::cdf);
    m.def("geo_locality", &geo_locality);

    py::class_<UserBehaviorProfile>(m, "UserBehaviorProfile")
        .def_readonly("user", &UserBehaviorProfile::user)
        .def_readonly("total_responses", &UserBehaviorProfile::total_responses)
        .def_readonly("distinct_videos_responded",
                      &UserBehaviorProfile::distinct_videos_responded)
        .def_readonly("avg_responses_per_video",
                      &UserBehaviorProfile::avg_responses_per_video)
        .def_readonly("ird_gaps", &UserBehaviorProfile::ird_gaps)
        .def_readonly("avg_ird", &UserBehaviorProfile::avg_ird)
        .def_readonly("self_response_count", &UserBehaviorProfile::self_response_count)
        .def_readonly("in_degree", &UserBehaviorProfile::in_degree)
        .def_readonly("out_degree", &UserBehaviorProfile::out_degree);
    m.def("behavior_profiles", &behavior_profiles);

    // Rank and detection
    py::class_<RankOptions>(m, "RankOptions")
        .def(py::init<>())
        .def_readwrite("damping", &RankOptions::damping)
        .def_readwrite("tol", &RankOptions::tol)
        .def_readwrite("max_iter", &RankOptions::max_iter)
        .def_readwrite("weighted", &RankOptions::weighted);

    py::class_<RankResult>(m, "RankResult")
        .def_readonly("ids", &RankResult::ids)
        .def_readonly("score", &RankResult::score)
        .def_readonly("damping", &RankResult::damping)
        .def_readonly("iterations", &RankResult::iterations)
        .def_readonly("residual", &RankResult::residual)
        .def_readonly("converged", &RankResult::converged);
    m.def("user_rank", &user_rank, py::arg("graph"), py::arg("opts") = RankOptions{});
    m.def("rank_vs_views", &rank_vs_views);
    m.def("rank_vs_indegree", &rank_vs_indegree);

    py::class_<FlagReport>(m, "FlagReport")
        .def_readonly("user", &FlagReport::user)
        .def_readonly("rules", &FlagReport::rules)
        .def_readonly("avg_ird", &FlagReport::avg_ird)
        .def_readonly("avg_resp_per_video", &FlagReport::avg_resp_per_video)
        .def_readonly("out_in_ratio", &FlagReport::out_in_ratio)
        .def_readonly("infinite_ratio", &FlagReport::infinite_ratio)
        .def_readonly("user_rank", &FlagReport::user_rank)
        .def_readonly("powerlaw_residual", &FlagReport::powerlaw_residual)
        .def_property_readonly("flagged", &FlagReport::flagged);
    m.def("rule_names", &rule_names);
    m.def("flag_ird", &flag_ird, py::arg("profiles"), py::arg("ird_max") = 3.0,
          py::arg("resp_min") = 10.0);
    m.def("flag_inout", &flag_inout, py::arg("degrees"), py::arg("ratio_min"),
          py::arg("min_out"));
    m.def("flag_powerlaw_outliers", &flag_powerlaw_outliers, py::arg("response_counts"),
          py::arg("fit"), py::arg("top_k") = 3, py::arg("spread_mult") = 2.0);
    m.def("merge_flag_reports", &merge_flag_reports, py::arg("parts"),
          py::arg("keep_clean") = false);

    // Synthetic generation
    py::class_<WeibullParams>(m, "WeibullParams")
        .def(py::init<>())
        .def_readwrite("shape", &WeibullParams::shape)
        .def_readwrite("scale", &WeibullParams::scale);

    py::class_<SpammerSpec>(m, "SpammerSpec")
        .def(py::init<>())
        .def_readwrite("count", &SpammerSpec::count)
        .def_readwrite("videos_per_spammer", &SpammerSpec::videos_per_spammer)
        .def_readwrite("responses_per_video_min", &SpammerSpec::responses_per_video_min)
        .def_readwrite("responses_per_video_max", &SpammerSpec::responses_per_video_max)
        .def_readwrite("interleave", &SpammerSpec::interleave);

    py::class_<VriMix>(m, "VriMix")
        .def(py::init<>())
        .def_readwrite("negative_fraction", &VriMix::negative_fraction)
        .def_readwrite("decay_scale_s", &VriMix::decay_scale_s);

    py::class_<GenConfig>(m, "GenConfig")
        .def(py::init<>())
        .def_readwrite("seed", &GenConfig::seed)
        .def_readwrite("n_users", &GenConfig::n_users)
        .def_readwrite("n_videos", &GenConfig::n_videos)
        .def_readwrite("response_exponent", &GenConfig::response_exponent)
        .def_readwrite("max_responses_per_user", &GenConfig::max_responses_per_user)
        .def_readwrite("parent_duration", &GenConfig::parent_duration)
        .def_readwrite("response_duration", &GenConfig::response_duration)
        .def_readwrite("self_response_rate", &GenConfig::self_response_rate)
        .def_readwrite("locality_rate", &GenConfig::locality_rate)
        .def_readwrite("countries", &GenConfig::countries)
        .def_readwrite("spammers", &GenConfig::spammers)
        .def_readwrite("vri", &GenConfig::vri);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("spammer_users", &GroundTruth::spammer_users)
        .def_readonly("responses_per_user", &GroundTruth::responses_per_user)
        .def_readonly("responses_per_video", &GroundTruth::responses_per_video)
        .def_readonly("videos", &GroundTruth::videos)
        .def_readonly("responses", &GroundTruth::responses)
        .def_readonly("self_responses", &GroundTruth::self_responses)
        .def_readonly("negative_vri", &GroundTruth::negative_vri)
        .def_readonly("local_responses", &GroundTruth::local_responses)
        .def_readonly("total_views", &GroundTruth::total_views);
    m.def("generate", &generate);
    m.def("ground_truth_json", &ground_truth_json);

    py::class_<RewireResult>(m, "RewireResult")
        .def_readonly("graph", &RewireResult::graph)
        .def_readonly("applied", &RewireResult::applied)
        .def_readonly("skipped", &RewireResult::skipped);
    m.def("configuration_model_rewire", &configuration_model_rewire, py::arg("graph"),
          py::arg("seed"), py::arg("swaps"));

    // Crawl simulation
    py::class_<UserInfo>(m, "UserInfo")
        .def_readonly("user", &UserInfo::user)
        .def_readonly("exists", &UserInfo::exists)
        .def_readonly("is_responded", &UserInfo::is_responded)
        .def_readonly("is_responsive", &UserInfo::is_responsive);

    py::class_<DataSource>(m, "DataSource");
    py::class_<SyntheticDataSource, DataSource>(m, "SyntheticDataSource")
        .def(py::init<const InteractionTrace&>(), py::keep_alive<1, 2>())
        .def(py::init<const InteractionTrace&, const std::vector<std::string>&,
                      std::uint64_t>(),
             py::keep_alive<1, 2>())
        .def("get_user_info", &SyntheticDataSource::get_user_info)
        .def("get_user_videos", &SyntheticDataSource::get_user_videos)
        .def("get_video_responses", &SyntheticDataSource::get_video_responses)
        .def("get_responded_users", &SyntheticDataSource::get_responded_users)
        .def("tag_search", &SyntheticDataSource::tag_search);

    py::class_<CrawlState>(m, "CrawlState")
        .def_readonly("processed", &CrawlState::processed)
        .def_readonly("collected_videos", &CrawlState::collected_videos)
        .def_readonly("collected_responses", &CrawlState::collected_responses)
        .def_readonly("queries", &CrawlState::queries);

    py::class_<CrawlResult>(m, "CrawlResult")
        .def_readonly("graph", &CrawlResult::graph)
        .def_readonly("state", &CrawlResult::state);
    m.def("crawl", &crawl);
    m.def("random_seeds", &random_seeds, py::arg("source"), py::arg("dictionary"),
          py::arg("count"), py::arg("seed"));

    py::class_<SamplingReport>(m, "SamplingReport")
        .def_readonly("property1", &SamplingReport::property1)
        .def_readonly("violations", &SamplingReport::violations)
        .def_readonly("coverage", &SamplingReport::coverage)
        .def_readonly("sample_users", &SamplingReport::sample_users)
        .def_readonly("truth_users", &SamplingReport::truth_users)
        .def_readonly("top_k_capture", &SamplingReport::top_k_capture);
    m.def("verify_sampling", &verify_sampling);
    m.def("sampling_report_json", &sampling_report_json);
}

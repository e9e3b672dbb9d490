#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "respgraph/pipeline.hpp"

namespace {

using respgraph::GenConfig;
using respgraph::RunConfig;

void add_trace_options(CLI::App* cmd, RunConfig& cfg, std::string& format) {
    cmd->add_option("--trace", cfg.trace_path, "Trace path (csv: directory, jsonl: file)")
        ->required();
    cmd->add_option("--format", format, "Trace format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
}

void add_out_option(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--out", cfg.out_dir,
                    "Output directory (falls back to $RESPGRAPH_OUT)");
}

void add_threshold_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--ird-max", cfg.ird_max, "IRD rule: flag when avg IRD < this")
        ->capture_default_str();
    cmd->add_option("--resp-min", cfg.resp_min,
                    "IRD rule: flag when avg responses per video > this")
        ->capture_default_str();
    cmd->add_option("--ratio-min", cfg.ratio_min, "Out/in ratio rule threshold")
        ->capture_default_str();
    cmd->add_option("--min-out", cfg.min_out, "Out/in ratio rule: minimum responses posted")
        ->capture_default_str();
    cmd->add_option("--damping", cfg.damping, "PageRank damping factor")
        ->capture_default_str();
    cmd->add_option("--top-k", cfg.outlier_top_k, "Power-law outlier candidates")
        ->capture_default_str();
    cmd->add_option("--spread-mult", cfg.outlier_spread_mult,
                    "Power-law outlier threshold multiplier")
        ->capture_default_str();
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "Random seed for sampled computations")
        ->capture_default_str();
    cmd->add_option("--distance-sample", cfg.distance_sample,
                    "BFS sources for average distance estimation")
        ->capture_default_str();
    cmd->add_flag("--paper-mode", cfg.paper_mode,
                  "Log-log regression fits and the published threshold defaults");
}

void resolve_out_dir(RunConfig& cfg) {
    if (!cfg.out_dir.empty()) return;
    if (const char* env = std::getenv("RESPGRAPH_OUT")) {
        cfg.out_dir = env;
        return;
    }
    throw respgraph::ConfigError("no output directory: pass --out or set RESPGRAPH_OUT");
}

respgraph::InteractionTrace load(const RunConfig& cfg, const std::string& format) {
    const auto fmt =
        format == "jsonl" ? respgraph::TraceFormat::jsonl : respgraph::TraceFormat::csv;
    return respgraph::load_trace(cfg.trace_path, fmt);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Video-response social graph analytics"};
    app.require_subcommand(1);

    RunConfig cfg;
    GenConfig gen;
    std::string format = "csv";
    std::int32_t spam_count = 0;

    auto* summary = app.add_subcommand("summary", "Dataset summary counts");
    add_trace_options(summary, cfg, format);
    add_out_option(summary, cfg);

    auto* graph_cmd = app.add_subcommand("graph", "Graph structure: degrees, components, distance");
    add_trace_options(graph_cmd, cfg, format);
    add_out_option(graph_cmd, cfg);
    add_common_options(graph_cmd, cfg);

    auto* metrics = app.add_subcommand("metrics", "Clustering, assortativity, degree ratios");
    add_trace_options(metrics, cfg, format);
    add_out_option(metrics, cfg);

    auto* fit = app.add_subcommand("fit", "Distribution fits and correlations");
    add_trace_options(fit, cfg, format);
    add_out_option(fit, cfg);
    add_common_options(fit, cfg);

    auto* sequences = app.add_subcommand("sequences", "Per-video interaction analytics");
    add_trace_options(sequences, cfg, format);
    add_out_option(sequences, cfg);

    auto* detect = app.add_subcommand("detect", "UserRank and anti-social flagging");
    add_trace_options(detect, cfg, format);
    add_out_option(detect, cfg);
    add_threshold_options(detect, cfg);
    add_common_options(detect, cfg);

    auto* crawl = app.add_subcommand("crawlsim", "Sampling crawler against the trace as ground truth");
    add_trace_options(crawl, cfg, format);
    add_out_option(crawl, cfg);

    auto* generate = app.add_subcommand("generate", "Synthetic trace with ground truth");
    add_out_option(generate, cfg);
    generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    generate->add_option("--users", gen.n_users, "Normal users")->capture_default_str();
    generate->add_option("--videos", gen.n_videos, "Seed videos")->capture_default_str();
    generate->add_option("--exponent", gen.response_exponent, "Responses-per-user exponent")
        ->capture_default_str();
    generate->add_option("--max-responses", gen.max_responses_per_user,
                         "Power-law truncation")
        ->capture_default_str();
    generate->add_option("--self-rate", gen.self_response_rate, "Self-response fraction")
        ->capture_default_str();
    generate->add_option("--locality", gen.locality_rate, "Same-country targeting rate")
        ->capture_default_str();
    generate->add_option("--neg-vri", gen.vri.negative_fraction,
                         "Fraction of responses predating their parent")
        ->capture_default_str();
    generate->add_option("--parent-shape", gen.parent_duration.shape, "Parent duration shape")
        ->capture_default_str();
    generate->add_option("--parent-scale", gen.parent_duration.scale, "Parent duration scale")
        ->capture_default_str();
    generate->add_option("--response-shape", gen.response_duration.shape,
                         "Response duration shape")
        ->capture_default_str();
    generate->add_option("--response-scale", gen.response_duration.scale,
                         "Response duration scale")
        ->capture_default_str();
    generate->add_option("--spammers", spam_count, "Planted spammers")->capture_default_str();
    generate->add_option("--spam-videos", gen.spammers.videos_per_spammer,
                         "Videos each spammer bursts at")
        ->capture_default_str();
    generate->add_option("--spam-min", gen.spammers.responses_per_video_min,
                         "Minimum burst length")
        ->capture_default_str();
    generate->add_option("--spam-max", gen.spammers.responses_per_video_max,
                         "Maximum burst length")
        ->capture_default_str();
    generate->add_flag("--interleave", gen.spammers.interleave,
                       "Scatter spam bursts through normal traffic");

    auto* all = app.add_subcommand("all", "Run every stage and write a manifest");
    add_trace_options(all, cfg, format);
    add_out_option(all, cfg);
    add_threshold_options(all, cfg);
    add_common_options(all, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        resolve_out_dir(cfg);
        std::vector<std::string> files;
        if (summary->parsed()) {
            files = respgraph::run_summary(load(cfg, format), cfg);
        } else if (graph_cmd->parsed()) {
            files = respgraph::run_graph(load(cfg, format), cfg);
        } else if (metrics->parsed()) {
            files = respgraph::run_metrics(load(cfg, format), cfg);
        } else if (fit->parsed()) {
            files = respgraph::run_fit(load(cfg, format), cfg);
        } else if (sequences->parsed()) {
            files = respgraph::run_sequences(load(cfg, format), cfg);
        } else if (detect->parsed()) {
            files = respgraph::run_detect(load(cfg, format), cfg);
        } else if (crawl->parsed()) {
            files = respgraph::run_crawlsim(load(cfg, format), cfg);
        } else if (generate->parsed()) {
            gen.spammers.count = spam_count;
            files = respgraph::run_generate(gen, cfg);
        } else if (all->parsed()) {
            files = respgraph::run_all(load(cfg, format), cfg);
        }
        for (const auto& name : files) {
            std::cout << (cfg.out_dir / name).string() << '\n';
        }
        return 0;
    } catch (const respgraph::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const respgraph::IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const respgraph::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "respgraph/synthgen.hpp"
#include "respgraph/trace.hpp"

namespace respgraph {

/// Everything a pipeline run needs beyond the trace itself. Field defaults
/// are the library defaults; the CLI maps every one to a flag.
struct RunConfig {
    std::filesystem::path trace_path;
    TraceFormat format = TraceFormat::csv;
    std::filesystem::path out_dir;

    double ird_max = 3.0;
    double resp_min = 10.0;
    double ratio_min = 10.0;
    std::int64_t min_out = 20;

    bool paper_mode = false; // log-log regression fits + paper thresholds
    double damping = 0.85;
    std::uint64_t seed = 1;
    std::size_t distance_sample = 64;
    std::size_t outlier_top_k = 3;
    double outlier_spread_mult = 2.0;
};

/// Writes content to path atomically (temp file + rename); creates parent
/// directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit digest, hex encoded; used for the run manifest checksums.
std::string fnv1a64_hex(const std::string& bytes);

/// Stable shortest float formatting used in every CSV/JSON artifact.
std::string format_double(double value);

// Pipeline stages. Each writes its artifact files under cfg.out_dir and
// returns the list of file names written (relative to out_dir).
std::vector<std::string> run_summary(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_graph(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_metrics(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_fit(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_sequences(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_detect(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_crawlsim(const InteractionTrace& trace, const RunConfig& cfg);
std::vector<std::string> run_generate(const GenConfig& gen, const RunConfig& cfg);

/// Runs every stage and writes run.json listing config and per-file
/// checksums. Returns all files written (including the manifest).
std::vector<std::string> run_all(const InteractionTrace& trace, const RunConfig& cfg);

} // namespace respgraph

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mctslab/eval/scores.hpp"
#include "mctslab/search/engine.hpp"

namespace mctslab::harness {

/// Invalid experiment configuration; CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Result files do not share one task grid.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// An experiment was interrupted; partial rows were saved. Exit code 3.
struct PartialResults : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AgentSpec {
    std::string label;
    search::SearchConfig config;
};

struct TelemetryFlags {
    bool abstraction_rate = false;
    bool runtime = true;
    bool per_move_log = false;
};

/// Batch experiment: every (agent, episode) pair runs exactly once with
/// seed = base_seed + episode_index. Parsed from a strict JSON file where
/// unknown keys are hard errors.
struct ExperimentConfig {
    std::string domain_name;
    nlohmann::json domain_params = nlohmann::json::object();
    std::vector<AgentSpec> agents;
    int episodes = 1;
    std::uint64_t base_seed = 0;
    std::optional<search::SearchConfig> opponent;
    TelemetryFlags telemetry;
    std::string output_path = "results.csv";
    int threads = 0;  // 0 = all cores; MCTS_LAB_THREADS overrides

    void validate() const;
    static ExperimentConfig parse(const nlohmann::json& j);
    static ExperimentConfig parse_file(const std::string& path);
};

inline constexpr int kCsvSchemaVersion = 1;

struct ResultRow {
    std::string agent_label;
    std::string domain;
    int iterations = 0;
    int episode_index = 0;
    std::uint64_t seed = 0;
    double episode_return = 0.0;
    std::optional<double> decision_time_ms_mean;
    std::optional<double> abstraction_rate_mean;
};

std::string result_rows_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_result_csv(const std::string& path);

/// Runs the whole grid and writes the CSV atomically (tmp file + rename).
/// On interruption the completed rows are saved with a ".partial" suffix
/// and PartialResults is thrown. Returns the written path.
std::string run_experiment(const ExperimentConfig& config);

/// Worker count after applying the MCTS_LAB_THREADS override.
int effective_threads(int requested);

struct RuntimeReport {
    std::vector<std::string> labels;
    std::vector<double> mean_decision_ms;   // per agent
    std::vector<double> overhead_vs_first;  // ratio to agent 0
};

/// Per-agent mean decision times, single-threaded execution forced.
RuntimeReport measure_runtime(const ExperimentConfig& config);

/// Builds the agents x (domain, iterations) performance matrix from
/// result files and delegates to the score functions. ".partial" files
/// are rejected.
eval::PerfMatrix build_perf_matrix(const std::vector<std::string>& result_files);
eval::ScoreReport score_results(const std::vector<std::string>& result_files,
                                eval::ScoreKind kind);

}  // namespace mctslab::harness

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mctslab/domains/registry.hpp"
#include "mctslab/harness/experiment.hpp"

namespace mctslab::harness {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t label_hash(const std::string& label) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr const char* kCsvHeader =
    "schema_version,agent_label,domain,iterations,episode_index,seed,return,"
    "decision_time_ms_mean,abstraction_rate_mean";

}  // namespace

int effective_threads(int requested) {
    if (const char* env = std::getenv("MCTS_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    if (requested >= 1)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string result_rows_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << kCsvSchemaVersion << "," << r.agent_label << "," << r.domain << ","
            << r.iterations << "," << r.episode_index << "," << r.seed << ","
            << format_double(r.episode_return) << ",";
        if (r.decision_time_ms_mean)
            out << format_double(*r.decision_time_ms_mean);
        out << ",";
        if (r.abstraction_rate_mean)
            out << format_double(*r.abstraction_rate_mean);
        out << "\n";
    }
    return out.str();
}

std::vector<ResultRow> parse_result_csv(const std::string& path) {
    if (path.size() >= 8 && path.substr(path.size() - 8) == ".partial")
        throw PartialResults("refusing to read partial results file " + path);
    std::ifstream in(path);
    if (!in.good())
        throw ConfigError("cannot open results file " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ConfigError(path + ": unexpected results header");
    std::vector<ResultRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ss(line);
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        while (fields.size() < 9)
            fields.push_back("");
        if (fields.size() != 9 || std::stoi(fields[0]) != kCsvSchemaVersion)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        ResultRow r;
        r.agent_label = fields[1];
        r.domain = fields[2];
        r.iterations = std::stoi(fields[3]);
        r.episode_index = std::stoi(fields[4]);
        r.seed = std::stoull(fields[5]);
        r.episode_return = std::stod(fields[6]);
        if (!fields[7].empty())
            r.decision_time_ms_mean = std::stod(fields[7]);
        if (!fields[8].empty())
            r.abstraction_rate_mean = std::stod(fields[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::vector<ResultRow> run_rows(const ExperimentConfig& config, int threads,
                                std::vector<std::string>* move_log,
                                std::vector<ResultRow>* partial_out = nullptr) {
    config.validate();
    auto mdp = domains::build_domain(config.domain_name, config.domain_params);
    const bool two_player = mdp->descriptor().num_players == 2;
    if (two_player && !config.opponent)
        throw ConfigError("config: two-player domain requires an opponent");
    if (!two_player && config.opponent)
        throw ConfigError("config: opponent given for a single-player domain");

    struct Job {
        std::size_t agent;
        int episode;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < config.agents.size(); ++a)
        for (int e = 0; e < config.episodes; ++e)
            jobs.push_back({a, e});

    std::vector<ResultRow> rows(jobs.size());
    std::vector<std::string> logs(move_log ? jobs.size() : 0);
    std::vector<char> done(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load())
                return;
            const auto& job = jobs[i];
            const auto& agent = config.agents[job.agent];
            try {
                search::EpisodeOptions options;
                options.measure_abstraction_rate = config.telemetry.abstraction_rate;
                options.stream_id = label_hash(agent.label);
                options.agent_player = two_player ? job.episode % 2 : 0;
                options.record_moves = move_log != nullptr;
                const std::uint64_t seed =
                    config.base_seed + static_cast<std::uint64_t>(job.episode);
                const auto result = search::play_episode(
                    *mdp, agent.config,
                    two_player ? config.opponent : std::optional<search::SearchConfig>{},
                    seed, options);
                ResultRow row;
                row.agent_label = agent.label;
                row.domain = config.domain_name;
                row.iterations = agent.config.iterations;
                row.episode_index = job.episode;
                row.seed = seed;
                row.episode_return = result.episode_return;
                if (config.telemetry.runtime)
                    row.decision_time_ms_mean = result.decision_time_ms_mean;
                row.abstraction_rate_mean = result.abstraction_rate_mean;
                rows[i] = std::move(row);
                if (move_log) {
                    std::ostringstream line;
                    line << agent.label << "," << job.episode;
                    for (ActionIndex a : result.actions)
                        line << "," << a;
                    logs[i] = line.str();
                }
                done[i] = 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error = e.what();
                failed.store(true);
                return;
            }
        }
    };

    const int n_threads = std::min<int>(threads, static_cast<int>(jobs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    if (failed.load()) {
        if (partial_out) {
            partial_out->clear();
            for (std::size_t i = 0; i < jobs.size(); ++i)
                if (done[i])
                    partial_out->push_back(rows[i]);
        }
        throw PartialResults("experiment interrupted: " + error);
    }
    if (move_log)
        *move_log = std::move(logs);
    return rows;
}

void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good())
            throw ConfigError("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string run_experiment(const ExperimentConfig& config) {
    std::vector<std::string> move_log;
    std::vector<ResultRow> rows;
    std::vector<ResultRow> partial;
    try {
        rows = run_rows(config, effective_threads(config.threads),
                        config.telemetry.per_move_log ? &move_log : nullptr, &partial);
    } catch (const PartialResults&) {
        // keep whatever finished, under the marker suffix
        write_file(config.output_path + ".partial", result_rows_csv(partial));
        throw;
    }
    write_file(config.output_path, result_rows_csv(rows));
    if (config.telemetry.per_move_log) {
        std::ostringstream log;
        log << "agent_label,episode_index,actions...\n";
        for (const auto& line : move_log)
            log << line << "\n";
        write_file(config.output_path + ".moves.log", log.str());
    }
    return config.output_path;
}

RuntimeReport measure_runtime(const ExperimentConfig& config) {
    ExperimentConfig timing = config;
    timing.telemetry.runtime = true;
    timing.telemetry.abstraction_rate = false;
    timing.telemetry.per_move_log = false;
    auto rows = run_rows(timing, 1, nullptr);  // timing validity: one thread

    RuntimeReport report;
    for (const auto& agent : config.agents) {
        double sum = 0.0;
        int count = 0;
        for (const auto& row : rows) {
            if (row.agent_label == agent.label && row.decision_time_ms_mean) {
                sum += *row.decision_time_ms_mean;
                ++count;
            }
        }
        report.labels.push_back(agent.label);
        report.mean_decision_ms.push_back(count ? sum / count : 0.0);
    }
    for (double ms : report.mean_decision_ms)
        report.overhead_vs_first.push_back(
            report.mean_decision_ms[0] > 0.0 ? ms / report.mean_decision_ms[0] : 0.0);
    return report;
}

eval::PerfMatrix build_perf_matrix(const std::vector<std::string>& result_files) {
    // agent -> task -> returns
    std::map<std::string, std::map<std::string, std::vector<double>>> by_agent;
    for (const auto& path : result_files) {
        for (const auto& row : parse_result_csv(path)) {
            const std::string task = row.domain + "@" + std::to_string(row.iterations);
            by_agent[row.agent_label][task].push_back(row.episode_return);
        }
    }
    if (by_agent.size() < 2)
        throw eval::TooFewAgents("score: need results for at least 2 agents");

    const auto& reference = by_agent.begin()->second;
    eval::PerfMatrix perf;
    for (const auto& [task, returns] : reference) {
        (void)returns;
        perf.tasks.push_back(task);
    }
    for (const auto& [agent, tasks] : by_agent) {
        if (tasks.size() != reference.size())
            throw GridMismatch("score: agent '" + agent + "' covers a different task grid");
        perf.agents.push_back(agent);
        std::vector<double> row;
        for (const auto& task : perf.tasks) {
            auto it = tasks.find(task);
            if (it == tasks.end())
                throw GridMismatch("score: agent '" + agent + "' missing task " + task);
            double sum = 0.0;
            for (double v : it->second)
                sum += v;
            row.push_back(sum / static_cast<double>(it->second.size()));
        }
        perf.perf.push_back(std::move(row));
    }
    return perf;
}

eval::ScoreReport score_results(const std::vector<std::string>& result_files,
                                eval::ScoreKind kind) {
    const auto perf = build_perf_matrix(result_files);
    return kind == eval::ScoreKind::pairings ? eval::pairings_scores(perf)
                                             : eval::relative_improvement_scores(perf);
}

}  // namespace mctslab::harness

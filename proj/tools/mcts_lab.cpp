#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mctslab/domains/navigation.hpp"
#include "mctslab/domains/registry.hpp"
#include "mctslab/harness/experiment.hpp"
#include "mctslab/oracle/fixed_point.hpp"
#include "mctslab/oracle/ground_model.hpp"
#include "mctslab/oracle/pabs.hpp"
#include "mctslab/oracle/value_iteration.hpp"

using namespace mctslab;

namespace {

oracle::LayeredMdp load_layered(const std::string& domain, const std::string& layered_file,
                                const std::string& params_json, int horizon) {
    if (!layered_file.empty()) {
        std::ifstream in(layered_file);
        if (!in.good())
            throw harness::ConfigError("cannot open " + layered_file);
        return oracle::LayeredMdp::parse(in);
    }
    nlohmann::json params = nlohmann::json::object();
    if (!params_json.empty())
        params = nlohmann::json::parse(params_json);
    auto mdp = domains::build_domain(domain, params);
    const int h = horizon > 0 ? horizon : mdp->descriptor().horizon;
    return oracle::unroll_reachable(*mdp, h).mdp;
}

int run_command(const std::string& config_path) {
    auto config = harness::ExperimentConfig::parse_file(config_path);
    const auto path = harness::run_experiment(config);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int score_command(const std::string& kind, const std::vector<std::string>& files,
                  const std::string& out_prefix) {
    eval::ScoreKind score_kind;
    if (kind == "pairings")
        score_kind = eval::ScoreKind::pairings;
    else if (kind == "relative")
        score_kind = eval::ScoreKind::relative;
    else
        throw harness::ConfigError("score kind must be 'pairings' or 'relative'");
    const auto report = harness::score_results(files, score_kind);
    {
        std::ofstream out(out_prefix + "_matrix.csv");
        out << report.matrix_csv();
    }
    {
        std::ofstream out(out_prefix + "_scores.json");
        out << report.scores_json();
    }
    for (std::size_t i = 0; i < report.agents.size(); ++i)
        std::cout << report.agents[i] << " " << report.scores[i] << "\n";
    std::cout << "wrote " << out_prefix << "_matrix.csv and " << out_prefix
              << "_scores.json\n";
    return 0;
}

int bench_command(const std::string& config_path) {
    auto config = harness::ExperimentConfig::parse_file(config_path);
    const auto report = harness::measure_runtime(config);
    std::printf("%-24s %14s %10s\n", "agent", "mean ms/move", "vs first");
    for (std::size_t i = 0; i < report.labels.size(); ++i)
        std::printf("%-24s %14.3f %10.3f\n", report.labels[i].c_str(),
                    report.mean_decision_ms[i], report.overhead_vs_first[i]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MCTS abstraction lab: batch experiments, scores, exact oracles"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config JSON")->required();

    std::string score_kind;
    std::vector<std::string> score_files;
    std::string score_out = "scores";
    auto* score = app.add_subcommand("score", "score result files");
    score->add_option("kind", score_kind, "pairings | relative")->required();
    score->add_option("files", score_files, "result CSV files")->required();
    score->add_option("--out", score_out, "output prefix");

    std::string bench_config;
    auto* bench = app.add_subcommand("bench", "measure per-decision runtimes");
    bench->add_option("config", bench_config, "experiment config JSON")->required();

    auto* orc = app.add_subcommand("oracle", "exact reference computations");
    orc->require_subcommand(1);

    std::string domain = "navigation_fig2";
    std::string layered_file;
    std::string params_json;
    int horizon = 0;
    auto* vi = orc->add_subcommand("value-iteration", "exact values of an unrolled domain");
    vi->add_option("--domain", domain, "domain name");
    vi->add_option("--params", params_json, "domain params JSON");
    vi->add_option("--layered", layered_file, "layered MDP text file");
    vi->add_option("--horizon", horizon, "unroll horizon (default: domain horizon)");

    std::string fp_kind = "ipa";
    double eps_a = 0.0, eps_t = 0.0, alpha = 0.0;
    auto* fp = orc->add_subcommand("fixed-point", "exact abstraction partitions");
    fp->add_option("--domain", domain, "domain name");
    fp->add_option("--params", params_json, "domain params JSON");
    fp->add_option("--layered", layered_file, "layered MDP text file");
    fp->add_option("--horizon", horizon, "unroll horizon");
    fp->add_option("--kind", fp_kind, "asap | ipa");
    fp->add_option("--eps-a", eps_a, "reward tolerance (asap)");
    fp->add_option("--eps-t", eps_t, "transition tolerance (asap)");
    fp->add_option("--alpha", alpha, "successor pruning cutoff (asap)");

    int pn = 2, pl = 2, pm = 2;
    std::uint64_t mc_trials = 0;
    std::uint64_t mc_seed = 1;
    auto* pabs = orc->add_subcommand("p-abs", "state-abstraction probability");
    pabs->add_option("n", pn, "actions of the first state")->required();
    pabs->add_option("l", pl, "actions of the second state")->required();
    pabs->add_option("m", pm, "abstract node pool size")->required();
    pabs->add_option("--mc", mc_trials, "verify with this many Monte Carlo trials");
    pabs->add_option("--seed", mc_seed, "Monte Carlo seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return run_command(config_path);
        if (*score)
            return score_command(score_kind, score_files, score_out);
        if (*bench)
            return bench_command(bench_config);
        if (*vi) {
            auto layered = load_layered(domain, layered_file, params_json, horizon);
            auto tables = oracle::value_iteration(layered);
            std::printf("layers: %zu\n", layered.num_layers());
            for (std::size_t s = 0; s < layered.layers[0].size(); ++s)
                std::printf("V*(%s) = %.12f\n", layered.layers[0][s].name.c_str(),
                            tables.value(0, static_cast<int>(s)));
            return 0;
        }
        if (*fp) {
            auto layered = load_layered(domain, layered_file, params_json, horizon);
            oracle::FixedPointResult result;
            if (fp_kind == "asap") {
                result = oracle::exact_asap_fixed_point(layered, eps_a, eps_t, alpha);
            } else if (fp_kind == "ipa") {
                auto tables = oracle::value_iteration(layered);
                result = oracle::exact_ipa_fixed_point(layered, tables);
            } else {
                throw harness::ConfigError("fixed-point kind must be 'asap' or 'ipa'");
            }
            for (std::size_t d = 0; d < layered.num_layers(); ++d) {
                std::map<int, std::vector<std::string>> blocks;
                for (std::size_t s = 0; s < layered.layers[d].size(); ++s)
                    blocks[result.states.of_state(static_cast<int>(d), static_cast<int>(s))]
                        .push_back(layered.layers[d][s].name);
                std::printf("layer %zu: %zu states, %zu blocks\n", d,
                            layered.layers[d].size(), blocks.size());
                for (const auto& [id, names] : blocks) {
                    if (names.size() < 2)
                        continue;
                    std::printf("  block %d:", id);
                    for (const auto& name : names)
                        std::printf(" %s", name.c_str());
                    std::printf("\n");
                }
            }
            return 0;
        }
        if (*pabs) {
            auto result = oracle::p_abs_closed_form(pn, pl, pm);
            std::printf("p_abs(%d,%d,%d) = %.12g (bound %.12g)\n", pn, pl, pm,
                        result.probability, result.upper_bound);
            if (mc_trials > 0) {
                Rng rng(mc_seed);
                auto mc = oracle::p_abs_monte_carlo(pn, pl, pm, mc_trials, rng);
                std::printf("monte carlo: %.12g +- %.12g\n", mc.estimate, mc.std_error);
            }
            return 0;
        }
    } catch (const harness::PartialResults& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

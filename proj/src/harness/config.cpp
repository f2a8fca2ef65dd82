#include <fstream>
#include <set>

#include "mctslab/harness/experiment.hpp"

namespace mctslab::harness {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double parse_inf_or_number(const json& v, const std::string& where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf")
            return std::numeric_limits<double>::infinity();
        throw ConfigError(where + ": expected a number or \"inf\"");
    }
    if (!v.is_number())
        throw ConfigError(where + ": expected a number or \"inf\"");
    return v.get<double>();
}

search::AbstractionPolicy parse_policy(const json& j, const std::string& where) {
    require_keys(j, where,
                 {"variant", "eps_a", "eps_t", "alpha", "lambda_p", "p_move", "p_c",
                  "n_matches", "n_min", "lambda_p_scaled", "propagate_bypasses_recency"});
    search::AbstractionPolicy policy;
    if (!j.count("variant"))
        throw ConfigError(where + ": missing 'variant'");
    try {
        policy.variant = search::variant_from_string(j.at("variant").get<std::string>());
    } catch (const InvalidSpec& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (j.count("eps_a"))
        policy.eps_a = parse_inf_or_number(j.at("eps_a"), where + ".eps_a");
    if (j.count("eps_t"))
        policy.eps_t = j.at("eps_t").get<double>();
    if (j.count("alpha"))
        policy.alpha = j.at("alpha").get<double>();
    if (j.count("lambda_p"))
        policy.lambda_p = parse_inf_or_number(j.at("lambda_p"), where + ".lambda_p");
    if (j.count("p_move"))
        policy.p_move = j.at("p_move").get<double>();
    if (j.count("p_c"))
        policy.p_c = j.at("p_c").get<double>();
    if (j.count("n_matches"))
        policy.n_matches = j.at("n_matches").get<int>();
    if (j.count("n_min"))
        policy.n_min = j.at("n_min").get<int>();
    if (j.count("lambda_p_scaled"))
        policy.lambda_p_scaled = j.at("lambda_p_scaled").get<bool>();
    if (j.count("propagate_bypasses_recency"))
        policy.propagate_bypasses_recency = j.at("propagate_bypasses_recency").get<bool>();
    try {
        policy.validate();
    } catch (const InvalidSpec& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return policy;
}

search::SearchConfig parse_search(const json& j, const std::string& where, bool with_label) {
    std::set<std::string> allowed{"iterations",     "exploration_c", "sigma_fallback",
                                  "recency_k",      "abstraction"};
    if (with_label)
        allowed.insert("label");
    require_keys(j, where, allowed);
    search::SearchConfig cfg;
    if (!j.count("iterations"))
        throw ConfigError(where + ": missing 'iterations'");
    cfg.iterations = j.at("iterations").get<int>();
    if (j.count("exploration_c"))
        cfg.exploration_c = j.at("exploration_c").get<double>();
    if (j.count("sigma_fallback"))
        cfg.sigma_fallback = j.at("sigma_fallback").get<double>();
    if (j.count("recency_k"))
        cfg.recency_k = j.at("recency_k").get<int>();
    if (j.count("abstraction"))
        cfg.abstraction = parse_policy(j.at("abstraction"), where + ".abstraction");
    try {
        cfg.validate();
    } catch (const InvalidSpec& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (domain_name.empty())
        throw ConfigError("config: missing domain name");
    if (episodes < 1)
        throw ConfigError("config: episodes must be >= 1");
    if (agents.empty())
        throw ConfigError("config: at least one agent required");
    std::set<std::string> labels;
    for (const auto& a : agents) {
        if (a.label.empty())
            throw ConfigError("config: empty agent label");
        if (!labels.insert(a.label).second)
            throw ConfigError("config: duplicate agent label '" + a.label + "'");
    }
    if (output_path.empty())
        throw ConfigError("config: empty output path");
    if (threads < 0)
        throw ConfigError("config: threads must be >= 0");
}

ExperimentConfig ExperimentConfig::parse(const json& j) {
    require_keys(j, "config",
                 {"schema_version", "domain", "episodes", "base_seed", "agents", "opponent",
                  "telemetry", "output", "threads"});
    ExperimentConfig config;
    if (j.count("schema_version") && j.at("schema_version").get<int>() != kCsvSchemaVersion)
        throw ConfigError("config: unsupported schema_version");
    if (!j.count("domain"))
        throw ConfigError("config: missing 'domain'");
    require_keys(j.at("domain"), "config.domain", {"name", "params"});
    config.domain_name = j.at("domain").at("name").get<std::string>();
    if (j.at("domain").count("params"))
        config.domain_params = j.at("domain").at("params");
    if (!j.count("episodes"))
        throw ConfigError("config: missing 'episodes'");
    config.episodes = j.at("episodes").get<int>();
    if (j.count("base_seed"))
        config.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (!j.count("agents") || !j.at("agents").is_array() || j.at("agents").empty())
        throw ConfigError("config: 'agents' must be a non-empty array");
    int idx = 0;
    for (const auto& a : j.at("agents")) {
        const std::string where = "config.agents[" + std::to_string(idx) + "]";
        if (!a.count("label"))
            throw ConfigError(where + ": missing 'label'");
        AgentSpec spec;
        spec.label = a.at("label").get<std::string>();
        spec.config = parse_search(a, where, true);
        config.agents.push_back(std::move(spec));
        ++idx;
    }
    if (j.count("opponent"))
        config.opponent = parse_search(j.at("opponent"), "config.opponent", false);
    if (j.count("telemetry")) {
        require_keys(j.at("telemetry"), "config.telemetry",
                     {"abstraction_rate", "runtime", "per_move_log"});
        const auto& t = j.at("telemetry");
        if (t.count("abstraction_rate"))
            config.telemetry.abstraction_rate = t.at("abstraction_rate").get<bool>();
        if (t.count("runtime"))
            config.telemetry.runtime = t.at("runtime").get<bool>();
        if (t.count("per_move_log"))
            config.telemetry.per_move_log = t.at("per_move_log").get<bool>();
    }
    if (j.count("output"))
        config.output_path = j.at("output").get<std::string>();
    if (j.count("threads"))
        config.threads = j.at("threads").get<int>();
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good())
        throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse(j);
}

}  // namespace mctslab::harness

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mctslab::eval {

struct TooFewTasks : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooFewAgents : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Agents x tasks table of mean returns.
struct PerfMatrix {
    std::vector<std::string> agents;
    std::vector<std::string> tasks;
    std::vector<std::vector<double>> perf;  // perf[agent][task]

    void validate() const;
};

enum class ScoreKind { pairings, relative };

/// Antisymmetric cross-agent matrix and the per-agent row means.
struct ScoreReport {
    ScoreKind kind = ScoreKind::pairings;
    std::vector<std::string> agents;
    std::vector<std::vector<double>> matrix;
    std::vector<double> scores;

    std::string matrix_csv() const;   // fixed column ordering
    std::string scores_json() const;  // fixed key ordering
};

/// M[i][j] = (1/(m-1)) sum_k sgn(p[i][k] - p[j][k]);
/// s[i] = (1/(n-1)) sum_{j != i} M[i][j]. The printed 1/(m-1) normalizer
/// over m terms is implemented as printed.
ScoreReport pairings_scores(const PerfMatrix& perf);

/// M[i][j] = (1/(m-1)) sum_k (p[i][k]-p[j][k]) / max(|p[i][k]|,|p[j][k]|),
/// 0/0 terms count as 0.
ScoreReport relative_improvement_scores(const PerfMatrix& perf);

/// Mean and 99%-style half width 2.33 * sample std / sqrt(n).
/// Throws TooFewSamples for fewer than 2 samples.
std::pair<double, double> confidence_interval(const std::vector<double>& samples);

}  // namespace mctslab::eval

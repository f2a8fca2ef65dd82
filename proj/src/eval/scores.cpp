#include "mctslab/eval/scores.hpp"

#include <cmath>
#include <sstream>

#include "mctslab/mdp.hpp"

namespace mctslab::eval {

void PerfMatrix::validate() const {
    if (perf.size() != agents.size())
        throw InvalidSpec("perf matrix: row count does not match agent count");
    for (const auto& row : perf)
        if (row.size() != tasks.size())
            throw InvalidSpec("perf matrix: ragged rows");
    for (const auto& row : perf)
        for (double v : row)
            if (!std::isfinite(v))
                throw InvalidSpec("perf matrix: non-finite performance");
}

namespace {

ScoreReport build_report(const PerfMatrix& perf, ScoreKind kind) {
    perf.validate();
    const std::size_t n = perf.agents.size();
    const std::size_t m = perf.tasks.size();
    if (m < 2)
        throw TooFewTasks("score: need at least 2 tasks");
    if (n < 2)
        throw TooFewAgents("score: need at least 2 agents");

    ScoreReport report;
    report.kind = kind;
    report.agents = perf.agents;
    report.matrix.assign(n, std::vector<double>(n, 0.0));
    report.scores.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double a = perf.perf[i][k];
                const double b = perf.perf[j][k];
                if (kind == ScoreKind::pairings) {
                    acc += a > b ? 1.0 : a < b ? -1.0 : 0.0;
                } else {
                    const double denom = std::max(std::fabs(a), std::fabs(b));
                    if (denom > 0.0)
                        acc += (a - b) / denom;
                }
            }
            report.matrix[i][j] = acc / static_cast<double>(m - 1);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                acc += report.matrix[i][j];
        report.scores[i] = acc / static_cast<double>(n - 1);
    }
    return report;
}

}  // namespace

ScoreReport pairings_scores(const PerfMatrix& perf) {
    return build_report(perf, ScoreKind::pairings);
}

ScoreReport relative_improvement_scores(const PerfMatrix& perf) {
    return build_report(perf, ScoreKind::relative);
}

std::string ScoreReport::matrix_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "agent";
    for (const auto& a : agents)
        out << "," << a;
    out << "\n";
    for (std::size_t i = 0; i < agents.size(); ++i) {
        out << agents[i];
        for (std::size_t j = 0; j < agents.size(); ++j)
            out << "," << matrix[i][j];
        out << "\n";
    }
    return out.str();
}

std::string ScoreReport::scores_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"kind\":\"" << (kind == ScoreKind::pairings ? "pairings" : "relative")
        << "\",\"scores\":[";
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (i)
            out << ",";
        out << "{\"agent\":\"" << agents[i] << "\",\"score\":" << scores[i] << "}";
    }
    out << "]}";
    return out.str();
}

std::pair<double, double> confidence_interval(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw TooFewSamples("confidence_interval: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples)
        sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : samples)
        ss += (v - mean) * (v - mean);
    const double sample_std = std::sqrt(ss / (n - 1.0));
    return {mean, 2.33 * sample_std / std::sqrt(n)};
}

}  // namespace mctslab::eval

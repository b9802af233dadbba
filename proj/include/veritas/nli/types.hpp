#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "veritas/core.hpp"

namespace veritas::nli {

inline constexpr double kSimplexTolerance = 1e-6;

/// Entailment / contradiction / neutral likelihoods for one sentence pair.
struct NliDistribution {
    double entail = 0.0;
    double contradict = 0.0;
    double neutral = 1.0;

    bool operator==(const NliDistribution&) const = default;

    bool onSimplex(double tol = kSimplexTolerance) const {
        for (double v : {entail, contradict, neutral})
            if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) return false;
        return std::abs(entail + contradict + neutral - 1.0) <= tol;
    }

    /// Scalar consistency signal in [-1, 1].
    double signal() const { return entail - contradict; }
};

struct SentencePair {
    std::string premise;
    std::string hypothesis;
};

/// M premise sentences x N hypothesis sentences; cell(i, j) is the
/// distribution for (premise_i, hypothesis_j).
class PairMatrix {
public:
    PairMatrix(std::vector<std::string> premises, std::vector<std::string> hypotheses,
               std::vector<NliDistribution> cellsRowMajor)
        : premises_(std::move(premises)), hypotheses_(std::move(hypotheses)), cells_(std::move(cellsRowMajor)) {
        if (premises_.empty() || hypotheses_.empty()) throw ContractViolation("pair matrix needs M >= 1 and N >= 1");
        if (cells_.size() != premises_.size() * hypotheses_.size())
            throw ContractViolation("pair matrix cell count does not match sentence counts");
    }

    /// Matrix of given dimensions with placeholder sentence labels; for tests and probes.
    static PairMatrix fromCells(std::size_t rows, std::size_t cols, std::vector<NliDistribution> cells) {
        std::vector<std::string> p(rows), h(cols);
        for (std::size_t i = 0; i < rows; ++i) p[i] = "p" + std::to_string(i);
        for (std::size_t j = 0; j < cols; ++j) h[j] = "h" + std::to_string(j);
        return PairMatrix(std::move(p), std::move(h), std::move(cells));
    }

    std::size_t rows() const { return premises_.size(); }
    std::size_t cols() const { return hypotheses_.size(); }

    const NliDistribution& at(std::size_t i, std::size_t j) const { return cells_[i * cols() + j]; }

    const std::vector<std::string>& premiseSentences() const { return premises_; }
    const std::vector<std::string>& hypothesisSentences() const { return hypotheses_; }

private:
    std::vector<std::string> premises_;
    std::vector<std::string> hypotheses_;
    std::vector<NliDistribution> cells_;
};

}  // namespace veritas::nli

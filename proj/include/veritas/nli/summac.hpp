#pragma once

// Pair-matrix construction and the SummaC reductions.
//
// signal(cell) = entail - contradict, which spans exactly [-1, 1]. This is
// the single place to change if aligning with another signal convention.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "veritas/nli/backend.hpp"
#include "veritas/nli/sentences.hpp"
#include "veritas/nli/types.hpp"

namespace veritas::nli {

/// Splits both texts, classifies all M x N pairs in batches of at most
/// backend.maxBatch(), and validates every returned distribution.
inline PairMatrix buildPairMatrix(const std::vector<std::string>& premiseSentences,
                                  const std::vector<std::string>& hypothesisSentences, NliBackend& backend) {
    if (premiseSentences.empty() || hypothesisSentences.empty())
        throw ContractViolation("pair matrix needs non-empty premise and hypothesis");
    std::vector<SentencePair> pairs;
    pairs.reserve(premiseSentences.size() * hypothesisSentences.size());
    for (const auto& p : premiseSentences)
        for (const auto& h : hypothesisSentences) pairs.push_back({p, h});

    std::vector<NliDistribution> cells;
    cells.reserve(pairs.size());
    const std::size_t batch = std::max<std::size_t>(1, backend.maxBatch());
    for (std::size_t start = 0; start < pairs.size(); start += batch) {
        const std::size_t n = std::min(batch, pairs.size() - start);
        auto out = backend.classify(std::span<const SentencePair>(pairs.data() + start, n));
        if (out.size() != n)
            throw ContractViolation("NLI backend returned " + std::to_string(out.size()) + " distributions for " +
                                    std::to_string(n) + " pairs");
        for (const auto& d : out) {
            if (!d.onSimplex())
                throw ContractViolation("NLI backend returned a distribution off the probability simplex");
            cells.push_back(d);
        }
    }
    return PairMatrix(premiseSentences, hypothesisSentences, std::move(cells));
}

inline PairMatrix buildPairMatrix(const std::string& premise, const std::string& hypothesis, NliBackend& backend,
                                  const SentenceSplitter& splitter) {
    if (trimView(premise).empty() || trimView(hypothesis).empty())
        throw ContractViolation("premise and hypothesis must be non-empty");
    return buildPairMatrix(splitter.split(premise), splitter.split(hypothesis), backend);
}

/// Mean over hypothesis sentences of the best supporting premise sentence.
inline double summacZsScore(const PairMatrix& m) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double best = -1.0;
        for (std::size_t i = 0; i < m.rows(); ++i) best = std::max(best, m.at(i, j).signal());
        sum += best;
    }
    return std::clamp(sum / static_cast<double>(m.cols()), -1.0, 1.0);
}

struct ConvScorerConfig {
    int binCount = 50;
    std::vector<double> weights;
    double bias = 0.0;

    void validate() const {
        if (binCount < 1) throw Error("conv scorer binCount must be positive");
        if (weights.size() != static_cast<std::size_t>(binCount))
            throw Error("conv scorer has " + std::to_string(weights.size()) + " weights for " +
                        std::to_string(binCount) + " bins");
        for (double w : weights)
            if (!std::isfinite(w)) throw Error("conv scorer weight is not finite");
        if (!std::isfinite(bias)) throw Error("conv scorer bias is not finite");
    }

    nlohmann::json toJson() const {
        return {{"version", 1}, {"bin_count", binCount}, {"weights", weights}, {"bias", bias}};
    }

    static ConvScorerConfig fromJson(const nlohmann::json& j) {
        ConvScorerConfig c;
        try {
            c.binCount = j.at("bin_count").get<int>();
            c.weights = j.at("weights").get<std::vector<double>>();
            c.bias = j.value("bias", 0.0);
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed conv scorer config: ") + e.what());
        }
        c.validate();
        return c;
    }

    static ConvScorerConfig load(const std::string& path) {
        try {
            return fromJson(nlohmann::json::parse(text::readFile(path)));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error("malformed conv scorer config " + path + ": " + e.what());
        }
    }
};

/// Bin of `signal` among `binCount` equal-width bins over [-1, 1]; +1 falls in the top bin.
inline std::size_t histogramBin(double signal, int binCount) {
    const double x = std::clamp(signal, -1.0, 1.0);
    auto b = static_cast<long>(std::floor((x + 1.0) / 2.0 * binCount));
    return static_cast<std::size_t>(std::clamp<long>(b, 0, binCount - 1));
}

/// Normalized histogram (mass sums to 1) of column j's signals.
inline std::vector<double> columnHistogram(const PairMatrix& m, std::size_t j, int binCount) {
    std::vector<double> h(static_cast<std::size_t>(binCount), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) h[histogramBin(m.at(i, j).signal(), binCount)] += 1.0;
    for (double& v : h) v /= static_cast<double>(m.rows());
    return h;
}

/// Column histograms averaged over hypothesis sentences; the feature vector
/// used when fitting conv weights.
inline std::vector<double> meanHistogram(const PairMatrix& m, int binCount) {
    std::vector<double> acc(static_cast<std::size_t>(binCount), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto h = columnHistogram(m, j, binCount);
        for (std::size_t b = 0; b < acc.size(); ++b) acc[b] += h[b];
    }
    for (double& v : acc) v /= static_cast<double>(m.cols());
    return acc;
}

inline double summacConvScore(const PairMatrix& m, const ConvScorerConfig& cfg) {
    cfg.validate();
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto h = columnHistogram(m, j, cfg.binCount);
        const double z = std::inner_product(h.begin(), h.end(), cfg.weights.begin(), cfg.bias);
        sum += std::clamp(z, -1.0, 1.0);
    }
    return sum / static_cast<double>(m.cols());
}

/// Weights equal to bin centres: the conv score approximates the mean signal.
inline ConvScorerConfig rampConvConfig(int binCount = 50) {
    ConvScorerConfig c;
    c.binCount = binCount;
    for (int b = 0; b < binCount; ++b) c.weights.push_back(-1.0 + (2.0 * b + 1.0) / binCount);
    return c;
}

}  // namespace veritas::nli

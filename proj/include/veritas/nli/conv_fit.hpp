#pragma once

// Fits SummaC-Conv weights when no weight file is available: logistic
// regression from per-example mean column histograms to the binary label.
// The learned logit is used directly as the conv output (then clamped to
// [-1, 1]), so a positive output still means "more likely reliable".

#include <vector>

#include "veritas/baselines/logreg.hpp"
#include "veritas/nli/summac.hpp"

namespace veritas::nli {

inline ConvScorerConfig fitConvConfig(const std::vector<std::vector<double>>& histograms,
                                      const std::vector<BinaryLabel>& labels, int binCount,
                                      baselines::LogRegConfig config = {0.5, 500, 1e-3, 42}) {
    if (histograms.size() != labels.size()) throw TrainingError("histograms and labels differ in length");
    std::vector<baselines::SparseVector> xs;
    xs.reserve(histograms.size());
    for (const auto& h : histograms) {
        if (h.size() != static_cast<std::size_t>(binCount)) throw TrainingError("histogram has wrong bin count");
        xs.push_back(baselines::SparseVector::fromDense(h));
    }
    const auto model = baselines::trainLogReg(xs, labels, static_cast<std::size_t>(binCount), config);
    ConvScorerConfig c;
    c.binCount = binCount;
    c.weights = model.weights;
    c.bias = model.bias;
    c.validate();
    return c;
}

}  // namespace veritas::nli

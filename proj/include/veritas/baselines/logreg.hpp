#pragma once

// L2-regularized logistic regression trained by full-batch gradient descent.
//
//   loss(w, b) = mean_i [ -y_i log s(z_i) - (1 - y_i) log(1 - s(z_i)) ] + (l2 / 2) |w|^2
//   z_i = w . x_i + b, y_i = 1 for Reliable; the bias is not regularized.

#include <cmath>
#include <random>
#include <vector>

#include "veritas/baselines/tfidf.hpp"
#include "veritas/core.hpp"

namespace veritas::baselines {

struct LogRegConfig {
    double learningRate = 0.5;
    int epochs = 200;
    double l2 = 1e-4;
    std::uint64_t seed = 42;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    LogRegConfig config;
    std::vector<double> lossTrace;  // loss before each epoch's update, then final
};

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace detail {
// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
}  // namespace detail

inline double logRegLoss(const std::vector<double>& w, double b, const std::vector<SparseVector>& xs,
                         const std::vector<BinaryLabel>& ys, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = xs[i].dot(w) + b;
        // -y log s(z) - (1-y) log(1-s(z)) = softplus(z) - y z
        loss += detail::softplus(z) - (ys[i] == BinaryLabel::Reliable ? z : 0.0);
    }
    loss /= static_cast<double>(xs.size());
    double sq = 0.0;
    for (double v : w) sq += v * v;
    return loss + 0.5 * l2 * sq;
}

/// Analytic gradient; the last element is d/d bias.
inline std::vector<double> logRegGradient(const std::vector<double>& w, double b, const std::vector<SparseVector>& xs,
                                          const std::vector<BinaryLabel>& ys, double l2) {
    std::vector<double> g(w.size() + 1, 0.0);
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double err = sigmoid(xs[i].dot(w) + b) - (ys[i] == BinaryLabel::Reliable ? 1.0 : 0.0);
        for (const auto& [k, v] : xs[i].entries) g[k] += err * v / n;
        g.back() += err / n;
    }
    for (std::size_t k = 0; k < w.size(); ++k) g[k] += l2 * w[k];
    return g;
}

/// `dims` is the feature dimension (vocabulary size); every index in `xs` must be below it.
inline LogRegModel trainLogReg(const std::vector<SparseVector>& xs, const std::vector<BinaryLabel>& ys, std::size_t dims,
                               LogRegConfig config = {}) {
    if (xs.size() != ys.size()) throw TrainingError("vectors and labels differ in length");
    bool pos = false, neg = false;
    for (auto y : ys) (y == BinaryLabel::Reliable ? pos : neg) = true;
    if (!pos || !neg) throw TrainingError("logistic regression needs both classes in training data");
    for (const auto& x : xs)
        for (const auto& [k, v] : x.entries)
            if (k >= dims || !std::isfinite(v)) throw TrainingError("feature index out of range or non-finite");

    LogRegModel m;
    m.config = config;
    // Tiny seeded initialization keeps runs reproducible while breaking exact symmetry.
    std::mt19937_64 rng(config.seed);
    m.weights.resize(dims);
    for (double& w : m.weights) w = (static_cast<double>(rng() % 2001) - 1000.0) * 1e-9;
    m.bias = 0.0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss = logRegLoss(m.weights, m.bias, xs, ys, config.l2);
        if (!std::isfinite(loss))
            throw TrainingError("logistic regression diverged at epoch " + std::to_string(epoch) +
                                "; try a smaller learning rate");
        m.lossTrace.push_back(loss);
        const auto g = logRegGradient(m.weights, m.bias, xs, ys, config.l2);
        for (std::size_t k = 0; k < dims; ++k) m.weights[k] -= config.learningRate * g[k];
        m.bias -= config.learningRate * g.back();
    }
    const double final = logRegLoss(m.weights, m.bias, xs, ys, config.l2);
    if (!std::isfinite(final)) throw TrainingError("logistic regression diverged; try a smaller learning rate");
    m.lossTrace.push_back(final);
    return m;
}

inline double logRegProbability(const LogRegModel& m, const SparseVector& x) {
    return sigmoid(x.dot(m.weights) + m.bias);
}

inline BinaryLabel predictLogReg(const LogRegModel& m, const SparseVector& x) {
    return logRegProbability(m, x) >= 0.5 ? BinaryLabel::Reliable : BinaryLabel::Unreliable;
}

}  // namespace veritas::baselines

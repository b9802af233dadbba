#pragma once

// Decision-threshold calibration: exhaustive scan of a uniform grid over
// [-1, 1], maximizing accuracy of (score >= t => Reliable), ties to the
// smallest threshold.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "veritas/core.hpp"

namespace veritas::nli {

struct CalibrationResult {
    double threshold = 0.0;
    double accuracyAtThreshold = 0.0;
    double gridStep = 0.01;
    std::uint64_t splitSeed = 0;
};

/// Grid points -1, -1 + step, ..., up to 1 inclusive when 2/step is integral.
/// Values are rounded to 12 decimals so that, e.g., -1 + 6 * 0.1 is -0.4.
inline std::vector<double> thresholdGrid(double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw CalibrationError("grid step must be positive");
    const auto n = static_cast<long>(std::floor(2.0 / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) grid.push_back(std::round((-1.0 + static_cast<double>(i) * step) * 1e12) / 1e12);
    return grid;
}

inline CalibrationResult calibrateThreshold(std::span<const double> scores, std::span<const BinaryLabel> labels,
                                            double gridStep = 0.01, std::uint64_t splitSeed = 0) {
    if (scores.size() != labels.size()) throw CalibrationError("scores and labels differ in length");
    if (scores.size() < 2) throw CalibrationError("calibration needs at least two examples");
    std::size_t positives = 0;
    for (auto l : labels) positives += l == BinaryLabel::Reliable;
    if (positives == 0 || positives == labels.size())
        throw CalibrationError("calibration labels contain a single class");
    for (double s : scores)
        if (!std::isfinite(s) || s < -1.0 || s > 1.0) throw CalibrationError("calibration score outside [-1, 1]");

    // Sweep: sort by score; for threshold t, correct = (#negatives below t) + (#positives at or above t).
    std::vector<std::pair<double, BinaryLabel>> sorted;
    sorted.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) sorted.emplace_back(scores[i], labels[i]);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    const auto grid = thresholdGrid(gridStep);
    std::size_t below = 0, negBelow = 0, posBelow = 0;
    std::size_t bestCorrect = 0;
    double bestT = grid.front();
    bool first = true;
    for (double t : grid) {
        while (below < sorted.size() && sorted[below].first < t) {
            (sorted[below].second == BinaryLabel::Reliable ? posBelow : negBelow)++;
            ++below;
        }
        const std::size_t correct = negBelow + (positives - posBelow);
        if (first || correct > bestCorrect) {
            bestCorrect = correct;
            bestT = t;
            first = false;
        }
    }
    return {bestT, static_cast<double>(bestCorrect) / static_cast<double>(scores.size()), gridStep, splitSeed};
}

}  // namespace veritas::nli

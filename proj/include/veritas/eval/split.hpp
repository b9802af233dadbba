#pragma once

// Seeded, label-stratified calibration/reporting split.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "veritas/eval/dataset.hpp"

namespace veritas::eval {

struct SplitIndices {
    std::vector<std::size_t> calibration;  // ascending dataset positions
    std::vector<std::size_t> reporting;
};

/// Fisher-Yates with `rng() % (i + 1)` so the draw is identical on every
/// standard library. Each class contributes round(frac * size) records to
/// calibration, and at least one record to each side when it has two or more.
inline SplitIndices stratifiedSplit(const Dataset& d, double calibFraction, std::uint64_t seed) {
    if (!(calibFraction > 0.0 && calibFraction < 1.0)) throw Error("calibration fraction must lie in (0, 1)");
    std::vector<std::size_t> byClass[2];
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        if (!d.records[i].label) throw DatasetFormatError("record '" + d.records[i].id + "' has no label");
        byClass[static_cast<int>(*d.records[i].label)].push_back(i);
    }
    std::mt19937_64 rng(seed);
    SplitIndices out;
    for (auto& idx : byClass) {
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
        auto take = static_cast<std::size_t>(std::llround(calibFraction * static_cast<double>(idx.size())));
        if (idx.size() >= 2) take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
        out.calibration.insert(out.calibration.end(), idx.begin(), idx.begin() + static_cast<long>(take));
        out.reporting.insert(out.reporting.end(), idx.begin() + static_cast<long>(take), idx.end());
    }
    std::sort(out.calibration.begin(), out.calibration.end());
    std::sort(out.reporting.begin(), out.reporting.end());
    return out;
}

}  // namespace veritas::eval

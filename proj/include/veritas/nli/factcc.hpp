#pragma once

#include <cmath>
#include <string>

#include "veritas/nli/backend.hpp"

namespace veritas::nli {

inline constexpr double kFactccThreshold = 0.5;

struct FactccResult {
    double score = 0.0;
    BinaryLabel verdict = BinaryLabel::Unreliable;
};

/// Document-level consistency: score is the backend's probability of the
/// consistent class; Reliable iff score >= 0.5.
inline FactccResult factccClassify(const std::string& premise, const std::string& claim, ConsistencyBackend& backend) {
    if (trimView(premise).empty() || trimView(claim).empty())
        throw ContractViolation("premise and claim must be non-empty");
    const double p = backend.consistentProbability(premise, claim);
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw ContractViolation("consistency backend returned probability outside [0, 1]");
    return {p, decide(p, kFactccThreshold)};
}

}  // namespace veritas::nli

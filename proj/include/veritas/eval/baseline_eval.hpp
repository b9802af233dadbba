#pragma once

// Train the TF-IDF baselines on a labeled dataset and score another.

#include <vector>

#include "veritas/baselines/model_io.hpp"
#include "veritas/eval/dataset.hpp"
#include "veritas/eval/metrics.hpp"

namespace veritas::eval {

inline baselines::BaselineBundle trainBaselines(const Dataset& train, const baselines::Lexicon& lexicon,
                                                baselines::LogRegConfig lr = {}, double nbAlpha = 1.0) {
    std::vector<baselines::Tokens> docs;
    std::vector<BinaryLabel> ys;
    for (const auto& r : train.records) {
        if (!r.label) throw DatasetFormatError("training record '" + r.id + "' has no label");
        docs.push_back(baselines::preprocess(r.text, lexicon));
        ys.push_back(*r.label);
    }
    baselines::BaselineBundle b;
    b.tfidf = baselines::fitTfIdf(docs);
    b.nb = baselines::trainNb(docs, ys, nbAlpha);
    std::vector<baselines::SparseVector> xs;
    xs.reserve(docs.size());
    for (const auto& d : docs) xs.push_back(baselines::transform(b.tfidf, d));
    b.logreg = baselines::trainLogReg(xs, ys, b.tfidf.dims(), lr);
    return b;
}

struct BaselineScores {
    MetricsReport naiveBayes;
    MetricsReport logisticRegression;
};

inline BaselineScores evaluateBaselines(const baselines::BaselineBundle& b, const Dataset& test,
                                        const baselines::Lexicon& lexicon) {
    std::vector<BinaryLabel> nb, lr, ys;
    for (const auto& r : test.records) {
        if (!r.label) throw DatasetFormatError("test record '" + r.id + "' has no label");
        const auto toks = baselines::preprocess(r.text, lexicon);
        nb.push_back(baselines::predictNb(b.nb, toks));
        lr.push_back(baselines::predictLogReg(b.logreg, baselines::transform(b.tfidf, toks)));
        ys.push_back(*r.label);
    }
    return {computeMetrics(nb, ys, "naive-bayes"), computeMetrics(lr, ys, "logistic-regression")};
}

}  // namespace veritas::eval

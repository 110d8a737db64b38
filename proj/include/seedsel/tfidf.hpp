#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seedsel/corpus.hpp"
#include "seedsel/error.hpp"
#include "seedsel/features.hpp"
#include "seedsel/jobs.hpp"
#include "seedsel/token.hpp"

namespace seedsel {

struct TfidfResult {
    DimensionRegistry registry{FeatureKind::token};
    std::vector<FeatureVector> vectors; // corpus order
};

// Token-stream vectors over the whole corpus:
//
//   tf(t, s)  = count of t in s / total tokens in s
//   idf(t)    = ln(n / df(t))          natural log, no smoothing
//   weight    = tf * idf
//
// A token present in every seed has idf 0, so its weight is exactly zero
// and the entry is dropped; the token still gets a dimension id. Dimension
// ids follow first appearance: seeds in corpus order, each seed's tokens in
// sorted order.
inline TfidfResult tfidf_vectors(const Corpus& corpus, unsigned jobs = 1) {
    const std::size_t n = corpus.size();
    std::vector<std::map<std::string, std::uint64_t>> counts(n);
    std::vector<std::uint64_t> totals(n, 0);

    parallel_for(n, jobs, [&](std::size_t i) {
        const SeedProgram& seed = corpus.seeds[i];
        if (!seed.source_text)
            throw Error("missing-representation",
                        "seed \"" + seed.id + "\" has no source text for token features");
        for (auto& tok : tokenize(*seed.source_text)) {
            ++counts[i][std::move(tok)];
            ++totals[i];
        }
    });

    std::map<std::string, std::uint64_t> df;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [tok, c] : counts[i]) ++df[tok];

    TfidfResult result;
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector v;
        v.seed_id = corpus.seeds[i].id;
        v.kind = FeatureKind::token;
        for (const auto& [tok, c] : counts[i]) {
            const std::uint32_t dim = result.registry.intern(tok);
            const double tf = static_cast<double>(c) / static_cast<double>(totals[i]);
            const double weight = tf * std::log(static_cast<double>(n) /
                                                static_cast<double>(df.at(tok)));
            if (weight != 0.0) v.entries.emplace_back(dim, weight);
        }
        std::sort(v.entries.begin(), v.entries.end());
        result.vectors.push_back(std::move(v));
    }
    result.registry.freeze();
    return result;
}

} // namespace seedsel

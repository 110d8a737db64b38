#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seedsel/corpus.hpp"
#include "seedsel/coverage.hpp"
#include "seedsel/error.hpp"
#include "seedsel/features.hpp"
#include "seedsel/order.hpp"
#include "seedsel/rng.hpp"

namespace seedsel {

struct Centroid {
    std::vector<double> values;
};

// Mean vector of the set. Per dimension, contributions are summed in input
// order and divided by n once at the end; distance loops below also run in
// ascending dimension order. Keeping one summation order everywhere makes
// reruns and independent re-derivations agree to the last bit.
inline Centroid centroid(const std::vector<FeatureVector>& vectors) {
    if (vectors.empty()) throw Error("parameter", "centroid of an empty vector set");
    const FeatureKind kind = vectors[0].kind;
    for (const auto& v : vectors)
        if (v.kind != kind) throw Error("parameter", "mixed feature kinds in one vector set");

    std::size_t m = 0;
    if (vectors[0].is_dense()) {
        m = vectors[0].dense.size();
        for (const auto& v : vectors)
            if (v.dense.size() != m)
                throw Error("validation", "dense vectors disagree on dimension");
    } else {
        for (const auto& v : vectors)
            for (const auto& [d, w] : v.entries) m = std::max<std::size_t>(m, d + std::size_t{1});
    }

    Centroid c;
    c.values.assign(m, 0.0);
    for (const auto& v : vectors) {
        if (v.is_dense()) {
            for (std::size_t d = 0; d < m; ++d) c.values[d] += v.dense[d];
        } else {
            for (const auto& [d, w] : v.entries) c.values[d] += w;
        }
    }
    const auto n = static_cast<double>(vectors.size());
    for (auto& x : c.values) x /= n;
    return c;
}

// Squared Euclidean distance. Distances feed only comparisons, and squaring
// is monotone and exact on equal values, so picks and ties come out the same
// as with the rooted distance while staying cheaper and more precise.
inline double dist2(const FeatureVector& a, const FeatureVector& b) {
    double sum = 0.0;
    if (a.is_dense()) {
        for (std::size_t d = 0; d < a.dense.size(); ++d) {
            const double diff = a.dense[d] - b.dense[d];
            sum += diff * diff;
        }
        return sum;
    }
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        const auto [da, wa] = a.entries[i];
        const auto [db, wb] = b.entries[j];
        double diff;
        if (da == db) {
            diff = wa - wb;
            ++i;
            ++j;
        } else if (da < db) {
            diff = wa;
            ++i;
        } else {
            diff = wb;
            ++j;
        }
        sum += diff * diff;
    }
    for (; i < a.entries.size(); ++i) sum += a.entries[i].second * a.entries[i].second;
    for (; j < b.entries.size(); ++j) sum += b.entries[j].second * b.entries[j].second;
    return sum;
}

inline double dist2_to_centroid(const FeatureVector& v, const Centroid& c) {
    double sum = 0.0;
    if (v.is_dense()) {
        for (std::size_t d = 0; d < c.values.size(); ++d) {
            const double diff = v.dense[d] - c.values[d];
            sum += diff * diff;
        }
        return sum;
    }
    std::size_t p = 0;
    for (std::size_t d = 0; d < c.values.size(); ++d) {
        double w = 0.0;
        if (p < v.entries.size() && v.entries[p].first == d) w = v.entries[p++].second;
        const double diff = w - c.values[d];
        sum += diff * diff;
    }
    return sum;
}

// One farthest-point round: the surviving candidates that tied for the
// maximum (sorted by seed id), which of them was chosen, and the score.
struct FpsStep {
    std::vector<std::size_t> ties;
    std::size_t chosen = 0;
    double score = 0.0;
};

struct FpsTrace {
    Centroid center;
    std::vector<FpsStep> steps;
};

namespace detail {

// Exact-equality tie handling shared by every strategy: collect all indices
// whose value equals the maximum, order them by seed id, and spend one
// bounded RNG draw only when more than one survives.
template <typename Value, typename Candidates>
FpsStep pick_max(const Candidates& candidates, const std::vector<Value>& value,
                 const std::vector<FeatureVector>& vectors, SplitMix64& rng) {
    Value best = value[*candidates.begin()];
    for (const auto i : candidates)
        if (value[i] > best) best = value[i];
    FpsStep step;
    for (const auto i : candidates)
        if (value[i] == best) step.ties.push_back(i);
    std::sort(step.ties.begin(), step.ties.end(), [&](std::size_t a, std::size_t b) {
        return vectors[a].seed_id < vectors[b].seed_id;
    });
    step.chosen = step.ties.size() > 1
                      ? step.ties[static_cast<std::size_t>(rng.below(step.ties.size()))]
                      : step.ties[0];
    step.score = static_cast<double>(best);
    return step;
}

} // namespace detail

// Farthest point sampling over the full corpus. The first pick maximizes
// distance to the centroid; each later pick maximizes the minimum distance
// to everything already picked. Per round every remaining seed needs one
// new distance, against the seed just picked.
inline SelectionOrder fps_order(const std::vector<FeatureVector>& vectors, std::uint64_t rng_seed,
                                std::string corpus_name = "", FpsTrace* trace = nullptr) {
    const std::size_t n = vectors.size();
    if (n == 0) throw Error("parameter", "cannot order an empty vector set");

    const Centroid c = centroid(vectors);
    if (trace) trace->center = c;

    SplitMix64 rng(rng_seed);
    SelectionOrder order;
    order.corpus = std::move(corpus_name);
    order.method = "fiss";
    order.rng_seed = rng_seed;

    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = dist2_to_centroid(vectors[i], c);

    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    while (!remaining.empty()) {
        const auto& value = order.order.empty() ? score : min_d2;
        FpsStep step = detail::pick_max(remaining, value, vectors, rng);
        const std::size_t picked = step.chosen;
        if (trace) trace->steps.push_back(std::move(step));

        order.order.push_back(vectors[picked].seed_id);
        remaining.erase(std::find(remaining.begin(), remaining.end(), picked));
        for (const auto i : remaining)
            min_d2[i] = std::min(min_d2[i], dist2(vectors[i], vectors[picked]));
    }
    return order;
}

namespace detail {

// Descending score with per-class randomization: equal scores form one
// class; each class is shuffled, classes stay in score order.
template <typename Score>
std::vector<std::size_t> rank_descending(const std::vector<Score>& scores,
                                         const std::vector<std::string>& ids, SplitMix64& rng) {
    std::vector<std::size_t> idx(scores.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return ids[a] < ids[b];
    });
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t end = start + 1;
        while (end < idx.size() && scores[idx[end]] == scores[idx[start]]) ++end;
        if (end - start > 1) {
            std::vector<std::size_t> run(idx.begin() + static_cast<std::ptrdiff_t>(start),
                                         idx.begin() + static_cast<std::ptrdiff_t>(end));
            rng.shuffle(run);
            std::copy(run.begin(), run.end(), idx.begin() + static_cast<std::ptrdiff_t>(start));
        }
        start = end;
    }
    return idx;
}

inline void require_parallel_coverage(const Corpus& corpus,
                                      const std::vector<CoverageBitmap>& bitmaps) {
    if (bitmaps.size() != corpus.size())
        throw Error("parameter", "coverage list does not match the corpus (" +
                                     std::to_string(bitmaps.size()) + " of " +
                                     std::to_string(corpus.size()) + " seeds)");
}

} // namespace detail

// Seeds by covered-unit count, descending.
inline SelectionOrder coverage_order_p(const Corpus& corpus,
                                       const std::vector<CoverageBitmap>& bitmaps,
                                       std::uint64_t rng_seed) {
    detail::require_parallel_coverage(corpus, bitmaps);
    std::vector<std::uint64_t> scores(bitmaps.size());
    for (std::size_t i = 0; i < bitmaps.size(); ++i) scores[i] = bitmaps[i].popcount();
    const auto ids = corpus.ids();
    SplitMix64 rng(rng_seed);
    SelectionOrder order{corpus.name, "ciss-p", "", rng_seed, {}};
    for (const auto i : detail::rank_descending(scores, ids, rng)) order.order.push_back(ids[i]);
    return order;
}

// Greedy maximum coverage: repeatedly take the seed adding the most
// uncovered units, stopping once no seed adds anything. The remainder is
// appended by covered-unit count, continuing the same RNG stream. The
// greedy prefix length lands in *greedy_len when requested.
inline SelectionOrder coverage_order_m(const Corpus& corpus,
                                       const std::vector<CoverageBitmap>& bitmaps,
                                       std::uint64_t rng_seed, std::size_t* greedy_len = nullptr) {
    detail::require_parallel_coverage(corpus, bitmaps);
    const auto ids = corpus.ids();
    const std::size_t n = bitmaps.size();
    SplitMix64 rng(rng_seed);
    SelectionOrder order{corpus.name, "ciss-m", "", rng_seed, {}};

    CoverageBitmap acc(n ? bitmaps[0].width : 0);
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

    while (!remaining.empty()) {
        std::uint64_t best = 0;
        for (const auto i : remaining) best = std::max(best, acc.increment_from(bitmaps[i]));
        if (best == 0) break;
        std::vector<std::size_t> ties;
        for (const auto i : remaining)
            if (acc.increment_from(bitmaps[i]) == best) ties.push_back(i);
        std::sort(ties.begin(), ties.end(),
                  [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
        const std::size_t picked =
            ties.size() > 1 ? ties[static_cast<std::size_t>(rng.below(ties.size()))] : ties[0];
        order.order.push_back(ids[picked]);
        acc.merge(bitmaps[picked]);
        remaining.erase(std::find(remaining.begin(), remaining.end(), picked));
    }
    if (greedy_len) *greedy_len = order.order.size();

    if (!remaining.empty()) {
        std::vector<std::uint64_t> scores;
        std::vector<std::string> rest_ids;
        for (const auto i : remaining) {
            scores.push_back(bitmaps[i].popcount());
            rest_ids.push_back(ids[i]);
        }
        for (const auto r : detail::rank_descending(scores, rest_ids, rng))
            order.order.push_back(rest_ids[r]);
    }
    return order;
}

// Seeds by historical bug count, descending.
inline SelectionOrder prefuzz_order(const Corpus& corpus, std::uint64_t rng_seed) {
    std::vector<std::uint64_t> scores(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!corpus.seeds[i].bug_count)
            throw Error("missing-representation",
                        "seed \"" + corpus.seeds[i].id + "\" has no bug count");
        scores[i] = *corpus.seeds[i].bug_count;
    }
    const auto ids = corpus.ids();
    SplitMix64 rng(rng_seed);
    SelectionOrder order{corpus.name, "piss", "", rng_seed, {}};
    for (const auto i : detail::rank_descending(scores, ids, rng)) order.order.push_back(ids[i]);
    return order;
}

// Uniform random permutation of the corpus.
inline SelectionOrder random_order(const Corpus& corpus, std::uint64_t rng_seed) {
    SelectionOrder order{corpus.name, "random", "", rng_seed, corpus.ids()};
    std::sort(order.order.begin(), order.order.end());
    SplitMix64 rng(rng_seed);
    rng.shuffle(order.order);
    return order;
}

} // namespace seedsel

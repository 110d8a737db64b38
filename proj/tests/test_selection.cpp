#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seedsel/selection.hpp"
#include "support/oracles.hpp"

using seedsel::Corpus;
using seedsel::CoverageBitmap;
using seedsel::Error;
using seedsel::FeatureKind;
using seedsel::FeatureVector;
using seedsel::SeedProgram;
using seedsel::SelectionOrder;
using seedsel::SplitMix64;

namespace {

FeatureVector dense_vec(const std::string& id, std::vector<double> values) {
    FeatureVector v;
    v.seed_id = id;
    v.kind = FeatureKind::embedding;
    v.dense = std::move(values);
    return v;
}

FeatureVector sparse_vec(const std::string& id,
                         std::vector<std::pair<std::uint32_t, double>> entries) {
    FeatureVector v;
    v.seed_id = id;
    v.kind = FeatureKind::token;
    v.entries = std::move(entries);
    return v;
}

Corpus bare_corpus(const std::vector<std::string>& ids) {
    Corpus c;
    c.name = "test";
    for (const auto& id : ids) {
        SeedProgram s;
        s.id = id;
        c.seeds.push_back(std::move(s));
    }
    return c;
}

CoverageBitmap bitmap_of(std::uint64_t width, std::initializer_list<std::uint64_t> bits) {
    CoverageBitmap bm(width);
    for (const auto b : bits) bm.set(b);
    return bm;
}

bool is_permutation_of(const std::vector<std::string>& order, std::vector<std::string> ids) {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::sort(ids.begin(), ids.end());
    return sorted == ids;
}

} // namespace

TEST_CASE("the centroid is the per-dimension mean") {
    const std::vector<FeatureVector> vs{dense_vec("a", {0, 0}), dense_vec("b", {3, 4}),
                                        dense_vec("c", {1, 1})};
    const auto c = seedsel::centroid(vs);
    REQUIRE(c.values.size() == 2);
    CHECK(c.values[0] == (0.0 + 3.0 + 1.0) / 3.0);
    CHECK(c.values[1] == (0.0 + 4.0 + 1.0) / 3.0);

    const std::vector<FeatureVector> sparse{sparse_vec("a", {{0, 2.0}}),
                                            sparse_vec("b", {{2, 4.0}})};
    const auto cs = seedsel::centroid(sparse);
    REQUIRE(cs.values.size() == 3);
    CHECK(cs.values[0] == 1.0);
    CHECK(cs.values[1] == 0.0);
    CHECK(cs.values[2] == 2.0);

    CHECK_THROWS_AS(seedsel::centroid({}), Error);
}

TEST_CASE("sparse and dense distances agree with the densified form") {
    const auto a = sparse_vec("a", {{0, 1.0}, {3, 2.0}});
    const auto b = sparse_vec("b", {{1, 4.0}, {3, 0.5}});
    // densified: (1,0,0,2) vs (0,4,0,0.5) -> 1 + 16 + 0 + 2.25
    CHECK(seedsel::dist2(a, b) == 1.0 + 16.0 + 2.25);
    CHECK(seedsel::dist2(a, a) == 0.0);
    CHECK(seedsel::dist2(dense_vec("x", {1, 2}), dense_vec("y", {4, 6})) == 25.0);
}

TEST_CASE("the first pick is the seed farthest from the centroid") {
    // centroid (4/3, 5/3); squared distances: a 41/9, b 74/9, c 5/9.
    const std::vector<FeatureVector> vs{dense_vec("a", {0, 0}), dense_vec("b", {3, 4}),
                                        dense_vec("c", {1, 1})};
    const auto order = seedsel::fps_order(vs, 0, "t");
    CHECK(order.order.front() == "b");
    CHECK(order.order == std::vector<std::string>{"b", "a", "c"});
    CHECK(order.method == "fiss");
    CHECK(order.rng_seed == 0);
}

TEST_CASE("farthest point sampling matches the full-rescan reference") {
    SplitMix64 gen(2024);
    for (int iter = 0; iter < 30; ++iter) {
        const auto n = 2 + gen.below(20);
        const auto dims = 1 + gen.below(12);
        const auto vs = testsupport::random_vectors(gen, n, dims, iter % 3, iter % 2 == 0);
        const std::uint64_t seed = gen.next();
        const auto engine = seedsel::fps_order(vs, seed, "t");
        const auto ref = testsupport::fps_reference(vs, seed);
        std::vector<std::string> ref_ids;
        for (const auto i : ref) ref_ids.push_back(vs[i].seed_id);
        CHECK(engine.order == ref_ids);
    }
}

TEST_CASE("replaying the same rng seed reproduces the same order") {
    SplitMix64 gen(7);
    const auto vs = testsupport::random_vectors(gen, 12, 6, 2, true);
    const auto a = seedsel::fps_order(vs, 99, "t");
    const auto b = seedsel::fps_order(vs, 99, "t");
    CHECK(a.order == b.order);
}

TEST_CASE("fully tied vector sets still order every seed, seed-dependently") {
    const std::vector<FeatureVector> vs{dense_vec("a", {1, 1}), dense_vec("b", {1, 1}),
                                        dense_vec("c", {1, 1})};
    std::set<std::vector<std::string>> seen;
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const auto order = seedsel::fps_order(vs, seed, "t");
        CHECK(is_permutation_of(order.order, {"a", "b", "c"}));
        seen.insert(order.order);
    }
    CHECK(seen.size() > 1);
}

TEST_CASE("a single seed orders trivially") {
    const auto order = seedsel::fps_order({dense_vec("only", {1.0})}, 5, "t");
    CHECK(order.order == std::vector<std::string>{"only"});
}

TEST_CASE("fps traces expose centroid, tie sets, and scores") {
    const std::vector<FeatureVector> vs{dense_vec("a", {0, 0}), dense_vec("b", {3, 4}),
                                        dense_vec("c", {1, 1})};
    seedsel::FpsTrace trace;
    seedsel::fps_order(vs, 0, "t", &trace);
    REQUIRE(trace.steps.size() == 3);
    CHECK(trace.center.values == seedsel::centroid(vs).values);
    CHECK(trace.steps[0].ties == std::vector<std::size_t>{1});
    CHECK(trace.steps[0].score == seedsel::dist2_to_centroid(vs[1], trace.center));
    // after picking b, a is at 25 and c is at 13; after a, c drops to 2
    CHECK(trace.steps[1].score == 25.0);
    CHECK(trace.steps[2].score == 2.0);
}

TEST_CASE("coverage popcount ranking is descending") {
    const auto corpus = bare_corpus({"a", "b", "c"});
    const std::vector<CoverageBitmap> bitmaps{bitmap_of(16, {0, 1, 2, 3, 4}),
                                              bitmap_of(16, {0, 1, 2, 3, 4, 5, 6, 7, 8}),
                                              bitmap_of(16, {9, 10})};
    const auto order = seedsel::coverage_order_p(corpus, bitmaps, 0);
    CHECK(order.order == std::vector<std::string>{"b", "a", "c"});
    CHECK(order.method == "ciss-p");
}

TEST_CASE("tied popcounts randomize within the class only") {
    const auto corpus = bare_corpus({"a", "b", "c"});
    const std::vector<CoverageBitmap> bitmaps{bitmap_of(8, {0, 1, 2}), bitmap_of(8, {3, 4, 5}),
                                              bitmap_of(8, {6})};
    std::set<std::vector<std::string>> seen;
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        const auto order = seedsel::coverage_order_p(corpus, bitmaps, seed);
        CHECK(order.order.back() == "c");
        CHECK(is_permutation_of(order.order, {"a", "b", "c"}));
        seen.insert(order.order);
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("greedy coverage takes the largest increment and falls back at zero") {
    const auto corpus = bare_corpus({"a", "b", "c"});
    const std::vector<CoverageBitmap> bitmaps{bitmap_of(8, {1, 2}), bitmap_of(8, {2, 3}),
                                              bitmap_of(8, {3})};
    bool saw_spec_trace = false;
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        std::size_t greedy_len = 0;
        const auto order = seedsel::coverage_order_m(corpus, bitmaps, seed, &greedy_len);
        CHECK(is_permutation_of(order.order, {"a", "b", "c"}));
        CHECK(greedy_len == 2);

        // the greedy prefix alone covers everything the corpus covers
        const std::map<std::string, const CoverageBitmap*> by_id{
            {"a", &bitmaps[0]}, {"b", &bitmaps[1]}, {"c", &bitmaps[2]}};
        CoverageBitmap acc(8);
        for (std::size_t i = 0; i < greedy_len; ++i) acc.merge(*by_id.at(order.order[i]));
        CHECK(acc.popcount() == 3);
        CHECK(acc.increment_from(*by_id.at(order.order[2])) == 0);

        if (order.order == std::vector<std::string>{"a", "b", "c"}) saw_spec_trace = true;
    }
    CHECK(saw_spec_trace);
}

TEST_CASE("all-zero increments fall back to popcount order immediately") {
    const auto corpus = bare_corpus({"a", "b"});
    const std::vector<CoverageBitmap> bitmaps{bitmap_of(8, {}), bitmap_of(8, {})};
    std::size_t greedy_len = 99;
    const auto order = seedsel::coverage_order_m(corpus, bitmaps, 3, &greedy_len);
    CHECK(greedy_len == 0);
    CHECK(is_permutation_of(order.order, {"a", "b"}));
    CHECK(order.method == "ciss-m");
}

TEST_CASE("bug-count ranking is descending with the counts from the manifest") {
    auto corpus = bare_corpus({"a", "b", "c"});
    corpus.seeds[0].bug_count = 0;
    corpus.seeds[1].bug_count = 4;
    corpus.seeds[2].bug_count = 2;
    const auto order = seedsel::prefuzz_order(corpus, 0);
    CHECK(order.order == std::vector<std::string>{"b", "c", "a"});
    CHECK(order.method == "piss");

    corpus.seeds[2].bug_count.reset();
    try {
        seedsel::prefuzz_order(corpus, 0);
        FAIL("expected missing-representation");
    } catch (const Error& e) {
        CHECK(e.code() == "missing-representation");
        CHECK(std::string(e.what()).find("\"c\"") != std::string::npos);
    }
}

TEST_CASE("random orders are uniform over permutations") {
    const auto corpus = bare_corpus({"a", "b", "c"});
    std::map<std::vector<std::string>, std::size_t> counts;
    const std::size_t draws = 6000;
    for (std::uint64_t seed = 0; seed < draws; ++seed) {
        const auto order = seedsel::random_order(corpus, seed);
        REQUIRE(is_permutation_of(order.order, {"a", "b", "c"}));
        ++counts[order.order];
    }
    REQUIRE(counts.size() == 6);
    // chi-square against uniform, 5 degrees of freedom; 20.515 is the 99.9th
    // percentile, so a correct generator fails this about once in a thousand
    // reruns, and the fixed seed range makes the outcome reproducible.
    const double expected = static_cast<double>(draws) / 6.0;
    double chi2 = 0.0;
    for (const auto& [perm, c] : counts) {
        const double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 20.515);
}

TEST_CASE("coverage strategies reject mismatched bitmap lists") {
    const auto corpus = bare_corpus({"a", "b"});
    const std::vector<CoverageBitmap> bitmaps{bitmap_of(8, {1})};
    CHECK_THROWS_AS(seedsel::coverage_order_p(corpus, bitmaps, 0), Error);
    CHECK_THROWS_AS(seedsel::coverage_order_m(corpus, bitmaps, 0), Error);
}

TEST_CASE("every strategy emits a permutation of the corpus") {
    SplitMix64 gen(512);
    for (int iter = 0; iter < 25; ++iter) {
        const auto n = 1 + gen.below(10);
        auto corpus = bare_corpus({});
        std::vector<CoverageBitmap> bitmaps;
        std::vector<FeatureVector> vs;
        for (std::size_t i = 0; i < n; ++i) {
            SeedProgram s;
            s.id = testsupport::seed_name(i);
            s.bug_count = gen.below(5);
            corpus.seeds.push_back(std::move(s));
            CoverageBitmap bm(64);
            for (int b = 0; b < 8; ++b)
                if (gen.below(2)) bm.set(gen.below(64));
            bitmaps.push_back(std::move(bm));
        }
        vs = testsupport::random_vectors(gen, n, 6, iter % 3, true);
        const auto ids = corpus.ids();
        CHECK(is_permutation_of(seedsel::fps_order(vs, iter, "t").order, ids));
        CHECK(is_permutation_of(seedsel::coverage_order_p(corpus, bitmaps, iter).order, ids));
        CHECK(is_permutation_of(seedsel::coverage_order_m(corpus, bitmaps, iter).order, ids));
        CHECK(is_permutation_of(seedsel::prefuzz_order(corpus, iter).order, ids));
        CHECK(is_permutation_of(seedsel::random_order(corpus, iter).order, ids));
    }
}

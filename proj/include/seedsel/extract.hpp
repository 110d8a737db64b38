#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seedsel/ast.hpp"
#include "seedsel/cfg.hpp"
#include "seedsel/corpus.hpp"
#include "seedsel/error.hpp"
#include "seedsel/features.hpp"
#include "seedsel/frontend.hpp"
#include "seedsel/fsio.hpp"
#include "seedsel/jobs.hpp"
#include "seedsel/tfidf.hpp"

namespace seedsel {

namespace detail {

template <typename CountFn>
std::vector<std::map<std::string, std::uint64_t>> per_seed_counts(const Corpus& corpus,
                                                                  unsigned jobs, CountFn&& fn) {
    std::vector<std::map<std::string, std::uint64_t>> counts(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) { counts[i] = fn(corpus.seeds[i]); });
    return counts;
}

// Shared tail for the count-valued kinds: dimension ids by first appearance
// (corpus order, then sorted keys within a seed), raw counts as weights.
inline std::pair<DimensionRegistry, std::vector<FeatureVector>> register_counts(
    const Corpus& corpus, FeatureKind kind,
    const std::vector<std::map<std::string, std::uint64_t>>& counts) {
    DimensionRegistry registry(kind);
    std::vector<FeatureVector> vectors;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        FeatureVector v;
        v.seed_id = corpus.seeds[i].id;
        v.kind = kind;
        for (const auto& [key, c] : counts[i])
            v.entries.emplace_back(registry.intern(key), static_cast<double>(c));
        std::sort(v.entries.begin(), v.entries.end());
        vectors.push_back(std::move(v));
    }
    registry.freeze();
    return {std::move(registry), std::move(vectors)};
}

[[noreturn]] inline void rethrow_with_seed(const Error& e, const std::string& id) {
    throw Error(e.code(), "seed \"" + id + "\": " + e.what());
}

} // namespace detail

struct SparseExtraction {
    DimensionRegistry registry;
    std::vector<FeatureVector> vectors;
};

// Tree 3-gram vectors. Each seed's tree comes from its serialized form when
// one is referenced, otherwise from parsing its source with the built-in
// frontend.
inline SparseExtraction ast_3gram_vectors(const Corpus& corpus, unsigned jobs = 1) {
    auto counts = detail::per_seed_counts(corpus, jobs, [](const SeedProgram& seed) {
        try {
            if (seed.ast) return count_ast_3grams(load_ast_file(*seed.ast));
            if (seed.source_text) return count_ast_3grams(parse_source(*seed.source_text));
        } catch (const Error& e) {
            detail::rethrow_with_seed(e, seed.id);
        }
        throw Error("missing-representation",
                    "seed \"" + seed.id + "\" has neither a serialized ast nor source text");
    });
    auto [registry, vectors] = detail::register_counts(corpus, FeatureKind::ast3gram, counts);
    return {std::move(registry), std::move(vectors)};
}

// Graph 3-gram vectors, built the same way from serialized graphs or the
// frontend's lowering of the source.
inline SparseExtraction cfg_3gram_vectors(const Corpus& corpus, unsigned jobs = 1) {
    auto counts = detail::per_seed_counts(corpus, jobs, [](const SeedProgram& seed) {
        try {
            if (seed.cfg) return count_cfg_3grams(load_cfg_file(*seed.cfg));
            if (seed.source_text) return count_cfg_3grams(lower_to_cfg(parse_source(*seed.source_text)));
        } catch (const Error& e) {
            detail::rethrow_with_seed(e, seed.id);
        }
        throw Error("missing-representation",
                    "seed \"" + seed.id + "\" has neither a serialized cfg nor source text");
    });
    auto [registry, vectors] = detail::register_counts(corpus, FeatureKind::cfg3gram, counts);
    return {std::move(registry), std::move(vectors)};
}

// Reads one seed's embedding file: a JSON array of equal-length numeric
// arrays (slices), reduced to their element-wise mean.
inline std::vector<double> load_embedding_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "embedding " + path.string() + ": " + e.what());
    }
    const std::string where = "embedding " + path.string();
    if (!j.is_array() || j.empty())
        throw Error("validation", where + ": expected a non-empty array of slices");
    std::vector<double> mean;
    std::size_t slices = 0;
    for (const auto& slice : j) {
        if (!slice.is_array())
            throw Error("parse", where + ": each slice must be an array of numbers");
        if (slices == 0) {
            mean.assign(slice.size(), 0.0);
        } else if (slice.size() != mean.size()) {
            throw Error("validation", where + ": slices disagree on dimension (" +
                                          std::to_string(mean.size()) + " vs " +
                                          std::to_string(slice.size()) + ")");
        }
        std::size_t d = 0;
        for (const auto& x : slice) {
            if (!x.is_number())
                throw Error("parse", where + ": each slice must be an array of numbers");
            mean[d++] += x.get<double>();
        }
        ++slices;
    }
    for (auto& x : mean) x /= static_cast<double>(slices);
    return mean;
}

// Dense vectors from per-seed embedding files. All seeds must agree on the
// dimension.
inline std::vector<FeatureVector> ingest_embeddings(const Corpus& corpus, unsigned jobs = 1) {
    std::vector<FeatureVector> vectors(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        const SeedProgram& seed = corpus.seeds[i];
        if (!seed.embedding)
            throw Error("missing-representation", "seed \"" + seed.id + "\" has no embedding file");
        FeatureVector v;
        v.seed_id = seed.id;
        v.kind = FeatureKind::embedding;
        try {
            v.dense = load_embedding_file(*seed.embedding);
        } catch (const Error& e) {
            detail::rethrow_with_seed(e, seed.id);
        }
        vectors[i] = std::move(v);
    });
    for (std::size_t i = 1; i < vectors.size(); ++i) {
        if (vectors[i].dense.size() != vectors[0].dense.size())
            throw Error("validation", "seed \"" + vectors[i].seed_id + "\": embedding dimension " +
                                          std::to_string(vectors[i].dense.size()) +
                                          " does not match " +
                                          std::to_string(vectors[0].dense.size()));
    }
    return vectors;
}

struct ExtractionResult {
    FeatureKind kind;
    std::optional<DimensionRegistry> registry; // absent for the dense kind
    std::vector<FeatureVector> vectors;
};

inline ExtractionResult extract_features(const Corpus& corpus, FeatureKind kind,
                                         unsigned jobs = 1) {
    switch (kind) {
        case FeatureKind::token: {
            auto r = tfidf_vectors(corpus, jobs);
            return {kind, std::move(r.registry), std::move(r.vectors)};
        }
        case FeatureKind::ast3gram: {
            auto r = ast_3gram_vectors(corpus, jobs);
            return {kind, std::move(r.registry), std::move(r.vectors)};
        }
        case FeatureKind::cfg3gram: {
            auto r = cfg_3gram_vectors(corpus, jobs);
            return {kind, std::move(r.registry), std::move(r.vectors)};
        }
        case FeatureKind::embedding:
            return {kind, std::nullopt, ingest_embeddings(corpus, jobs)};
    }
    throw Error("parameter", "unknown feature kind");
}

// Writes <kind>.features.jsonl and, for registry-backed kinds,
// <kind>.registry.json into out_dir, using the command-line kind spelling.
inline void write_extraction(const ExtractionResult& r, const std::filesystem::path& out_dir) {
    const std::string stem = cli_kind_name(r.kind);
    save_features_jsonl(r.vectors, out_dir / (stem + ".features.jsonl"));
    if (r.registry) save_registry(*r.registry, out_dir / (stem + ".registry.json"));
}

} // namespace seedsel

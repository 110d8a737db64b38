#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "seedsel/corpus.hpp"
#include "seedsel/coverage.hpp"
#include "seedsel/error.hpp"
#include "seedsel/extract.hpp"
#include "seedsel/order.hpp"
#include "seedsel/selection.hpp"
#include "seedsel/subset.hpp"

namespace seedsel {

// End-to-end runs shared by the command-line tool and the test suites, so
// both produce byte-identical files for identical inputs and flags.

struct ExtractOutcome {
    std::size_t seeds = 0;
    std::filesystem::path features_path;
    std::optional<std::filesystem::path> registry_path;
};

inline ExtractOutcome run_extract(const std::filesystem::path& manifest, FeatureKind kind,
                                  unsigned jobs, const std::filesystem::path& out_dir) {
    const Corpus corpus = load_manifest(manifest);
    const ExtractionResult result = extract_features(corpus, kind, jobs);
    write_extraction(result, out_dir);
    ExtractOutcome outcome;
    outcome.seeds = result.vectors.size();
    const std::string stem = cli_kind_name(kind);
    outcome.features_path = out_dir / (stem + ".features.jsonl");
    if (result.registry) outcome.registry_path = out_dir / (stem + ".registry.json");
    return outcome;
}

struct SelectOutcome {
    SelectionOrder order;
    std::size_t subset_size = 0;
    std::size_t corpus_size = 0;
    std::filesystem::path order_path;
    std::filesystem::path subset_path;
};

inline SelectOutcome run_select(const std::filesystem::path& manifest, const std::string& method,
                                std::optional<FeatureKind> kind, double budget,
                                std::uint64_t rng_seed, unsigned jobs,
                                const std::filesystem::path& out_dir) {
    const Corpus corpus = load_manifest(manifest);

    SelectionOrder order;
    if (method == "fiss") {
        if (!kind)
            throw Error("parameter", "method fiss requires --kind");
        const ExtractionResult result = extract_features(corpus, *kind, jobs);
        order = fps_order(result.vectors, rng_seed, corpus.name);
        order.kind = cli_kind_name(*kind);
    } else if (kind) {
        throw Error("parameter", "method " + method + " does not take a feature kind");
    } else if (method == "ciss-p") {
        order = coverage_order_p(corpus, load_coverage(corpus, jobs), rng_seed);
    } else if (method == "ciss-m") {
        order = coverage_order_m(corpus, load_coverage(corpus, jobs), rng_seed);
    } else if (method == "piss") {
        order = prefuzz_order(corpus, rng_seed);
    } else if (method == "random") {
        order = random_order(corpus, rng_seed);
    } else {
        throw Error("usage", "unknown method \"" + method + "\"");
    }

    SelectOutcome outcome;
    outcome.order_path = out_dir / "order.json";
    outcome.subset_path = out_dir / "subset.json";
    save_order(order, outcome.order_path);
    outcome.subset_size = save_subset(corpus, order, budget, outcome.subset_path);
    outcome.corpus_size = corpus.size();
    outcome.order = std::move(order);
    return outcome;
}

} // namespace seedsel

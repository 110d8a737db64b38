// Walks the bundled corpus through the library API: extract control-flow
// 3-grams, order the seeds two ways, cut a half-budget subset, and collapse
// the recorded crashes into unique keys. Run it from the repository root:
//
//     ./build/demo/distill_demo demo/manifest.json demo/crashes/nightly.jsonl

#include <cstdio>
#include <filesystem>

#include "seedsel/analysis.hpp"
#include "seedsel/corpus.hpp"
#include "seedsel/coverage.hpp"
#include "seedsel/extract.hpp"
#include "seedsel/selection.hpp"
#include "seedsel/subset.hpp"

int main(int argc, char** argv) {
    const std::filesystem::path manifest = argc > 1 ? argv[1] : "demo/manifest.json";
    const std::filesystem::path crashes = argc > 2 ? argv[2] : "demo/crashes/nightly.jsonl";
    try {
        const auto corpus = seedsel::load_manifest(manifest);
        std::printf("corpus %s: %zu seeds\n", corpus.name.c_str(), corpus.size());

        const auto ex = seedsel::extract_features(corpus, seedsel::FeatureKind::cfg3gram);
        const auto order = seedsel::fps_order(ex.vectors, 42, corpus.name);
        std::printf("farthest-point order:");
        for (const auto& id : order.order) std::printf(" %s", id.c_str());
        std::printf("\n");

        const auto prefix = seedsel::order_prefix(order, 0.5);
        std::printf("half budget keeps %zu:", prefix.size());
        for (const auto& id : prefix) std::printf(" %s", id.c_str());
        std::printf("\n");

        const auto bitmaps = seedsel::load_coverage(corpus);
        std::size_t greedy = 0;
        const auto cov = seedsel::coverage_order_m(corpus, bitmaps, 42, &greedy);
        std::printf("coverage order (greedy for %zu):", greedy);
        for (const auto& id : cov.order) std::printf(" %s", id.c_str());
        std::printf("\n");

        const auto keys = seedsel::dedup_keys(seedsel::load_crash_records(crashes));
        std::printf("%zu unique crash keys:\n", keys.size());
        for (const auto& k : keys) std::printf("  %s\n", k.c_str());
    } catch (const seedsel::Error& e) {
        std::fprintf(stderr, "%s\n", e.diagnostic().c_str());
        return 1;
    }
    return 0;
}

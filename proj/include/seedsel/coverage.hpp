#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedsel/corpus.hpp"
#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"
#include "seedsel/jobs.hpp"

namespace seedsel {

// Fixed-width bitmap over code units, packed into 64-bit words.
struct CoverageBitmap {
    std::uint64_t width = 0;
    std::vector<std::uint64_t> words;

    explicit CoverageBitmap(std::uint64_t w = 0) : width(w), words((w + 63) / 64, 0) {}

    void set(std::uint64_t i) { words[i / 64] |= (1ULL << (i % 64)); }
    bool test(std::uint64_t i) const { return (words[i / 64] >> (i % 64)) & 1u; }

    std::uint64_t popcount() const {
        std::uint64_t total = 0;
        for (const auto w : words) total += static_cast<std::uint64_t>(std::popcount(w));
        return total;
    }

    void merge(const CoverageBitmap& other) {
        for (std::size_t k = 0; k < words.size(); ++k) words[k] |= other.words[k];
    }

    // Units in `other` not yet in this bitmap.
    std::uint64_t increment_from(const CoverageBitmap& other) const {
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < words.size(); ++k)
            total += static_cast<std::uint64_t>(std::popcount(other.words[k] & ~words[k]));
        return total;
    }

    std::vector<std::uint64_t> covered_indices() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t i = 0; i < width; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }
};

// Reads {"width": w, "covered": [indices]}. Indices must lie in [0, w);
// order and repeats are tolerated on input, writers emit a sorted list.
inline CoverageBitmap load_coverage_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "coverage " + path.string() + ": " + e.what());
    }
    const std::string where = "coverage " + path.string();
    if (!j.is_object() || !j.contains("width") || !j.contains("covered") ||
        !j.at("covered").is_array())
        throw Error("parse", where + ": expected {width, covered}");
    if (!j.at("width").is_number_unsigned())
        throw Error("validation", where + ": \"width\" must be a non-negative integer");
    CoverageBitmap bm(j.at("width").get<std::uint64_t>());
    for (const auto& e : j.at("covered")) {
        if (!e.is_number_unsigned())
            throw Error("validation", where + ": covered indices must be non-negative integers");
        const auto i = e.get<std::uint64_t>();
        if (i >= bm.width)
            throw Error("validation", where + ": index " + std::to_string(i) +
                                          " out of range for width " + std::to_string(bm.width));
        bm.set(i);
    }
    return bm;
}

inline void save_coverage_file(const CoverageBitmap& bm, const std::filesystem::path& path) {
    nlohmann::json j;
    j["width"] = bm.width;
    j["covered"] = bm.covered_indices();
    atomic_write_file(path, j.dump(2) + "\n");
}

// Loads every seed's bitmap, in corpus order. All seeds must reference a
// coverage file and agree on the width.
inline std::vector<CoverageBitmap> load_coverage(const Corpus& corpus, unsigned jobs = 1) {
    std::vector<CoverageBitmap> bitmaps(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        const SeedProgram& seed = corpus.seeds[i];
        if (!seed.coverage)
            throw Error("missing-representation", "seed \"" + seed.id + "\" has no coverage file");
        bitmaps[i] = load_coverage_file(*seed.coverage);
    });
    for (std::size_t i = 1; i < bitmaps.size(); ++i) {
        if (bitmaps[i].width != bitmaps[0].width)
            throw Error("validation", "seed \"" + corpus.seeds[i].id + "\": coverage width " +
                                          std::to_string(bitmaps[i].width) + " does not match " +
                                          std::to_string(bitmaps[0].width));
    }
    return bitmaps;
}

inline CoverageBitmap union_coverage(const std::vector<CoverageBitmap>& bitmaps) {
    if (bitmaps.empty()) throw Error("parameter", "union of an empty bitmap list");
    CoverageBitmap acc(bitmaps[0].width);
    for (const auto& bm : bitmaps) {
        if (bm.width != acc.width)
            throw Error("validation", "coverage width mismatch in union (" +
                                          std::to_string(acc.width) + " vs " +
                                          std::to_string(bm.width) + ")");
        acc.merge(bm);
    }
    return acc;
}

} // namespace seedsel

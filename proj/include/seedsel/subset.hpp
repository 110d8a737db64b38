#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedsel/corpus.hpp"
#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"
#include "seedsel/order.hpp"

namespace seedsel {

// Number of seeds a budget fraction k buys out of n: floor(k * n), never
// below 1. The tiny nudge keeps short decimals honest (0.3 * 10 is stored
// as 2.999...96 and must still buy 3 seeds).
inline std::size_t budget_count(std::size_t n, double k) {
    if (!(k > 0.0) || k > 1.0) throw Error("parameter", "budget must be in (0, 1]");
    if (n == 0) throw Error("parameter", "empty corpus");
    auto count = static_cast<std::size_t>(std::floor(k * static_cast<double>(n) + 1e-9));
    count = std::max<std::size_t>(count, 1);
    return std::min(count, n);
}

inline std::vector<std::string> order_prefix(const SelectionOrder& order, double k) {
    const std::size_t count = budget_count(order.order.size(), k);
    return {order.order.begin(), order.order.begin() + static_cast<std::ptrdiff_t>(count)};
}

namespace detail {

inline std::string path_relative_to(const std::filesystem::path& target,
                                    const std::filesystem::path& base) {
    const auto rel = target.lexically_relative(base);
    if (rel.empty()) return target.string();
    return rel.generic_string();
}

} // namespace detail

// Writes a manifest holding the first floor(k * n) seeds of the order (at
// least one). Side-file paths are rewritten relative to the output manifest's
// directory so the subset loads from anywhere. Returns the subset size.
inline std::size_t save_subset(const Corpus& corpus, const SelectionOrder& order, double k,
                               const std::filesystem::path& out_path) {
    namespace fs = std::filesystem;
    if (order.order.size() != corpus.size())
        throw Error("parameter", "order does not cover the corpus (" +
                                     std::to_string(order.order.size()) + " of " +
                                     std::to_string(corpus.size()) + " seeds)");
    std::map<std::string, const SeedProgram*> by_id;
    for (const auto& s : corpus.seeds) by_id[s.id] = &s;
    for (const auto& id : order.order)
        if (!by_id.count(id))
            throw Error("parameter", "order names unknown seed id \"" + id + "\"");
    std::set<std::string> uniq(order.order.begin(), order.order.end());
    if (uniq.size() != order.order.size())
        throw Error("parameter", "order repeats a seed id");

    const std::size_t count = budget_count(corpus.size(), k);
    const fs::path out_dir = fs::absolute(out_path).lexically_normal().parent_path();

    nlohmann::json doc;
    doc["name"] = corpus.name;
    doc["method"] = order.method;
    doc["rng_seed"] = order.rng_seed;
    doc["seeds"] = nlohmann::json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const SeedProgram& s = *by_id.at(order.order[i]);
        nlohmann::json js;
        js["id"] = s.id;
        if (s.source) js["source"] = detail::path_relative_to(*s.source, out_dir);
        if (s.ast) js["ast"] = detail::path_relative_to(*s.ast, out_dir);
        if (s.cfg) js["cfg"] = detail::path_relative_to(*s.cfg, out_dir);
        if (s.coverage) js["coverage"] = detail::path_relative_to(*s.coverage, out_dir);
        if (s.embedding) js["embedding"] = detail::path_relative_to(*s.embedding, out_dir);
        if (s.bug_count) js["bug_count"] = *s.bug_count;
        doc["seeds"].push_back(std::move(js));
    }
    atomic_write_file(out_path, doc.dump(2) + "\n");
    return count;
}

} // namespace seedsel

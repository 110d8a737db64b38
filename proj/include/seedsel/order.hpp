#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

// A full ranking of a corpus: every seed id exactly once, best first.
// Budgeted subsets are prefixes of this list.
struct SelectionOrder {
    std::string corpus;
    std::string method;
    std::string kind; // feature kind for feature-based methods, otherwise empty
    std::uint64_t rng_seed = 0;
    std::vector<std::string> order;
};

inline nlohmann::json to_json(const SelectionOrder& o) {
    nlohmann::json j;
    j["corpus"] = o.corpus;
    j["method"] = o.method;
    if (!o.kind.empty()) j["kind"] = o.kind;
    j["rng_seed"] = o.rng_seed;
    j["order"] = o.order;
    return j;
}

inline void save_order(const SelectionOrder& o, const std::filesystem::path& path) {
    atomic_write_file(path, to_json(o).dump(2) + "\n");
}

inline SelectionOrder load_order(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "order " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("corpus") || !j.contains("method") ||
        !j.contains("rng_seed") || !j.contains("order") || !j.at("order").is_array())
        throw Error("parse", "order " + path.string() +
                                 ": expected {corpus, method, rng_seed, order}");
    SelectionOrder o;
    o.corpus = j.at("corpus").get<std::string>();
    o.method = j.at("method").get<std::string>();
    if (j.contains("kind")) o.kind = j.at("kind").get<std::string>();
    if (!j.at("rng_seed").is_number_unsigned())
        throw Error("parse", "order " + path.string() + ": \"rng_seed\" must be a non-negative integer");
    o.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    for (const auto& e : j.at("order")) {
        if (!e.is_string())
            throw Error("parse", "order " + path.string() + ": \"order\" entries must be seed ids");
        o.order.push_back(e.get<std::string>());
    }
    return o;
}

} // namespace seedsel

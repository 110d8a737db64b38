#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/features.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

// Directed graph with a label per node. Parallel edges are collapsed;
// self-loops are kept.
struct CfgGraph {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint32_t>> succ;

    std::size_t node_count() const { return labels.size(); }

    // Deduplicating edge insert; keeps each successor list sorted.
    void add_edge(std::uint32_t from, std::uint32_t to) {
        auto& s = succ[from];
        const auto it = std::lower_bound(s.begin(), s.end(), to);
        if (it == s.end() || *it != to) s.insert(it, to);
    }

    std::uint32_t add_node(std::string label) {
        labels.push_back(std::move(label));
        succ.emplace_back();
        return static_cast<std::uint32_t>(labels.size() - 1);
    }
};

// Loads {"nodes": [{"id", "label"}, ...], "edges": [[from, to], ...]}.
// Node ids may be strings or integers; they are remapped to dense indices
// in declaration order.
inline CfgGraph load_cfg_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "cfg " + path.string() + ": " + e.what());
    }
    const std::string where = "cfg " + path.string();
    if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array() ||
        !j.contains("edges") || !j.at("edges").is_array())
        throw Error("parse", where + ": expected {nodes, edges}");

    CfgGraph g;
    std::unordered_map<std::string, std::uint32_t> index;
    for (const auto& jn : j.at("nodes")) {
        if (!jn.is_object() || !jn.contains("id") || !jn.contains("label") ||
            !jn.at("label").is_string())
            throw Error("parse", where + ": each node needs an \"id\" and a string \"label\"");
        const auto& jid = jn.at("id");
        std::string id;
        if (jid.is_string()) id = jid.get<std::string>();
        else if (jid.is_number_integer()) id = jid.dump();
        else throw Error("parse", where + ": node ids must be strings or integers");
        const std::string label = jn.at("label").get<std::string>();
        if (label.empty()) throw Error("validation", where + ": empty node label");
        if (index.count(id)) throw Error("validation", where + ": duplicate node id \"" + id + "\"");
        index.emplace(id, g.add_node(label));
    }
    for (const auto& je : j.at("edges")) {
        if (!je.is_array() || je.size() != 2)
            throw Error("parse", where + ": each edge must be a [from, to] pair");
        std::string ends[2];
        for (int k = 0; k < 2; ++k) {
            const auto& e = je[k];
            if (e.is_string()) ends[k] = e.get<std::string>();
            else if (e.is_number_integer()) ends[k] = e.dump();
            else throw Error("parse", where + ": edge endpoints must be node ids");
            if (!index.count(ends[k]))
                throw Error("validation", where + ": edge references unknown node \"" + ends[k] + "\"");
        }
        g.add_edge(index.at(ends[0]), index.at(ends[1]));
    }
    return g;
}

// Occurrence counts of label chains along directed walks of three node
// instances (two edges). Walks may revisit nodes, so cycles contribute; a
// lone node with a self-loop yields one walk visiting it three times.
inline std::map<std::string, std::uint64_t> count_cfg_3grams(const CfgGraph& g) {
    std::map<std::string, std::uint64_t> counts;
    for (std::uint32_t a = 0; a < g.node_count(); ++a)
        for (const std::uint32_t b : g.succ[a])
            for (const std::uint32_t c : g.succ[b])
                ++counts[chain_key(g.labels[a], g.labels[b], g.labels[c])];
    return counts;
}

} // namespace seedsel

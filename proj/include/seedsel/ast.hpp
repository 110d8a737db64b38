#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/features.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

struct AstNode {
    std::string kind;
    std::vector<AstNode> children;
};

namespace detail {

inline AstNode ast_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw Error("parse", where + ": each node must be an object with a string \"kind\"");
    AstNode node;
    node.kind = j.at("kind").get<std::string>();
    if (node.kind.empty()) throw Error("validation", where + ": empty node kind");
    if (j.contains("children")) {
        const auto& ch = j.at("children");
        if (!ch.is_array()) throw Error("parse", where + ": \"children\" must be an array");
        node.children.reserve(ch.size());
        for (const auto& c : ch) node.children.push_back(ast_from_json(c, where));
    }
    return node;
}

} // namespace detail

inline AstNode load_ast_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "ast " + path.string() + ": " + e.what());
    }
    return detail::ast_from_json(j, "ast " + path.string());
}

// Occurrence counts of vertical parent/child/grandchild kind chains. Every
// node contributes one chain per (child, grandchild) pair under it, so the
// total count equals the number of depth-3 paths in the tree.
inline std::map<std::string, std::uint64_t> count_ast_3grams(const AstNode& root) {
    std::map<std::string, std::uint64_t> counts;
    std::vector<const AstNode*> stack{&root};
    while (!stack.empty()) {
        const AstNode* u = stack.back();
        stack.pop_back();
        for (const AstNode& v : u->children) {
            for (const AstNode& w : v.children)
                ++counts[chain_key(u->kind, v.kind, w.kind)];
            stack.push_back(&v);
        }
    }
    return counts;
}

} // namespace seedsel

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

// One corpus entry. Side files are stored as absolute paths resolved against
// the manifest directory; source text is loaded eagerly so later stages never
// touch the filesystem for it.
struct SeedProgram {
    std::string id;
    std::optional<std::filesystem::path> source;
    std::optional<std::filesystem::path> ast;
    std::optional<std::filesystem::path> cfg;
    std::optional<std::filesystem::path> coverage;
    std::optional<std::filesystem::path> embedding;
    std::optional<std::uint64_t> bug_count;
    std::optional<std::string> source_text;
};

struct Corpus {
    std::string name;
    std::filesystem::path dir; // directory of the manifest it was loaded from
    std::vector<SeedProgram> seeds;

    std::size_t size() const { return seeds.size(); }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(seeds.size());
        for (const auto& s : seeds) out.push_back(s.id);
        return out;
    }
};

namespace detail {

inline std::filesystem::path resolve_side_path(const std::filesystem::path& dir,
                                               const std::string& rel) {
    std::filesystem::path p(rel);
    if (!p.is_absolute()) p = dir / p;
    return p.lexically_normal();
}

inline std::optional<std::string> optional_path_field(const nlohmann::json& seed,
                                                      const char* field,
                                                      const std::string& id) {
    if (!seed.contains(field)) return std::nullopt;
    const auto& v = seed.at(field);
    if (!v.is_string() || v.get<std::string>().empty())
        throw Error("validation", "seed \"" + id + "\": field \"" + field +
                                      "\" must be a non-empty path string");
    return v.get<std::string>();
}

} // namespace detail

// Loads a corpus manifest: {"name": ..., "seeds": [{"id", "source"?, "ast"?,
// "cfg"?, "coverage"?, "embedding"?, "bug_count"?}, ...]}. Relative side
// paths are resolved against the manifest's directory. Seed order in the
// file is the corpus order. Unknown fields are ignored.
inline Corpus load_manifest(const std::filesystem::path& manifest_path) {
    namespace fs = std::filesystem;
    const std::string text = read_text_file(manifest_path);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("seeds"))
        throw Error("parse", "manifest " + manifest_path.string() +
                                 ": expected object with \"name\" and \"seeds\"");
    if (!doc.at("name").is_string())
        throw Error("parse", "manifest " + manifest_path.string() + ": \"name\" must be a string");
    if (!doc.at("seeds").is_array())
        throw Error("parse", "manifest " + manifest_path.string() + ": \"seeds\" must be an array");

    Corpus corpus;
    corpus.name = doc.at("name").get<std::string>();
    corpus.dir = fs::absolute(manifest_path).lexically_normal().parent_path();

    const auto& seeds = doc.at("seeds");
    if (seeds.empty())
        throw Error("validation", "manifest " + manifest_path.string() + ": empty seed list");

    std::set<std::string> seen;
    for (const auto& js : seeds) {
        if (!js.is_object() || !js.contains("id") || !js.at("id").is_string())
            throw Error("parse", "manifest " + manifest_path.string() +
                                     ": each seed must be an object with a string \"id\"");
        SeedProgram seed;
        seed.id = js.at("id").get<std::string>();
        if (seed.id.empty())
            throw Error("validation", "manifest " + manifest_path.string() + ": empty seed id");
        if (!seen.insert(seed.id).second)
            throw Error("duplicate-id", "duplicate seed id \"" + seed.id + "\"");

        const auto src = detail::optional_path_field(js, "source", seed.id);
        const auto ast = detail::optional_path_field(js, "ast", seed.id);
        const auto cfg = detail::optional_path_field(js, "cfg", seed.id);
        const auto cov = detail::optional_path_field(js, "coverage", seed.id);
        const auto emb = detail::optional_path_field(js, "embedding", seed.id);
        if (src) seed.source = detail::resolve_side_path(corpus.dir, *src);
        if (ast) seed.ast = detail::resolve_side_path(corpus.dir, *ast);
        if (cfg) seed.cfg = detail::resolve_side_path(corpus.dir, *cfg);
        if (cov) seed.coverage = detail::resolve_side_path(corpus.dir, *cov);
        if (emb) seed.embedding = detail::resolve_side_path(corpus.dir, *emb);

        if (js.contains("bug_count")) {
            const auto& bc = js.at("bug_count");
            if (!bc.is_number_integer() || bc.is_number_float() || bc.get<std::int64_t>() < 0)
                throw Error("validation",
                            "seed \"" + seed.id + "\": \"bug_count\" must be a non-negative integer");
            seed.bug_count = bc.get<std::uint64_t>();
        }

        if (!seed.source && !seed.ast && !seed.cfg && !seed.coverage && !seed.embedding)
            throw Error("validation", "seed \"" + seed.id + "\": no usable representation " +
                                          "(need source, ast, cfg, coverage, or embedding)");

        if (seed.source) {
            seed.source_text = read_text_file(*seed.source);
            if (!valid_utf8(*seed.source_text))
                throw Error("parse", "source " + seed.source->string() + ": invalid UTF-8");
        }
        corpus.seeds.push_back(std::move(seed));
    }
    return corpus;
}

} // namespace seedsel

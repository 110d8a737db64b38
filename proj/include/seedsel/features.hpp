#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

enum class FeatureKind { token, ast3gram, cfg3gram, embedding };

inline const char* kind_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::token: return "token";
        case FeatureKind::ast3gram: return "ast3gram";
        case FeatureKind::cfg3gram: return "cfg3gram";
        case FeatureKind::embedding: return "embedding";
    }
    return "";
}

// Command-line spelling; "ts" selects token-stream features.
inline const char* cli_kind_name(FeatureKind k) {
    return k == FeatureKind::token ? "ts" : kind_name(k);
}

inline FeatureKind parse_cli_kind(const std::string& s) {
    if (s == "ts") return FeatureKind::token;
    if (s == "ast3gram") return FeatureKind::ast3gram;
    if (s == "cfg3gram") return FeatureKind::cfg3gram;
    if (s == "embedding") return FeatureKind::embedding;
    throw Error("usage", "unknown feature kind \"" + s + "\" (expected ts, ast3gram, cfg3gram, or embedding)");
}

// Maps feature keys (tokens, encoded 3-gram chains) to dense dimension ids.
// Ids are handed out contiguously from 0 in first-intern order and never
// reassigned; freeze() pins the mapping once a corpus pass is complete.
class DimensionRegistry {
public:
    explicit DimensionRegistry(FeatureKind kind) : kind_(kind) {}

    FeatureKind kind() const { return kind_; }

    std::uint32_t intern(const std::string& key) {
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        if (frozen_) throw Error("validation", "dimension registry is frozen; unknown key \"" + key + "\"");
        const auto id = static_cast<std::uint32_t>(keys_.size());
        ids_.emplace(key, id);
        keys_.push_back(key);
        return id;
    }

    std::optional<std::uint32_t> find(const std::string& key) const {
        auto it = ids_.find(key);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& key(std::uint32_t id) const {
        if (id >= keys_.size()) throw Error("parameter", "dimension id out of range");
        return keys_[id];
    }

    std::size_t size() const { return keys_.size(); }
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

private:
    FeatureKind kind_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> keys_;
    bool frozen_ = false;
};

// A labelled chain of three: parent/child/grandchild for trees, a directed
// walk for graphs. Encoded with '|' separators; separator and backslash in
// labels are escaped so the encoding stays injective.
struct NGramChain {
    std::array<std::string, 3> labels;

    std::string key() const {
        std::string out;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i) out.push_back('|');
            for (const char c : labels[i]) {
                if (c == '\\' || c == '|') out.push_back('\\');
                out.push_back(c);
            }
        }
        return out;
    }
};

inline std::string chain_key(const std::string& a, const std::string& b, const std::string& c) {
    return NGramChain{{a, b, c}}.key();
}

// One seed's feature vector. Sparse kinds carry (dimension id, weight)
// entries in ascending id order with no explicit zeros; the embedding kind
// carries a dense array instead.
struct FeatureVector {
    std::string seed_id;
    FeatureKind kind = FeatureKind::token;
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::vector<double> dense;

    bool is_dense() const { return kind == FeatureKind::embedding; }
};

inline nlohmann::json registry_to_json(const DimensionRegistry& reg) {
    nlohmann::json entries = nlohmann::json::object();
    for (std::uint32_t id = 0; id < reg.size(); ++id) entries[reg.key(id)] = id;
    return nlohmann::json{{"kind", kind_name(reg.kind())}, {"entries", std::move(entries)}};
}

inline void save_registry(const DimensionRegistry& reg, const std::filesystem::path& path) {
    atomic_write_file(path, registry_to_json(reg).dump(2) + "\n");
}

inline DimensionRegistry load_registry(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "registry " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("entries") || !j.at("entries").is_object())
        throw Error("parse", "registry " + path.string() + ": expected {kind, entries}");
    const std::string ks = j.at("kind").get<std::string>();
    FeatureKind kind;
    if (ks == "token") kind = FeatureKind::token;
    else if (ks == "ast3gram") kind = FeatureKind::ast3gram;
    else if (ks == "cfg3gram") kind = FeatureKind::cfg3gram;
    else throw Error("parse", "registry " + path.string() + ": unknown kind \"" + ks + "\"");

    const auto& entries = j.at("entries");
    std::vector<std::string> keys(entries.size());
    for (const auto& [key, val] : entries.items()) {
        if (!val.is_number_unsigned() || val.get<std::uint64_t>() >= entries.size())
            throw Error("validation", "registry " + path.string() + ": ids must be contiguous from 0");
        auto& slot = keys[val.get<std::size_t>()];
        if (!slot.empty())
            throw Error("validation", "registry " + path.string() + ": duplicate id for key \"" + key + "\"");
        slot = key;
    }
    DimensionRegistry reg(kind);
    for (const auto& key : keys) reg.intern(key);
    reg.freeze();
    return reg;
}

// Feature records as JSON lines, one object per seed in corpus order:
// {"seed_id", "kind", "dims": {"<dim-id>": weight}}. Dense vectors list
// every position; sparse ones list only their nonzero entries.
inline void save_features_jsonl(const std::vector<FeatureVector>& vectors,
                                const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& v : vectors) {
        nlohmann::json dims = nlohmann::json::object();
        if (v.is_dense()) {
            for (std::size_t d = 0; d < v.dense.size(); ++d) dims[std::to_string(d)] = v.dense[d];
        } else {
            for (const auto& [d, w] : v.entries) dims[std::to_string(d)] = w;
        }
        nlohmann::json rec{{"seed_id", v.seed_id}, {"kind", kind_name(v.kind)}, {"dims", std::move(dims)}};
        out << rec.dump() << "\n";
    }
    atomic_write_file(path, out.str());
}

inline std::vector<FeatureVector> load_features_jsonl(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<FeatureVector> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("parse", "features " + path.string() + " line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        if (!j.is_object() || !j.contains("seed_id") || !j.contains("kind") ||
            !j.contains("dims") || !j.at("dims").is_object())
            throw Error("parse", "features " + path.string() + " line " + std::to_string(lineno) +
                                     ": expected {seed_id, kind, dims}");
        FeatureVector v;
        v.seed_id = j.at("seed_id").get<std::string>();
        const std::string ks = j.at("kind").get<std::string>();
        if (ks == "token") v.kind = FeatureKind::token;
        else if (ks == "ast3gram") v.kind = FeatureKind::ast3gram;
        else if (ks == "cfg3gram") v.kind = FeatureKind::cfg3gram;
        else if (ks == "embedding") v.kind = FeatureKind::embedding;
        else throw Error("parse", "features " + path.string() + " line " + std::to_string(lineno) +
                                     ": unknown kind \"" + ks + "\"");

        std::map<std::uint32_t, double> dims;
        for (const auto& [key, val] : j.at("dims").items()) {
            std::uint32_t d = 0;
            try {
                std::size_t pos = 0;
                const unsigned long parsed = std::stoul(key, &pos);
                if (pos != key.size()) throw std::invalid_argument(key);
                d = static_cast<std::uint32_t>(parsed);
            } catch (const std::exception&) {
                throw Error("parse", "features " + path.string() + " line " + std::to_string(lineno) +
                                         ": bad dimension id \"" + key + "\"");
            }
            if (!val.is_number())
                throw Error("parse", "features " + path.string() + " line " + std::to_string(lineno) +
                                         ": weights must be numbers");
            dims[d] = val.get<double>();
        }
        if (v.is_dense()) {
            std::size_t m = 0;
            for (const auto& [d, w] : dims) m = std::max<std::size_t>(m, d + 1);
            v.dense.assign(m, 0.0);
            for (const auto& [d, w] : dims) v.dense[d] = w;
        } else {
            v.entries.assign(dims.begin(), dims.end());
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace seedsel

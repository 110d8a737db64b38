#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seedsel/error.hpp"
#include "seedsel/fsio.hpp"

namespace seedsel {

struct CrashRecord {
    std::string seed_id;
    std::string run_id;
    std::string corpus;
    std::string message;
};

// Version tag for the message normalization below; recorded in reports so
// keys from different tool versions are never compared silently.
inline constexpr const char* kNormalizationRules = "norm-v1";

// Scrubs run-specific noise out of a crash message, in this order:
// timestamps, absolute paths (Unix and Windows), hex addresses, thread ids,
// then whitespace collapsed to single spaces and trimmed. Applying it twice
// changes nothing, so stored keys can be re-normalized safely.
inline std::string normalize_message(const std::string& message) {
    static const std::regex date_time(
        R"(\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:?\d{2})?)");
    static const std::regex clock_time(R"(\b\d{2}:\d{2}:\d{2}(\.\d+)?\b)");
    static const std::regex unix_path(R"((^|[\s:=("'\[])((/[A-Za-z0-9_.+$~@%-]+)+/?))");
    static const std::regex windows_path(R"((^|[\s:=("'\[])([A-Za-z]:[\\/][A-Za-z0-9_.+$~@%\\/-]*))");
    static const std::regex hex_addr(R"(\b0[xX][0-9a-fA-F]+\b)");
    static const std::regex thread_id(R"(\b([Tt]hread|[Tt]id|TID)[ #:=-]*\d+)");
    static const std::regex spaces(R"([ \t\r\n\f\v]+)");

    std::string s = std::regex_replace(message, date_time, "<timestamp>");
    s = std::regex_replace(s, clock_time, "<timestamp>");
    s = std::regex_replace(s, unix_path, "$1<path>");
    s = std::regex_replace(s, windows_path, "$1<path>");
    s = std::regex_replace(s, hex_addr, "<addr>");
    s = std::regex_replace(s, thread_id, "thread <tid>");
    s = std::regex_replace(s, spaces, " ");
    if (!s.empty() && s.front() == ' ') s.erase(s.begin());
    if (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

// Crash records as JSON lines: {"seed_id", "run_id", "corpus", "message"}.
// A message that normalizes to nothing carries no signal and is rejected.
inline std::vector<CrashRecord> load_crash_records(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<CrashRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = "crash records " + path.string() + " line " + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("parse", where + ": " + e.what());
        }
        if (!j.is_object()) throw Error("parse", where + ": expected an object");
        CrashRecord rec;
        for (auto [field, target] : {std::pair<const char*, std::string*>{"seed_id", &rec.seed_id},
                                     {"run_id", &rec.run_id},
                                     {"corpus", &rec.corpus},
                                     {"message", &rec.message}}) {
            if (!j.contains(field) || !j.at(field).is_string())
                throw Error("parse", where + ": missing string field \"" + field + "\"");
            *target = j.at(field).get<std::string>();
        }
        if (normalize_message(rec.message).empty())
            throw Error("validation", where + ": message is empty after normalization");
        out.push_back(std::move(rec));
    }
    return out;
}

// Unique inconsistency keys: normalized messages, deduplicated and sorted.
// Sorting makes the result a pure function of the record multiset, so
// reordering the input cannot change the output.
inline std::vector<std::string> dedup_keys(const std::vector<CrashRecord>& records) {
    std::set<std::string> keys;
    for (const auto& r : records) keys.insert(normalize_message(r.message));
    return {keys.begin(), keys.end()};
}

struct NamedKeySet {
    std::string name;
    std::vector<std::string> keys;
};

// Venn-style breakdown of two or three key sets: per-set totals plus one
// count per exclusive region, keyed by the member names joined with "&".
struct OverlapReport {
    std::vector<std::string> names;
    std::vector<std::size_t> totals;
    std::vector<std::pair<std::string, std::size_t>> cells; // region -> unique keys
};

inline OverlapReport overlap_report(const std::vector<NamedKeySet>& sets) {
    if (sets.size() < 2 || sets.size() > 3)
        throw Error("parameter", "overlap needs two or three key sets, got " +
                                     std::to_string(sets.size()));
    std::set<std::string> names;
    for (const auto& s : sets)
        if (!names.insert(s.name).second)
            throw Error("parameter", "duplicate set name \"" + s.name + "\"");

    OverlapReport report;
    std::map<std::string, unsigned> membership;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        report.names.push_back(sets[i].name);
        const std::set<std::string> uniq(sets[i].keys.begin(), sets[i].keys.end());
        report.totals.push_back(uniq.size());
        for (const auto& k : uniq) membership[k] |= (1u << i);
    }
    std::vector<std::size_t> counts(std::size_t{1} << sets.size(), 0);
    for (const auto& [k, mask] : membership) ++counts[mask];
    for (unsigned mask = 1; mask < counts.size(); ++mask) {
        std::string label;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (mask & (1u << i)) {
                if (!label.empty()) label += "&";
                label += sets[i].name;
            }
        }
        report.cells.emplace_back(std::move(label), counts[mask]);
    }
    return report;
}

inline nlohmann::json overlap_to_json(const OverlapReport& r) {
    nlohmann::json totals = nlohmann::json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) totals[r.names[i]] = r.totals[i];
    nlohmann::json cells = nlohmann::json::object();
    for (const auto& [label, count] : r.cells) cells[label] = count;
    return nlohmann::json{{"sets", std::move(totals)}, {"cells", std::move(cells)}};
}

inline std::string overlap_table(const OverlapReport& r) {
    std::size_t w = 4;
    for (const auto& name : r.names) w = std::max(w, name.size());
    for (const auto& [label, count] : r.cells) w = std::max(w, label.size());
    std::ostringstream out;
    out << "set" << std::string(w - 3, ' ') << "  total\n";
    for (std::size_t i = 0; i < r.names.size(); ++i)
        out << r.names[i] << std::string(w - r.names[i].size(), ' ') << "  " << r.totals[i] << "\n";
    out << "\ncell" << std::string(w - 4, ' ') << "  unique\n";
    for (const auto& [label, count] : r.cells)
        out << label << std::string(w - label.size(), ' ') << "  " << count << "\n";
    return out.str();
}

// Mean of per-run counts; the run count is fixed up front and enforced.
inline double average_runs(const std::vector<double>& per_run_counts, std::size_t repetitions) {
    if (repetitions == 0) throw Error("parameter", "repetitions must be positive");
    if (per_run_counts.size() != repetitions)
        throw Error("parameter", "expected " + std::to_string(repetitions) + " per-run counts, got " +
                                     std::to_string(per_run_counts.size()));
    double sum = 0.0;
    for (const auto x : per_run_counts) sum += x;
    return sum / static_cast<double>(repetitions);
}

// Reported averages round to one decimal place.
inline std::string format_one_decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", x);
    return buf;
}

} // namespace seedsel

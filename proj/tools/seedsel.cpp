// Command-line front end: corpus feature extraction, seed ordering and
// budgeted subsets, coverage checks, and crash-report analysis.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedsel/analysis.hpp"
#include "seedsel/coverage.hpp"
#include "seedsel/error.hpp"
#include "seedsel/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using seedsel::Error;

unsigned checked_jobs(unsigned jobs) {
    if (jobs == 0) throw Error("parameter", "jobs must be positive");
    return jobs;
}

std::vector<std::string> load_key_file(const fs::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(seedsel::read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "keys " + path.string() + ": " + e.what());
    }
    // Either a plain JSON array of keys or a dedup report with a "keys" field.
    const nlohmann::json* arr = nullptr;
    if (j.is_array()) arr = &j;
    else if (j.is_object() && j.contains("keys") && j.at("keys").is_array()) arr = &j.at("keys");
    else throw Error("parse", "keys " + path.string() + ": expected an array or {\"keys\": [...]}");
    std::vector<std::string> out;
    for (const auto& e : *arr) {
        if (!e.is_string())
            throw Error("parse", "keys " + path.string() + ": keys must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<double> load_counts_file(const fs::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(seedsel::read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", "counts " + path.string() + ": " + e.what());
    }
    if (!j.is_array()) throw Error("parse", "counts " + path.string() + ": expected a JSON array");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number())
            throw Error("parse", "counts " + path.string() + ": counts must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus distillation for fuzzing seeds: feature extraction, "
                 "seed ordering, budgeted subsets, and crash-report analysis"};
    app.require_subcommand(1);

    std::string manifest, kind, method, order_file, records_file, counts_file, set_name = "crashes";
    std::string out;
    std::vector<std::string> key_specs;
    double budget = 0.0;
    std::uint64_t rng_seed = 0;
    unsigned jobs = 1;
    std::optional<std::uint64_t> repetitions;

    const std::vector<std::string> kinds{"ts", "ast3gram", "cfg3gram", "embedding"};
    const std::vector<std::string> methods{"fiss", "ciss-p", "ciss-m", "piss", "random"};

    auto* extract = app.add_subcommand("extract", "Extract feature vectors for every seed");
    extract->add_option("--manifest", manifest, "Corpus manifest")->required();
    extract->add_option("--kind", kind, "Feature kind")
        ->required()
        ->check(CLI::IsMember(kinds));
    extract->add_option("--jobs", jobs, "Worker threads");
    extract->add_option("--out", out, "Output directory")->required();

    auto* select = app.add_subcommand("select", "Order the corpus and emit a budgeted subset");
    select->add_option("--manifest", manifest, "Corpus manifest")->required();
    select->add_option("--method", method, "Selection method")
        ->required()
        ->check(CLI::IsMember(methods));
    select->add_option("--kind", kind, "Feature kind (fiss only)")->check(CLI::IsMember(kinds));
    select->add_option("--budget", budget, "Budget fraction in (0, 1]")->required();
    select->add_option("--rng-seed", rng_seed, "Seed for tie-breaking randomness");
    select->add_option("--jobs", jobs, "Worker threads");
    select->add_option("--out", out, "Output directory")->required();

    auto* subset = app.add_subcommand("subset", "Cut a budgeted subset from an existing order");
    subset->add_option("--manifest", manifest, "Corpus manifest")->required();
    subset->add_option("--order", order_file, "Order file from select")->required();
    subset->add_option("--budget", budget, "Budget fraction in (0, 1]")->required();
    subset->add_option("--out", out, "Output subset manifest path")->required();

    auto* covval = app.add_subcommand("coverage-validate", "Check every seed's coverage bitmap");
    covval->add_option("--manifest", manifest, "Corpus manifest")->required();
    covval->add_option("--jobs", jobs, "Worker threads");

    auto* analyze = app.add_subcommand("analyze", "Crash-report analysis");
    analyze->require_subcommand(1);

    auto* dedup = analyze->add_subcommand("dedup", "Deduplicate crash records into unique keys");
    dedup->add_option("--records", records_file, "Crash records (JSON lines)")->required();
    dedup->add_option("--name", set_name, "Label for the key set");
    dedup->add_option("--out", out, "Write a JSON report here");

    auto* overlap = analyze->add_subcommand("overlap", "Venn breakdown of key sets");
    overlap->add_option("--keys", key_specs, "NAME=PATH of a key set (two or three times)")
        ->required()
        ->expected(2, 3);
    overlap->add_option("--out", out, "Write a JSON report here");

    auto* average = analyze->add_subcommand("average", "Average per-run unique counts");
    average->add_option("--counts", counts_file, "JSON array of per-run counts")->required();
    average->add_option("--repetitions", repetitions, "Expected number of runs");
    average->add_option("--out", out, "Write a JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (extract->parsed()) {
            const auto outcome = seedsel::run_extract(manifest, seedsel::parse_cli_kind(kind),
                                                      checked_jobs(jobs), out);
            std::cout << "extracted " << outcome.seeds << " " << kind << " records -> "
                      << outcome.features_path.string() << "\n";
        } else if (select->parsed()) {
            std::optional<seedsel::FeatureKind> fk;
            if (!kind.empty()) fk = seedsel::parse_cli_kind(kind);
            const auto outcome = seedsel::run_select(manifest, method, fk, budget, rng_seed,
                                                     checked_jobs(jobs), out);
            std::cout << "selected " << outcome.subset_size << " of " << outcome.corpus_size
                      << " seeds -> " << outcome.subset_path.string() << "\n";
        } else if (subset->parsed()) {
            const auto corpus = seedsel::load_manifest(manifest);
            const auto order = seedsel::load_order(order_file);
            const auto count = seedsel::save_subset(corpus, order, budget, out);
            std::cout << "selected " << count << " of " << corpus.size() << " seeds -> " << out
                      << "\n";
        } else if (covval->parsed()) {
            const auto corpus = seedsel::load_manifest(manifest);
            const auto bitmaps = seedsel::load_coverage(corpus, checked_jobs(jobs));
            const auto u = seedsel::union_coverage(bitmaps);
            std::cout << "ok: " << corpus.size() << " seeds, width " << u.width << ", union covers "
                      << u.popcount() << "\n";
        } else if (dedup->parsed()) {
            const auto records = seedsel::load_crash_records(records_file);
            const auto keys = seedsel::dedup_keys(records);
            std::cout << "unique inconsistencies: " << keys.size() << "\n";
            if (!out.empty()) {
                nlohmann::json report{{"name", set_name},
                                      {"rules", seedsel::kNormalizationRules},
                                      {"count", keys.size()},
                                      {"keys", keys}};
                seedsel::atomic_write_file(out, report.dump(2) + "\n");
            }
        } else if (overlap->parsed()) {
            std::vector<seedsel::NamedKeySet> sets;
            for (const auto& item : key_specs) {
                const auto eq = item.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
                    throw Error("usage", "--keys expects NAME=PATH, got \"" + item + "\"");
                sets.push_back({item.substr(0, eq), load_key_file(item.substr(eq + 1))});
            }
            const auto report = seedsel::overlap_report(sets);
            std::cout << seedsel::overlap_table(report);
            if (!out.empty())
                seedsel::atomic_write_file(out, seedsel::overlap_to_json(report).dump(2) + "\n");
        } else if (average->parsed()) {
            const auto counts = load_counts_file(counts_file);
            const auto reps = repetitions ? *repetitions : counts.size();
            const double mean = seedsel::average_runs(counts, reps);
            const std::string formatted = seedsel::format_one_decimal(mean);
            std::cout << formatted << "\n";
            if (!out.empty()) {
                nlohmann::json report{{"repetitions", reps},
                                      {"values", counts},
                                      {"mean", mean},
                                      {"formatted", formatted}};
                seedsel::atomic_write_file(out, report.dump(2) + "\n");
            }
        }
    } catch (const Error& e) {
        std::cerr << e.diagnostic() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

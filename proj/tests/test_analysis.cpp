#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>

#include "seedsel/analysis.hpp"
#include "seedsel/rng.hpp"
#include "support/tempdir.hpp"

namespace fs = std::filesystem;
using seedsel::CrashRecord;
using seedsel::dedup_keys;
using seedsel::Error;
using seedsel::normalize_message;
using testsupport::TempDir;

namespace {

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

CrashRecord rec(const std::string& message) { return {"s", "r", "c", message}; }

} // namespace

TEST_CASE("normalization scrubs paths, addresses, timestamps, and thread ids") {
    CHECK(normalize_message("crash at 0x1f3a in /usr/lib/foo.so") == "crash at <addr> in <path>");
    CHECK(normalize_message("open C:\\temp\\x.dll failed") == "open <path> failed");
    CHECK(normalize_message("thread 123 died") == "thread <tid> died");
    CHECK(normalize_message("tid=42 died") == "thread <tid> died");
    CHECK(normalize_message("at 2024-01-02 10:11:12 boom") == "at <timestamp> boom");
    CHECK(normalize_message("at 10:11:12.003 boom") == "at <timestamp> boom");
    CHECK(normalize_message("  a \t b\n\nc ") == "a b c");
    CHECK(normalize_message("value 4/2 stays") == "value 4/2 stays"); // not a path
    CHECK(normalize_message("index 17 stays") == "index 17 stays");   // bare numbers stay
}

TEST_CASE("normalization is idempotent") {
    const std::vector<std::string> messages{
        "crash at 0xdead in /opt/bar.so thread 7 at 2023-12-31 23:59:59",
        "thread 12 hit 0xbeef", "plain message", "  spaced   out  "};
    for (const auto& m : messages) {
        const auto once = normalize_message(m);
        CHECK(normalize_message(once) == once);
    }
}

TEST_CASE("messages differing only in scrubbed fields deduplicate to one key") {
    const std::vector<CrashRecord> records{
        rec("crash at 0x1f3a in /usr/lib/foo.so thread 123 at 2024-01-02 10:11:12"),
        rec("crash at 0xdead in /opt/bar.so thread 7 at 2023-12-31 23:59:59")};
    const auto keys = dedup_keys(records);
    REQUIRE(keys.size() == 1);
    CHECK(keys[0] == "crash at <addr> in <path> thread <tid> at <timestamp>");
}

TEST_CASE("dedup is order-independent and idempotent") {
    std::vector<CrashRecord> records;
    seedsel::SplitMix64 rng(11);
    for (int i = 0; i < 40; ++i) {
        const auto variant = rng.below(4);
        records.push_back(rec("fault " + std::to_string(variant) + " at 0x" +
                              std::to_string(1000 + rng.below(9000)) + "beef"));
    }
    const auto keys = dedup_keys(records);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(keys.size() == 4);

    auto shuffled = records;
    rng.shuffle(shuffled);
    CHECK(dedup_keys(shuffled) == keys);

    std::vector<CrashRecord> as_records;
    for (const auto& k : keys) as_records.push_back(rec(k));
    CHECK(dedup_keys(as_records) == keys);
}

TEST_CASE("crash record files parse and validate per line") {
    TempDir dir("crash");
    write_file(dir.file("ok.jsonl"),
               R"({"seed_id": "a", "run_id": "r1", "corpus": "P1", "message": "boom at 0x12"})"
               "\n"
               R"({"seed_id": "b", "run_id": "r1", "corpus": "P1", "message": "boom at 0x99"})"
               "\n");
    const auto records = seedsel::load_crash_records(dir.file("ok.jsonl"));
    REQUIRE(records.size() == 2);
    CHECK(records[0].seed_id == "a");
    CHECK(dedup_keys(records).size() == 1);

    write_file(dir.file("missing.jsonl"), R"({"seed_id": "a", "run_id": "r", "corpus": "c"})");
    CHECK_THROWS_AS(seedsel::load_crash_records(dir.file("missing.jsonl")), Error);

    write_file(dir.file("badjson.jsonl"), "{nope}");
    CHECK_THROWS_AS(seedsel::load_crash_records(dir.file("badjson.jsonl")), Error);

    write_file(dir.file("empty-msg.jsonl"),
               R"({"seed_id": "a", "run_id": "r", "corpus": "c", "message": "   "})");
    try {
        seedsel::load_crash_records(dir.file("empty-msg.jsonl"));
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.code() == "validation");
    }
}

TEST_CASE("overlap reports carry totals and exclusive cells") {
    std::vector<seedsel::NamedKeySet> sets(3);
    sets[0].name = "P1";
    sets[1].name = "P2";
    sets[2].name = "P3";
    // exclusive regions 19/14/8, pairwise extras 3/2/1, one key in all three
    auto add = [](seedsel::NamedKeySet& s, const std::string& prefix, int count) {
        for (int i = 0; i < count; ++i) s.keys.push_back(prefix + std::to_string(i));
    };
    add(sets[0], "only1-", 19);
    add(sets[1], "only2-", 14);
    add(sets[2], "only3-", 8);
    for (int i = 0; i < 3; ++i) {
        sets[0].keys.push_back("p12-" + std::to_string(i));
        sets[1].keys.push_back("p12-" + std::to_string(i));
    }
    for (int i = 0; i < 2; ++i) {
        sets[0].keys.push_back("p13-" + std::to_string(i));
        sets[2].keys.push_back("p13-" + std::to_string(i));
    }
    sets[1].keys.push_back("p23-0");
    sets[2].keys.push_back("p23-0");
    for (auto& s : sets) s.keys.push_back("all");

    const auto report = seedsel::overlap_report(sets);
    const std::map<std::string, std::size_t> cells(report.cells.begin(), report.cells.end());
    CHECK(cells.at("P1") == 19);
    CHECK(cells.at("P2") == 14);
    CHECK(cells.at("P3") == 8);
    CHECK(cells.at("P1&P2") == 3);
    CHECK(cells.at("P1&P3") == 2);
    CHECK(cells.at("P2&P3") == 1);
    CHECK(cells.at("P1&P2&P3") == 1);
    CHECK(report.totals == std::vector<std::size_t>{25, 19, 12});

    // cells partition each set: total = sum of regions containing it
    CHECK(report.totals[0] == cells.at("P1") + cells.at("P1&P2") + cells.at("P1&P3") +
                                  cells.at("P1&P2&P3"));

    const auto table = seedsel::overlap_table(report);
    CHECK(table.find("P1&P2&P3") != std::string::npos);
    const auto json = seedsel::overlap_to_json(report);
    CHECK(json.at("cells").at("P1").get<std::size_t>() == 19);
}

TEST_CASE("overlap input is validated") {
    seedsel::NamedKeySet a{"A", {"k"}};
    seedsel::NamedKeySet b{"B", {"k"}};
    CHECK_THROWS_AS(seedsel::overlap_report({a}), Error);
    CHECK_THROWS_AS(seedsel::overlap_report({a, b, a, b}), Error);
    CHECK_THROWS_AS(seedsel::overlap_report({a, a}), Error);
    CHECK(seedsel::overlap_report({a, b}).cells.size() == 3);
}

TEST_CASE("duplicate keys inside one set count once") {
    const seedsel::NamedKeySet a{"A", {"k", "k", "j"}};
    const seedsel::NamedKeySet b{"B", {"j"}};
    const auto report = seedsel::overlap_report({a, b});
    CHECK(report.totals == std::vector<std::size_t>{2, 1});
    const std::map<std::string, std::size_t> cells(report.cells.begin(), report.cells.end());
    CHECK(cells.at("A") == 1);
    CHECK(cells.at("A&B") == 1);
    CHECK(cells.at("B") == 0);
}

TEST_CASE("run averages use the declared repetition count and one decimal") {
    CHECK(seedsel::average_runs({5, 6, 5, 5, 6}, 5) == 5.4);
    CHECK(seedsel::format_one_decimal(seedsel::average_runs({5, 6, 5, 5, 6}, 5)) == "5.4");
    CHECK(seedsel::format_one_decimal(seedsel::average_runs({1, 2}, 2)) == "1.5");
    CHECK(seedsel::format_one_decimal(seedsel::average_runs({7}, 1)) == "7.0");
    CHECK_THROWS_AS(seedsel::average_runs({1, 2, 3}, 5), Error);
    CHECK_THROWS_AS(seedsel::average_runs({}, 0), Error);
}

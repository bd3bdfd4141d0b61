#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mvx/errors.hpp"
#include "mvx/metrics.hpp"

using namespace mvx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path = fs::temp_directory_path() / ("mvx-metrics-" + std::to_string(stamp));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& name, const std::string& text) const {
        std::ofstream out(path / name, std::ios::binary);
        out << text;
    }
};

const char* kMiniMeta = R"({
  "name": "shop",
  "classes": [
    {"name": "Order",
     "attributes": [{"name": "totalPrice", "type": "Real", "lower": 1, "upper": 1}],
     "references": [{"name": "items", "target": "Item", "lower": 0, "upper": -1, "containment": true}]},
    {"name": "Item",
     "attributes": [{"name": "price", "type": "Real", "lower": 1, "upper": 1}]}
  ]
})";

const char* kMiniModel = R"({"objects": [
  {"id": "O1", "class": "Order", "slots": {"totalPrice": 0, "items": []}}]})";

const char* kMiniCorpus = R"json({
  "fixtures": {"shop": {"metamodel": "mm.json", "model": "model.json"}},
  "entries": [
    {"id": "z-store", "category": "any",
     "ocl": "Order.allInstances()->size()", "navex": "Order.allInstances.length",
     "fixture": "shop", "expected": "1"},
    {"id": "a-add", "category": "number",
     "ocl": "1 + 2", "navex": "1 + 2", "fixture": "shop", "expected": "3"},
    {"id": "m-mixed", "category": "number",
     "ocl": "2 + 2", "navex": "\"2\" + \"2\"", "fixture": "shop", "expected": "4"},
    {"id": "o-only", "category": "collection",
     "ocl": "self.items->size()", "fixture": "shop", "context": "O1",
     "notes": "no counterpart recorded"},
    {"id": "d-decl", "category": "boolean",
     "ocl": "context Order inv itemsNonEmpty: self.items->size() > 0",
     "navex": "data.$items.values.length > 0",
     "fixture": "shop", "context": "O1", "expected": "false"},
    {"id": "c-contract", "category": "contract",
     "ocl": "context Order::ship(): Boolean\npre: self.items->size() > 0\n",
     "fixture": "shop", "context": "O1"}
  ]
})json";

CorpusReport miniReport(const TempDir& dir) {
    dir.write("mm.json", kMiniMeta);
    dir.write("model.json", kMiniModel);
    auto corpus = load_corpus(kMiniCorpus);
    return run_corpus(corpus, dir.path.string());
}

const EntryResult& entryById(const CorpusReport& report, const std::string& id) {
    for (const auto& e : report.entries) {
        if (e.id == id) return e;
    }
    REQUIRE(false);
    return report.entries.front();
}

} // namespace

TEST_CASE("coc counts non-whitespace characters, by hand") {
    CHECK(coc("context") == 7);
    CHECK(coc("Order") == 5);
    CHECK(coc("inv:") == 4);
    CHECK(coc("self.items->size()") == 18);
    CHECK(coc(">") == 1);
    CHECK(coc("0") == 1);
    CHECK(coc("context Order inv: self.items->size() > 0") == 36);
    CHECK(coc("") == 0);
    CHECK(coc(" \t\r\n") == 0);
    CHECK(coc("a b") == 2);
    CHECK(coc("-- a comment") == 10);
}

TEST_CASE("coc counts characters, not bytes") {
    CHECK(coc("héllo") == 5);
    CHECK(coc("é") == 1);
    CHECK(coc("héllo wörld") == 10);
}

TEST_CASE("coc is additive under concatenation and blind to whitespace") {
    const std::vector<std::string> tokens = {
        "a",  "Z",  "1",  ".",  "-",  ">",  "(",  ")",  "self", "size",
        "é",  "λ",  "->", "{",  "}",  "'",  "|",  "=",  " ",    "\t",
        "\n", "\r", "  ", "\r\n"};
    std::mt19937 rng(20260815u);
    std::uniform_int_distribution<std::size_t> pick(0, tokens.size() - 1);
    std::uniform_int_distribution<int> len(0, 40);

    auto randomText = [&] {
        std::string s;
        int n = len(rng);
        for (int i = 0; i < n; ++i) s += tokens[pick(rng)];
        return s;
    };
    auto stripWhitespace = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
            out += c;
        }
        return out;
    };

    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
        std::string a = randomText();
        std::string b = randomText();
        CHECK(coc(a + b) == coc(a) + coc(b));
        CHECK(coc(a) == coc(stripWhitespace(a)));
        CHECK(coc(" " + a + "\n") == coc(a));
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    CHECK(elapsed < 5000);
}

TEST_CASE("corpus documents are validated structurally") {
    CHECK_THROWS_AS(load_corpus("[]"), Error);
    CHECK_THROWS_AS(load_corpus("{\"entries\": []}"), Error);
    CHECK_THROWS_AS(load_corpus("{\"fixtures\": {}}"), Error);
    CHECK_THROWS_AS(
        load_corpus(R"({"fixtures": {}, "entries": [{"category": "x", "ocl": "1", "fixture": "f"}]})"),
        Error);
    CHECK_THROWS_AS(
        load_corpus(R"({"fixtures": {}, "entries": [{"id": "e", "category": "x", "fixture": "f"}]})"),
        Error);
    try {
        load_corpus(R"({"fixtures": {},
                        "entries": [{"id": "e", "category": "x", "ocl": "1", "fixture": "f"},
                                    {"id": "e", "category": "x", "ocl": "2", "fixture": "f"}]})");
        FAIL("duplicate id accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Schema);
    }

    auto corpus = load_corpus(kMiniCorpus);
    CHECK(corpus.fixtures.size() == 1);
    CHECK(corpus.entries.size() == 6);
    CHECK(corpus.entries[3].notes == "no counterpart recorded");
}

TEST_CASE("unknown fixtures and context objects abort the run") {
    TempDir dir;
    dir.write("mm.json", kMiniMeta);
    dir.write("model.json", kMiniModel);
    auto ghostFixture = load_corpus(
        R"({"fixtures": {}, "entries": [{"id": "e", "category": "x", "ocl": "1", "fixture": "f"}]})");
    CHECK_THROWS_AS(run_corpus(ghostFixture, dir.path.string()), Error);

    auto ghostContext = load_corpus(
        R"({"fixtures": {"shop": {"metamodel": "mm.json", "model": "model.json"}},
            "entries": [{"id": "e", "category": "x", "ocl": "self.totalPrice",
                         "fixture": "shop", "context": "O9"}]})");
    try {
        run_corpus(ghostContext, dir.path.string());
        FAIL("missing context object accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownContextObject);
    }
}

TEST_CASE("run_corpus pairs verdicts and reports per-entry agreement") {
    TempDir dir;
    auto report = miniReport(dir);
    REQUIRE(report.entries.size() == 6);

    const auto& add = entryById(report, "a-add");
    CHECK(add.paired);
    CHECK(add.agree);
    CHECK(add.oclVerdict == "3");
    CHECK(add.navexVerdict == "3");
    CHECK(add.cocOcl == coc("1 + 2"));
    CHECK(add.notes.empty());

    const auto& mixed = entryById(report, "m-mixed");
    CHECK(mixed.paired);
    CHECK_FALSE(mixed.agree);
    CHECK(mixed.oclVerdict == "4");
    CHECK(mixed.navexVerdict == "'22'");
    CHECK(mixed.notes.find("navex deviates from expected 4") != std::string::npos);

    const auto& only = entryById(report, "o-only");
    CHECK_FALSE(only.paired);
    CHECK(only.oclVerdict == "0");
    CHECK_FALSE(only.navexVerdict.has_value());
    CHECK_FALSE(only.cocNavex.has_value());
    CHECK(only.notes == "no counterpart recorded");
}

TEST_CASE("single-invariant declarations run while contracts only parse") {
    TempDir dir;
    auto report = miniReport(dir);

    const auto& decl = entryById(report, "d-decl");
    CHECK(decl.paired);
    CHECK(decl.agree);
    CHECK(decl.oclVerdict == "false");
    CHECK(decl.navexVerdict == "false");

    const auto& contract = entryById(report, "c-contract");
    CHECK_FALSE(contract.paired);
    CHECK(contract.oclVerdict == "parsed");
}

TEST_CASE("aggregates derive from the paired subset") {
    TempDir dir;
    auto report = miniReport(dir);
    const auto& agg = report.aggregates;

    CHECK(agg.total == 6);
    CHECK(agg.paired == 4);
    CHECK(agg.agreeCount == 3);
    CHECK(agg.oclCoverage == doctest::Approx(1.0));
    CHECK(agg.navexCoverage == doctest::Approx(4.0 / 6.0));
    CHECK(agg.agreementRate == doctest::Approx(0.75));

    double oclSum = static_cast<double>(coc("Order.allInstances()->size()") + coc("1 + 2") +
                                        coc("2 + 2") +
                                        coc("context Order inv itemsNonEmpty: self.items->size() > 0"));
    double navexSum = static_cast<double>(coc("Order.allInstances.length") + coc("1 + 2") +
                                          coc("\"2\" + \"2\"") +
                                          coc("data.$items.values.length > 0"));
    CHECK(agg.meanCocOcl == doctest::Approx(oclSum / 4.0));
    CHECK(agg.meanCocNavex == doctest::Approx(navexSum / 4.0));
}

TEST_CASE("report entries are sorted by id and inputs are hashed") {
    TempDir dir;
    auto report = miniReport(dir);
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        CHECK(report.entries[i - 1].id < report.entries[i].id);
    }
    CHECK(report.entries.front().id == "a-add");
    CHECK(report.entries.back().id == "z-store");
    REQUIRE(report.inputs.size() == 2);
    for (const auto& [path, hash] : report.inputs) {
        CHECK_FALSE(hash.empty());
    }
    CHECK_FALSE(report.toolVersion.empty());
}

TEST_CASE("rendering is byte-stable in both formats") {
    TempDir dir;
    auto report = miniReport(dir);

    auto text1 = render_report(report, Format::Text);
    auto text2 = render_report(report, Format::Text);
    CHECK(text1 == text2);
    CHECK(text1.find("agreement") != std::string::npos);
    CHECK(text1.find("93.5") != std::string::npos);

    auto json1 = render_report(report, Format::Json);
    auto json2 = render_report(report, Format::Json);
    CHECK(json1 == json2);
    CHECK(json1.find("\"aggregates\"") != std::string::npos);
    CHECK(json1.back() == '\n');
}

TEST_CASE("format names parse leniently nowhere") {
    CHECK(format_from_string("text") == Format::Text);
    CHECK(format_from_string("json") == Format::Json);
    CHECK_FALSE(format_from_string("xml").has_value());
    CHECK_FALSE(format_from_string("JSON").has_value());
}

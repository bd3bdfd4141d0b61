#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvx {

/// Characters of code: Unicode scalar values remaining after removing
/// spaces, tabs, carriage returns, and line feeds. Nothing else is
/// normalized; comments and punctuation count.
std::size_t coc(std::string_view text);

struct CorpusFixture {
    std::string metamodel; // paths are resolved against the corpus base dir
    std::string model;
};

/// One differential pair. Either expression text may be empty (the idiom
/// has no counterpart on that side; notes name the gap). `context` is the
/// id of the object bound as self/data, or empty for store root scope.
struct CorpusEntry {
    std::string id;
    std::string category;
    std::string ocl;
    std::string navex;
    std::string fixture;
    std::string context;
    std::string expected; // portable value literal, empty when unrecorded
    std::string notes;
};

struct Corpus {
    std::map<std::string, CorpusFixture> fixtures;
    std::vector<CorpusEntry> entries;
};

Corpus load_corpus(const std::string& text);
Corpus load_corpus_file(const std::string& path);

/// Verdict strings are portable value literals. OCL context declarations
/// holding a single invariant or a derivation run against the entry's
/// context object; other declarations (operation contracts, multi-clause
/// files, entries without a context) report "parsed".
struct EntryResult {
    std::string id;
    std::string category;
    std::optional<std::string> oclVerdict;
    std::optional<std::string> navexVerdict;
    bool paired = false;
    bool agree = false; // meaningful only when paired
    std::optional<std::size_t> cocOcl;
    std::optional<std::size_t> cocNavex;
    std::string notes;
};

struct CorpusAggregates {
    std::size_t total = 0;
    std::size_t paired = 0;
    std::size_t agreeCount = 0;
    double oclCoverage = 0.0;
    double navexCoverage = 0.0;
    double agreementRate = 1.0; // vacuously 1.0 without paired entries
    double meanCocOcl = 0.0;    // over paired entries only
    double meanCocNavex = 0.0;
};

struct CorpusReport {
    std::vector<EntryResult> entries; // sorted by entry id
    CorpusAggregates aggregates;
    std::string toolVersion;
    std::map<std::string, std::string> inputs; // path -> content hash
};

/// Evaluates every entry against its fixture. Entries disagreeing with
/// their recorded expected value get a note appended; agreement itself is
/// decided by comparing the two sides, not the expectation. Throws Error
/// on unknown fixtures or context objects.
CorpusReport run_corpus(const Corpus& corpus, const std::string& baseDir);

enum class Format { Text, Json };

std::optional<Format> format_from_string(const std::string& name);

/// Byte-stable rendering; the JSON form uses two-space indentation with
/// object keys sorted.
std::string render_report(const CorpusReport& report, Format format);

} // namespace mvx

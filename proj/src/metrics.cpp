#include "mvx/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <memory>
#include <variant>

#include <json.hpp>

#include "mvx/errors.hpp"
#include "mvx/eval.hpp"
#include "mvx/model.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/ocl/parser.hpp"
#include "mvx/util.hpp"

namespace mvx {

namespace {

using nlohmann::json;

std::string getString(const json& j, const char* key, const std::string& path, bool required) {
    if (!j.contains(key) || j[key].is_null()) {
        if (required) throw Error(ErrorKind::Schema, path + " needs a string field '" + key + "'");
        return {};
    }
    if (!j[key].is_string()) {
        throw Error(ErrorKind::Schema, path + "." + key + " must be a string");
    }
    return j[key].get<std::string>();
}

bool isContextDeclaration(const std::string& text) {
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i == std::string::npos || text.compare(i, 7, "context") != 0) return false;
    std::size_t after = i + 7;
    if (after >= text.size()) return false;
    char c = text[after];
    return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_');
}

std::string joinPath(const std::string& base, const std::string& rel) {
    if (base.empty()) return rel;
    if (!base.empty() && base.back() == '/') return base + rel;
    return base + "/" + rel;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void appendNote(std::string& notes, const std::string& extra) {
    if (!notes.empty()) notes += "; ";
    notes += extra;
}

} // namespace

std::size_t coc(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        if ((c & 0xC0) != 0x80) ++count;
    }
    return count;
}

Corpus load_corpus(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::Schema, "corpus document is not a JSON object");
    }
    Corpus corpus;
    if (!doc.contains("fixtures") || !doc["fixtures"].is_object()) {
        throw Error(ErrorKind::Schema, "$.fixtures must be an object");
    }
    for (const auto& [name, fx] : doc["fixtures"].items()) {
        std::string path = "$.fixtures." + name;
        corpus.fixtures[name] = {getString(fx, "metamodel", path, true),
                                 getString(fx, "model", path, true)};
    }
    if (!doc.contains("entries") || !doc["entries"].is_array()) {
        throw Error(ErrorKind::Schema, "$.entries must be an array");
    }
    std::size_t i = 0;
    for (const auto& e : doc["entries"]) {
        std::string path = "$.entries[" + std::to_string(i++) + "]";
        CorpusEntry entry;
        entry.id = getString(e, "id", path, true);
        entry.category = getString(e, "category", path, true);
        entry.fixture = getString(e, "fixture", path, true);
        entry.ocl = getString(e, "ocl", path, false);
        entry.navex = getString(e, "navex", path, false);
        entry.context = getString(e, "context", path, false);
        entry.expected = getString(e, "expected", path, false);
        entry.notes = getString(e, "notes", path, false);
        if (entry.ocl.empty() && entry.navex.empty()) {
            throw Error(ErrorKind::Schema, path + " has neither an ocl nor a navex side");
        }
        for (const auto& prev : corpus.entries) {
            if (prev.id == entry.id) {
                throw Error(ErrorKind::Schema, "duplicate entry id '" + entry.id + "'");
            }
        }
        corpus.entries.push_back(std::move(entry));
    }
    return corpus;
}

Corpus load_corpus_file(const std::string& path) { return load_corpus(read_file(path)); }

CorpusReport run_corpus(const Corpus& corpus, const std::string& baseDir) {
    CorpusReport report;
    report.toolVersion = kToolVersion;

    std::map<std::string, MetaModelPtr> metamodelCache;
    std::map<std::string, StorePtr> storeCache;

    auto loadText = [&](const std::string& rel) {
        std::string text = read_file(joinPath(baseDir, rel));
        report.inputs[rel] = content_hash_hex(text);
        return text;
    };
    auto storeFor = [&](const std::string& fixtureName) {
        auto cached = storeCache.find(fixtureName);
        if (cached != storeCache.end()) return cached->second;
        auto fx = corpus.fixtures.find(fixtureName);
        if (fx == corpus.fixtures.end()) {
            throw Error(ErrorKind::UnknownFixture, "fixture '" + fixtureName + "' is not defined");
        }
        auto mm = metamodelCache.find(fx->second.metamodel);
        if (mm == metamodelCache.end()) {
            mm = metamodelCache
                     .emplace(fx->second.metamodel, load_metamodel(loadText(fx->second.metamodel)))
                     .first;
        }
        StorePtr store =
            load_model(loadText(fx->second.model), mm->second).snapshot();
        storeCache.emplace(fixtureName, store);
        return store;
    };

    double sumCocOcl = 0.0;
    double sumCocNavex = 0.0;

    for (const auto& entry : corpus.entries) {
        StorePtr store = storeFor(entry.fixture);
        Env env;
        env.snapshot = store;
        if (entry.context.empty()) {
            env.contextBinding = RtValue::storeRef();
        } else {
            if (!store->contains(entry.context)) {
                throw Error(ErrorKind::UnknownContextObject,
                            "entry '" + entry.id + "' binds missing object '" + entry.context +
                                "'");
            }
            env.contextBinding = RtValue::objRef(entry.context);
        }

        EntryResult result;
        result.id = entry.id;
        result.category = entry.category;
        result.notes = entry.notes;

        std::optional<RtValue> oclValue;
        std::optional<RtValue> navexValue;
        if (!entry.ocl.empty()) {
            result.cocOcl = coc(entry.ocl);
            if (isContextDeclaration(entry.ocl)) {
                auto decls = ocl::parse_constraints(entry.ocl);
                const ocl::Expr* body = nullptr;
                if (decls.size() == 1 && !entry.context.empty()) {
                    if (auto* cls = std::get_if<ocl::ClassContext>(&decls.front())) {
                        if (cls->invariants.size() == 1) body = cls->invariants.front().body.get();
                    } else if (auto* der = std::get_if<ocl::DeriveContext>(&decls.front())) {
                        body = der->body.get();
                    }
                }
                if (body) {
                    oclValue = eval_ocl(*body, env);
                    result.oclVerdict = render_value(*oclValue);
                } else {
                    result.oclVerdict = "parsed";
                }
            } else {
                auto ast = ocl::parse_expression(entry.ocl);
                oclValue = eval_ocl(*ast, env);
                result.oclVerdict = render_value(*oclValue);
            }
        }
        if (!entry.navex.empty()) {
            result.cocNavex = coc(entry.navex);
            auto ast = navex::parse_navex(entry.navex);
            navexValue = eval_navex(*ast, env);
            result.navexVerdict = render_value(*navexValue);
        }

        result.paired = oclValue && navexValue;
        if (result.paired) {
            result.agree = equals_normalized(*oclValue, *navexValue);
            sumCocOcl += static_cast<double>(*result.cocOcl);
            sumCocNavex += static_cast<double>(*result.cocNavex);
        }
        if (!entry.expected.empty()) {
            RtValue expected = parse_value_literal(entry.expected);
            if (oclValue && !equals_normalized(*oclValue, expected)) {
                appendNote(result.notes, "ocl deviates from expected " + entry.expected);
            }
            if (navexValue && !equals_normalized(*navexValue, expected)) {
                appendNote(result.notes, "navex deviates from expected " + entry.expected);
            }
        }

        auto& agg = report.aggregates;
        agg.total += 1;
        if (!entry.ocl.empty()) agg.oclCoverage += 1;
        if (!entry.navex.empty()) agg.navexCoverage += 1;
        if (result.paired) {
            agg.paired += 1;
            if (result.agree) agg.agreeCount += 1;
        }
        report.entries.push_back(std::move(result));
    }

    auto& agg = report.aggregates;
    if (agg.total > 0) {
        agg.oclCoverage /= static_cast<double>(agg.total);
        agg.navexCoverage /= static_cast<double>(agg.total);
    }
    if (agg.paired > 0) {
        agg.agreementRate = static_cast<double>(agg.agreeCount) / static_cast<double>(agg.paired);
        agg.meanCocOcl = sumCocOcl / static_cast<double>(agg.paired);
        agg.meanCocNavex = sumCocNavex / static_cast<double>(agg.paired);
    }

    std::sort(report.entries.begin(), report.entries.end(),
              [](const EntryResult& a, const EntryResult& b) { return a.id < b.id; });
    return report;
}

std::optional<Format> format_from_string(const std::string& name) {
    if (name == "text") return Format::Text;
    if (name == "json") return Format::Json;
    return std::nullopt;
}

namespace {

std::string renderText(const CorpusReport& report) {
    std::string out;
    out += "corpus report (";
    out += kToolName;
    out += " ";
    out += report.toolVersion;
    out += ")\n";
    for (const auto& [path, hash] : report.inputs) {
        out += "input " + path + " " + hash + "\n";
    }
    out += "\n";

    std::size_t idWidth = 2;
    std::size_t catWidth = 8;
    for (const auto& e : report.entries) {
        idWidth = std::max(idWidth, e.id.size());
        catWidth = std::max(catWidth, e.category.size());
    }
    auto pad = [](const std::string& s, std::size_t w) {
        std::string p = s;
        p.resize(std::max(w, s.size()), ' ');
        return p;
    };
    for (const auto& e : report.entries) {
        std::string cocs = (e.cocOcl ? std::to_string(*e.cocOcl) : std::string("-")) + "/" +
                           (e.cocNavex ? std::to_string(*e.cocNavex) : std::string("-"));
        out += pad(e.id, idWidth) + "  " + pad(e.category, catWidth) + "  " +
               pad(e.paired ? (e.agree ? "agree" : "DISAGREE") : "-", 8) + "  " +
               pad(cocs, 7) + "  " + (e.oclVerdict ? *e.oclVerdict : "-") + " | " +
               (e.navexVerdict ? *e.navexVerdict : "-");
        if (!e.notes.empty()) out += "  -- " + e.notes;
        out += "\n";
    }

    const auto& a = report.aggregates;
    out += "\n";
    out += "entries: " + std::to_string(a.total) + "\n";
    out += "coverage: ocl " + fixed3(a.oclCoverage) + ", navex " + fixed3(a.navexCoverage) + "\n";
    out += "agreement: " + std::to_string(a.agreeCount) + "/" + std::to_string(a.paired) + " = " +
           fixed3(a.agreementRate) + "\n";
    out += "mean coc over paired entries: ocl " + fixed3(a.meanCocOcl) + ", navex " +
           fixed3(a.meanCocNavex) + "\n";
    out += "reference: an external reference dataset reports agreement 29/31 (93.5%) with mean "
           "coc 64.8 vs 74.2\n";
    return out;
}

std::string renderJson(const CorpusReport& report) {
    json doc;
    doc["tool"] = {{"name", kToolName}, {"version", report.toolVersion}};
    doc["inputs"] = report.inputs;
    json entries = json::array();
    for (const auto& e : report.entries) {
        json j;
        j["id"] = e.id;
        j["category"] = e.category;
        j["ocl"] = e.oclVerdict ? json(*e.oclVerdict) : json(nullptr);
        j["navex"] = e.navexVerdict ? json(*e.navexVerdict) : json(nullptr);
        j["paired"] = e.paired;
        j["agree"] = e.paired ? json(e.agree) : json(nullptr);
        j["cocOcl"] = e.cocOcl ? json(*e.cocOcl) : json(nullptr);
        j["cocNavex"] = e.cocNavex ? json(*e.cocNavex) : json(nullptr);
        j["notes"] = e.notes;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    const auto& a = report.aggregates;
    doc["aggregates"] = {
        {"total", a.total},
        {"paired", a.paired},
        {"agreeCount", a.agreeCount},
        {"oclCoverage", a.oclCoverage},
        {"navexCoverage", a.navexCoverage},
        {"agreementRate", a.agreementRate},
        {"meanCocOcl", a.meanCocOcl},
        {"meanCocNavex", a.meanCocNavex},
    };
    return doc.dump(2) + "\n";
}

} // namespace

std::string render_report(const CorpusReport& report, Format format) {
    return format == Format::Text ? renderText(report) : renderJson(report);
}

} // namespace mvx

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvx/contracts.hpp"
#include "mvx/derived.hpp"
#include "mvx/errors.hpp"
#include "mvx/eval.hpp"
#include "mvx/metrics.hpp"
#include "mvx/model.hpp"
#include "mvx/registry.hpp"
#include "mvx/util.hpp"
#include "mvx/validate.hpp"

namespace {

using nlohmann::json;
using namespace mvx;

/// Reads input files once, remembering content hashes for report stamps.
struct Inputs {
    std::map<std::string, std::string> texts;
    std::map<std::string, std::string> hashes;

    const std::string& read(const std::string& path) {
        auto it = texts.find(path);
        if (it == texts.end()) {
            it = texts.emplace(path, read_file(path)).first;
            hashes[path] = content_hash_hex(it->second);
        }
        return it->second;
    }
};

void emit(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text;
    } else {
        write_file(outPath, text);
    }
}

bool colorEnabled(const std::string& outPath) {
    if (!outPath.empty()) return false;
    if (const char* env = std::getenv("MVX_COLOR"); env && std::string(env) == "0") return false;
    return isatty(fileno(stdout)) != 0;
}

std::string paint(const std::string& text, const char* code, bool on) {
    if (!on) return text;
    return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

json toolStamp() { return {{"name", kToolName}, {"version", kToolVersion}}; }

std::string dumpJson(const json& doc) { return doc.dump(2) + "\n"; }

struct ConformArgs {
    std::string metamodel;
    std::string model;
    std::string format = "text";
    std::string out;
};

int runConform(const ConformArgs& a) {
    Inputs in;
    auto mm = load_metamodel(in.read(a.metamodel));
    auto store = load_model(in.read(a.model), mm);
    auto violations = check_conformance(store);

    if (a.format == "json") {
        json doc;
        doc["tool"] = toolStamp();
        doc["inputs"] = in.hashes;
        doc["conformant"] = violations.empty();
        json list = json::array();
        for (const auto& v : violations) {
            list.push_back({{"kind", to_string(v.kind)},
                            {"object", v.objectId},
                            {"feature", v.featureName},
                            {"message", v.message}});
        }
        doc["violations"] = std::move(list);
        emit(dumpJson(doc), a.out);
    } else {
        bool color = colorEnabled(a.out);
        std::string text;
        for (const auto& v : violations) {
            text += v.objectId;
            if (!v.featureName.empty()) text += "." + v.featureName;
            text += " " + std::string(to_string(v.kind)) + ": " + v.message + "\n";
        }
        text += violations.empty()
                    ? paint("model conforms", "32", color) + "\n"
                    : paint(std::to_string(violations.size()) + " violation(s)", "31", color) +
                          "\n";
        emit(text, a.out);
    }
    return violations.empty() ? 0 : 1;
}

struct ValidateArgs {
    std::string metamodel;
    std::string model;
    std::string constraints;
    bool force = false;
    std::string format = "text";
    std::string out;
};

int runValidate(const ValidateArgs& a) {
    Inputs in;
    auto mm = load_metamodel(in.read(a.metamodel));
    auto store = load_model(in.read(a.model), mm).snapshot();

    auto violations = check_conformance(*store);
    if (!violations.empty() && !a.force) {
        std::cerr << "error: model does not conform (" << violations.size()
                  << " violation(s)); use --force to validate anyway\n";
        for (const auto& v : violations) {
            std::cerr << "  " << v.objectId;
            if (!v.featureName.empty()) std::cerr << "." << v.featureName;
            std::cerr << " " << to_string(v.kind) << ": " << v.message << "\n";
        }
        return 2;
    }

    auto registry = load_registry(in.read(a.constraints), mm);
    auto report = validate_model(store, registry.constraints);

    if (a.format == "json") {
        json doc;
        doc["tool"] = toolStamp();
        doc["inputs"] = in.hashes;
        doc["conformant"] = violations.empty();
        json entries = json::array();
        for (const auto& e : report.entries) {
            entries.push_back({{"constraint", e.constraintName},
                               {"object", e.objectId},
                               {"severity", to_string(e.severity)},
                               {"verdict", to_string(e.verdict)},
                               {"message", e.message}});
        }
        doc["entries"] = std::move(entries);
        doc["overall"] = report.overall;
        emit(dumpJson(doc), a.out);
    } else {
        bool color = colorEnabled(a.out);
        std::string text;
        for (const auto& e : report.entries) {
            std::string line = e.objectId + " " + e.constraintName + " " +
                               to_string(e.verdict);
            if (e.verdict != Verdict::True) {
                line += " [" + std::string(to_string(e.severity)) + "] -- " + e.message;
                line = paint(line, e.severity == Severity::Error ? "31" : "33", color);
            }
            text += line + "\n";
        }
        text += "result: " +
                (report.overall ? paint("ok", "32", color) : paint("violated", "31", color)) +
                "\n";
        emit(text, a.out);
    }
    return report.overall ? 0 : 1;
}

struct QueryArgs {
    std::string metamodel;
    std::string model;
    std::string lang = "ocl";
    std::string expression;
    std::string format = "text";
    std::string out;
};

int runQuery(const QueryArgs& a) {
    Inputs in;
    auto mm = load_metamodel(in.read(a.metamodel));
    auto store = load_model(in.read(a.model), mm).snapshot();
    Language language = *language_from_string(a.lang);
    RtValue result = execute_query(store, language, a.expression);

    if (a.format == "json") {
        json doc;
        doc["tool"] = toolStamp();
        doc["inputs"] = in.hashes;
        doc["language"] = a.lang;
        doc["expression"] = a.expression;
        doc["result"] = render_value(result);
        emit(dumpJson(doc), a.out);
    } else {
        emit(render_value(result) + "\n", a.out);
    }
    return 0;
}

struct TransitionArgs {
    std::string metamodel;
    std::string pre;
    std::string post;
    std::string constraints;
    std::string contract;
    std::string receiver;
    std::vector<std::string> args;
    std::string result;
    bool hasResult = false;
    std::string format = "text";
    std::string out;
};

int runTransition(const TransitionArgs& a) {
    Inputs in;
    auto mm = load_metamodel(in.read(a.metamodel));
    auto preStore = load_model(in.read(a.pre), mm).snapshot();
    auto postStore = load_model(in.read(a.post), mm).snapshot();
    auto registry = load_registry(in.read(a.constraints), mm);

    const OperationContract* contract = nullptr;
    for (const auto& c : registry.contracts) {
        if (c.sig.name == a.contract || c.className + "::" + c.sig.name == a.contract) {
            contract = &c;
            break;
        }
    }
    if (!contract) {
        throw Error(ErrorKind::UnknownContract,
                    "registry defines no contract named '" + a.contract + "'");
    }

    std::map<std::string, RtValue> argMap;
    for (const auto& kv : a.args) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorKind::Schema, "--arg expects name=value, got '" + kv + "'");
        }
        argMap[kv.substr(0, eq)] = parse_value_literal(kv.substr(eq + 1));
    }
    std::optional<RtValue> resultValue;
    if (a.hasResult) resultValue = parse_value_literal(a.result);

    auto tr = check_transition(preStore, postStore, *contract, a.receiver, argMap, resultValue);

    auto clauseName = [](const ClauseVerdict& cv, const char* kind, std::size_t i) {
        return cv.name.empty() ? std::string(kind) + std::to_string(i + 1) : cv.name;
    };
    if (a.format == "json") {
        json doc;
        doc["tool"] = toolStamp();
        doc["inputs"] = in.hashes;
        doc["contract"] = contract->className + "::" + contract->sig.name;
        doc["receiver"] = a.receiver;
        json pres = json::array();
        for (std::size_t i = 0; i < tr.preVerdicts.size(); ++i) {
            pres.push_back({{"name", clauseName(tr.preVerdicts[i], "pre", i)},
                            {"verdict", to_string(tr.preVerdicts[i].verdict)}});
        }
        json posts = json::array();
        for (std::size_t i = 0; i < tr.postVerdicts.size(); ++i) {
            posts.push_back({{"name", clauseName(tr.postVerdicts[i], "post", i)},
                             {"verdict", to_string(tr.postVerdicts[i].verdict)}});
        }
        doc["pre"] = std::move(pres);
        doc["post"] = std::move(posts);
        doc["admissible"] = tr.admissible;
        doc["correct"] = tr.correct;
        emit(dumpJson(doc), a.out);
    } else {
        bool color = colorEnabled(a.out);
        std::string text;
        for (std::size_t i = 0; i < tr.preVerdicts.size(); ++i) {
            text += "pre " + clauseName(tr.preVerdicts[i], "pre", i) + ": " +
                    to_string(tr.preVerdicts[i].verdict) + "\n";
        }
        text += "admissible: " + std::string(tr.admissible ? "yes" : "no") + "\n";
        for (std::size_t i = 0; i < tr.postVerdicts.size(); ++i) {
            text += "post " + clauseName(tr.postVerdicts[i], "post", i) + ": " +
                    to_string(tr.postVerdicts[i].verdict) + "\n";
        }
        text += "correct: " +
                (tr.correct ? paint("yes", "32", color) : paint("no", "31", color)) + "\n";
        emit(text, a.out);
    }
    return tr.correct ? 0 : 1;
}

struct CorpusArgs {
    std::string corpus;
    std::string fixtures;
    std::string format = "text";
    std::string out;
};

int runCorpus(const CorpusArgs& a) {
    Inputs in;
    auto corpus = load_corpus(in.read(a.corpus));
    std::string base = a.fixtures;
    if (base.empty()) {
        auto slash = a.corpus.find_last_of('/');
        base = slash == std::string::npos ? std::string(".") : a.corpus.substr(0, slash);
    }
    auto report = run_corpus(corpus, base);
    report.inputs[a.corpus] = in.hashes[a.corpus];
    emit(render_report(report, a.format == "json" ? Format::Json : Format::Text), a.out);
    return report.aggregates.agreeCount == report.aggregates.paired ? 0 : 1;
}

struct MetricsArgs {
    std::vector<std::string> expressions;
    std::vector<std::string> files;
    std::string format = "text";
    std::string out;
};

int runMetrics(const MetricsArgs& a) {
    Inputs in;
    std::vector<std::pair<std::string, std::size_t>> rows;
    for (const auto& e : a.expressions) rows.emplace_back(e, coc(e));
    for (const auto& f : a.files) rows.emplace_back(f, coc(in.read(f)));
    if (rows.empty()) {
        std::cerr << "error: metrics needs at least one expression or --file\n";
        return 2;
    }
    if (a.format == "json") {
        json doc;
        doc["tool"] = toolStamp();
        json results = json::array();
        for (const auto& [source, n] : rows) {
            results.push_back({{"source", source}, {"coc", n}});
        }
        doc["results"] = std::move(results);
        emit(dumpJson(doc), a.out);
    } else {
        std::string text;
        for (const auto& [source, n] : rows) text += std::to_string(n) + "\n";
        emit(text, a.out);
    }
    return 0;
}

void addFormat(CLI::App* cmd, std::string& format, std::string& out) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", out, "write the report to a file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model conformance, constraint validation, and differential metrics"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    ConformArgs conformArgs;
    auto* conformCmd = app.add_subcommand("conform", "check a model against its metamodel");
    conformCmd->add_option("--metamodel", conformArgs.metamodel)->required();
    conformCmd->add_option("--model", conformArgs.model)->required();
    addFormat(conformCmd, conformArgs.format, conformArgs.out);

    ValidateArgs validateArgs;
    auto* validateCmd = app.add_subcommand("validate", "evaluate registered invariants");
    validateCmd->add_option("--metamodel", validateArgs.metamodel)->required();
    validateCmd->add_option("--model", validateArgs.model)->required();
    validateCmd->add_option("--constraints", validateArgs.constraints)->required();
    validateCmd->add_flag("--force", validateArgs.force,
                          "validate even when the model does not conform");
    addFormat(validateCmd, validateArgs.format, validateArgs.out);

    QueryArgs queryArgs;
    auto* queryCmd = app.add_subcommand("query", "evaluate one expression at store scope");
    queryCmd->add_option("--metamodel", queryArgs.metamodel)->required();
    queryCmd->add_option("--model", queryArgs.model)->required();
    queryCmd->add_option("--lang", queryArgs.lang)->check(CLI::IsMember({"ocl", "navex"}));
    queryCmd->add_option("expression", queryArgs.expression)->required();
    addFormat(queryCmd, queryArgs.format, queryArgs.out);

    TransitionArgs transitionArgs;
    auto* transitionCmd =
        app.add_subcommand("transition", "check an operation contract between two snapshots");
    transitionCmd->add_option("--metamodel", transitionArgs.metamodel)->required();
    transitionCmd->add_option("--pre", transitionArgs.pre)->required();
    transitionCmd->add_option("--post", transitionArgs.post)->required();
    transitionCmd->add_option("--constraints", transitionArgs.constraints)->required();
    transitionCmd->add_option("--contract", transitionArgs.contract)->required();
    transitionCmd->add_option("--receiver", transitionArgs.receiver)->required();
    transitionCmd->add_option("--arg", transitionArgs.args,
                              "operation argument as name=value literal");
    auto* resultOpt = transitionCmd->add_option("--result", transitionArgs.result,
                                                "operation result as a value literal");
    addFormat(transitionCmd, transitionArgs.format, transitionArgs.out);

    CorpusArgs corpusArgs;
    auto* corpusCmd = app.add_subcommand("corpus", "run the differential corpus");
    corpusCmd->add_option("--corpus", corpusArgs.corpus)->required();
    corpusCmd->add_option("--fixtures", corpusArgs.fixtures,
                          "base directory for fixture paths (default: corpus directory)");
    addFormat(corpusCmd, corpusArgs.format, corpusArgs.out);

    MetricsArgs metricsArgs;
    auto* metricsCmd = app.add_subcommand("metrics", "characters-of-code for expressions");
    metricsCmd->add_option("expression", metricsArgs.expressions);
    metricsCmd->add_option("--file", metricsArgs.files, "measure file contents");
    addFormat(metricsCmd, metricsArgs.format, metricsArgs.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    transitionArgs.hasResult = resultOpt->count() > 0;

    try {
        if (conformCmd->parsed()) return runConform(conformArgs);
        if (validateCmd->parsed()) return runValidate(validateArgs);
        if (queryCmd->parsed()) return runQuery(queryArgs);
        if (transitionCmd->parsed()) return runTransition(transitionArgs);
        if (corpusCmd->parsed()) return runCorpus(corpusArgs);
        if (metricsCmd->parsed()) return runMetrics(metricsArgs);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

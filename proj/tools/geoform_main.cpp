// Command line front end: parse and reprint sentences, expand defined
// atoms, translate between the metric and relational languages, reduce to
// ordered-field arithmetic, and run the randomized model checks.
//
// Exit codes: 0 on success, 1 when a check or solver run does not come out
// as expected, 2 for usage, parse and environment errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geoform/ast.hpp"
#include "geoform/check.hpp"
#include "geoform/corpus.hpp"
#include "geoform/defs.hpp"
#include "geoform/rcf.hpp"
#include "geoform/syntax.hpp"
#include "geoform/xlate.hpp"

namespace {

using geo::formula_ptr;
using geo::language;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// `geoform.conf` in the working directory holds key = value defaults for
// the solver settings. Command line flags win over the GEOFORM_SOLVER
// environment variable, which wins over the file.
std::map<std::string, std::string> read_conf() {
    std::map<std::string, std::string> conf;
    std::ifstream in("geoform.conf");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error("geoform.conf:" + std::to_string(lineno) + ": expected key = value");
        conf[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return conf;
}

std::string resolve_solver(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("GEOFORM_SOLVER"); env != nullptr && *env != '\0')
        return env;
    auto conf = read_conf();
    if (auto it = conf.find("solver"); it != conf.end()) return it->second;
    return "";
}

int resolve_solver_timeout(int flag_value) {
    if (flag_value > 0) return flag_value;
    auto conf = read_conf();
    if (auto it = conf.find("solver-timeout"); it != conf.end()) return std::stoi(it->second);
    return 30;
}

language parse_lang(const std::string& s) {
    if (s == "e2") return language::e2;
    if (s == "ed") return language::ed;
    if (s == "eda") return language::eda;
    throw usage_error("unknown language '" + s + "' (choose e2, ed or eda)");
}

// Resolves a positional input to a sentence: a corpus item name first, then
// literal sentence text.
struct resolved {
    std::string name;  // item name, or "input" for literal text
    formula_ptr sentence;
    language lang = language::ed;
};

resolved resolve_input(const std::string& input) {
    if (const auto* it = geo::corpus::find(input)) return {it->name, it->sentence, it->lang};
    auto res = geo::syntax::parse_sentence(input, &geo::defs::registry::instance());
    if (!res.ok()) {
        std::string msg = "input is neither a corpus item nor a sentence:";
        for (const auto& d : res.diags)
            msg += "\n  " + std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
        throw usage_error(msg);
    }
    return {"input", res.ast, geo::corpus::infer_language(res.ast)};
}

// Expands "D1..D4" style ranges: a shared alphabetic stem with a numeric
// run at the end on both sides.
std::vector<std::string> expand_item_ranges(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& arg : args) {
        auto dots = arg.find("..");
        if (dots == std::string::npos) {
            out.push_back(arg);
            continue;
        }
        std::string lo = arg.substr(0, dots), hi = arg.substr(dots + 2);
        auto split = [](const std::string& s) -> std::pair<std::string, int> {
            auto pos = s.find_last_not_of("0123456789");
            if (pos == std::string::npos || pos + 1 == s.size())
                throw usage_error("range endpoint '" + s + "' lacks a numeric suffix");
            return {s.substr(0, pos + 1), std::stoi(s.substr(pos + 1))};
        };
        auto [stem_lo, n_lo] = split(lo);
        auto [stem_hi, n_hi] = split(hi);
        if (stem_lo != stem_hi || n_lo > n_hi)
            throw usage_error("bad item range '" + arg + "'");
        for (int n = n_lo; n <= n_hi; ++n) out.push_back(stem_lo + std::to_string(n));
    }
    return out;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw usage_error("cannot write " + out_path);
    out << text;
}

// Shared reporting for `check` and `verify-axioms`.
int run_tasks(const std::vector<geo::check::check_task>& tasks, const geo::check::run_config& cfg,
              bool as_json, const std::string& out_path) {
    bool all_ok = true;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    std::ostringstream table;
    for (const auto& task : tasks) {
        const auto* it = geo::corpus::find(task.item);
        if (it == nullptr) throw usage_error("corpus has no item named '" + task.item + "'");
        auto rep = geo::check::run_check(geo::corpus::check_form(*it), task, cfg);
        all_ok = all_ok && rep.ok;
        if (as_json) {
            results.push_back(geo::check::to_json(rep));
            continue;
        }
        std::ostringstream line;
        line << (rep.ok ? "ok   " : "FAIL ") << rep.item << " @ " << rep.model_name
             << "  expect=" << to_string(rep.expect) << " outcome=" << to_string(rep.result);
        if (rep.mode == geo::check::task_mode::sample)
            line << " probes=" << rep.probes_run << " samples=" << rep.samples_run
                 << " falsified=" << rep.falsified;
        if (!rep.detail.empty()) line << "  (" << rep.detail << ")";
        table << line.str() << "\n";
        if (!rep.ok)
            for (const auto& f : rep.failures) {
                table << "     " << f.kind;
                if (f.index >= 0) table << " " << f.index;
                if (!f.label.empty()) table << " '" << f.label << "'";
                if (!f.detail.empty()) table << ": " << f.detail;
                table << "\n";
            }
    }
    if (as_json) {
        nlohmann::ordered_json doc;
        doc["config"] = {{"seed", cfg.seed},
                         {"samples", cfg.samples},
                         {"tol", cfg.tol},
                         {"angle_tol", cfg.angle_tol}};
        doc["results"] = std::move(results);
        write_output(out_path, doc.dump(2) + "\n");
    } else {
        write_output(out_path, table.str());
    }
    return all_ok ? 0 : 1;
}

int cmd_parse(const std::string& input, bool as_text) {
    const auto& reg = geo::defs::registry::instance();
    if (!as_text && std::filesystem::exists(input)) {
        std::ifstream in(input, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        auto blocks = geo::syntax::parse_sentence_file(buf.str(), &reg);
        bool ok = true;
        for (const auto& blk : blocks) {
            std::string label = blk.name.empty() ? ("line " + std::to_string(blk.first_line))
                                                 : blk.name;
            if (blk.parsed.ok()) {
                std::cout << "# " << label << "\n"
                          << geo::syntax::print_sentence(blk.parsed.ast) << "\n";
            } else {
                ok = false;
                for (const auto& d : blk.parsed.diags)
                    std::cerr << input << ":" << d.line << ":" << d.col << ": " << d.message
                              << "\n";
            }
        }
        return ok ? 0 : 2;
    }
    auto res = geo::syntax::parse_sentence(input, &reg);
    if (!res.ok()) {
        for (const auto& d : res.diags)
            std::cerr << d.line << ":" << d.col << ": " << d.message << "\n";
        return 2;
    }
    std::cout << geo::syntax::print_sentence(res.ast) << "\n";
    return 0;
}

int cmd_expand(const std::string& input, const std::string& lang_flag, bool once, bool size_only) {
    auto in = resolve_input(input);
    language lang = lang_flag.empty() ? in.lang : parse_lang(lang_flag);
    if (size_only) {
        std::cout << geo::defs::expanded_size(in.sentence, lang) << "\n";
        return 0;
    }
    auto out = geo::defs::expand(in.sentence, lang,
                                 once ? geo::defs::expand_depth::one : geo::defs::expand_depth::full);
    std::cout << geo::syntax::print_sentence(out) << "\n";
    return 0;
}

int cmd_translate(const std::string& input, const std::string& to) {
    auto in = resolve_input(input);
    if (to == "ed") {
        std::cout << geo::syntax::print_sentence(geo::xlate::e2_to_ed(in.sentence)) << "\n";
        return 0;
    }
    if (to == "e2") {
        auto res = geo::xlate::ed_to_e2(in.sentence);
        std::cout << geo::syntax::print_sentence(res.out) << "\n";
        if (!res.origin.empty())
            std::cout << "# frame: origin " << res.origin << ", unit " << res.unit
                      << ", off-axis " << res.off_axis << "\n";
        for (const auto& tb : res.temps)
            std::cout << "# " << tb.name << " carries " << geo::syntax::print_term(tb.stands_for)
                      << "\n";
        return 0;
    }
    throw usage_error("--to must be ed or e2");
}

int cmd_reduce(const std::string& input, int dim, const std::string& solver_flag,
               int timeout_flag, bool emit_only, const std::string& out_path) {
    auto in = resolve_input(input);
    formula_ptr f = in.sentence;
    language lang = in.lang;
    if (lang == language::e2) {
        f = geo::xlate::e2_to_ed(f);
        lang = language::ed;
    }
    auto co = geo::rcf::coordinatize(f, lang, dim);
    std::string smt = geo::rcf::emit_solver(co.out);
    std::string solver = resolve_solver(solver_flag);
    if (emit_only || solver.empty()) {
        write_output(out_path, smt);
        return 0;
    }
    geo::rcf::solver_options opt;
    opt.command = solver;
    opt.timeout_sec = resolve_solver_timeout(timeout_flag);
    auto verdict = geo::rcf::solve_external(smt, opt);
    std::cout << to_string(verdict) << "\n";
    switch (verdict) {
    case geo::rcf::solver_verdict::valid: return 0;
    case geo::rcf::solver_verdict::unavailable: return 2;
    default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoform: parse, expand, translate, reduce and check geometry sentences"};
    app.require_subcommand(1);

    std::string input, lang_flag, to_flag, out_path, model_filter, solver_flag;
    std::vector<std::string> item_args;
    bool as_text = false, once = false, size_only = false, emit_only = false, as_json = false;
    int dim = 2, solver_timeout = 0;
    geo::check::run_config cfg;

    auto* parse_cmd = app.add_subcommand("parse", "parse sentences and reprint them canonically");
    parse_cmd->add_option("input", input, "a .geo file or literal sentence text")->required();
    parse_cmd->add_flag("--text", as_text, "always treat the input as sentence text");

    auto* expand_cmd = app.add_subcommand("expand", "expand defined atoms to primitives");
    expand_cmd->add_option("input", input, "corpus item name or sentence text")->required();
    expand_cmd->add_option("--lang", lang_flag, "definition language: e2, ed or eda");
    expand_cmd->add_flag("--once", once, "expand one layer only");
    expand_cmd->add_flag("--size", size_only, "print the fully expanded node count instead");

    auto* xlate_cmd = app.add_subcommand("translate", "translate between languages");
    xlate_cmd->add_option("input", input, "corpus item name or sentence text")->required();
    xlate_cmd->add_option("--to", to_flag, "target language: ed or e2")->required();

    auto* check_cmd = app.add_subcommand("check", "run the registered model checks for items");
    check_cmd->add_option("items", item_args, "item names; ranges like D1..D7 allowed")
        ->required();
    check_cmd->add_option("--model", model_filter, "restrict to one model");
    check_cmd->add_option("--seed", cfg.seed, "sampling seed");
    check_cmd->add_option("--samples", cfg.samples, "samples per task");
    check_cmd->add_option("--tol", cfg.tol, "distance tolerance");
    check_cmd->add_option("--angle-tol", cfg.angle_tol, "angle tolerance in degrees");
    check_cmd->add_flag("--json", as_json, "emit JSON reports");
    check_cmd->add_option("--out", out_path, "write output to a file");

    auto* verify_cmd = app.add_subcommand("verify-axioms", "run every registered axiom check");
    verify_cmd->add_option("--model", model_filter, "restrict to one model");
    verify_cmd->add_option("--seed", cfg.seed, "sampling seed");
    verify_cmd->add_option("--samples", cfg.samples, "samples per task");
    verify_cmd->add_option("--tol", cfg.tol, "distance tolerance");
    verify_cmd->add_option("--angle-tol", cfg.angle_tol, "angle tolerance in degrees");
    verify_cmd->add_flag("--json", as_json, "emit JSON reports");
    verify_cmd->add_option("--out", out_path, "write output to a file");

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce to ordered-field arithmetic");
    reduce_cmd->add_option("input", input, "corpus item name or sentence text")->required();
    reduce_cmd->add_option("--dim", dim, "coordinate dimension")->check(CLI::Range(2, 8));
    reduce_cmd->add_option("--solver", solver_flag,
                           "solver command; also GEOFORM_SOLVER or geoform.conf");
    reduce_cmd->add_option("--solver-timeout", solver_timeout, "solver timeout in seconds");
    reduce_cmd->add_flag("--emit-only", emit_only, "emit the query, never run a solver");
    reduce_cmd->add_option("--out", out_path, "write the query to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(input, as_text);
        if (expand_cmd->parsed()) return cmd_expand(input, lang_flag, once, size_only);
        if (xlate_cmd->parsed()) return cmd_translate(input, to_flag);
        if (check_cmd->parsed()) {
            std::vector<geo::check::check_task> tasks;
            for (const auto& name : expand_item_ranges(item_args)) {
                auto found = geo::corpus::plan_for(name);
                if (found.empty()) {
                    if (geo::corpus::find(name) == nullptr)
                        throw usage_error("corpus has no item named '" + name + "'");
                    throw usage_error("no checks registered for '" + name + "'");
                }
                for (auto& t : found)
                    if (model_filter.empty() || t.model_name == model_filter)
                        tasks.push_back(std::move(t));
            }
            if (tasks.empty()) throw usage_error("no tasks match the requested model");
            return run_tasks(tasks, cfg, as_json, out_path);
        }
        if (verify_cmd->parsed()) {
            std::vector<geo::check::check_task> tasks;
            for (const auto& t : geo::corpus::plan()) {
                const auto* it = geo::corpus::find(t.item);
                bool axiom_file = it != nullptr && (it->file == "metric_axioms.geo" ||
                                                    it->file == "relational_axioms.geo" ||
                                                    it->file == "dimension_ladder.geo" ||
                                                    it->file == "order_completeness.geo");
                if (axiom_file && (model_filter.empty() || t.model_name == model_filter))
                    tasks.push_back(t);
            }
            if (tasks.empty()) throw usage_error("no tasks match the requested model");
            return run_tasks(tasks, cfg, as_json, out_path);
        }
        if (reduce_cmd->parsed())
            return cmd_reduce(input, dim, solver_flag, solver_timeout, emit_only, out_path);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const geo::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

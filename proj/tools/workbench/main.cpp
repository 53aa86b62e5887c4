#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "awb/expr.hpp"
#include "gallery.hpp"
#include "problem.hpp"
#include "tasks.hpp"

namespace {

enum Exit { ok = 0, usage = 1, parse_error = 2, semantic_error = 3, check_failed = 4 };

std::string value_text(const awb::ResidualValue& v) {
    return std::visit([](const auto& x) { return x.to_string(); }, v);
}

bool read_source(const std::string& file, std::string& text) {
    if (file.rfind("gallery:", 0) == 0) {
        auto it = wb::gallery().find(file.substr(8));
        if (it == wb::gallery().end()) return false;
        text = it->second;
        return true;
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
}

int run(const std::string& file, const std::string& json_out, const std::string& only, const std::string& probes) {
    std::string text;
    if (!read_source(file, text)) {
        std::cerr << "workbench: cannot read " << file << "\n";
        return usage;
    }
    wb::Problem P;
    std::vector<const wb::Task*> selected;
    try {
        P = wb::parse_problem(text);
        for (const auto& t : P.tasks) {
            wb::validate_task(P, t);
            if (only.empty() || t.name == only) selected.push_back(&t);
        }
    } catch (const wb::DslError& e) {
        std::cerr << file << ":" << e.what() << "\n";
        return e.kind() == wb::DslError::parse ? parse_error : semantic_error;
    }
    if (!only.empty() && selected.empty()) {
        std::cerr << "workbench: no task named '" << only << "'\n";
        return usage;
    }

    wb::RunOptions opt;
    opt.scaled_probes = probes != "frames";
    std::vector<std::future<wb::TaskOutcome>> pending;
    for (const wb::Task* t : selected)
        pending.push_back(std::async(std::launch::async, [&P, t, opt] { return wb::run_task(P, *t, opt); }));

    nlohmann::json doc = nlohmann::json::array();
    int code = ok;
    for (auto& f : pending) {
        wb::TaskOutcome o = f.get();
        std::cout << "[" << o.status << "] " << o.name << " (" << static_cast<long>(o.elapsed_ms) << " ms)\n";
        nlohmann::json residuals = nlohmann::json::array();
        if (o.status == "error") {
            std::cout << "  error: " << o.error << "\n";
            code = semantic_error;  // an error outranks a failing check
        } else {
            std::istringstream body(o.report.to_text());
            for (std::string line; std::getline(body, line);) std::cout << "  " << line << "\n";
            for (const auto& r : o.report.failures())
                residuals.push_back({{"check", r.check}, {"probe", r.probe}, {"value", value_text(r.value)}});
            if (o.status == "fail" && code == ok) code = check_failed;
        }
        nlohmann::json entry = {{"task", o.name}, {"status", o.status}, {"residuals", residuals}, {"elapsed_ms", o.elapsed_ms}};
        if (!o.error.empty()) entry["error"] = o.error;
        doc.push_back(entry);
    }
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "workbench: cannot write " << json_out << "\n";
            return usage;
        }
        out << doc.dump(2) << "\n";
    }
    return code;
}

int show_gallery(const std::string& name, const std::string& emit) {
    auto it = wb::gallery().find(name);
    if (it == wb::gallery().end()) {
        std::cerr << "workbench: no gallery entry '" << name << "'; available:\n";
        for (const auto& [n, _] : wb::gallery()) std::cerr << "  " << n << "\n";
        return usage;
    }
    if (emit.empty()) {
        std::cout << it->second;
        return ok;
    }
    std::ofstream out(emit);
    if (!out) {
        std::cerr << "workbench: cannot write " << emit << "\n";
        return usage;
    }
    out << it->second;
    return ok;
}

int check(const std::string& text) {
    try {
        auto eq = text.find("==");
        if (eq == std::string::npos) {
            std::cout << awb::eval_expr(awb::parse_syntax(text)).to_string() << "\n";
            return ok;
        }
        awb::RatFn a = awb::eval_expr(awb::parse_syntax(text.substr(0, eq)));
        awb::RatFn b = awb::eval_expr(awb::parse_syntax(text.substr(eq + 2), 1, static_cast<int>(eq) + 3));
        awb::RatFn diff = a - b;
        std::cout << a.to_string() << "\n" << b.to_string() << "\n";
        if (diff.is_zero()) {
            std::cout << "equal\n";
            return ok;
        }
        std::cout << "differ by " << diff.to_string() << "\n";
        return check_failed;
    } catch (const awb::ParseError& e) {
        std::cerr << "expr:" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
        return parse_error;
    } catch (const std::exception& e) {
        std::cerr << "workbench: " << e.what() << "\n";
        return semantic_error;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for Lie algebroids and IM tensors"};
    app.require_subcommand(1);

    std::string file, json_out, only, probes = "extra";
    auto* run_cmd = app.add_subcommand("run", "run the tasks of a problem file (or gallery:NAME)");
    run_cmd->add_option("FILE", file)->required();
    run_cmd->add_option("--json", json_out, "write a JSON report");
    run_cmd->add_option("--task", only, "run only the named task");
    run_cmd->add_option("--probes", probes, "probe set")->check(CLI::IsMember({"extra", "frames"}));

    std::string entry, emit;
    auto* gal = app.add_subcommand("gallery", "print or save a built-in problem file");
    gal->add_option("NAME", entry)->required();
    gal->add_option("--emit", emit, "write to FILE instead of stdout");

    std::string expr;
    auto* chk = app.add_subcommand("check", "canonical form of an expression, or compare A == B");
    chk->add_option("EXPR", expr)->required();

    auto* list = app.add_subcommand("tasks", "list task commands");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }
    if (run_cmd->parsed()) return run(file, json_out, only, probes);
    if (gal->parsed()) return show_gallery(entry, emit);
    if (chk->parsed()) return check(expr);
    if (list->parsed())
        for (const auto& s : wb::task_synopses()) std::cout << s << "\n";
    return ok;
}

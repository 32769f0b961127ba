// Command-line driver for the coherence pipeline:
//   compile -> solve -> analyze -> report
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdi/error.hpp"
#include "cdi/pipeline.hpp"

namespace {

std::pair<std::string, std::string> split_pair(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
        throw cdi::ParseError("expected a pair 'a,b', got '" + text + "'");
    }
    return {text.substr(0, comma), text.substr(comma + 1)};
}

cdi::LabelSet split_labels(const std::string& text) {
    cdi::LabelSet out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.insert(item);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherence-driven inference over LLM-compiled coherence graphs"};
    app.require_subcommand(1);

    cdi::CompileCommand compile;
    auto* c = app.add_subcommand("compile", "sample coherence graphs, take their median and profile convergence");
    c->add_option("--props", compile.props_path, "proposition file")->required();
    c->add_option("--out", compile.out_dir, "run directory")->required();
    c->add_option("--n", compile.n, "number of samples")->capture_default_str();
    c->add_option("--cassette", compile.cassette, "replay responses from this cassette");
    c->add_option("--record", compile.record, "record live responses to this cassette");
    c->add_option("--backend-url", compile.backend_url, "chat-completions base URL")->capture_default_str();
    c->add_option("--model", compile.compile.model, "model name")->capture_default_str();
    c->add_option("--temperature", compile.compile.temperature, "sampling temperature")->capture_default_str();
    c->add_option("--api-key-env", compile.api_key_env, "environment variable holding the API key")
        ->capture_default_str();
    c->add_option("--parallel", compile.compile.max_parallel, "concurrent requests")->capture_default_str();
    c->add_option("--attempts", compile.compile.retry.transport_attempts, "attempts per request on transport errors")
        ->capture_default_str();
    c->add_option("--parse-attempts", compile.compile.retry.parse_attempts, "attempts per sample on parse errors")
        ->capture_default_str();
    c->add_option("--seed", compile.seed, "seed for subsampling")->capture_default_str();
    c->add_option("--trials", compile.trials, "subsamples per size")->capture_default_str();
    c->add_option("--fraction", compile.fraction, "stopping-rule fraction")->capture_default_str();

    cdi::ConstraintsCommand constraints;
    std::vector<std::string> exclusive;
    auto* k = app.add_subcommand("constraints", "pin facts/beliefs/details accepted and declare exclusive pairs");
    k->add_option("--props", constraints.props_path, "proposition file")->required();
    k->add_option("--exclusive", exclusive, "exclusive hypothesis pair 'a,b' (repeatable)");
    k->add_option("-o,--out", constraints.out_path, "constraints file")->required();

    cdi::SolveCommand solve;
    auto* s = app.add_subcommand("solve", "rank cuts of a coherence graph");
    s->add_option("--graph", solve.graph_path, "graph document")->required();
    s->add_option("--constraints", solve.constraints_path, "constraints file");
    s->add_option("-o,--out", solve.out_path, "cuts file")->required();
    s->add_option("--top-k", solve.top_k, "number of ranked cuts to keep")->capture_default_str();
    s->add_flag("--anneal", solve.anneal, "use simulated annealing instead of exact enumeration");
    s->add_option("--seed", solve.seed, "annealing seed")->capture_default_str();
    s->add_option("--sweeps", solve.anneal_params.sweeps, "annealing sweeps")->capture_default_str();
    s->add_option("--restarts", solve.anneal_params.restarts, "annealing restarts")->capture_default_str();
    s->add_option("--exact-cap", solve.options.exact_cap, "largest graph solved exactly")->capture_default_str();
    bool no_trivial = false;
    s->add_flag("--no-trivial", no_trivial, "exclude the cut with an empty part");

    cdi::AnalyzeCommand analyze;
    auto* a = app.add_subcommand("analyze", "Gibbs-weight ranked cuts and build outcome tables");
    a->add_option("--cuts", analyze.cuts_path, "cuts file")->required();
    a->add_option("--out", analyze.out_dir, "output directory")->required();
    a->add_option("--k", analyze.k, "number of sufficiently coherent cuts (default: density threshold)");
    a->add_option("--beta", analyze.beta, "fixed inverse temperature");
    a->add_option("--m", analyze.m, "number of top cuts in the spectrum (default: all)");
    a->add_option("--bandwidth", analyze.bandwidth, "KDE bandwidth (default: Silverman)");
    a->add_option("--outcomes", analyze.outcomes_path, "outcome-space file");

    cdi::ReportCommand report;
    auto* r = app.add_subcommand("report", "write a markdown report and DOT renderings for a run directory");
    r->add_option("--dir", report.dir, "run directory")->required();
    r->add_option("-o,--out", report.out_path, "report path (default: <dir>/report.md)");

    cdi::DotCommand dot;
    std::optional<std::string> cut_labels;
    auto* d = app.add_subcommand("dot", "render a graph document as Graphviz");
    d->add_option("--graph", dot.graph_path, "graph document")->required();
    d->add_option("--cut", cut_labels, "rejected labels 'a,b,...' to highlight");
    d->add_option("-o,--out", dot.out_path, "DOT file")->required();

    cdi::CassetteImportCommand import;
    auto* i = app.add_subcommand("cassette-import", "build a replay cassette from collected responses");
    i->add_option("--props", import.props_path, "proposition file")->required();
    i->add_option("--responses", import.responses_path, "JSON array of response strings")->required();
    i->add_option("-o,--out", import.out_path, "cassette file")->required();
    i->add_option("--model", import.model, "model name recorded in the digest")->capture_default_str();
    i->add_option("--temperature", import.temperature, "temperature recorded in the digest")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c) {
            return cdi::run_compile(compile, std::cout);
        }
        if (*k) {
            for (const auto& p : exclusive) {
                constraints.exclusive_pairs.push_back(split_pair(p));
            }
            return cdi::run_constraints(constraints, std::cout);
        }
        if (*s) {
            solve.options.allow_trivial = !no_trivial;
            return cdi::run_solve(solve, std::cout);
        }
        if (*a) {
            return cdi::run_analyze(analyze, std::cout);
        }
        if (*r) {
            return cdi::run_report(report, std::cout);
        }
        if (*d) {
            if (cut_labels) {
                dot.rejected = split_labels(*cut_labels);
            }
            return cdi::run_dot(dot, std::cout);
        }
        if (*i) {
            return cdi::run_cassette_import(import, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cdi::exit_code_for(e);
    }
    return 2;
}

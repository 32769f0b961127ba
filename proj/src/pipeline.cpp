#include "cdi/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cdi/aggregate.hpp"
#include "cdi/cassette.hpp"
#include "cdi/error.hpp"
#include "cdi/gibbs.hpp"
#include "cdi/http_backend.hpp"
#include "cdi/io.hpp"
#include "cdi/outcome.hpp"

namespace fs = std::filesystem;

namespace cdi {

namespace {

std::string join(const fs::path& dir, const char* name) {
    return (dir / name).string();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

std::string show_part(const LabelSet& part) {
    return part.empty() ? "∅" : format_part(part);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

ConstraintSet load_constraints(const std::optional<std::string>& path) {
    if (!path) {
        return {};
    }
    try {
        return parse_constraints(read_file(*path));
    } catch (const ParseError& e) {
        throw ParseError(*path + ": " + e.what());
    }
}

} // namespace

int run_compile(const CompileCommand& cmd, std::ostream& log, ChatBackend* backend_override) {
    const auto props = load_propositions(cmd.props_path);
    if (cmd.n == 0) {
        throw ParseError("--n must be at least 1");
    }

    std::unique_ptr<ChatBackend> owned;
    std::unique_ptr<Cassette> replay;
    Cassette recording;
    std::unique_ptr<ChatBackend> recorder;
    ChatBackend* backend = backend_override;
    if (!backend && cmd.cassette) {
        replay = std::make_unique<Cassette>(Cassette::load(*cmd.cassette));
        owned = std::make_unique<ReplayBackend>(*replay);
        backend = owned.get();
    } else if (!backend) {
        HttpBackendConfig config;
        config.base_url = cmd.backend_url;
        if (const char* key = std::getenv(cmd.api_key_env.c_str())) {
            config.api_key = key;
        } else {
            log << "warning: " << cmd.api_key_env << " is not set; sending requests without an API key\n";
        }
        owned = std::make_unique<HttpChatBackend>(std::move(config));
        backend = owned.get();
    }
    if (cmd.record) {
        recorder = std::make_unique<RecordingBackend>(*backend, recording);
        backend = recorder.get();
    }

    const fs::path out(cmd.out_dir);
    ensure_dir(out / artifact::samples_dir);

    SampleSet samples;
    try {
        samples = sample_graphs(props, *backend, cmd.n, cmd.compile);
    } catch (...) {
        if (cmd.record) {
            recording.save(*cmd.record);
        }
        throw;
    }
    if (cmd.record) {
        recording.save(*cmd.record);
        log << "recorded " << recording.size() << " response(s) to " << *cmd.record << "\n";
    }

    for (std::size_t i = 0; i < samples.graphs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "sample_%03zu.json", samples.samples[i]);
        save_graph(samples.graphs[i], (out / artifact::samples_dir / name).string());
    }
    if (!samples.failures.empty()) {
        auto failures = nlohmann::ordered_json::array();
        for (const auto& f : samples.failures) {
            failures.push_back({{"sample", f.sample}, {"message", f.message}, {"raw_response", f.raw_response}});
            log << "sample " << f.sample << " failed: " << f.message << "\n";
        }
        write_file(join(out, artifact::failures), failures.dump(2) + "\n");
    }
    write_file(join(out, artifact::propositions), format_propositions(props));

    const auto median = median_graph(samples.graphs);
    save_graph(median, join(out, artifact::graph));
    log << "compiled " << samples.graphs.size() << " of " << cmd.n << " sample(s); median graph has "
        << median.edges().size() << " edge(s)\n";

    if (samples.graphs.size() >= 2) {
        const auto profile = convergence_profile(samples.graphs, cmd.trials, cmd.seed);
        write_file(join(out, artifact::convergence), profile_csv(profile));
        write_file(join(out, artifact::convergence_summary), profile_summary_csv(profile));
        const auto choice = pick_sample_size(profile, cmd.fraction);
        if (choice.converged) {
            log << "median L1 distance falls below " << cmd.fraction << " of its n=1 value at n = " << choice.n
                << "\n";
        } else {
            log << "median L1 distance never fell below " << cmd.fraction << " of its n=1 value (N = " << choice.n
                << ")\n";
        }
    } else {
        log << "convergence profile skipped: needs at least 2 successful samples\n";
    }
    return 0;
}

int run_constraints(const ConstraintsCommand& cmd, std::ostream& log) {
    const auto props = load_propositions(cmd.props_path);
    for (const auto& [a, b] : cmd.exclusive_pairs) {
        for (const auto* l : {&a, &b}) {
            if (std::none_of(props.begin(), props.end(), [&](const Proposition& p) { return p.id == *l; })) {
                throw ParseError("exclusive pair names unknown label '" + *l + "'");
            }
        }
    }
    const auto constraints = infer_constraints(props, cmd.exclusive_pairs);
    write_file(cmd.out_path, serialize_constraints(constraints));
    log << "pinned " << constraints.pinned_accepted.size() << " label(s) accepted; "
        << constraints.exclusive_pairs.size() << " exclusive pair(s)\n";
    return 0;
}

int run_solve(const SolveCommand& cmd, std::ostream& log) {
    const auto graph = load_graph(cmd.graph_path);
    const auto constraints = load_constraints(cmd.constraints_path);

    RankedCuts ranked;
    if (cmd.anneal) {
        ranked.cuts.push_back(anneal_max_cut(graph, constraints, cmd.anneal_params, cmd.seed, cmd.options));
        ranked.exhaustive = false;
        log << "annealing (seed " << cmd.seed << "): best cut found has smaller part "
            << show_part(ranked.cuts.front().rejected) << ", coherence " << format_real(ranked.cuts.front().coherence)
            << "\n";
    } else {
        if (graph.size() > cmd.options.exact_cap) {
            throw DomainError("graph has " + std::to_string(graph.size()) +
                              " vertices, above the exact-mode cap of " + std::to_string(cmd.options.exact_cap) +
                              "; rerun with --anneal for an approximate cut or raise --exact-cap");
        }
        ranked = enumerate_cuts(graph, constraints, cmd.top_k, cmd.options);
        const double top = ranked.cuts.front().coherence;
        std::vector<const Cut*> best;
        for (const auto& c : ranked.cuts) {
            if (c.coherence == top) {
                best.push_back(&c);
            }
        }
        if (best.size() == ranked.feasible && best.size() > 1) {
            log << "all " << best.size() << " feasible cuts tie at coherence " << format_real(top) << "\n";
        } else if (best.size() == 1) {
            log << "the optimal cut has smaller part " << show_part(best.front()->rejected) << ", coherence "
                << format_real(top) << "\n";
        } else {
            log << (best.size() == ranked.cuts.size() ? "at least " : "") << best.size()
                << " optimal cuts (coherence " << format_real(top) << ") have smaller parts ";
            for (std::size_t i = 0; i < best.size(); ++i) {
                log << (i ? ", " : "") << show_part(best[i]->rejected);
            }
            log << "\n";
        }
    }
    if (!constraints.empty()) {
        const auto d = accepted_rejected(ranked.cuts.front(), constraints, graph);
        log << "accepted " << show_part(d.accepted) << "; rejected " << show_part(d.rejected) << "\n";
    }
    write_file(cmd.out_path, serialize_cuts(graph, ranked, constraints));
    return 0;
}

int run_analyze(const AnalyzeCommand& cmd, std::ostream& log) {
    auto doc = parse_cuts(read_file(cmd.cuts_path));
    auto& cuts = doc.ranked.cuts;
    std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.coherence > b.coherence; });
    if (cuts.size() < 2) {
        throw DomainError("analysis needs at least 2 cuts; rerun solve with a larger --top-k");
    }
    const std::size_t m = cmd.m ? *cmd.m : cuts.size();
    const auto spectrum = spectrum_from_cuts(doc.ranked, m);

    const fs::path out(cmd.out_dir);
    ensure_dir(out);
    nlohmann::ordered_json summary;
    summary["M"] = m;

    std::size_t k = 0;
    if (cmd.k) {
        k = *cmd.k;
    } else if (!cmd.beta) {
        const auto suggestion = suggest_k(spectrum, cmd.bandwidth);
        k = suggestion.k;
        summary["threshold"] = suggestion.threshold;
        summary["bandwidth"] = suggestion.bandwidth;
        write_file(join(out, artifact::kde), kde_csv(suggestion.curve));
        log << "density threshold " << format_real(suggestion.threshold) << " (bandwidth "
            << format_real(suggestion.bandwidth) << ") gives K = " << k << "\n";
    }
    double beta = 0.0;
    if (cmd.beta) {
        beta = *cmd.beta;
        log << "using beta = " << format_real(beta) << "\n";
    } else {
        beta = solve_beta(spectrum, k);
        summary["residual"] = beta_equation(spectrum, k, beta) / partition_sum(spectrum, beta);
        log << "solved beta = " << format_real(beta) << " for K = " << k << " of M = " << m << "\n";
    }
    summary["K"] = k;
    summary["beta"] = beta;
    const auto weights = gibbs_weights(spectrum, beta);
    write_file(join(out, artifact::gibbs), gibbs_csv(spectrum, weights));
    write_file(join(out, artifact::analysis), summary.dump(2) + "\n");

    if (!cmd.outcomes_path) {
        return 0;
    }
    OutcomeSpace space;
    try {
        space = parse_outcome_space(read_file(*cmd.outcomes_path));
    } catch (const ParseError& e) {
        throw ParseError(*cmd.outcomes_path + ": " + e.what());
    }
    std::ostringstream tables;
    tables << "rank,";
    for (const auto& a : space.axes()) {
        tables << a.name << ',';
    }
    tables << "probability,exact\n";

    std::vector<std::optional<ExactTable>> per_cut(m);
    for (std::size_t i = 0; i < m; ++i) {
        LabelSet asserted;
        for (const auto& l : cuts[i].rejected) {
            if (space.assertions().count(l)) {
                asserted.insert(l);
            }
        }
        try {
            per_cut[i] = table_from_rejection(asserted, space);
        } catch (const DomainError& e) {
            log << "warning: cut " << i + 1 << " skipped: " << e.what() << "\n";
            continue;
        }
        std::istringstream rows(table_csv(space, *per_cut[i]));
        std::string row;
        std::getline(rows, row);
        while (std::getline(rows, row)) {
            tables << i + 1 << ',' << row << '\n';
        }
    }
    write_file(join(out, artifact::tables), tables.str());

    std::vector<JointTable> real_tables;
    std::vector<double> real_weights;
    double kept = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (per_cut[i]) {
            real_tables.push_back(to_real(*per_cut[i]));
            real_weights.push_back(weights[i]);
            kept += weights[i];
        }
    }
    if (real_tables.empty()) {
        throw DomainError("every cut rules out all outcomes");
    }
    for (double& w : real_weights) {
        w /= kept;
    }
    const auto gibbs_mix = mixture(real_tables, real_weights);
    write_file(join(out, artifact::mixture_gibbs), table_csv(space, gibbs_mix));
    log << "Gibbs-weighted mixture over " << real_tables.size() << " cut(s):\n" << format_table(space, gibbs_mix);

    if (k > 0) {
        std::vector<ExactTable> top;
        for (std::size_t i = 0; i < k; ++i) {
            if (per_cut[i]) {
                top.push_back(*per_cut[i]);
            }
        }
        if (!top.empty()) {
            std::vector<Rational> uniform(top.size(), Rational(1, static_cast<std::int64_t>(top.size())));
            const auto counting = mixture(top, uniform);
            write_file(join(out, artifact::mixture_counting), table_csv(space, counting));
            log << "uniform mixture over the " << top.size() << " most coherent cut(s):\n"
                << format_table(space, to_real(counting));
        }
    }
    return 0;
}

int run_report(const ReportCommand& cmd, std::ostream& log) {
    const fs::path dir(cmd.dir);
    if (!fs::is_directory(dir) || !fs::exists(dir / artifact::graph)) {
        throw IoError("missing required artifact(s) in " + dir.string() + ": " + artifact::graph +
                      " (optional: " + artifact::cuts + ", " + artifact::analysis + ", " + artifact::gibbs + ", " +
                      artifact::convergence_summary + ", " + artifact::propositions + ")");
    }
    auto has = [&](const char* name) { return fs::exists(dir / name); };
    auto absent = [](const char* name) { return std::string("_Not available: ") + name + " is absent._\n\n"; };

    const auto graph = load_graph(join(dir, artifact::graph));
    std::optional<std::vector<Proposition>> props;
    if (has(artifact::propositions)) {
        props = load_propositions(join(dir, artifact::propositions));
    }

    std::ostringstream md;
    md << "# Coherence report\n\n";

    md << "## Propositions\n\n";
    if (props) {
        md << "```\n" << format_propositions(*props) << "```\n\n";
    } else {
        md << absent(artifact::propositions);
    }

    md << "## Coherence graph\n\n";
    std::size_t positive = 0;
    std::size_t negative = 0;
    for (const auto& e : graph.edges()) {
        positive += e.w > 0;
        negative += e.w < 0;
    }
    md << graph.size() << " propositions, " << graph.edges().size() << " edges (" << positive << " consistent, "
       << negative << " inconsistent). Rendering: `" << artifact::graph_dot << "`.\n\n";
    md << "| u | v | weight |\n|---|---|---|\n";
    for (const auto& e : graph.edges()) {
        md << "| " << e.u << " | " << e.v << " | " << format_real(e.w) << " |\n";
    }
    md << "\n";
    write_file(join(dir, artifact::graph_dot), to_dot(graph));

    md << "## Convergence\n\n";
    if (has(artifact::convergence_summary)) {
        const auto profile = parse_profile_summary(read_file(join(dir, artifact::convergence_summary)));
        md << "| n | median L1 distance | q1 | q3 |\n|---|---|---|---|\n";
        for (const auto& s : profile.per_n) {
            md << "| " << s.n << " | " << fixed(s.median, 4) << " | " << fixed(s.q1, 4) << " | " << fixed(s.q3, 4)
               << " |\n";
        }
        const auto choice = pick_sample_size(profile, 0.10);
        md << "\n"
           << (choice.converged ? "Converged: median distance drops below 10% of its n = 1 value at n = " +
                                      std::to_string(choice.n) + "."
                                : "Not converged: median distance stays above 10% of its n = 1 value through n = " +
                                      std::to_string(choice.n) + ".")
           << "\n\n";
    } else {
        md << absent(artifact::convergence_summary);
    }

    md << "## Ranked cuts\n\n";
    if (has(artifact::cuts)) {
        const auto doc = parse_cuts(read_file(join(dir, artifact::cuts)));
        md << (doc.ranked.exhaustive ? "Exhaustive enumeration." : "Approximate (annealing).") << "\n\n";
        md << "| rank | smaller part | coherence |\n|---|---|---|\n";
        std::size_t rank = 1;
        for (const auto& c : doc.ranked.cuts) {
            md << "| " << rank++ << " | " << show_part(c.rejected) << " | " << format_real(c.coherence) << " |\n";
        }
        md << "\n";
        if (!doc.ranked.cuts.empty()) {
            const auto& best = doc.ranked.cuts.front();
            const auto d = accepted_rejected(best, doc.constraints, graph);
            md << "Decision for the most coherent cut:\n\n";
            md << "- accepted: " << show_part(d.accepted) << "\n";
            md << "- rejected: " << show_part(d.rejected) << "\n";
            if (props) {
                LabelSet acc_h;
                LabelSet rej_h;
                for (const auto& p : *props) {
                    if (p.category != Category::hypothesis) {
                        continue;
                    }
                    (d.rejected.count(p.id) ? rej_h : acc_h).insert(p.id);
                }
                md << "- accepted hypotheses: " << show_part(acc_h) << "\n";
                md << "- rejected hypotheses: " << show_part(rej_h) << "\n";
            }
            md << "\nRendering with the cut: `" << artifact::cut_dot << "`.\n\n";
            write_file(join(dir, artifact::cut_dot), to_dot(graph, d.rejected));
        }
    } else {
        md << absent(artifact::cuts);
    }

    md << "## Gibbs weighting\n\n";
    if (has(artifact::analysis) && has(artifact::gibbs)) {
        const auto summary = nlohmann::json::parse(read_file(join(dir, artifact::analysis)));
        md << "K = " << summary.value("K", 0) << ", beta = " << format_real(summary.value("beta", 0.0))
           << ", M = " << summary.value("M", 0) << " cuts.\n\n";
        md << "```\n" << read_file(join(dir, artifact::gibbs)) << "```\n\n";
    } else {
        md << absent(artifact::analysis);
    }

    md << "## Outcome tables\n\n";
    bool any = false;
    for (const char* name : {artifact::mixture_counting, artifact::mixture_gibbs}) {
        if (has(name)) {
            md << "`" << name << "`:\n\n```\n" << read_file(join(dir, name)) << "```\n\n";
            any = true;
        }
    }
    if (!any) {
        md << absent(artifact::mixture_counting);
    }

    const std::string out = cmd.out_path ? *cmd.out_path : join(dir, artifact::report);
    write_file(out, md.str());
    log << "wrote " << out << "\n";
    return 0;
}

int run_dot(const DotCommand& cmd, std::ostream& log) {
    const auto graph = load_graph(cmd.graph_path);
    write_file(cmd.out_path, to_dot(graph, cmd.rejected));
    log << "wrote " << cmd.out_path << "\n";
    return 0;
}

int run_cassette_import(const CassetteImportCommand& cmd, std::ostream& log) {
    const auto props = load_propositions(cmd.props_path);
    nlohmann::json responses;
    try {
        responses = nlohmann::json::parse(read_file(cmd.responses_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(cmd.responses_path + ": " + e.what());
    }
    if (!responses.is_array()) {
        throw ParseError(cmd.responses_path + ": expected a JSON array of response strings");
    }
    Cassette cassette;
    const auto prompt = build_prompt(props);
    for (std::size_t i = 0; i < responses.size(); ++i) {
        if (!responses[i].is_string()) {
            throw ParseError(cmd.responses_path + ": entry " + std::to_string(i) + " is not a string");
        }
        cassette.add(ChatRequest{cmd.model, cmd.temperature, prompt, i}, responses[i].get<std::string>());
    }
    cassette.save(cmd.out_path);
    log << "wrote " << cassette.size() << " entries to " << cmd.out_path << "\n";
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IoError*>(&e)) {
        return 2;
    }
    return 1;
}

} // namespace cdi

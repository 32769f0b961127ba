#ifndef CDI_PIPELINE_HPP
#define CDI_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdi/llm.hpp"
#include "cdi/solver.hpp"

namespace cdi {

// Run-directory artifact names shared by the commands.
namespace artifact {
inline constexpr const char* graph = "graph.json";
inline constexpr const char* samples_dir = "samples";
inline constexpr const char* failures = "failures.json";
inline constexpr const char* propositions = "propositions.md";
inline constexpr const char* convergence = "convergence.csv";
inline constexpr const char* convergence_summary = "convergence_summary.csv";
inline constexpr const char* cuts = "cuts.json";
inline constexpr const char* analysis = "analysis.json";
inline constexpr const char* gibbs = "gibbs.csv";
inline constexpr const char* kde = "kde.csv";
inline constexpr const char* tables = "tables.csv";
inline constexpr const char* mixture_counting = "mixture_counting.csv";
inline constexpr const char* mixture_gibbs = "mixture_gibbs.csv";
inline constexpr const char* report = "report.md";
inline constexpr const char* graph_dot = "graph.dot";
inline constexpr const char* cut_dot = "cut.dot";
} // namespace artifact

struct CompileCommand {
    std::string props_path;
    std::string out_dir;
    std::size_t n = 15;
    std::optional<std::string> cassette;  // replay
    std::optional<std::string> record;    // record live responses here
    std::string backend_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    CompileOptions compile;
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    double fraction = 0.10;
};

// Backend used when neither a cassette nor the HTTP client is wanted
// (tests); null means "build from the command".
int run_compile(const CompileCommand& cmd, std::ostream& log, ChatBackend* backend_override = nullptr);

struct ConstraintsCommand {
    std::string props_path;
    std::vector<std::pair<std::string, std::string>> exclusive_pairs;
    std::string out_path;
};

int run_constraints(const ConstraintsCommand& cmd, std::ostream& log);

struct SolveCommand {
    std::string graph_path;
    std::optional<std::string> constraints_path;
    std::string out_path;
    std::size_t top_k = 16;
    bool anneal = false;
    AnnealParams anneal_params;
    std::uint64_t seed = 0;
    SolveOptions options;
};

int run_solve(const SolveCommand& cmd, std::ostream& log);

struct AnalyzeCommand {
    std::string cuts_path;
    std::string out_dir;
    std::optional<std::size_t> k;
    std::optional<double> beta;  // skips root finding
    std::optional<std::size_t> m;
    std::optional<double> bandwidth;
    std::optional<std::string> outcomes_path;
};

int run_analyze(const AnalyzeCommand& cmd, std::ostream& log);

struct ReportCommand {
    std::string dir;
    std::optional<std::string> out_path;  // defaults to <dir>/report.md
};

int run_report(const ReportCommand& cmd, std::ostream& log);

struct DotCommand {
    std::string graph_path;
    std::optional<LabelSet> rejected;
    std::string out_path;
};

int run_dot(const DotCommand& cmd, std::ostream& log);

struct CassetteImportCommand {
    std::string props_path;
    std::string responses_path;  // JSON array of response strings
    std::string out_path;
    std::string model = "o1-mini";
    double temperature = 1.0;
};

int run_cassette_import(const CassetteImportCommand& cmd, std::ostream& log);

/// Maps an exception from a command onto the process exit code:
/// 1 for domain errors, 2 for usage and I/O errors.
int exit_code_for(const std::exception& e);

} // namespace cdi

#endif // CDI_PIPELINE_HPP

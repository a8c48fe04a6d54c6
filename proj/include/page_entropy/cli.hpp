#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace page_entropy::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kInfeasible = 4 };

/// Parameters of one command. Filled from an optional JSON config file first,
/// then overridden by any flag given on the command line.
struct RunConfig {
    std::string command;
    std::string model = "fermions";  ///< catalog expression, JSON path or inline JSON
    std::vector<std::size_t> V;
    std::optional<std::size_t> N;
    std::optional<long> M;
    std::optional<double> n;
    std::optional<double> f;
    std::vector<std::size_t> VA;
    std::optional<std::string> grid;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    std::optional<std::size_t> window;
    double lambda = 0.0;
    double Delta = 0.55;
    double U = 1.0;
    std::optional<std::string> nmax;
    std::vector<std::string> methods;
    std::optional<std::string> out;
    std::string format = "csv";
    unsigned threads = 1;
};

/// Parses argv-style arguments (without the program name). Throws
/// std::invalid_argument with a field-level message on bad input.
RunConfig parse_arguments(const std::vector<std::string>& args);

/// Runs a validated config, writing the result to `out` (or config.out).
void execute(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, execute, map exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace page_entropy::cli

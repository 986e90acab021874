#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biset/geometry.hpp"
#include "biset/motions.hpp"

namespace biset::cli {

enum class Format { Json, Csv, Text };

/// Exit codes of every subcommand.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

/// Everything one CLI invocation depends on. Equal configs give byte-identical reports.
struct RunConfig {
    std::string subcommand;

    std::string metric = "canonical";   // `canonical` or an expression
    std::string metric_general;         // chi=..,phi=..,psi1=..,psi2=.. (wins over metric)
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    std::optional<double> tol;          // subcommand default when unset
    ProbeRange range;
    std::string input;
    std::string output;                 // stdout when empty
    std::optional<Format> format;       // CSV for `generate`, JSON otherwise
    std::size_t detail = 10;            // per-sample entries listed by `rank`

    // motions
    std::optional<std::pair<double, double>> apply;
    std::optional<Point3> point;
    std::size_t verify = 0;

    // pde
    std::string pde_case = "a0";
    std::string chi = "id";
    std::string sigma = "const:1";
    std::string tau = "const:1";
    std::string phi;                    // anonzero: integrated when empty
    std::string psi;

    // generate
    std::size_t p = 8;
    std::size_t q = 5;
    double noise = 0.0;
    std::string coords_out;
};

/// Executes one subcommand, writing the report to `out` (or config.output) and
/// diagnostics to `err`. Returns kPass, kFail or kUsage.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name) and runs it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Subcommand default for --tol.
double default_tolerance(const std::string& subcommand);

}  // namespace biset::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gapkit/coefficient.hpp"
#include "gapkit/error.hpp"
#include "gapkit/potential.hpp"

namespace gapkit::cli {

using nlohmann::json;

inline constexpr const char* kSchema = "gapkit/1";

// Process exit codes; also listed in `gapkit --help`.
enum ExitCode : int {
    kOk = 0,
    kBadFlags = 2,
    kInvalidArgument = 3,
    kDomain = 4,
    kConvergence = 5,
    kIo = 6,
    kFormat = 7,
    kVerifyFailed = 8,
    kInternal = 9,
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
    std::string command;
    std::string potential_path;
    std::string bc = "dirichlet";
    std::string p = "const:1";
    int k = 2;
    double M = 0.0;
    double x_minus = 0.0;
    std::string M_grid;
    std::string cls = "step";
    std::string V0_path;
    std::string sign = "+";
    int cells = 0;
    double tol = 0.0;
    std::uint64_t seed = 7;
    std::string out = "json";
    std::string output_path;
    std::string degenerate_grid;
    int threads = 0;
    bool quick = false;
};

BoundaryConditions parse_bc(const std::string& text);
CoefficientP parse_p(const std::string& text);
/// "log:a,b,n", "lin:a,b,n" or "list:v1,v2,...".
std::vector<double> parse_grid(const std::string& text);
int worker_count(int requested);

/// Writes to output_path or stdout.
void emit(const RunConfig& cfg, const std::string& text);

int run_solve(const RunConfig& cfg);
int run_step(const RunConfig& cfg);
int run_minimize(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
int run_asymptotics(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);

}  // namespace gapkit::cli

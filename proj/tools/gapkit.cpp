#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

using namespace gapkit::cli;

namespace {

void print_error(const std::string& command, const std::string& kind, const std::string& message, int code) {
    json j{{"schema", kSchema},
           {"command", command},
           {"error", {{"kind", kind}, {"message", message}}},
           {"exit_code", code}};
    std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral gap toolkit for -(p u')' + V u = lambda u on [0, pi]"};
    app.footer(
        "Exit codes: 0 success, 2 bad flags, 3 invalid argument, 4 domain error,\n"
        "5 convergence failure, 6 I/O error, 7 malformed JSON, 8 verify found failing checks,\n"
        "9 internal error. Errors are reported as JSON on stderr.\n"
        "GAPKIT_THREADS bounds the worker pool used by sweep and asymptotics.");
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "Lowest eigenpairs by shooting");
    solve->add_option("--potential", cfg.potential_path, "Potential descriptor (JSON)")->required();
    solve->add_option("--bc", cfg.bc, "dirichlet | neumann | angles:a,b")->capture_default_str();
    solve->add_option("--p", cfg.p, "const:v | affine:p0,slope")->capture_default_str();
    solve->add_option("-k", cfg.k, "Number of eigenpairs")->capture_default_str();
    solve->add_option("--tol", cfg.tol, "Eigenvalue tolerance (default 1e-12)");

    auto* step = app.add_subcommand("step", "Closed-form spectrum of M on [x_minus, pi]");
    step->add_option("--M", cfg.M, "Step height")->required();
    step->add_option("--xminus", cfg.x_minus, "Step location in (0, pi)")->required();
    step->add_option("-k", cfg.k, "Number of eigenvalues (<= 4)")->capture_default_str();

    auto* minimize = app.add_subcommand("minimize", "Minimise the gap over a potential class");
    minimize->add_option("--class", cfg.cls, "step | single-well | convex")->capture_default_str();
    minimize->add_option("--M", cfg.M, "Bound on the variable part")->required();
    minimize->add_option("--V0", cfg.V0_path, "Background potential (JSON)");
    minimize->add_option("--sign", cfg.sign, "+ or -; - is exploratory")->capture_default_str();
    minimize->add_option("--cells", cfg.cells, "Cells of the search grid (32 single-well, 16 convex)");
    minimize->add_option("--tol", cfg.tol, "Optimiser tolerance");

    auto* sweep = app.add_subcommand("sweep", "Optimal step over a grid of M");
    sweep->add_option("--M-grid", cfg.M_grid, "log:a,b,n | lin:a,b,n | list:v,...")->capture_default_str();
    sweep->add_option("--threads", cfg.threads, "Worker count (overrides GAPKIT_THREADS)");

    auto* asym = app.add_subcommand("asymptotics", "Limit constant, reduced system and large-M table");
    asym->add_option("--M-grid", cfg.M_grid, "M values for the table");
    asym->add_option("--degenerate-grid", cfg.degenerate_grid, "M values for the lambda_1 = M scan");
    asym->add_option("--threads", cfg.threads, "Worker count (overrides GAPKIT_THREADS)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--seed", cfg.seed, "Seed for the randomised checks")->capture_default_str();
    verify->add_flag("--quick", cfg.quick, "Skip the multi-dimensional searches");

    for (CLI::App* sub : {solve, step, minimize, sweep, asym, verify}) {
        const bool table = sub == verify;
        sub->add_option("--out", cfg.out, table ? "table | json" : "json | csv")
            ->default_str(table ? "table" : "json");
        sub->add_option("-o,--output", cfg.output_path, "Write to this file instead of stdout");
    }

    try {
        cfg.out.clear();
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("", "bad_flags", e.what(), kBadFlags);
        return kBadFlags;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (cfg.out.empty()) cfg.out = cfg.command == "verify" ? "table" : "json";
    try {
        if (cfg.command == "solve") return run_solve(cfg);
        if (cfg.command == "step") return run_step(cfg);
        if (cfg.command == "minimize") return run_minimize(cfg);
        if (cfg.command == "sweep") return run_sweep(cfg);
        if (cfg.command == "asymptotics") return run_asymptotics(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
    } catch (const gapkit::Error& e) {
        const int code = exit_code_for(e.kind());
        print_error(cfg.command, gapkit::to_string(e.kind()), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        print_error(cfg.command, "internal", e.what(), kInternal);
        return kInternal;
    }
    return kInternal;
}

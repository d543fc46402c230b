#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "gapkit/asymptotics.hpp"
#include "gapkit/io.hpp"
#include "gapkit/optimizer.hpp"
#include "gapkit/solver.hpp"
#include "gapkit/step.hpp"

namespace gapkit::cli {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return kInvalidArgument;
    case ErrorKind::Domain: return kDomain;
    case ErrorKind::Convergence: return kConvergence;
    case ErrorKind::Io: return kIo;
    case ErrorKind::Format: return kFormat;
    }
    return kInternal;
}

namespace {

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidArgument, "bad number '" + item + "' in " + what);
        }
    }
    return out;
}

// JSON has no NaN; missing values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

BoundaryConditions parse_bc(const std::string& text) {
    if (text == "dirichlet") return BoundaryConditions::dirichlet();
    if (text == "neumann") return BoundaryConditions::neumann();
    if (text.rfind("angles:", 0) == 0) {
        const auto v = split_numbers(text.substr(7), "--bc");
        if (v.size() != 2) fail(ErrorKind::InvalidArgument, "--bc angles needs two values");
        return BoundaryConditions(v[0], v[1]);
    }
    fail(ErrorKind::InvalidArgument, "--bc must be dirichlet, neumann or angles:a,b");
}

CoefficientP parse_p(const std::string& text) {
    if (text.rfind("const:", 0) == 0) {
        const auto v = split_numbers(text.substr(6), "--p");
        if (v.size() != 1 || !(v[0] > 0.0)) fail(ErrorKind::InvalidArgument, "--p const needs one positive value");
        return CoefficientP::constant(v[0]);
    }
    if (text.rfind("affine:", 0) == 0) {
        const auto v = split_numbers(text.substr(7), "--p");
        if (v.size() != 2) fail(ErrorKind::InvalidArgument, "--p affine needs p0,slope");
        return CoefficientP::affine(v[0], v[1]);
    }
    fail(ErrorKind::InvalidArgument, "--p must be const:v or affine:p0,slope");
}

std::vector<double> parse_grid(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) fail(ErrorKind::InvalidArgument, "grid must be log:, lin: or list:");
    const std::string kind = text.substr(0, colon);
    const auto v = split_numbers(text.substr(colon + 1), "grid");
    if (kind == "list") {
        if (v.empty()) fail(ErrorKind::InvalidArgument, "empty grid");
        return v;
    }
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) {
        fail(ErrorKind::InvalidArgument, "grid needs start,stop,count");
    }
    const int n = static_cast<int>(v[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : double(i) / (n - 1);
        if (kind == "log") {
            if (!(v[0] > 0.0 && v[1] > 0.0)) fail(ErrorKind::InvalidArgument, "log grid needs positive ends");
            out.push_back(std::exp(std::log(v[0]) + t * (std::log(v[1]) - std::log(v[0]))));
        } else if (kind == "lin") {
            out.push_back(v[0] + t * (v[1] - v[0]));
        } else {
            fail(ErrorKind::InvalidArgument, "grid must be log:, lin: or list:");
        }
    }
    return out;
}

int worker_count(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("GAPKIT_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return std::clamp(n, 1, 256);
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(cfg.output_path);
    if (!out) fail(ErrorKind::Io, "cannot write " + cfg.output_path);
    out << text;
    if (!out) fail(ErrorKind::Io, "write failed for " + cfg.output_path);
}

namespace {

json header(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json report_json(const MinimizerReport& r) {
    json j;
    j["class"] = to_string(r.cls);
    j["M"] = r.M;
    j["gamma_star"] = r.gamma_star;
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["parameters"] = r.parameters;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["exploratory"] = r.exploratory;
    j["notes"] = r.notes;
    json fo = json::array();
    for (const auto& c : r.first_order) {
        fo.push_back({{"direction", c.direction}, {"anchor", c.anchor}, {"derivative", c.derivative},
                      {"kappa", c.kappa}, {"admissible", c.admissible}});
    }
    j["first_order"] = fo;
    switch (r.cls) {
    case MinimizerClass::StepFamily: {
        j["x_minus_star"] = r.x_minus_star;
        j["side"] = "left";
        j["reflected_x_minus"] = r.reflected_x_minus;
        j["stationarity"] = r.stationarity;
        j["at_domain_boundary"] = r.at_domain_boundary;
        j["bounds"] = {{"x_lower", r.x_lower_bound_ok}, {"x_upper", r.x_upper_bound_ok},
                       {"lambda2", r.lambda2_bounds_ok}, {"lambda1", r.lambda1_bounds_ok},
                       {"lambda1_below_M", r.lambda1_below_M}};
        json lm = json::array();
        for (const auto& m : r.local_minima) lm.push_back({{"x_minus", m.x_minus}, {"gamma", m.gamma}});
        j["local_minima"] = lm;
        break;
    }
    case MinimizerClass::SingleWellGrid:
        j["transition_index"] = r.transition_index;
        j["l1_to_step"] = r.l1_to_step;
        j["nearest_step_x"] = r.nearest_step_x;
        break;
    case MinimizerClass::ConvexPL:
        j["slope"] = r.slope;
        j["intercept"] = r.intercept;
        j["max_kink"] = r.max_kink;
        j["affine"] = r.affine;
        break;
    }
    if (r.potential) j["potential"] = potential_to_json(*r.potential);
    return j;
}

}  // namespace

int run_solve(const RunConfig& cfg) {
    if (cfg.potential_path.empty()) fail(ErrorKind::InvalidArgument, "solve needs --potential");
    if (cfg.k < 1 || cfg.k > 64) fail(ErrorKind::InvalidArgument, "-k must lie in [1, 64]");
    if (cfg.out != "json" && cfg.out != "csv") fail(ErrorKind::InvalidArgument, "--out must be json or csv");
    const Potential V = read_potential(cfg.potential_path);
    const BoundaryConditions bc = parse_bc(cfg.bc);
    const CoefficientP p = parse_p(cfg.p);
    const int k = cfg.out == "csv" ? std::max(cfg.k, 2) : cfg.k;
    const auto sols = shoot_eigenvalues(p, V, bc, k, cfg.tol > 0.0 ? cfg.tol : 1e-12);

    if (cfg.out == "csv") {
        std::string text = "x,u1,u2,V\n";
        for (std::size_t i = 0; i < sols[0].x.size(); ++i) {
            const double x = sols[0].x[i];
            text += csv_number(x) + "," + csv_number(sols[0].u[i]) + "," + csv_number(sols[1].u[i]) + "," +
                    csv_number(V.evaluate(x)) + "\n";
        }
        emit(cfg, text);
        return kOk;
    }

    json j = header("solve");
    j["bc"] = {{"alpha", bc.alpha}, {"beta", bc.beta}};
    j["exploratory"] = !bc.is_dirichlet();
    json pairs = json::array();
    for (const auto& s : sols) {
        pairs.push_back({{"index", s.index}, {"lambda", s.lambda}, {"sign_changes", s.sign_changes},
                         {"sup_norm", s.sup_norm}, {"norm", s.norm}, {"degenerate", s.degenerate}});
    }
    j["eigenpairs"] = pairs;
    j["lambda1"] = sols[0].lambda;
    if (k >= 2) {
        j["lambda2"] = sols[1].lambda;
        j["gamma"] = sols[1].lambda - sols[0].lambda;
        try {
            const Crossings c = crossing_points(sols[0], sols[1], p);
            j["crossings"] = {{"x_minus", c.x_minus}, {"x_zero", c.x_zero}, {"x_plus", c.x_plus},
                              {"sign_changes", c.sign_changes}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Convergence) throw;
            j["crossings"] = nullptr;
            j["crossings_error"] = e.what();
        }
    }
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

int run_step(const RunConfig& cfg) {
    if (!(cfg.M >= 0.0)) fail(ErrorKind::InvalidArgument, "--M must be >= 0");
    if (!(cfg.x_minus > 0.0 && cfg.x_minus < kPi)) fail(ErrorKind::Domain, "--xminus must lie in (0, pi)");
    if (cfg.k < 1 || cfg.k > 4) fail(ErrorKind::InvalidArgument, "-k must lie in [1, 4]");
    const auto ev = step_eigenvalues(cfg.M, cfg.x_minus, cfg.k);
    json j = header("step");
    j["M"] = cfg.M;
    j["x_minus"] = cfg.x_minus;
    json arr = json::array();
    for (const auto& e : ev) {
        arr.push_back({{"lambda", e.lambda}, {"branch", to_string(e.branch)}, {"residual", e.residual}});
    }
    j["eigenvalues"] = arr;
    if (ev.size() >= 2) j["gamma"] = ev[1].lambda - ev[0].lambda;
    if (cfg.M > 0.0) {
        j["degenerate_condition"] = degenerate_condition(cfg.M, cfg.x_minus);
        j["degenerate_condition_printed"] = degenerate_condition_printed(cfg.M, cfg.x_minus);
    }
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

int run_minimize(const RunConfig& cfg) {
    if (!(cfg.M >= 0.0) || !std::isfinite(cfg.M)) fail(ErrorKind::InvalidArgument, "--M must be finite and >= 0");
    if (cfg.sign != "+" && cfg.sign != "-") fail(ErrorKind::InvalidArgument, "--sign must be + or -");
    if (cfg.out != "json") fail(ErrorKind::InvalidArgument, "minimize writes json only");
    std::optional<Potential> V0;
    if (!cfg.V0_path.empty()) V0 = read_potential(cfg.V0_path);
    const int sign = cfg.sign == "+" ? 1 : -1;
    MinimizerReport r;
    if (cfg.cls == "step") {
        if (V0 || sign < 0) fail(ErrorKind::InvalidArgument, "the step family has no background or sign");
        if (!(cfg.M > 0.0)) fail(ErrorKind::InvalidArgument, "the step family needs M > 0");
        r = minimize_step_family(cfg.M, cfg.tol > 0.0 ? cfg.tol : 1e-10);
        r.first_order = verify_first_order(*r.potential, PotentialClass::SingleWell);
    } else if (cfg.cls == "single-well") {
        r = minimize_single_well_grid(cfg.M, cfg.cells > 0 ? cfg.cells : 32, V0, sign,
                                      cfg.tol > 0.0 ? cfg.tol : 1e-8);
    } else if (cfg.cls == "convex") {
        if (sign < 0) fail(ErrorKind::InvalidArgument, "the convex search supports sign + only");
        r = minimize_convex_pl(cfg.M, cfg.cells > 0 ? cfg.cells : 16, V0, cfg.tol > 0.0 ? cfg.tol : 1e-8);
    } else {
        fail(ErrorKind::InvalidArgument, "--class must be step, single-well or convex");
    }
    json j = header("minimize");
    j["report"] = report_json(r);
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

namespace {

// Runs f(i) for i in [0, n) on a bounded pool; results land by index.
template <class F>
void parallel_for(int n, int workers, F&& f) {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (int i = next++; i < n && !failed; i = next++) {
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < std::min(workers, n); ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

int run_sweep(const RunConfig& cfg) {
    const std::vector<double> grid = parse_grid(cfg.M_grid.empty() ? "log:0.5,1e6,25" : cfg.M_grid);
    for (double M : grid) {
        if (!(M > 0.0)) fail(ErrorKind::InvalidArgument, "sweep needs M > 0");
    }
    if (cfg.out != "json" && cfg.out != "csv") fail(ErrorKind::InvalidArgument, "--out must be json or csv");
    std::vector<MinimizerReport> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), worker_count(cfg.threads),
                 [&](int i) { rows[i] = minimize_step_family(grid[i]); });
    if (cfg.out == "csv") {
        std::string text = "M,x_minus_star,lambda1,lambda2,gamma_star\n";
        for (const auto& r : rows) {
            text += csv_number(r.M) + "," + csv_number(r.x_minus_star) + "," + csv_number(r.lambda1) + "," +
                    csv_number(r.lambda2) + "," + csv_number(r.gamma_star) + "\n";
        }
        emit(cfg, text);
        return kOk;
    }
    json j = header("sweep");
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"M", r.M}, {"x_minus_star", r.x_minus_star}, {"lambda1", r.lambda1},
                       {"lambda2", r.lambda2}, {"gamma_star", r.gamma_star}});
    }
    j["rows"] = arr;
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

int run_asymptotics(const RunConfig& cfg) {
    const ThetaConstant t = solve_theta();
    const ProxyMinimum pm = minimize_gap_proxy();
    const std::vector<double> grid = parse_grid(cfg.M_grid.empty() ? "list:100,1000,10000,100000,1000000" : cfg.M_grid);
    for (double M : grid) {
        if (!(M > 0.0)) fail(ErrorKind::InvalidArgument, "asymptotics needs M > 0");
    }
    std::vector<MinimizerReport> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), worker_count(cfg.threads),
                 [&](int i) { rows[i] = minimize_step_family(grid[i]); });

    json j = header("asymptotics");
    j["theta"] = t.theta;
    j["limit_gap"] = t.limit_gap;
    j["theta_residual"] = t.residual;
    j["y1_star"] = pm.y1_star;
    j["gap_star"] = pm.gap_star;
    j["upper_y1"] = pm.upper_y1;
    j["gap_at_upper"] = pm.gap_at_upper;
    j["derivative_identity_residual"] = pm.derivative_identity_residual;
    json table = json::array();
    for (const auto& r : rows) {
        table.push_back({{"M", r.M},
                         {"gamma_star", r.gamma_star},
                         {"gamma_star_minus_limit", r.gamma_star - t.limit_gap},
                         {"x_minus_star", r.x_minus_star},
                         {"x_minus_expansion", x_minus_expansion(r.M)},
                         {"lambda1_minus_M", r.lambda1 - r.M}});
    }
    j["table"] = table;
    const std::vector<double> dgrid =
        parse_grid(cfg.degenerate_grid.empty() ? "list:0.5,1,2,3,3.5,4,5,7,10,20,50,100" : cfg.degenerate_grid);
    const DegenerateScan scan = degenerate_branch_scan(dgrid);
    json drows = json::array();
    for (const auto& r : scan.rows) {
        drows.push_back({{"M", r.M}, {"x_minus_star", r.x_minus_star}, {"lambda1_minus_M", r.lambda1_minus_M},
                         {"x_degenerate", num(r.x_degenerate)}, {"printed_form_at_x", num(r.printed_form_at_x)}});
    }
    j["degenerate_scan"] = {{"rows", drows}, {"threshold", num(scan.threshold)}};
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

}  // namespace gapkit::cli

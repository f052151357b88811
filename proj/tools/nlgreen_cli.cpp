// nlgreen command line: membership checks, Green's function tabulation,
// short-time expansion solves, error benchmarks and the catalog listing.
//
// Exit codes: 0 success / member, 1 non-member, 2 unknown verdict,
// 3 partial output after solver blow-up, 64 parse error, 65 fit guard.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nlgreen/nlgreen.hpp"

namespace {

using namespace nlgreen;

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct OutputSink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open output file " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "load a key=value config file first");
    cmd->add_option("--nonlin", cfg.nonlin, "nonlinearity N(w)");
    cmd->add_option("--forcing", cfg.forcing, "forcing: zero | delta | expression in t");
    cmd->add_option("--s", cfg.s, "impulse scale s");
    cmd->add_option("--K", cfg.K, "expansion truncation order");
    cmd->add_option("--strategy", cfg.strategy, "alpha fit strategy: match | lsq");
    cmd->add_option("--rtol", cfg.rtol, "relative tolerance");
    cmd->add_option("--atol", cfg.atol, "absolute tolerance");
    cmd->add_option("--grid", [&cfg](const std::vector<std::string>& vals) {
        std::istringstream gs(vals.back());
        std::string part;
        std::getline(gs, part, ',');
        cfg.grid_n = std::stoi(part);
        std::getline(gs, part, ',');
        cfg.grid_t0 = std::stod(part);
        std::getline(gs, part, ',');
        cfg.grid_t1 = std::stod(part);
        return true;
    }, "grid as n,t0,t1");
    cmd->add_option("--eta", cfg.eta, "mollifier width for delta references");
    cmd->add_option("--t-fit", cfg.t_fit, "least-squares fit window end");
    cmd->add_option("--t-max", cfg.t_max, "horizon for green tabulation");
    cmd->add_option("--tol", cfg.tol, "membership identity tolerance");
    cmd->add_option("--samples", cfg.samples, "membership sample paths");
    cmd->add_flag("--liouville", cfg.liouville, "use the two-branch exponential entry");
    cmd->add_option("--liouville-eps", cfg.liouville_eps, "epsilon of the liouville entry");
    cmd->add_option("--out", cfg.out, "output path (default stdout)");
    cmd->add_option("--seed", cfg.seed, "sampling seed");
}

int cmd_check(const RunConfig& cfg) {
    NonlinExpr expr = parse_nonlin(cfg.nonlin);
    MembershipVerdict v = check_membership(expr, cfg.tol, cfg.samples, cfg.seed);
    OutputSink sink(cfg.out);
    std::ostream& os = sink.get();
    os << "expression: " << print_nonlin(expr) << "\n";
    switch (v.status) {
        case MembershipVerdict::Status::member_structural:
            os << "verdict: member (structural)\n";
            for (const auto& r : v.rule_trace) os << "  rule: " << r << "\n";
            return 0;
        case MembershipVerdict::Status::member_numeric:
            os << "verdict: member (numeric evidence only)\n";
            for (const auto& r : v.rule_trace) os << "  note: " << r << "\n";
            os << "  max identity residual: " << g17(v.max_residual) << " (bound "
               << g17(v.residual_bound) << ")\n";
            return 0;
        case MembershipVerdict::Status::non_member:
            os << "verdict: non-member\n";
            if (v.witness) {
                os << "  witness: t = " << g17(v.witness->t) << ", w = " << g17(v.witness->w_value)
                   << ", N(theta*w) = " << g17(v.witness->lhs) << ", theta*N(w) = "
                   << g17(v.witness->rhs) << "\n";
                os << "  " << v.witness->note << "\n";
            }
            return 1;
        case MembershipVerdict::Status::unknown:
            os << "verdict: unknown\n";
            for (const auto& r : v.rule_trace) os << "  note: " << r << "\n";
            return 2;
    }
    return 2;
}

int cmd_green(const RunConfig& cfg) {
    OutputSink sink(cfg.out);
    std::ostream& os = sink.get();
    std::vector<double> grid = cfg.make_grid();

    if (cfg.liouville) {
        GreenFn g = liouville_green(cfg.liouville_eps);
        os << "# liouville entry, eps=" << g17(cfg.liouville_eps) << ", phi="
           << g17(g.liouville_phi()) << ", s=" << g17(g.s()) << "\n";
        os << "t,G\n";
        for (double t : grid) os << g17(t) << ',' << g17(g(t)) << '\n';
        return 0;
    }

    NonlinExpr expr = parse_nonlin(cfg.nonlin);
    double horizon = cfg.t_max;
    for (double t : grid) horizon = std::max(horizon, t);
    GreenFn g = green_numeric(expr, cfg.s, horizon, cfg.rtol, cfg.atol);

    // catalog cross-check where one matches
    std::string canon = print_nonlin(expr);
    const GreenFn* cat = nullptr;
    GreenFn cat_store = g;
    if (canon == "w^3" && std::fabs(cfg.s - 1.0) < 1e-9) {
        cat_store = green_catalog(CatalogName::cubic, 1.0);
        cat = &cat_store;
    } else if (canon == "sin(w)" && std::fabs(cfg.s - std::sqrt(2.0)) < 1e-9) {
        cat_store = green_catalog(CatalogName::sine, std::sqrt(2.0));
        cat = &cat_store;
    } else if (canon == "sinh(w)" && cfg.s != 0.0) {
        cat_store = green_catalog(CatalogName::sinh_gordon, cfg.s);
        cat = &cat_store;
    }
    if (cat) {
        double worst = 0.0;
        for (double t : grid)
            if (t > 0.0 && t <= g.horizon()) worst = std::max(worst, std::fabs(g(t) - (*cat)(t)));
        std::cerr << "catalog cross-check (" << canon << "): max |numeric - closed form| = "
                  << g17(worst) << "\n";
    }

    os << "# s=" << g17(cfg.s) << " nonlin=" << canon << "\n";
    os << "t,G\n";
    bool truncated = !g.complete();
    for (double t : grid) {
        if (t > g.horizon() && truncated) break;
        os << g17(t) << ',' << g17(g(t)) << '\n';
    }
    if (truncated) {
        std::cerr << "warning: solver blow-up before horizon; table truncated at t = "
                  << g17(g.horizon()) << "\n";
        return 3;
    }
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    NonlinExpr expr = parse_nonlin(cfg.nonlin);
    Forcing forcing = Forcing::parse(cfg.forcing);
    std::vector<double> grid = cfg.make_grid();
    double horizon = 1.0;
    for (double t : grid) horizon = std::max(horizon, t);

    GreenFn green = cfg.liouville ? liouville_green(cfg.liouville_eps)
                                  : green_numeric(expr, cfg.s, horizon + cfg.t_fit + 0.1,
                                                  cfg.rtol, cfg.atol);

    ExpansionSolution sol{green, 0, {1.0}, {}, {}};
    if (forcing.kind() == Forcing::Kind::delta && cfg.K == 0) {
        sol.fit.strategy = "sifting";
    } else if (cfg.strategy == "match") {
        if (forcing.kind() != Forcing::Kind::smooth ||
            forcing.derivatives_at_zero(0)[0] == 0.0) {
            std::cerr << "error: strategy 'match' needs smooth forcing with f(0) != 0; "
                         "use --strategy lsq\n";
            return 65;
        }
        sol = fit_alphas_derivative_matching(green, expr, forcing, cfg.K);
    } else if (cfg.strategy == "lsq") {
        Trajectory ref =
            forcing.kind() == Forcing::Kind::delta
                ? mollified_impulse_solution(expr, cfg.s, cfg.eta, -0.2, horizon + cfg.t_fit,
                                             cfg.rtol, cfg.atol)
                : solve_ivp(CauchyProblem::forced(expr, [&forcing](double t) { return forcing(t); },
                                                  horizon + cfg.t_fit),
                            cfg.rtol, cfg.atol);
        sol = fit_alphas_least_squares(green, forcing, ref, cfg.K, cfg.t_fit, 48,
                                       forcing.kind() == Forcing::Kind::delta ? 2 * cfg.eta : 0.0);
    } else {
        std::cerr << "error: unknown strategy '" << cfg.strategy << "'\n";
        return 65;
    }

    OutputSink sink(cfg.out);
    std::ostream& os = sink.get();
    os << "# strategy=" << sol.fit.strategy << " K=" << sol.K << " alphas=";
    for (std::size_t i = 0; i < sol.alphas.size(); ++i)
        os << (i ? ";" : "") << g17(sol.alphas[i]);
    os << "\n";
    os << "t,wK\n";
    std::vector<double> tab = solve_expansion(green, sol.alphas, forcing, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) os << g17(grid[i]) << ',' << g17(tab[i]) << '\n';
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    BenchConfig bc;
    bc.nonlin_src = cfg.nonlin;
    bc.forcing_src = cfg.forcing;
    bc.s = cfg.s;
    bc.K_max = cfg.K;
    bc.strategy = cfg.strategy == "match" ? FitStrategy::match : FitStrategy::lsq;
    bc.eta = cfg.eta;
    bc.rtol = cfg.rtol;
    bc.atol = cfg.atol;
    bc.t_fit = cfg.t_fit;
    bc.seed = cfg.seed;
    if (cfg.liouville) bc.liouville_epsilon = cfg.liouville_eps;
    bc.grid = cfg.make_grid();

    ErrorReport report = run_benchmark(bc);
    if (cfg.out.empty()) {
        emit_report(report, std::cout);
    } else {
        emit_report(report, cfg.out);
    }
    std::cerr << "median Er per K:";
    for (std::size_t i = 0; i < report.median_Er_per_K.size(); ++i)
        std::cerr << " K=" << (i + 1) << ":" << g17(report.median_Er_per_K[i]);
    std::cerr << "\n";
    return 0;
}

int cmd_catalog(const RunConfig& cfg) {
    OutputSink sink(cfg.out);
    sink.get() << catalog_csv();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear Green's function toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string positional_expr;

    auto* check = app.add_subcommand("check", "membership verdict for a nonlinearity");
    check->add_option("expr", positional_expr, "nonlinearity N(w)");
    add_common_flags(check, cfg, config_path);
    auto* green = app.add_subcommand("green", "tabulate the Green's function");
    green->add_option("expr", positional_expr, "nonlinearity N(w)");
    add_common_flags(green, cfg, config_path);
    auto* solve = app.add_subcommand("solve", "tabulate the short-time expansion solution");
    solve->add_option("expr", positional_expr, "nonlinearity N(w)");
    add_common_flags(solve, cfg, config_path);
    auto* bench = app.add_subcommand("bench", "error study vs a reference integration");
    bench->add_option("expr", positional_expr, "nonlinearity N(w)");
    add_common_flags(bench, cfg, config_path);
    auto* catalog = app.add_subcommand("catalog", "closed-form catalog as CSV");
    add_common_flags(catalog, cfg, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            // config supplies defaults; explicit flags already parsed win
            RunConfig file_cfg = RunConfig::load(config_path);
            std::string sub = cfg.subcommand;
            RunConfig merged = file_cfg;
            CLI::App* active = app.get_subcommands().front();
            auto overridden = [&](const std::string& flag) {
                return active->count(flag) > 0;
            };
            if (overridden("--nonlin")) merged.nonlin = cfg.nonlin;
            if (overridden("--forcing")) merged.forcing = cfg.forcing;
            if (overridden("--s")) merged.s = cfg.s;
            if (overridden("--K")) merged.K = cfg.K;
            if (overridden("--strategy")) merged.strategy = cfg.strategy;
            if (overridden("--rtol")) merged.rtol = cfg.rtol;
            if (overridden("--atol")) merged.atol = cfg.atol;
            if (overridden("--grid")) {
                merged.grid_n = cfg.grid_n;
                merged.grid_t0 = cfg.grid_t0;
                merged.grid_t1 = cfg.grid_t1;
            }
            if (overridden("--eta")) merged.eta = cfg.eta;
            if (overridden("--t-fit")) merged.t_fit = cfg.t_fit;
            if (overridden("--t-max")) merged.t_max = cfg.t_max;
            if (overridden("--tol")) merged.tol = cfg.tol;
            if (overridden("--samples")) merged.samples = cfg.samples;
            if (overridden("--liouville")) merged.liouville = cfg.liouville;
            if (overridden("--liouville-eps")) merged.liouville_eps = cfg.liouville_eps;
            if (overridden("--out")) merged.out = cfg.out;
            if (overridden("--seed")) merged.seed = cfg.seed;
            cfg = merged;
        }
        if (!positional_expr.empty()) cfg.nonlin = positional_expr;

        if (app.got_subcommand("check")) {
            cfg.subcommand = "check";
            return cmd_check(cfg);
        }
        if (app.got_subcommand("green")) {
            cfg.subcommand = "green";
            return cmd_green(cfg);
        }
        if (app.got_subcommand("solve")) {
            cfg.subcommand = "solve";
            return cmd_solve(cfg);
        }
        if (app.got_subcommand("bench")) {
            cfg.subcommand = "bench";
            return cmd_bench(cfg);
        }
        cfg.subcommand = "catalog";
        return cmd_catalog(cfg);
    } catch (const nlgreen::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
}

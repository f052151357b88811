// Error study harness: logarithmic error Er(K; t) = ln |w_K(t) - w_ref(t)|
// of the truncated expansion against a validated reference integration, over
// a grid of t and a range of K, with deterministic CSV output.
#ifndef NLGREEN_BENCH_HPP
#define NLGREEN_BENCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlgreen/green.hpp"
#include "nlgreen/shorttime.hpp"

namespace nlgreen {

enum class FitStrategy { match, lsq };

inline const char* strategy_str(FitStrategy s) { return s == FitStrategy::match ? "match" : "lsq"; }

struct BenchConfig {
    std::string nonlin_src = "sinh(w)";
    std::string forcing_src = "delta";
    double s = 1.0;
    int K_max = 4;
    FitStrategy strategy = FitStrategy::lsq;
    double eta = 1e-3;              // mollifier width for the delta reference
    double rtol = 1e-10;
    double atol = 1e-12;
    double ref_rtol = 1e-12;        // reference tolerances must dominate
    double ref_atol = 1e-14;
    double t_fit = 0.5;             // least-squares window for benchmark runs
    int fit_samples = 48;
    std::optional<double> liouville_epsilon;  // exponential case: use the two-branch entry
    std::uint64_t seed = 1437;
    std::vector<double> grid;       // defaults to 101 uniform points on [0, 1]

    std::vector<double> effective_grid() const {
        if (!grid.empty()) return grid;
        std::vector<double> g;
        g.reserve(101);
        for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
        return g;
    }
};

struct ErrorCell {
    int K;
    double t;
    double wK, wref, Er;
    bool exact;  // |wK - wref| below 1e-300: Er flagged, excluded from medians
};

struct ErrorReport {
    BenchConfig config;
    std::vector<ErrorCell> cells;
    std::vector<double> median_Er_per_K;  // indexed K-1 .. K_max-1
    std::vector<std::vector<double>> alphas_per_K;
    double pooled_median_Er = 0.0;
    double min_gap = 0.0;  // smallest non-flagged |wK - wref|
};

namespace detail {

inline double median_of(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    double hi = v[v.size() / 2];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2));
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Run the error study described by the config.  For impulse forcing the
/// reference solves the mollified problem from rest at t = -0.2 and the
/// expansion side uses exact sifting; for smooth forcing the reference is
/// the forced problem from rest at t = 0.
inline ErrorReport run_benchmark(const BenchConfig& cfg) {
    if (cfg.K_max < 1 || cfg.K_max > kMaxExpansionOrder)
        throw std::invalid_argument("run_benchmark: K_max out of range 1..8");
    const std::vector<double> grid = cfg.effective_grid();
    double horizon = 1.0;
    for (double t : grid) {
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("run_benchmark: grid must lie in [0, 1]");
        horizon = std::max(horizon, t);
    }

    const NonlinExpr nonlin = parse_nonlin(cfg.nonlin_src);
    const Forcing forcing = Forcing::parse(cfg.forcing_src);

    // Green's function: the two-branch entry for the exponential case,
    // otherwise the homogeneous numeric solve.
    GreenFn green = cfg.liouville_epsilon ? liouville_green(*cfg.liouville_epsilon)
                                          : green_numeric(nonlin, cfg.s, horizon + cfg.t_fit + 0.1,
                                                          cfg.rtol, cfg.atol);

    // reference
    Trajectory ref =
        forcing.kind() == Forcing::Kind::delta
            ? mollified_impulse_solution(nonlin, cfg.s, cfg.eta, -0.2, horizon + cfg.t_fit + 0.1,
                                         cfg.ref_rtol, cfg.ref_atol)
            : solve_ivp(CauchyProblem::forced(
                            nonlin, [&forcing](double t) { return forcing(t); },
                            horizon + cfg.t_fit + 0.1),
                        cfg.ref_rtol, cfg.ref_atol);
    if (!ref.complete())
        throw std::runtime_error("run_benchmark: reference solver failed at t = " +
                                 std::to_string(ref.t_end()));

    ErrorReport report;
    report.config = cfg;
    report.min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> pooled;

    for (int K = 1; K <= cfg.K_max; ++K) {
        ExpansionSolution sol =
            cfg.strategy == FitStrategy::match
                ? fit_alphas_derivative_matching(green, nonlin, forcing, K)
                : fit_alphas_least_squares(green, forcing, ref, K, cfg.t_fit, cfg.fit_samples,
                                           forcing.kind() == Forcing::Kind::delta ? 2.0 * cfg.eta
                                                                                  : 0.0);
        report.alphas_per_K.push_back(sol.alphas);
        std::vector<double> ers;
        for (double t : grid) {
            ErrorCell cell{};
            cell.K = K;
            cell.t = t;
            cell.wK = t > 0.0 ? sol.eval(forcing, t) : 0.0;
            cell.wref = ref.eval(t, 0);
            const double gap = std::fabs(cell.wK - cell.wref);
            cell.exact = gap < 1e-300;
            cell.Er = cell.exact ? -std::numeric_limits<double>::infinity() : std::log(gap);
            if (!cell.exact) {
                ers.push_back(cell.Er);
                pooled.push_back(cell.Er);
                report.min_gap = std::min(report.min_gap, gap);
            }
            report.cells.push_back(cell);
        }
        report.median_Er_per_K.push_back(detail::median_of(std::move(ers)));
    }
    report.pooled_median_Er = detail::median_of(std::move(pooled));
    return report;
}

/// CSV per the fixed schema; 17 significant digits, LF line endings,
/// byte-stable for identical inputs.
inline void emit_report(const ErrorReport& report, std::ostream& os) {
    auto g17 = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "nonlin,forcing,strategy,K,t,wK,wref,Er,flag\n";
    for (const ErrorCell& c : report.cells) {
        os << report.config.nonlin_src << ',' << report.config.forcing_src << ','
           << strategy_str(report.config.strategy) << ',' << c.K << ',' << g17(c.t) << ','
           << g17(c.wK) << ',' << g17(c.wref) << ',' << (c.exact ? "" : g17(c.Er)) << ','
           << (c.exact ? "exact" : "ok") << '\n';
    }
}

inline void emit_report(const ErrorReport& report, const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: keep LF endings everywhere
    if (!f) throw std::runtime_error("emit_report: cannot open " + path);
    emit_report(report, f);
    if (!f.good()) throw std::runtime_error("emit_report: write failure on " + path);
}

}  // namespace nlgreen

#endif  // NLGREEN_BENCH_HPP

// Acceptance suite: end-to-end checks with pinned tolerances, one line per
// criterion.  Returns nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nlgreen/nlgreen.hpp"

using namespace nlgreen;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

// 1. theta-power identity and exact binomial sums, n = 1..32
bool crit_theta(std::string& detail) {
    std::vector<double> grid;
    for (int e = -6; e <= 6; ++e) {
        grid.push_back(std::pow(10.0, e));
        grid.push_back(-std::pow(10.0, e));
    }
    for (int n = 1; n <= 32; ++n) {
        if (!theta_power_identity(n, grid)) {
            detail = "failed at n = " + std::to_string(n);
            return false;
        }
    }
    detail = "theta^n = theta and binomial sums 2^(n-1) exact for n = 1..32";
    return true;
}

// 2. membership suite
bool crit_membership(std::string& detail) {
    const char* members[] = {"w^2",       "w^3",        "w^5",       "sinh(w)",   "tanh(w)",
                             "sin(w)",    "tan(w)",     "arcsin(w)", "arctan(w)", "arcsinh(w)",
                             "arctanh(w)", "ln(1+w)"};
    for (const char* src : members) {
        MembershipVerdict v = check_membership(parse_nonlin(src));
        if (v.status != MembershipVerdict::Status::member_structural) {
            detail = std::string(src) + " not recognized as structural member";
            return false;
        }
    }
    const char* non_members[] = {"exp(w)", "cos(w)", "cosh(w)", "w+1"};
    for (const char* src : non_members) {
        NonlinExpr e = parse_nonlin(src);
        MembershipVerdict v = check_membership(e);
        if (v.status != MembershipVerdict::Status::non_member || !v.witness) {
            detail = std::string(src) + " not flagged non-member with witness";
            return false;
        }
        double gap = replay_witness(e, *v.witness);
        if (!std::isnan(gap) && gap <= 1e-9) {
            detail = std::string(src) + " witness does not reproduce the failure";
            return false;
        }
    }
    // numeric identity residual on member samples
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    double worst_ratio = 0.0;
    for (const char* src : members) {
        NonlinExpr e = parse_nonlin(src);
        for (int p = 0; p < 8; ++p) {
            double c0 = coeff(rng), c1 = coeff(rng), c2 = coeff(rng);
            double max_res = 0.0, max_n = 0.0;
            for (int i = 0; i < 160; ++i) {
                double t = -1.0 + (i + 0.5) / 80.0;
                double w = t * (c0 + t * (c1 + t * c2));
                double lhs, rhs;
                try {
                    lhs = evaluate_lim(e, theta(t) * w);
                    rhs = theta(t) * evaluate_lim(e, w);
                } catch (const DomainError&) {
                    continue;  // path left the domain (arcsin etc.)
                }
                max_res = std::max(max_res, std::fabs(lhs - rhs));
                max_n = std::max(max_n, std::fabs(rhs));
            }
            worst_ratio = std::max(worst_ratio, max_res / (1e-9 * (1.0 + max_n)));
        }
    }
    if (worst_ratio > 1.0) {
        detail = "identity residual exceeded 1e-9 bound (ratio " + std::to_string(worst_ratio) + ")";
        return false;
    }
    std::ostringstream os;
    os << "12 member primitives, 4 non-members with witnesses, residual ratio "
       << worst_ratio;
    detail = os.str();
    return true;
}

// 3. elliptic oracle equivalence
bool crit_elliptic(std::string& detail) {
    double worst_vs_oracle = 0.0, worst_identity = 0.0;
    for (double m : {-4.0, -1.0, 0.0, 0.3, 0.9, 1.0, 2.0}) {
        for (int i = 0; i < 200; ++i) {
            double u = -3.0 + 6.0 * i / 199.0;
            JacobiTriple a = jacobi_sn_cn_dn(u, m);
            JacobiTriple o = oracle_jacobi(u, m, 1e-12);
            worst_vs_oracle = std::max({worst_vs_oracle, std::fabs(a.sn - o.sn),
                                        std::fabs(a.cn - o.cn), std::fabs(a.dn - o.dn)});
            worst_identity = std::max({worst_identity, std::fabs(a.sn * a.sn + a.cn * a.cn - 1.0),
                                       std::fabs(a.dn * a.dn + m * a.sn * a.sn - 1.0)});
        }
    }
    std::ostringstream os;
    os << "max |AGM - oracle| = " << worst_vs_oracle << " (<= 1e-9), max identity residual = "
       << worst_identity << " (<= 1e-11)";
    detail = os.str();
    return worst_vs_oracle <= 1e-9 && worst_identity <= 1e-11;
}

// 4. closed-form catalog vs numeric homogeneous solves
bool crit_catalog(std::string& detail) {
    struct Entry {
        CatalogName name;
        const char* nonlin;
        double s, window;
    };
    const Entry entries[] = {
        {CatalogName::cubic, "w^3", 1.0, 3.0},
        {CatalogName::sine, "sin(w)", std::sqrt(2.0), 3.0},
        {CatalogName::sinh_gordon, "sinh(w)", 1.0, 2.0},
    };
    std::ostringstream os;
    for (const Entry& e : entries) {
        GreenFn cat = green_catalog(e.name, e.s);
        GreenFn num = green_numeric(parse_nonlin(e.nonlin), e.s, e.window, 1e-11, 1e-13);
        double worst = 0.0;
        for (int i = 1; i <= 400; ++i) {
            double t = e.window * i / 400.0;
            worst = std::max(worst, std::fabs(cat(t) - num(t)));
        }
        os << catalog_name_str(e.name) << ": " << worst << "  ";
        if (worst > 1e-7) {
            detail = os.str() + "(exceeds 1e-7)";
            return false;
        }
    }
    detail = os.str() + "(all <= 1e-7)";
    return true;
}

// 5. distributional validation: mollified impulses converge monotonically
bool crit_distributional(std::string& detail) {
    std::ostringstream os;
    for (const char* src : {"w^3", "sin(w)", "sinh(w)"}) {
        NonlinExpr n = parse_nonlin(src);
        GreenFn g = green_numeric(n, 1.0, 1.0, 1e-11, 1e-13);
        auto rows = validate_distributional(g, n, {1e-2, 3e-3, 1e-3}, 1.0, 1e-10, 1e-12);
        os << src << ":";
        for (const auto& r : rows) {
            if (r.solver_failed) {
                detail = std::string(src) + ": solver failed at eta = " + std::to_string(r.eta);
                return false;
            }
            os << " " << r.sup_error;
        }
        os << "  ";
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!(rows[i].sup_error < rows[i - 1].sup_error)) {
                detail = std::string(src) + ": sup-errors not monotone decreasing in eta";
                return false;
            }
        }
    }
    detail = os.str();
    return true;
}

// 6. liouville entry: branch residual and derivative jump
bool crit_liouville(std::string& detail) {
    const double eps = 1.0;
    GreenFn g = liouville_green(eps);
    const double h = 3e-3;
    double worst = 0.0;
    for (double t = -3.0; t <= 3.0 + 1e-12; t += 0.02) {
        if (std::fabs(t) < 5 * h) continue;
        double d2 = (-g(t - 2 * h) + 16 * g(t - h) - 30 * g(t) + 16 * g(t + h) - g(t + 2 * h)) /
                    (12 * h * h);
        worst = std::max(worst, std::fabs(d2 + std::exp(g(t))));
    }
    double jump_err = 0.0;
    for (double e : {0.25, 0.5, 1.0, 4.0}) {
        const double phi = -std::atanh(1.0 / (4.0 * std::sqrt(e)));
        jump_err = std::max(jump_err, std::fabs(-4.0 * std::sqrt(e) * std::tanh(phi) - 1.0));
    }
    std::ostringstream os;
    os << "branch residual " << worst << " (<= 1e-9), jump error " << jump_err << " (<= 1e-10)";
    detail = os.str();
    return worst <= 1e-9 && jump_err <= 1e-10;
}

// 7. short-time expansion order and the two published error studies
bool crit_shorttime(std::string& detail) {
    std::ostringstream os;
    // strategy (a): slope >= K + 1.5 on [1e-3, 1e-1] and pointwise error at
    // t = 0.1 non-increasing in K (parity ties are exact for this family)
    for (const char* nsrc : {"w^3", "sin(w)", "sinh(w)"}) {
        NonlinExpr N = parse_nonlin(nsrc);
        GreenFn g = green_numeric(N, 1.0, 0.5, 1e-12, 1e-14);
        for (const char* fsrc : {"1", "cos(t)"}) {
            Forcing f = Forcing::parse(fsrc);
            Trajectory ref = solve_ivp(
                CauchyProblem::forced(N, [&f](double t) { return f(t); }, 0.15), 1e-13, 1e-15);
            double prev_e01 = 1e300;
            for (int K = 0; K <= 3; ++K) {
                ExpansionSolution sol = fit_alphas_derivative_matching(g, N, f, K,
                                                                       QuadSpec{1e-12, 2, 16});
                std::vector<double> lt, le;
                for (int i = 0; i < 25; ++i) {
                    double t = std::pow(10.0, -3.0 + 2.0 * i / 24.0);
                    double err = std::fabs(sol.eval(f, t) - ref.eval(t, 0));
                    if (err > 5e-13 * (1.0 + std::fabs(ref.eval(t, 0)))) {
                        lt.push_back(std::log(t));
                        le.push_back(std::log(err));
                    }
                }
                if (lt.size() < 4) {
                    detail = std::string(nsrc) + "/" + fsrc + " K=" + std::to_string(K) +
                             ": too few points above the noise floor";
                    return false;
                }
                // least-squares slope
                double mt = 0, me = 0;
                for (std::size_t i = 0; i < lt.size(); ++i) {
                    mt += lt[i];
                    me += le[i];
                }
                mt /= static_cast<double>(lt.size());
                me /= static_cast<double>(lt.size());
                double num = 0, den = 0;
                for (std::size_t i = 0; i < lt.size(); ++i) {
                    num += (lt[i] - mt) * (le[i] - me);
                    den += (lt[i] - mt) * (lt[i] - mt);
                }
                double slope = num / den;
                if (slope < K + 1.5) {
                    detail = std::string(nsrc) + "/" + fsrc + " K=" + std::to_string(K) +
                             ": slope " + std::to_string(slope) + " < K + 1.5";
                    return false;
                }
                double e01 = std::fabs(sol.eval(f, 0.1) - ref.eval(0.1, 0));
                if (e01 > prev_e01 * 1.02 + 1e-14) {
                    detail = std::string(nsrc) + "/" + fsrc + " K=" + std::to_string(K) +
                             ": pointwise error at t=0.1 increased";
                    return false;
                }
                prev_e01 = e01;
            }
        }
    }
    os << "slopes >= K+1.5 and pointwise errors non-increasing (6 cases, K=0..3); ";

    // strategy (b) on the two published setups: median Er strictly decreasing
    {
        BenchConfig cfg;  // sinh-Gordon defaults
        ErrorReport rep = run_benchmark(cfg);
        os << "sinh medians:";
        for (double m : rep.median_Er_per_K) os << " " << m;
        for (std::size_t i = 1; i < rep.median_Er_per_K.size(); ++i)
            if (!(rep.median_Er_per_K[i] < rep.median_Er_per_K[i - 1])) {
                detail = os.str() + " -- sinh medians not strictly decreasing";
                return false;
            }
        BenchConfig lcfg;
        lcfg.nonlin_src = "exp(w)";
        lcfg.liouville_epsilon = 1.0;
        ErrorReport lrep = run_benchmark(lcfg);
        os << "; liouville medians:";
        for (double m : lrep.median_Er_per_K) os << " " << m;
        for (std::size_t i = 1; i < lrep.median_Er_per_K.size(); ++i)
            if (!(lrep.median_Er_per_K[i] < lrep.median_Er_per_K[i - 1])) {
                detail = os.str() + " -- liouville medians not strictly decreasing";
                return false;
            }
    }
    detail = os.str();
    return true;
}

// 8. determinism of repeated bench runs
bool crit_determinism(std::string& detail) {
    BenchConfig cfg;
    cfg.K_max = 2;
    cfg.grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::ostringstream a, b;
    emit_report(run_benchmark(cfg), a);
    emit_report(run_benchmark(cfg), b);
    if (a.str() != b.str()) {
        detail = "repeated runs differ";
        return false;
    }
    detail = "byte-identical CSVs over repeated runs (" + std::to_string(a.str().size()) +
             " bytes)";
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"theta-power identity suite", crit_theta},
        {"membership suite", crit_membership},
        {"elliptic oracle equivalence", crit_elliptic},
        {"closed-form catalog vs numeric", crit_catalog},
        {"distributional validation (mollified impulses)", crit_distributional},
        {"liouville entry", crit_liouville},
        {"short-time expansion order and error studies", crit_shorttime},
        {"benchmark determinism", crit_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %zu: %s (%.2f s)\n    %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}

// Minimal tour: build the Green's function of w'' + sin(w) = sqrt(2) delta(t)
// two ways (closed form and homogeneous solve), then approximate a forced
// solution with the short-time expansion and print the error at a few times.
#include <cmath>
#include <cstdio>

#include "nlgreen/nlgreen.hpp"

int main() {
    using namespace nlgreen;

    const double s = std::sqrt(2.0);
    NonlinExpr N = parse_nonlin("sin(w)");

    GreenFn closed = green_catalog(CatalogName::sine, s);
    GreenFn numeric = green_numeric(N, s, 3.0);
    std::printf("Green's function of w'' + sin(w) = sqrt(2) delta(t):\n");
    for (double t : {0.5, 1.0, 2.0}) {
        std::printf("  t=%.1f  closed=%.12f  numeric=%.12f  diff=%.3e\n", t, closed(t),
                    numeric(t), std::fabs(closed(t) - numeric(t)));
    }

    Forcing f = Forcing::parse("cos(t)");
    ExpansionSolution sol = fit_alphas_derivative_matching(numeric, N, f, 3);
    Trajectory ref = solve_ivp(CauchyProblem::forced(N, [&f](double t) { return f(t); }, 0.5),
                               1e-12, 1e-14);
    std::printf("\nshort-time expansion for f(t) = cos(t), K=3, alphas:");
    for (double a : sol.alphas) std::printf(" %.6g", a);
    std::printf("\n");
    for (double t : {0.05, 0.1, 0.2, 0.4}) {
        double wk = sol.eval(f, t);
        std::printf("  t=%.2f  w_K=%.12f  w_ref=%.12f  |err|=%.3e\n", t, wk, ref.eval(t, 0),
                    std::fabs(wk - ref.eval(t, 0)));
    }
    return 0;
}

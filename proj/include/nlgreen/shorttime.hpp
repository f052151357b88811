// Short-time expansion solver for w'' + N(w) = f(t) from rest:
//
//     w(t) ~ sum_k alpha_k int_0^t (t - tau)^k G(t - tau) f(tau) dtau
//
// with convolution terms by composite Gauss-Legendre quadrature (or the
// exact sifting collapse for impulse forcing), and two coefficient
// strategies: derivative matching at t = 0 through a lower-triangular Taylor
// system, and least squares against a reference trajectory on a short
// window.
#ifndef NLGREEN_SHORTTIME_HPP
#define NLGREEN_SHORTTIME_HPP

#include <cmath>
#include <string>
#include <vector>

#include "nlgreen/detail/linalg.hpp"
#include "nlgreen/forcing.hpp"
#include "nlgreen/green.hpp"
#include "nlgreen/ode.hpp"
#include "nlgreen/quadrature.hpp"
#include "nlgreen/series.hpp"

namespace nlgreen {

inline constexpr int kMaxExpansionOrder = 8;

// ---------------------------------------------------------------------------
// Taylor data at t = 0

/// Derivatives w(0), w'(0), ..., w^{(M)}(0) of w'' = f - N(w) with
/// w(0) = w0, w'(0) = v0, given f(0), f'(0), ... in forcing_derivs.
/// Throws DomainError when N is not M-times differentiable along the jet.
inline std::vector<double> taylor_from_ode(const NonlinExpr& nonlin,
                                           const std::vector<double>& forcing_derivs, double w0,
                                           double v0, int M) {
    if (M < 0) throw std::invalid_argument("taylor_from_ode: M must be nonnegative");
    if (M >= 2 && forcing_derivs.size() + 1 < static_cast<std::size_t>(M) - 1 + 1)
        throw std::invalid_argument("taylor_from_ode: forcing_derivs must have length >= M-1");

    // series coefficients c_j = w^{(j)}(0)/j!
    std::vector<double> c(static_cast<std::size_t>(M) + 1, 0.0);
    c[0] = w0;
    if (M >= 1) c[1] = v0;
    // extra working order absorbs the shifted-division slack of quotient nodes
    const std::size_t pad = 8;
    double fact_j = 1.0;  // j!
    for (int j = 0; j + 2 <= M; ++j) {
        TaylorSeries u(static_cast<std::size_t>(j) + pad);
        for (int i = 0; i <= j + 1 && i <= M; ++i) u.c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
        TaylorSeries Nw = series_eval(nonlin, u);
        if (j > 0) fact_j *= j;
        const double fj = static_cast<std::size_t>(j) < forcing_derivs.size()
                              ? forcing_derivs[static_cast<std::size_t>(j)] / fact_j
                              : 0.0;
        c[static_cast<std::size_t>(j) + 2] =
            (fj - Nw.c[static_cast<std::size_t>(j)]) / ((j + 1.0) * (j + 2.0));
    }
    std::vector<double> derivs(static_cast<std::size_t>(M) + 1, 0.0);
    double fact = 1.0;
    for (int j = 0; j <= M; ++j) {
        if (j > 0) fact *= j;
        derivs[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] * fact;
    }
    return derivs;
}

/// Taylor data of both Cauchy problems: the forced one from rest and the
/// homogeneous one behind the Green's function.
struct TaylorData {
    std::vector<double> w_derivs;  // forced problem, w(0) = w'(0) = 0
    std::vector<double> g_derivs;  // homogeneous problem, w0(0) = 0, w0'(0) = s
    int M = 0;
};

inline TaylorData make_taylor_data(const NonlinExpr& nonlin, const Forcing& forcing, double s,
                                   int M) {
    TaylorData td;
    td.M = M;
    std::vector<double> fd = forcing.derivatives_at_zero(std::max(0, M - 2));
    td.w_derivs = taylor_from_ode(nonlin, fd, 0.0, 0.0, M);
    td.g_derivs = taylor_from_ode(nonlin, {}, 0.0, s, M);
    return td;
}

// ---------------------------------------------------------------------------
// convolution terms

/// int_0^t (t - tau)^k G(t - tau) f(tau) dtau.  Impulse forcing collapses by
/// sifting to t^k G(t) with no quadrature; t <= 0 gives 0.
inline double convolve_term(const GreenFn& green, int k, const Forcing& forcing, double t,
                            const QuadSpec& quad = {}) {
    if (k < 0) throw std::invalid_argument("convolve_term: k must be nonnegative");
    if (t <= 0.0) return 0.0;
    if (forcing.kind() == Forcing::Kind::zero) return 0.0;
    if (forcing.kind() == Forcing::Kind::delta) {
        double p = 1.0;
        for (int i = 0; i < k; ++i) p *= t;
        return p * green(t);
    }
    auto integrand = [&](double tau) {
        const double u = t - tau;
        double p = 1.0;
        for (int i = 0; i < k; ++i) p *= u;
        return p * green(u) * forcing(tau);
    };
    return integrate(integrand, 0.0, t, quad);
}

// ---------------------------------------------------------------------------
// expansion solutions

struct FitMeta {
    std::string strategy;      // "match" or "lsq"
    int K = 0;
    double s = 0.0;
    double f0 = 0.0;           // match: f(0)
    double t_fit = 0.0;        // lsq: window end
    double window_lo = 0.0;    // lsq: first sample
    int n_samples = 0;         // lsq
    std::vector<double> w_derivs, g_derivs;  // match: the Taylor inputs
    double residual = 0.0;     // match: triangular-solve residual; lsq: rms fit residual
};

struct ExpansionSolution {
    GreenFn green;
    int K = 0;
    std::vector<double> alphas;  // alpha_0 .. alpha_K
    QuadSpec quad;
    FitMeta fit;

    /// w_K(t) for the given forcing.
    double eval(const Forcing& forcing, double t) const {
        double acc = 0.0;
        for (int k = 0; k <= K; ++k)
            acc += alphas[static_cast<std::size_t>(k)] * convolve_term(green, k, forcing, t, quad);
        return acc;
    }
};

/// Strategy (a): match the Taylor coefficients of sum_k alpha_k (H_k * f),
/// H_k(u) = u^k w0(u), to those of w through order K+2.  The system is lower
/// triangular with diagonal s f(0)/(k+2), hence f(0) != 0 is required.
inline ExpansionSolution fit_alphas_derivative_matching(const GreenFn& green,
                                                        const NonlinExpr& nonlin,
                                                        const Forcing& forcing, int K,
                                                        const QuadSpec& quad = {}) {
    if (K < 0 || K > kMaxExpansionOrder)
        throw std::invalid_argument("fit_alphas_derivative_matching: K out of range 0..8");
    if (forcing.kind() != Forcing::Kind::smooth)
        throw std::invalid_argument(
            "fit_alphas_derivative_matching: needs smooth forcing with f(0) != 0 "
            "(impulse forcing collapses by sifting; see solve_impulse)");
    const double s = green.s();
    std::vector<double> fder = forcing.derivatives_at_zero(K + 1);
    const double f0 = fder[0];
    if (f0 == 0.0)
        throw std::invalid_argument(
            "fit_alphas_derivative_matching: f(0) = 0 makes the triangular system singular; "
            "use the least-squares strategy");

    TaylorData td;
    td.M = K + 2;
    td.w_derivs = taylor_from_ode(nonlin, fder, 0.0, 0.0, K + 2);
    td.g_derivs = taylor_from_ode(nonlin, {}, 0.0, s, K + 2);

    // series coefficients
    std::vector<double> c(td.w_derivs.size()), g(td.g_derivs.size()), f(fder.size());
    double fact = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j > 0) fact *= static_cast<double>(j);
        c[j] = td.w_derivs[j] / fact;
        g[j] = td.g_derivs[j] / fact;
        if (j < f.size()) f[j] = fder[j] / fact;
    }

    // row p-2: coefficient of t^p, p = 2..K+2:
    //   c_p = sum_k alpha_k sum_{j+i=p-k-1, j>=1} g_j f_i (j+k)! i! / (j+k+i+1)!
    const std::size_t n = static_cast<std::size_t>(K) + 1;
    std::vector<double> B(n * n, 0.0), rhs(n, 0.0);
    auto beta = [](int a, int b) {
        // a! b! / (a+b+1)!
        double r = 1.0;
        for (int q = 1; q <= b; ++q) r *= static_cast<double>(q) / static_cast<double>(a + q);
        return r / static_cast<double>(a + b + 1);
    };
    for (int p = 2; p <= K + 2; ++p) {
        const std::size_t row = static_cast<std::size_t>(p - 2);
        rhs[row] = c[static_cast<std::size_t>(p)];
        for (int k = 0; k <= std::min(K, p - 2); ++k) {
            double acc = 0.0;
            for (int j = 1; j <= p - k - 1; ++j) {
                const int i = p - k - 1 - j;
                if (static_cast<std::size_t>(i) >= f.size()) continue;
                acc += g[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(i)] *
                       beta(j + k, i);
            }
            B[row * n + static_cast<std::size_t>(k)] = acc;
        }
    }
    std::vector<double> alphas = detail::solve_lower_triangular(B, rhs, n);

    // relative residual of the solve
    double rnorm = 0.0, bnorm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t kk = 0; kk < n; ++kk) acc += B[r * n + kk] * alphas[kk];
        rnorm += (acc - rhs[r]) * (acc - rhs[r]);
        bnorm += rhs[r] * rhs[r];
    }
    const double rel_residual = bnorm > 0.0 ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);

    ExpansionSolution sol{green, K, std::move(alphas), quad, {}};
    sol.fit.strategy = "match";
    sol.fit.K = K;
    sol.fit.s = s;
    sol.fit.f0 = f0;
    sol.fit.w_derivs = td.w_derivs;
    sol.fit.g_derivs = td.g_derivs;
    sol.fit.residual = rel_residual;
    return sol;
}

/// Strategy (b): least squares of sum alpha_k (H_k * f) against a reference
/// trajectory on [window_lo, t_fit].  Works for f(0) = 0 and for impulse
/// studies (where the basis collapses to t^k G(t)).
inline ExpansionSolution fit_alphas_least_squares(const GreenFn& green, const Forcing& forcing,
                                                  const Trajectory& reference, int K,
                                                  double t_fit = 0.1, int n_samples = 48,
                                                  double window_lo = 0.0,
                                                  const QuadSpec& quad = {}) {
    if (K < 0 || K > kMaxExpansionOrder)
        throw std::invalid_argument("fit_alphas_least_squares: K out of range 0..8");
    if (n_samples < K + 2) throw std::invalid_argument("fit_alphas_least_squares: too few samples");
    if (window_lo <= 0.0) window_lo = t_fit / n_samples;
    if (!(t_fit > window_lo)) throw std::invalid_argument("fit_alphas_least_squares: bad window");

    const std::size_t m = static_cast<std::size_t>(n_samples);
    const std::size_t n = static_cast<std::size_t>(K) + 1;
    std::vector<double> A(m * n, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double t =
            window_lo + (t_fit - window_lo) * static_cast<double>(i) / static_cast<double>(m - 1);
        for (std::size_t k = 0; k < n; ++k)
            A[i * n + k] = convolve_term(green, static_cast<int>(k), forcing, t, quad);
        b[i] = reference.eval(t, 0);
    }
    std::vector<double> Acopy = A, bcopy = b;
    std::vector<double> alphas = detail::least_squares(std::move(A), std::move(b), m, n);

    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double acc = -bcopy[i];
        for (std::size_t k = 0; k < n; ++k) acc += Acopy[i * n + k] * alphas[k];
        res += acc * acc;
    }

    ExpansionSolution sol{green, K, std::move(alphas), quad, {}};
    sol.fit.strategy = "lsq";
    sol.fit.K = K;
    sol.fit.s = green.s();
    sol.fit.t_fit = t_fit;
    sol.fit.window_lo = window_lo;
    sol.fit.n_samples = n_samples;
    sol.fit.residual = std::sqrt(res / static_cast<double>(m));
    return sol;
}

// ---------------------------------------------------------------------------
// tabulation

/// w_K on a grid; exactly linear in the alphas, and w_K(0) = 0.
inline std::vector<double> solve_expansion(const GreenFn& green, const std::vector<double>& alphas,
                                           const Forcing& forcing, const std::vector<double>& grid,
                                           const QuadSpec& quad = {}) {
    if (alphas.empty() || alphas.size() > kMaxExpansionOrder + 1)
        throw std::invalid_argument("solve_expansion: alphas length must be 1..9");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        double acc = 0.0;
        for (std::size_t k = 0; k < alphas.size(); ++k)
            acc += alphas[k] * convolve_term(green, static_cast<int>(k), forcing, t, quad);
        out.push_back(acc);
    }
    return out;
}

/// Impulse response on a grid: the expansion collapses to G itself
/// (alpha_0 = 1, the sifting property leaves higher terms unconstrained).
inline std::vector<double> solve_impulse(const NonlinExpr& nonlin, double s,
                                         const std::vector<double>& grid, double rtol = 1e-10,
                                         double atol = 1e-12) {
    double horizon = 1.0;
    for (double t : grid) horizon = std::max(horizon, t);
    GreenFn g = green_numeric(nonlin, s, horizon, rtol, atol);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) out.push_back(t > 0.0 ? g(t) : 0.0);
    return out;
}

}  // namespace nlgreen

#endif  // NLGREEN_SHORTTIME_HPP

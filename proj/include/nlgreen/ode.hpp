// Adaptive Dormand-Prince 5(4) integrator with continuous (dense) output,
// plus the second-order Cauchy problem wrappers and the energy diagnostic.
//
// The controller is a standard PI step-size controller (safety 0.9, step
// ratio clamped to [0.2, 5]).  Blow-up (step-size underflow, persistent
// domain failures in the right-hand side) ends the integration cleanly with
// Status::blow_up and the last reliable time.
#ifndef NLGREEN_ODE_HPP
#define NLGREEN_ODE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlgreen/expr.hpp"
#include "nlgreen/quadrature.hpp"
#include "nlgreen/series.hpp"

namespace nlgreen {

using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;      // 0: unlimited
    double initial_step = 0.0;  // 0: automatic
    std::size_t max_steps = 2'000'000;
};

/// Piecewise-quintic dense representation of one integration.  Evaluation at
/// a stored node returns the stored state exactly.
class Trajectory {
public:
    enum class Status { complete, blow_up };

    Trajectory() = default;
    Trajectory(std::size_t dim, Status st) : dim_(dim), status_(st) {}

    std::size_t dim() const { return dim_; }
    Status status() const { return status_; }
    bool complete() const { return status_ == Status::complete; }
    int interpolant_order() const { return 4; }

    double t_begin() const { return nodes_.front(); }
    double t_end() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

    double value_at_node(std::size_t i, std::size_t comp) const {
        return states_[i * dim_ + comp];
    }

    /// Dense evaluation of one component at t in [t_begin, t_end].
    double eval(double t, std::size_t comp = 0) const {
        if (nodes_.empty()) throw std::logic_error("empty trajectory");
        if (t < t_begin() - 1e-12 || t > t_end() + 1e-12)
            throw std::out_of_range("trajectory evaluated outside its span");
        t = std::clamp(t, t_begin(), t_end());
        // exact at nodes
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
        if (it != nodes_.end() && *it == t)
            return value_at_node(static_cast<std::size_t>(it - nodes_.begin()), comp);
        std::size_t step = static_cast<std::size_t>(it - nodes_.begin());
        if (step == 0) step = 1;
        --step;  // interval [nodes_[step], nodes_[step+1]]
        const double t0 = nodes_[step], h = nodes_[step + 1] - t0;
        const double th = (t - t0) / h;
        const double* r = dense_.data() + step * 5 * dim_;
        const double* r1 = r;
        const double* r2 = r + dim_;
        const double* r3 = r + 2 * dim_;
        const double* r4 = r + 3 * dim_;
        const double* r5 = r + 4 * dim_;
        const double th1 = 1.0 - th;
        return r1[comp] + th * (r2[comp] + th1 * (r3[comp] + th * (r4[comp] + th1 * r5[comp])));
    }

    void start(double t0, const std::vector<double>& y0) {
        nodes_.push_back(t0);
        states_.insert(states_.end(), y0.begin(), y0.end());
    }
    void push_step(double t1, const std::vector<double>& y1, const std::vector<double>& rcont) {
        nodes_.push_back(t1);
        states_.insert(states_.end(), y1.begin(), y1.end());
        dense_.insert(dense_.end(), rcont.begin(), rcont.end());
    }
    void mark_blow_up() { status_ = Status::blow_up; }

    /// Append a continuation computed from this trajectory's final state.
    void append(const Trajectory& tail) {
        if (tail.dim_ != dim_) throw std::logic_error("trajectory dimension mismatch");
        for (std::size_t i = 1; i < tail.nodes_.size(); ++i) {
            nodes_.push_back(tail.nodes_[i]);
            for (std::size_t c = 0; c < dim_; ++c)
                states_.push_back(tail.states_[i * dim_ + c]);
        }
        dense_.insert(dense_.end(), tail.dense_.begin(), tail.dense_.end());
        status_ = tail.status_;
    }

    std::vector<double> final_state() const {
        return {states_.end() - static_cast<std::ptrdiff_t>(dim_), states_.end()};
    }

private:
    std::size_t dim_ = 0;
    Status status_ = Status::complete;
    std::vector<double> nodes_;
    std::vector<double> states_;  // nodes x dim
    std::vector<double> dense_;   // steps x 5 x dim
};

namespace detail {

// Dormand-Prince 5(4) tableau
struct Dopri5Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

struct RhsFailure {};

}  // namespace detail

/// Integrate y' = f(t, y) from (t0, y0) to t1 > t0.
template <class Rhs>
Trajectory integrate_ivp(Rhs&& f, double t0, double t1, std::vector<double> y0,
                         const OdeOptions& opt = {}) {
    using T = detail::Dopri5Tableau;
    const std::size_t n = y0.size();
    if (t1 <= t0) throw std::invalid_argument("integrate_ivp: needs t1 > t0");

    Trajectory traj(n, Trajectory::Status::complete);
    traj.start(t0, y0);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y1(n), rcont(5 * n);

    auto eval_rhs = [&](double t, const std::vector<double>& y, std::vector<double>& out) {
        try {
            f(t, y.data(), out.data());
        } catch (const DomainError&) {
            throw detail::RhsFailure{};
        }
        for (double v : out)
            if (!std::isfinite(v)) throw detail::RhsFailure{};
    };

    double t = t0;
    double hmax = opt.max_step > 0.0 ? opt.max_step : t1 - t0;

    bool have_k1 = false;
    try {
        eval_rhs(t, y0, k1);
        have_k1 = true;
    } catch (detail::RhsFailure&) {
        traj.mark_blow_up();
        return traj;
    }

    // initial step: crude norm-based guess, refined by the controller
    double h = opt.initial_step;
    if (h <= 0.0) {
        double ny = 0.0, nd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = opt.atol + opt.rtol * std::fabs(y0[i]);
            ny += (y0[i] / sc) * (y0[i] / sc);
            nd += (k1[i] / sc) * (k1[i] / sc);
        }
        h = (nd > 0.0 && ny > 0.0) ? 0.01 * std::sqrt(ny / nd) : 1e-6 * (t1 - t0);
        h = std::min(h, hmax);
        if (h <= 0.0 || !std::isfinite(h)) h = 1e-6 * (t1 - t0);
    }

    double err_old = 1e-4;
    std::size_t steps = 0;
    (void)have_k1;

    while (t < t1) {
        if (++steps > opt.max_steps)
            throw std::runtime_error("integrate_ivp: step limit exceeded");
        h = std::min(h, hmax);
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;  // a final sliver below hmin is fine, not a blow-up
            last = true;
        }
        const double hmin = 16.0 * 2.220446049250313e-16 * std::max(std::fabs(t), 1.0);
        if (last && h <= 0.0) break;
        if (!last && h < hmin) {
            traj.mark_blow_up();
            return traj;
        }

        bool failed = false;
        double err = 0.0;
        try {
            for (std::size_t i = 0; i < n; ++i) yt[i] = y0[i] + h * T::a21 * k1[i];
            eval_rhs(t + T::c2 * h, yt, k2);
            for (std::size_t i = 0; i < n; ++i)
                yt[i] = y0[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
            eval_rhs(t + T::c3 * h, yt, k3);
            for (std::size_t i = 0; i < n; ++i)
                yt[i] = y0[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
            eval_rhs(t + T::c4 * h, yt, k4);
            for (std::size_t i = 0; i < n; ++i)
                yt[i] = y0[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
            eval_rhs(t + T::c5 * h, yt, k5);
            for (std::size_t i = 0; i < n; ++i)
                yt[i] = y0[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                                     T::a64 * k4[i] + T::a65 * k5[i]);
            eval_rhs(t + h, yt, k6);
            for (std::size_t i = 0; i < n; ++i)
                y1[i] = y0[i] + h * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] +
                                     T::a75 * k5[i] + T::a76 * k6[i]);
            eval_rhs(t + h, y1, k7);

            for (std::size_t i = 0; i < n; ++i) {
                double e = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                                T::e6 * k6[i] + T::e7 * k7[i]);
                double sc = opt.atol + opt.rtol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / static_cast<double>(n));
            if (!std::isfinite(err)) failed = true;
        } catch (detail::RhsFailure&) {
            failed = true;
        }

        if (failed) {
            h *= 0.5;
            continue;
        }

        if (err <= 1.0) {
            // accept; build dense coefficients
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = y1[i] - y0[i];
                const double bspl = h * k1[i] - ydiff;
                rcont[i] = y0[i];
                rcont[n + i] = ydiff;
                rcont[2 * n + i] = bspl;
                rcont[3 * n + i] = ydiff - h * k7[i] - bspl;
                rcont[4 * n + i] = h * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] +
                                        T::d5 * k5[i] + T::d6 * k6[i] + T::d7 * k7[i]);
            }
            t = last ? t1 : t + h;  // land on the endpoint exactly
            y0 = y1;
            traj.push_step(t, y1, rcont);
            k1 = k7;  // FSAL

            double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.7 / 5.0) *
                         std::pow(std::max(err_old, 1e-16), 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_old = std::max(err, 1e-16);
        } else {
            double fac = 0.9 * std::pow(err, -0.2);
            h *= std::clamp(fac, 0.2, 1.0);
        }
    }
    return traj;
}

/// Fixed-step classic evaluation of the same 5th-order formula (used for
/// order-verification tests; no error control, no dense output).
template <class Rhs>
std::vector<double> integrate_fixed(Rhs&& f, double t0, double t1, std::vector<double> y0,
                                    int nsteps) {
    using T = detail::Dopri5Tableau;
    const std::size_t n = y0.size();
    const double h = (t1 - t0) / nsteps;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), yt(n);
    double t = t0;
    for (int s = 0; s < nsteps; ++s) {
        f(t, y0.data(), k1.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y0[i] + h * T::a21 * k1[i];
        f(t + T::c2 * h, yt.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y0[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
        f(t + T::c3 * h, yt.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y0[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
        f(t + T::c4 * h, yt.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y0[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
        f(t + T::c5 * h, yt.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y0[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                                 T::a65 * k5[i]);
        f(t + h, yt.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            y0[i] = y0[i] + h * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] + T::a75 * k5[i] +
                                 T::a76 * k6[i]);
        t += h;
    }
    return y0;
}

// ---------------------------------------------------------------------------
// second-order Cauchy problems  w'' + N(w) = f(t)

struct CauchyProblem {
    NonlinExpr nonlin;                          // N
    std::function<double(double)> forcing;      // nullptr for the homogeneous problem
    double w0 = 0.0;
    double v0 = 0.0;
    double horizon = 1.0;                       // integrate on [t_start, t_start + ...]; see solve_ivp
    double t_start = 0.0;

    /// Homogeneous problem with w(0) = 0, w'(0) = s.
    static CauchyProblem homogeneous(NonlinExpr n, double s, double horizon) {
        return CauchyProblem{std::move(n), nullptr, 0.0, s, horizon, 0.0};
    }
    /// Forced problem from rest: w(0) = w'(0) = 0.
    static CauchyProblem forced(NonlinExpr n, std::function<double(double)> f, double horizon) {
        return CauchyProblem{std::move(n), std::move(f), 0.0, 0.0, horizon, 0.0};
    }
};

/// Integrate w'' + N(w) = f(t); state components are (w, w').
inline Trajectory solve_ivp(const CauchyProblem& problem, double rtol = 1e-10,
                            double atol = 1e-12, const OdeOptions& extra = {}) {
    if (problem.horizon <= 0.0) throw std::invalid_argument("solve_ivp: horizon must be positive");
    OdeOptions opt = extra;
    opt.rtol = rtol;
    opt.atol = atol;
    const NonlinExpr& N = problem.nonlin;
    const auto& forcing = problem.forcing;
    auto rhs = [&N, &forcing](double t, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = (forcing ? forcing(t) : 0.0) - evaluate_lim(N, y[0]);
    };
    return integrate_ivp(rhs, problem.t_start, problem.t_start + problem.horizon,
                         {problem.w0, problem.v0}, opt);
}

// ---------------------------------------------------------------------------
// energy diagnostic for the autonomous case (f = 0):  E = w'^2/2 + V(w)

/// Antiderivative with F(0) = 0 for the shapes that admit one in this node
/// set; std::nullopt otherwise (callers fall back to quadrature).
inline std::optional<NonlinExpr> antiderivative(const NonlinExpr& e) {
    using E = NonlinExpr;
    const NodePtr& n = e.root();
    const E w = E::variable();
    switch (n->kind) {
        case NodeKind::constant: return detail::f_mul(E::constant(n->value), w);
        case NodeKind::variable: return detail::f_mul(E::constant(0.5), E::pow_int(w, 2));
        case NodeKind::add: {
            auto fa = antiderivative(E(n->a));
            auto fb = antiderivative(E(n->b));
            if (!fa || !fb) return std::nullopt;
            return detail::f_add(*fa, *fb);
        }
        case NodeKind::mul:
            if (n->a->kind == NodeKind::constant) {
                auto fb = antiderivative(E(n->b));
                if (!fb) return std::nullopt;
                return detail::f_mul(E::constant(n->a->value), *fb);
            }
            if (n->b->kind == NodeKind::constant) {
                auto fa = antiderivative(E(n->a));
                if (!fa) return std::nullopt;
                return detail::f_mul(E::constant(n->b->value), *fa);
            }
            return std::nullopt;
        case NodeKind::pow_int:
            if (n->a->kind == NodeKind::variable && n->ipow >= 1)
                return detail::f_mul(E::constant(1.0 / (static_cast<double>(n->ipow) + 1.0)),
                                     E::pow_int(w, n->ipow + 1));
            return std::nullopt;
        case NodeKind::pow_real:
            if (n->a->kind == NodeKind::variable && n->rpow != -1.0)
                return detail::f_mul(E::constant(1.0 / (n->rpow + 1.0)),
                                     E::pow_real(w, n->rpow + 1.0));
            return std::nullopt;
        case NodeKind::fun: {
            if (n->a->kind != NodeKind::variable) return std::nullopt;
            switch (n->fun) {
                case FunKind::sin_:  // 1 - cos w
                    return detail::f_add(E::constant(1.0), detail::f_neg(E::fun(FunKind::cos_, w)));
                case FunKind::cos_: return E::fun(FunKind::sin_, w);
                case FunKind::sinh_:  // cosh w - 1
                    return detail::f_add(E::fun(FunKind::cosh_, w), E::constant(-1.0));
                case FunKind::cosh_: return E::fun(FunKind::sinh_, w);
                case FunKind::exp_:  // e^w - 1
                    return detail::f_add(E::fun(FunKind::exp_, w), E::constant(-1.0));
                case FunKind::tanh_:  // ln cosh w
                    return E::fun(FunKind::ln1p_,
                                  detail::f_add(E::fun(FunKind::cosh_, w), E::constant(-1.0)));
                default: return std::nullopt;
            }
        }
        default: return std::nullopt;
    }
}

/// E(t) = w'^2/2 + V(w) at the trajectory nodes; V is the symbolic
/// antiderivative of N when available, else quadrature of N from 0.
inline std::vector<double> energy(const CauchyProblem& problem, const Trajectory& traj) {
    if (problem.forcing) throw std::invalid_argument("energy: defined for the homogeneous case");
    auto V_sym = antiderivative(problem.nonlin);
    const NonlinExpr& N = problem.nonlin;
    auto V = [&](double w) -> double {
        if (V_sym) return evaluate_lim(*V_sym, w);
        if (w == 0.0) return 0.0;
        return integrate([&](double u) { return evaluate_lim(N, u); }, 0.0, w,
                         QuadSpec{1e-12, 1, 16});
    };
    std::vector<double> E;
    E.reserve(traj.nodes().size());
    for (std::size_t i = 0; i < traj.nodes().size(); ++i) {
        double w = traj.value_at_node(i, 0);
        double v = traj.value_at_node(i, 1);
        E.push_back(0.5 * v * v + V(w));
    }
    return E;
}

}  // namespace nlgreen

#endif  // NLGREEN_ODE_HPP

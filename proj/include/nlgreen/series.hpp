// Truncated power-series (jet) arithmetic and evaluation of expression trees
// on jets.  Powers the Taylor recursions of the short-time solver, derivative
// extraction for smooth forcings, and limit-taking at removable 0/0 points
// of quotient nonlinearities.
#ifndef NLGREEN_SERIES_HPP
#define NLGREEN_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "nlgreen/expr.hpp"

namespace nlgreen {

/// Coefficients c[0..order] of a truncated expansion sum c_i t^i.
struct TaylorSeries {
    std::vector<double> c;

    TaylorSeries() = default;
    explicit TaylorSeries(std::size_t order) : c(order + 1, 0.0) {}
    std::size_t order() const { return c.size() - 1; }
    double operator[](std::size_t i) const { return i < c.size() ? c[i] : 0.0; }

    static TaylorSeries constant(double v, std::size_t order) {
        TaylorSeries s(order);
        s.c[0] = v;
        return s;
    }
    /// v0 + t  (the identity jet at expansion point v0)
    static TaylorSeries identity(double v0, std::size_t order) {
        TaylorSeries s(order);
        s.c[0] = v0;
        if (order >= 1) s.c[1] = 1.0;
        return s;
    }
};

namespace series {

inline TaylorSeries add(const TaylorSeries& a, const TaylorSeries& b) {
    TaylorSeries r(a.order());
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a[i] + b[i];
    return r;
}

inline TaylorSeries mul(const TaylorSeries& a, const TaylorSeries& b) {
    TaylorSeries r(a.order());
    for (std::size_t i = 0; i < r.c.size(); ++i)
        for (std::size_t j = 0; i + j < r.c.size(); ++j) r.c[i + j] += a.c[i] * b[j];
    return r;
}

// division with den[0] != 0
inline TaylorSeries div_regular(const TaylorSeries& num, const TaylorSeries& den) {
    TaylorSeries q(num.order());
    for (std::size_t k = 0; k < q.c.size(); ++k) {
        double acc = num[k];
        for (std::size_t j = 0; j < k; ++j) acc -= q.c[j] * den[k - j];
        q.c[k] = acc / den.c[0];
    }
    return q;
}

inline TaylorSeries pow_int(const TaylorSeries& base, long long n, const std::string& node_text) {
    if (n < 0) {
        if (base.c[0] == 0.0)
            throw DomainError(node_text, base.c[0], "negative power of a series vanishing at the point");
        TaylorSeries one = TaylorSeries::constant(1.0, base.order());
        return div_regular(one, pow_int(base, -n, node_text));
    }
    TaylorSeries r = TaylorSeries::constant(1.0, base.order());
    TaylorSeries b = base;
    unsigned long long k = static_cast<unsigned long long>(n);
    while (k) {
        if (k & 1ull) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

inline TaylorSeries sqrt_pos(const TaylorSeries& v, const std::string& node_text) {
    if (v.c[0] <= 0.0) throw DomainError(node_text, v.c[0], "sqrt of non-positive leading term");
    TaylorSeries s(v.order());
    s.c[0] = std::sqrt(v.c[0]);
    for (std::size_t k = 1; k < s.c.size(); ++k) {
        double acc = v[k];
        for (std::size_t j = 1; j < k; ++j) acc -= s.c[j] * s.c[k - j];
        s.c[k] = acc / (2.0 * s.c[0]);
    }
    return s;
}

inline TaylorSeries pow_real(const TaylorSeries& v, double p, const std::string& node_text) {
    if (v.c[0] <= 0.0)
        throw DomainError(node_text, v.c[0], "real power needs positive leading term");
    TaylorSeries f(v.order());
    f.c[0] = std::pow(v.c[0], p);
    for (std::size_t k = 1; k < f.c.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += (p * static_cast<double>(j) - static_cast<double>(k - j)) * v[j] * f.c[k - j];
        f.c[k] = acc / (static_cast<double>(k) * v.c[0]);
    }
    return f;
}

// F' = P * V' where P is tracked incrementally as sign0 + sign2 * F^2
inline TaylorSeries riccati_fun(const TaylorSeries& v, double f0, double sign0, double sign2) {
    std::size_t n = v.order();
    TaylorSeries f(n), p(n);
    f.c[0] = f0;
    p.c[0] = sign0 + sign2 * f0 * f0;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += p.c[j] * static_cast<double>(k - j) * v[k - j];
        f.c[k] = acc / static_cast<double>(k);
        double q = 0.0;
        for (std::size_t i = 0; i <= k; ++i) q += f.c[i] * f.c[k - i];
        p.c[k] = sign2 * q;
    }
    return f;
}

// Q * F' = sign * V', Q known in full
inline TaylorSeries linear_implicit_fun(const TaylorSeries& v, const TaylorSeries& q, double f0,
                                        double sign, const std::string& node_text) {
    if (q.c[0] == 0.0) throw DomainError(node_text, v.c[0], "derivative singular at the point");
    std::size_t n = v.order();
    TaylorSeries f(n);
    f.c[0] = f0;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = sign * static_cast<double>(k) * v[k];
        for (std::size_t j = 1; j < k; ++j)
            acc -= static_cast<double>(j) * f.c[j] * q[k - j];
        f.c[k] = acc / (static_cast<double>(k) * q.c[0]);
    }
    return f;
}

}  // namespace series

namespace detail {

inline TaylorSeries series_eval_node(const NodePtr& n, const TaylorSeries& u);

inline TaylorSeries series_fun(const Node& node, const TaylorSeries& v) {
    std::size_t n = v.order();
    const double v0 = v.c[0];
    std::string txt;
    print_node(std::make_shared<Node>(node), txt, 0);
    auto fail = [&](const char* why) -> TaylorSeries {
        throw DomainError(txt, v0, why);
    };
    using namespace series;
    switch (node.fun) {
        case FunKind::sin_:
        case FunKind::cos_: {
            TaylorSeries s(n), c(n);
            s.c[0] = std::sin(v0);
            c.c[0] = std::cos(v0);
            for (std::size_t k = 1; k <= n; ++k) {
                double as = 0.0, ac = 0.0;
                for (std::size_t j = 1; j <= k; ++j) {
                    as += static_cast<double>(j) * v[j] * c.c[k - j];
                    ac += static_cast<double>(j) * v[j] * s.c[k - j];
                }
                s.c[k] = as / static_cast<double>(k);
                c.c[k] = -ac / static_cast<double>(k);
            }
            return node.fun == FunKind::sin_ ? s : c;
        }
        case FunKind::sinh_:
        case FunKind::cosh_: {
            TaylorSeries s(n), c(n);
            s.c[0] = std::sinh(v0);
            c.c[0] = std::cosh(v0);
            for (std::size_t k = 1; k <= n; ++k) {
                double as = 0.0, ac = 0.0;
                for (std::size_t j = 1; j <= k; ++j) {
                    as += static_cast<double>(j) * v[j] * c.c[k - j];
                    ac += static_cast<double>(j) * v[j] * s.c[k - j];
                }
                s.c[k] = as / static_cast<double>(k);
                c.c[k] = ac / static_cast<double>(k);
            }
            return node.fun == FunKind::sinh_ ? s : c;
        }
        case FunKind::exp_: {
            TaylorSeries e(n);
            e.c[0] = std::exp(v0);
            for (std::size_t k = 1; k <= n; ++k) {
                double acc = 0.0;
                for (std::size_t j = 1; j <= k; ++j)
                    acc += static_cast<double>(j) * v[j] * e.c[k - j];
                e.c[k] = acc / static_cast<double>(k);
            }
            return e;
        }
        case FunKind::tan_: return riccati_fun(v, std::tan(v0), 1.0, 1.0);
        case FunKind::cot_: {
            double s0 = std::sin(v0);
            if (s0 == 0.0) return fail("cot at a zero of sin");
            return riccati_fun(v, std::cos(v0) / s0, -1.0, -1.0);
        }
        case FunKind::tanh_: return riccati_fun(v, std::tanh(v0), 1.0, -1.0);
        case FunKind::coth_: {
            if (v0 == 0.0) return fail("coth at 0");
            return riccati_fun(v, 1.0 / std::tanh(v0), 1.0, -1.0);
        }
        case FunKind::ln1p_: {
            if (v0 <= -1.0) return fail("ln(1+x) argument at or below -1");
            TaylorSeries q = v;
            q.c[0] += 1.0;
            return linear_implicit_fun(v, q, std::log1p(v0), 1.0, txt);
        }
        case FunKind::atan_:
        case FunKind::acot_: {
            TaylorSeries q = series::add(TaylorSeries::constant(1.0, n), series::mul(v, v));
            double f0 = node.fun == FunKind::atan_ ? std::atan(v0)
                                                   : 1.5707963267948966 - std::atan(v0);
            return linear_implicit_fun(v, q, f0, node.fun == FunKind::atan_ ? 1.0 : -1.0, txt);
        }
        case FunKind::atanh_:
        case FunKind::acoth_: {
            if (node.fun == FunKind::atanh_ && std::fabs(v0) >= 1.0)
                return fail("arctanh argument outside (-1,1)");
            if (node.fun == FunKind::acoth_ && std::fabs(v0) <= 1.0)
                return fail("arccoth argument inside [-1,1]");
            TaylorSeries q(n);
            TaylorSeries v2 = series::mul(v, v);
            for (std::size_t i = 0; i <= n; ++i) q.c[i] = (i == 0 ? 1.0 : 0.0) - v2.c[i];
            double f0 = node.fun == FunKind::atanh_ ? std::atanh(v0) : std::atanh(1.0 / v0);
            return linear_implicit_fun(v, q, f0, 1.0, txt);
        }
        case FunKind::asin_:
        case FunKind::acos_: {
            if (std::fabs(v0) >= 1.0) return fail("inverse trig argument at or outside [-1,1]");
            TaylorSeries q(n);
            TaylorSeries v2 = series::mul(v, v);
            for (std::size_t i = 0; i <= n; ++i) q.c[i] = (i == 0 ? 1.0 : 0.0) - v2.c[i];
            TaylorSeries s = sqrt_pos(q, txt);
            double f0 = node.fun == FunKind::asin_ ? std::asin(v0) : std::acos(v0);
            return linear_implicit_fun(v, s, f0, node.fun == FunKind::asin_ ? 1.0 : -1.0, txt);
        }
        case FunKind::asinh_: {
            TaylorSeries q = series::add(TaylorSeries::constant(1.0, n), series::mul(v, v));
            TaylorSeries s = sqrt_pos(q, txt);
            return linear_implicit_fun(v, s, std::asinh(v0), 1.0, txt);
        }
        case FunKind::acosh_: {
            if (v0 <= 1.0) return fail("arccosh argument at or below 1");
            TaylorSeries q(n);
            TaylorSeries v2 = series::mul(v, v);
            for (std::size_t i = 0; i <= n; ++i) q.c[i] = v2.c[i] - (i == 0 ? 1.0 : 0.0);
            TaylorSeries s = sqrt_pos(q, txt);
            return linear_implicit_fun(v, s, std::acosh(v0), 1.0, txt);
        }
    }
    return fail("unreachable");
}

inline TaylorSeries series_eval_node(const NodePtr& n, const TaylorSeries& u) {
    switch (n->kind) {
        case NodeKind::constant: return TaylorSeries::constant(n->value, u.order());
        case NodeKind::variable: return u;
        case NodeKind::add: return series::add(series_eval_node(n->a, u), series_eval_node(n->b, u));
        case NodeKind::mul: return series::mul(series_eval_node(n->a, u), series_eval_node(n->b, u));
        case NodeKind::div: {
            TaylorSeries num = series_eval_node(n->a, u);
            TaylorSeries den = series_eval_node(n->b, u);
            if (den.c[0] != 0.0) return series::div_regular(num, den);
            // vanishing denominator: factor out the common vanishing order
            std::size_t r = 0;
            while (r <= den.order() && den.c[r] == 0.0) ++r;
            std::string txt;
            print_node(n, txt, 0);
            if (r > den.order()) throw DomainError(txt, u.c[0], "denominator vanishes identically");
            for (std::size_t j = 0; j < r; ++j)
                if (num.c[j] != 0.0)
                    throw DomainError(txt, u.c[0], "pole: numerator vanishes to lower order");
            TaylorSeries ns(u.order()), ds(u.order());
            for (std::size_t i = 0; i + r <= u.order(); ++i) {
                ns.c[i] = num.c[i + r];
                ds.c[i] = den.c[i + r];
            }
            // top r coefficients of the shifted quotient are not determined
            // by the available terms; they are left as computed and callers
            // requiring order M pad the working order accordingly.
            return series::div_regular(ns, ds);
        }
        case NodeKind::pow_int: {
            std::string txt;
            print_node(n, txt, 0);
            return series::pow_int(series_eval_node(n->a, u), n->ipow, txt);
        }
        case NodeKind::pow_real: {
            std::string txt;
            print_node(n, txt, 0);
            return series::pow_real(series_eval_node(n->a, u), n->rpow, txt);
        }
        case NodeKind::fun:
            return series_fun(*n, series_eval_node(n->a, u));
    }
    throw std::logic_error("corrupt expression node");
}

}  // namespace detail

/// Evaluate the expression on a jet.  u is the series of the variable itself
/// (typically TaylorSeries::identity(w0, M)); the result holds the expansion
/// of N(u(t)) about t=0.
inline TaylorSeries series_eval(const NonlinExpr& e, const TaylorSeries& u) {
    if (e.empty()) throw std::invalid_argument("empty expression");
    return detail::series_eval_node(e.root(), u);
}

/// eval_nonlin with removable 0/0 quotient singularities resolved by a local
/// jet expansion.  Genuine poles and domain violations still throw.
inline double evaluate_lim(const NonlinExpr& e, double w) {
    try {
        return eval_nonlin(e, w);
    } catch (const DomainError& err) {
        if (!err.removable_candidate) throw;
        TaylorSeries u = TaylorSeries::identity(w, 16);
        return series_eval(e, u).c[0];
    }
}

/// Derivatives d^j f / dt^j at t = t0 for j = 0..M, for an expression in t.
inline std::vector<double> derivatives_at(const NonlinExpr& e, double t0, int M) {
    TaylorSeries u = TaylorSeries::identity(t0, static_cast<std::size_t>(M) + 8);
    TaylorSeries f = series_eval(e, u);
    std::vector<double> d(static_cast<std::size_t>(M) + 1);
    double fact = 1.0;
    for (int j = 0; j <= M; ++j) {
        if (j > 0) fact *= j;
        d[static_cast<std::size_t>(j)] = f.c[static_cast<std::size_t>(j)] * fact;
    }
    return d;
}

}  // namespace nlgreen

#endif  // NLGREEN_SERIES_HPP

// Real-argument Jacobi elliptic functions sn, cn, dn and the amplitude am
// for any real parameter m (= k^2, the squared modulus), via the arithmetic-
// geometric mean and the Landen phase recursion on the canonical range
// 0 <= m <= 1, with the negative-parameter and reciprocal-parameter
// transformations outside it.
//
// Nonstandard parameter notes:
//   m < 0:  sn(u,m) = sn(v,m1)/(q dn(v,m1)), cn = cn/dn, dn = 1/dn with
//           m1 = -m/(1-m), q = sqrt(1-m), v = q u.
//           am(u,m) = am(q u + K(m1), m1) - pi/2.
//   m > 1:  sn(u,m) = sn(r u, 1/m)/r, cn = dn(r u, 1/m), dn = cn(r u, 1/m)
//           with r = sqrt(m).  The amplitude librates; am(u,m) =
//           arcsin(sn(u,m)) on the principal branch, which is real-analytic
//           for ALL real u because |sn(u,m)| <= 1/sqrt(m) < 1, and satisfies
//           d am/du = dn everywhere.  am_principal_window(m) reports where
//           this coincides with the monotone inverse of the incomplete
//           integral (|u| <= K(1/m)/sqrt(m)).
#ifndef NLGREEN_ELLIPTIC_HPP
#define NLGREEN_ELLIPTIC_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlgreen/ode.hpp"

namespace nlgreen {

struct JacobiTriple {
    double sn, cn, dn;
};

namespace detail {

constexpr double kPi = 3.14159265358979323846;
constexpr int kAgmMax = 32;

struct AgmChain {
    double a[kAgmMax + 1];
    double b[kAgmMax + 1];
    double c[kAgmMax + 1];
    int depth = 0;           // last valid index
    int iterations = 0;      // = depth
};

// a0 = 1, b0 = sqrt(1-m); stops when |a_n - b_n| <= 1e-15 a_n.
inline AgmChain agm_chain(double m) {
    AgmChain ch;
    ch.a[0] = 1.0;
    ch.b[0] = std::sqrt(1.0 - m);
    ch.c[0] = std::sqrt(m);
    int i = 0;
    while (i < kAgmMax) {
        if (std::fabs(ch.a[i] - ch.b[i]) <= 1e-15 * ch.a[i]) break;
        ch.a[i + 1] = 0.5 * (ch.a[i] + ch.b[i]);
        ch.b[i + 1] = std::sqrt(ch.a[i] * ch.b[i]);
        ch.c[i + 1] = 0.5 * (ch.a[i] - ch.b[i]);
        ++i;
    }
    ch.depth = i;
    ch.iterations = i;
    return ch;
}

// descending Landen phase recursion; returns the amplitude phi_0 for (u, m)
// with 0 < m < 1
inline double agm_phase(const AgmChain& ch, double u) {
    const int L = ch.depth;
    double phi = std::ldexp(1.0, L) * ch.a[L] * u;
    for (int i = L; i >= 1; --i) {
        double s = ch.c[i] / ch.a[i] * std::sin(phi);
        s = std::clamp(s, -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    return phi;
}

inline JacobiTriple jacobi_canonical(double u, double m, double* am_out) {
    // 0 <= m <= 1
    if (m == 0.0) {
        if (am_out) *am_out = u;
        return {std::sin(u), std::cos(u), 1.0};
    }
    if (m == 1.0) {
        if (am_out) *am_out = std::asin(std::tanh(u));
        double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech};
    }
    AgmChain ch = agm_chain(m);
    const double K = kPi / (2.0 * ch.a[ch.depth]);
    // quasi-periodicity: reduce to r in [-K, K]; sn, cn flip sign per half
    // period, dn is periodic, am advances by pi
    double q = std::floor(u / (2.0 * K) + 0.5);
    double r = u - 2.0 * K * q;
    double phi0 = agm_phase(ch, r);
    double sign = (static_cast<long long>(q) % 2 == 0) ? 1.0 : -1.0;
    JacobiTriple J;
    J.sn = sign * std::sin(phi0);
    J.cn = sign * std::cos(phi0);
    // dn > 0 on the canonical range, so the algebraic identity is the stable
    // evaluation (the phase-difference form is 0/0 at u = K)
    J.dn = std::sqrt(std::max(0.0, 1.0 - m * std::sin(phi0) * std::sin(phi0)));
    if (am_out) *am_out = phi0 + q * kPi;
    return J;
}

}  // namespace detail

/// Complete elliptic integral of the first kind, K(m), for m < 1.
inline double elliptic_K(double m) {
    if (m >= 1.0) throw std::invalid_argument("elliptic_K: needs m < 1");
    if (m < 0.0) {
        double m1 = -m / (1.0 - m);
        return elliptic_K(m1) / std::sqrt(1.0 - m);
    }
    detail::AgmChain ch = detail::agm_chain(m);
    return detail::kPi / (2.0 * ch.a[ch.depth]);
}

/// Number of AGM iterations used for canonical m in [0, 1).
inline int agm_iterations(double m) {
    if (m < 0.0 || m >= 1.0) throw std::invalid_argument("agm_iterations: canonical m only");
    return detail::agm_chain(m).iterations;
}

/// Jacobi sn, cn, dn at any real (u, m).  The returned triple satisfies
/// sn^2 + cn^2 = 1 and dn^2 + m sn^2 = 1.
inline JacobiTriple jacobi_sn_cn_dn(double u, double m) {
    if (!std::isfinite(u) || !std::isfinite(m))
        throw std::invalid_argument("jacobi_sn_cn_dn: non-finite input");
    if (m >= 0.0 && m <= 1.0) return detail::jacobi_canonical(u, m, nullptr);
    if (m < 0.0) {
        const double q = std::sqrt(1.0 - m);
        const double m1 = -m / (1.0 - m);
        JacobiTriple in = detail::jacobi_canonical(q * u, m1, nullptr);
        return {in.sn / (q * in.dn), in.cn / in.dn, 1.0 / in.dn};
    }
    // m > 1: reciprocal parameter
    const double r = std::sqrt(m);
    JacobiTriple in = detail::jacobi_canonical(r * u, 1.0 / m, nullptr);
    return {in.sn / r, in.dn, in.cn};
}

/// Largest |u| on which am(u, m>1) coincides with the monotone inverse of
/// the incomplete integral of the first kind; +infinity for m <= 1.
inline double am_principal_window(double m) {
    if (m <= 1.0) return std::numeric_limits<double>::infinity();
    return elliptic_K(1.0 / m) / std::sqrt(m);
}

/// Jacobi amplitude am(u, m) for any real u and m: am(0, m) = 0 and
/// d am/du = dn(u, m).  For m <= 1 the amplitude is unbounded (rotation);
/// for m > 1 it librates and the real continuation described in the header
/// comment is returned.
inline double jacobi_am(double u, double m) {
    if (!std::isfinite(u) || !std::isfinite(m))
        throw std::invalid_argument("jacobi_am: non-finite input");
    if (u == 0.0) return 0.0;
    if (m >= 0.0 && m <= 1.0) {
        double am = 0.0;
        detail::jacobi_canonical(u, m, &am);
        return am;
    }
    if (m < 0.0) {
        const double q = std::sqrt(1.0 - m);
        const double m1 = -m / (1.0 - m);
        const double K1 = elliptic_K(m1);
        double am = 0.0;
        detail::jacobi_canonical(q * u + K1, m1, &am);
        return am - detail::kPi / 2.0;
    }
    return std::asin(jacobi_sn_cn_dn(u, m).sn);
}

// ---------------------------------------------------------------------------
// parameter reduction record

struct ReductionStep {
    enum class Kind { negative_param, reciprocal_param };
    Kind kind;
    double m_from, m_to;
    double arg_scale;  // inner argument = arg_scale * u
};

/// Parameter m plus the transformation chain taking it to canonical [0, 1].
struct EllipticParam {
    double m = 0.0;
    double canonical_m = 0.0;
    std::vector<ReductionStep> chain;

    static EllipticParam analyze(double m) {
        EllipticParam p;
        p.m = m;
        if (m >= 0.0 && m <= 1.0) {
            p.canonical_m = m;
            return p;
        }
        if (m < 0.0) {
            double m1 = -m / (1.0 - m);
            p.chain.push_back({ReductionStep::Kind::negative_param, m, m1, std::sqrt(1.0 - m)});
            p.canonical_m = m1;
            return p;
        }
        p.chain.push_back({ReductionStep::Kind::reciprocal_param, m, 1.0 / m, std::sqrt(m)});
        p.canonical_m = 1.0 / m;
        return p;
    }
};

/// Map a triple at the canonical parameter up through one reduction step
/// (from values at (arg_scale*u, m_to) to values at (u, m_from)).
inline JacobiTriple reduction_forward(const ReductionStep& st, const JacobiTriple& inner) {
    if (st.kind == ReductionStep::Kind::negative_param) {
        return {inner.sn / (st.arg_scale * inner.dn), inner.cn / inner.dn, 1.0 / inner.dn};
    }
    return {inner.sn / st.arg_scale, inner.dn, inner.cn};
}

/// Inverse of reduction_forward; forward then inverse is the identity.
inline JacobiTriple reduction_inverse(const ReductionStep& st, const JacobiTriple& outer) {
    if (st.kind == ReductionStep::Kind::negative_param) {
        return {st.arg_scale * outer.sn / outer.dn, outer.cn / outer.dn, 1.0 / outer.dn};
    }
    return {st.arg_scale * outer.sn, outer.dn, outer.cn};
}

// ---------------------------------------------------------------------------
// independent ODE oracle

/// Integrates sn' = cn dn, cn' = -sn dn, dn' = -m sn cn from (0, 1, 1) with
/// local tolerance tol.  Entirely independent of the AGM route above.
inline JacobiTriple oracle_jacobi(double u, double m, double tol = 1e-12) {
    if (tol <= 0.0) throw std::invalid_argument("oracle_jacobi: tol must be positive");
    if (u == 0.0) return {0.0, 1.0, 1.0};
    const double ua = std::fabs(u);
    auto rhs = [m](double, const double* y, double* dy) {
        dy[0] = y[1] * y[2];
        dy[1] = -y[0] * y[2];
        dy[2] = -m * y[0] * y[1];
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    Trajectory tr = integrate_ivp(rhs, 0.0, ua, {0.0, 1.0, 1.0}, opt);
    if (!tr.complete()) throw std::runtime_error("oracle_jacobi: step-size underflow");
    std::vector<double> y = tr.final_state();
    if (u < 0.0) return {-y[0], y[1], y[2]};  // sn odd, cn and dn even
    return {y[0], y[1], y[2]};
}

/// Amplitude by the same route, integrating phi' = dn alongside the triple.
inline double oracle_am(double u, double m, double tol = 1e-12) {
    if (u == 0.0) return 0.0;
    const double ua = std::fabs(u);
    auto rhs = [m](double, const double* y, double* dy) {
        dy[0] = y[1] * y[2];
        dy[1] = -y[0] * y[2];
        dy[2] = -m * y[0] * y[1];
        dy[3] = y[2];
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    Trajectory tr = integrate_ivp(rhs, 0.0, ua, {0.0, 1.0, 1.0, 0.0}, opt);
    if (!tr.complete()) throw std::runtime_error("oracle_am: step-size underflow");
    double am = tr.final_state()[3];
    return u < 0.0 ? -am : am;  // am is odd in u
}

}  // namespace nlgreen

#endif  // NLGREEN_ELLIPTIC_HPP

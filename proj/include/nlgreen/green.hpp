// Causal impulse responses G(t) = theta(t) w0(t) of w'' + N(w) = s delta(t),
// built either from the closed-form catalog (cubic, sine, sinh, Liouville)
// or from a numeric solve of the homogeneous problem, plus the mollified-
// impulse validation of the distributional statement.
//
// Catalog closed forms (s is the derivative jump at 0):
//   cubic:     G = 2^(1/4) theta(t) sn(t/2^(1/4), m=-1),      s = 1
//   sine:      G = 2 theta(t) am(t/sqrt(2), m=2),             s = sqrt(2)
//   sinh:      G = 2 theta(t) asinh((s/2) sn(t, m=-s^2/4)),   any s != 0
//   liouville: two-branch entry of w'' + e^w = delta, not causal and with
//              G(0) != 0; epsilon > 1/16 is a free family parameter and
//              phi = -arctanh(1/(4 sqrt(eps))) fixes the unit jump.
#ifndef NLGREEN_GREEN_HPP
#define NLGREEN_GREEN_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlgreen/elliptic.hpp"
#include "nlgreen/forcing.hpp"
#include "nlgreen/membership.hpp"
#include "nlgreen/ode.hpp"

namespace nlgreen {

enum class CatalogName { cubic, sine, sinh_gordon, liouville };

inline const char* catalog_name_str(CatalogName n) {
    switch (n) {
        case CatalogName::cubic: return "cubic";
        case CatalogName::sine: return "sine";
        case CatalogName::sinh_gordon: return "sinh";
        case CatalogName::liouville: return "liouville";
    }
    return "?";
}

/// A Green's function.  Everything except the Liouville entry is causal:
/// G(t) = 0 for t <= 0 (theta(0) = 0), G(0+) = 0 and G'(0+) = s.
class GreenFn {
public:
    enum class Source { catalog, numeric };

    static GreenFn catalog_cubic() {
        GreenFn g;
        g.source_ = Source::catalog;
        g.name_ = CatalogName::cubic;
        g.s_ = 1.0;
        g.horizon_ = std::numeric_limits<double>::infinity();
        return g;
    }
    static GreenFn catalog_sine() {
        GreenFn g;
        g.source_ = Source::catalog;
        g.name_ = CatalogName::sine;
        g.s_ = std::sqrt(2.0);
        g.horizon_ = std::numeric_limits<double>::infinity();
        return g;
    }
    static GreenFn catalog_sinh(double s) {
        if (s == 0.0) throw std::invalid_argument("sinh catalog entry needs s != 0");
        GreenFn g;
        g.source_ = Source::catalog;
        g.name_ = CatalogName::sinh_gordon;
        g.s_ = s;
        g.horizon_ = std::numeric_limits<double>::infinity();
        return g;
    }
    static GreenFn catalog_liouville(double epsilon) {
        if (!(epsilon > 1.0 / 16.0))
            throw std::invalid_argument(
                "liouville entry: constraint -tanh(phi) = 1/(4 sqrt(eps)) is unsatisfiable for "
                "eps <= 1/16 (arctanh argument would leave (-1,1))");
        GreenFn g;
        g.source_ = Source::catalog;
        g.name_ = CatalogName::liouville;
        g.s_ = 1.0;  // the constraint fixes the derivative jump to 1
        g.eps_ = epsilon;
        g.phi_ = -std::atanh(1.0 / (4.0 * std::sqrt(epsilon)));
        g.horizon_ = std::numeric_limits<double>::infinity();
        return g;
    }
    static GreenFn numeric(Trajectory w0, double s) {
        GreenFn g;
        g.source_ = Source::numeric;
        g.s_ = s;
        g.horizon_ = w0.t_end();
        g.traj_ = std::make_shared<Trajectory>(std::move(w0));
        return g;
    }

    Source source() const { return source_; }
    std::optional<CatalogName> catalog_name() const {
        return source_ == Source::catalog ? std::optional<CatalogName>(name_) : std::nullopt;
    }
    double s() const { return s_; }
    double horizon() const { return horizon_; }
    double liouville_epsilon() const { return eps_; }
    double liouville_phi() const { return phi_; }
    bool causal() const { return !(source_ == Source::catalog && name_ == CatalogName::liouville); }
    bool complete() const { return !traj_ || traj_->complete(); }

    double operator()(double t) const {
        if (source_ == Source::catalog && name_ == CatalogName::liouville) {
            const double r = std::sqrt(eps_);
            if (t > 0.0) return 2.0 * std::log(std::sqrt(2.0 * eps_) / std::cosh(r * t + phi_));
            if (t < 0.0) return 2.0 * std::log(std::sqrt(2.0 * eps_) / std::cosh(r * t - phi_));
            return 2.0 * std::log(std::sqrt(2.0 * eps_) / std::cosh(phi_));  // continuity value
        }
        if (t <= 0.0) return 0.0;
        switch (source_) {
            case Source::numeric:
                return traj_->eval(std::min(t, traj_->t_end()), 0);
            case Source::catalog:
                switch (name_) {
                    case CatalogName::cubic: {
                        const double c = std::pow(2.0, 0.25);
                        return c * jacobi_sn_cn_dn(t / c, -1.0).sn;
                    }
                    case CatalogName::sine:
                        return 2.0 * jacobi_am(t / std::sqrt(2.0), 2.0);
                    case CatalogName::sinh_gordon:
                        return 2.0 * std::asinh(0.5 * s_ * jacobi_sn_cn_dn(t, -0.25 * s_ * s_).sn);
                    case CatalogName::liouville: break;  // handled above
                }
        }
        throw std::logic_error("corrupt GreenFn");
    }

    /// One-sided derivative for t > 0 (closed-form where available, stored
    /// trajectory derivative for numeric entries).
    double deriv(double t) const {
        if (t <= 0.0 && causal()) return 0.0;
        switch (source_) {
            case Source::numeric:
                return traj_->eval(std::min(t, traj_->t_end()), 1);
            case Source::catalog:
                switch (name_) {
                    case CatalogName::cubic: {
                        const double c = std::pow(2.0, 0.25);
                        JacobiTriple j = jacobi_sn_cn_dn(t / c, -1.0);
                        return j.cn * j.dn;
                    }
                    case CatalogName::sine: {
                        const double r = 1.0 / std::sqrt(2.0);
                        return 2.0 * r * jacobi_sn_cn_dn(t * r, 2.0).dn;
                    }
                    case CatalogName::sinh_gordon: {
                        JacobiTriple j = jacobi_sn_cn_dn(t, -0.25 * s_ * s_);
                        const double y = 0.5 * s_ * j.sn;
                        return s_ * j.cn * j.dn / std::sqrt(1.0 + y * y);
                    }
                    case CatalogName::liouville: {
                        const double r = std::sqrt(eps_);
                        if (t >= 0.0) return -2.0 * r * std::tanh(r * t + phi_);
                        return -2.0 * r * std::tanh(r * t - phi_);
                    }
                }
        }
        throw std::logic_error("corrupt GreenFn");
    }

private:
    Source source_ = Source::catalog;
    CatalogName name_ = CatalogName::cubic;
    double s_ = 1.0;
    double eps_ = 0.0, phi_ = 0.0;  // liouville
    double horizon_ = 0.0;
    std::shared_ptr<const Trajectory> traj_;
};

// ---------------------------------------------------------------------------

/// Green's function from the homogeneous solve (w0(0) = 0, w0'(0) = s).
/// Rejects nonlinearities outside the multiplicability class; those need the
/// special two-branch treatment (see catalog_liouville for the exponential).
inline GreenFn green_numeric(const NonlinExpr& nonlin, double s, double horizon,
                             double rtol = 1e-10, double atol = 1e-12) {
    if (s == 0.0) throw std::invalid_argument("green_numeric: s must be nonzero");
    if (horizon <= 0.0) throw std::invalid_argument("green_numeric: horizon must be positive");
    MembershipVerdict v = check_membership(nonlin);
    if (!v.is_member()) {
        std::string why = v.witness ? v.witness->note : "membership check failed";
        throw std::invalid_argument(
            "green_numeric: nonlinearity is not theta-multiplicable (" + why +
            "); the product representation does not apply -- see the liouville catalog entry "
            "for the exponential case");
    }
    Trajectory w0 = solve_ivp(CauchyProblem::homogeneous(nonlin, s, horizon), rtol, atol);
    return GreenFn::numeric(std::move(w0), s);
}

/// Closed-form catalog entry.  cubic and sine carry their intrinsic scales
/// (s = 1 and s = sqrt(2)); sinh takes any s; liouville takes epsilon and
/// has unit jump by the branch constraint.
inline GreenFn green_catalog(CatalogName name, double s) {
    switch (name) {
        case CatalogName::cubic:
            if (std::fabs(s - 1.0) > 1e-12)
                throw std::invalid_argument("cubic catalog entry has fixed s = 1");
            return GreenFn::catalog_cubic();
        case CatalogName::sine:
            if (std::fabs(s - std::sqrt(2.0)) > 1e-12)
                throw std::invalid_argument("sine catalog entry has fixed s = sqrt(2)");
            return GreenFn::catalog_sine();
        case CatalogName::sinh_gordon: return GreenFn::catalog_sinh(s);
        case CatalogName::liouville:
            if (std::fabs(s - 1.0) > 1e-12)
                throw std::invalid_argument("liouville entry has unit jump (s = 1) by construction");
            return GreenFn::catalog_liouville(1.0);
    }
    throw std::invalid_argument("unknown catalog name");
}

inline GreenFn liouville_green(double epsilon) { return GreenFn::catalog_liouville(epsilon); }

// ---------------------------------------------------------------------------
// mollified-impulse machinery

/// Solve w'' + N(w) = s * delta_eta(t) from rest at t0 < -eta, stitching the
/// integration at the mollifier support edges so no step leaps over the bump.
inline Trajectory mollified_impulse_solution(const NonlinExpr& nonlin, double s, double eta,
                                             double t0, double t1, double rtol = 1e-10,
                                             double atol = 1e-12) {
    if (eta <= 0.0 || t0 >= -eta || t1 <= eta)
        throw std::invalid_argument("mollified_impulse_solution: need t0 < -eta < eta < t1");
    Mollifier moll(eta);
    const NonlinExpr& N = nonlin;
    auto rhs_free = [&N](double, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = -evaluate_lim(N, y[0]);
    };
    auto rhs_forced = [&N, &moll, s](double t, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = s * moll(t) - evaluate_lim(N, y[0]);
    };
    Trajectory tr = integrate_ivp(rhs_free, t0, -eta, {0.0, 0.0}, OdeOptions{rtol, atol});
    if (!tr.complete()) return tr;
    OdeOptions bump{rtol, atol};
    bump.max_step = eta / 8.0;
    Trajectory mid = integrate_ivp(rhs_forced, -eta, eta, tr.final_state(), bump);
    tr.append(mid);
    if (!tr.complete()) return tr;
    Trajectory tail = integrate_ivp(rhs_free, eta, t1, tr.final_state(), OdeOptions{rtol, atol});
    tr.append(tail);
    return tr;
}

struct DistributionalRow {
    double eta;
    double sup_error;       // sup over [2 eta, horizon] of |w_eta - G|
    bool solver_failed;
    double attained_time;   // last reliable time when the solver failed
};

/// For each eta, solve the mollified problem and measure the sup distance to
/// G over [2 eta, horizon].  The caller asserts the decrease.
inline std::vector<DistributionalRow> validate_distributional(
    const GreenFn& g, const NonlinExpr& nonlin, const std::vector<double>& etas,
    double horizon = 1.0, double rtol = 1e-10, double atol = 1e-12) {
    std::vector<DistributionalRow> rows;
    for (double eta : etas) {
        if (eta <= 0.0) throw std::invalid_argument("validate_distributional: eta must be positive");
        DistributionalRow row{eta, 0.0, false, horizon};
        Trajectory tr = mollified_impulse_solution(nonlin, g.s(), eta, -0.2, horizon, rtol, atol);
        if (!tr.complete()) {
            row.solver_failed = true;
            row.attained_time = tr.t_end();
            rows.push_back(row);
            continue;
        }
        const int n = 600;
        double sup = 0.0;
        for (int i = 0; i <= n; ++i) {
            double t = 2.0 * eta + (horizon - 2.0 * eta) * i / n;
            sup = std::max(sup, std::fabs(tr.eval(t, 0) - g(t)));
        }
        row.sup_error = sup;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// catalog listing

struct CatalogRow {
    std::string name;
    std::string parameters;
    double s;
    double window_lo, window_hi;  // validated window used by the test suite
    std::string notes;
};

inline std::vector<CatalogRow> catalog_rows() {
    return {
        {"cubic", "m=-1, scale=2^(1/4)", 1.0, 0.0, 3.0,
         "w'' + w^3 = delta; periodic in t"},
        {"sine", "m=2, scale=2", std::sqrt(2.0), 0.0, 3.0,
         "w'' + sin(w) = sqrt(2) delta; librating amplitude"},
        {"sinh", "m=-s^2/4, scale depends on s", 1.0, 0.0, 2.0,
         "w'' + sinh(w) = s delta; s-parameterized family (listed for s=1)"},
        {"liouville", "eps=1, phi=-arctanh(1/4)", 1.0, -3.0, 3.0,
         "w'' + exp(w) = delta; two-branch, not causal, G(0) != 0"},
    };
}

inline std::string catalog_csv() {
    std::ostringstream os;
    os << "name,parameters,s,window_lo,window_hi,notes\n";
    for (const CatalogRow& r : catalog_rows()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", r.s);
        os << r.name << ",\"" << r.parameters << "\"," << buf << "," << r.window_lo << ","
           << r.window_hi << ",\"" << r.notes << "\"\n";
    }
    return os.str();
}

}  // namespace nlgreen

#endif  // NLGREEN_GREEN_HPP

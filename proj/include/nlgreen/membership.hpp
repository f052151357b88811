// Membership test for the multiplicability class of nonlinearities with
// N(theta * w) = theta * N(w): a structural pass over the known closed
// family (odd-series primitives plus closure rules), then a sampled numeric
// identity check for everything else.  Also the theta-power identity used in
// the structural proof, and generators for the published equation hierarchies.
#ifndef NLGREEN_MEMBERSHIP_HPP
#define NLGREEN_MEMBERSHIP_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlgreen/expr.hpp"
#include "nlgreen/series.hpp"

namespace nlgreen {

// Heaviside step with theta(0) = 0.
inline double theta(double t) { return t > 0.0 ? 1.0 : 0.0; }

struct MembershipWitness {
    double t = 0.0;                   // grid point where the identity fails
    double w_value = 0.0;             // w(t) along the failing path
    double lhs = 0.0, rhs = 0.0;      // N(theta*w) and theta*N(w)
    std::vector<double> path_coeffs;  // w(t) = t*(c0 + c1 t + c2 t^2) (empty: N(0) check)
    bool domain_failure = false;      // identity undefined rather than unequal
    std::string note;
};

struct MembershipVerdict {
    enum class Status { member_structural, member_numeric, non_member, unknown };
    Status status = Status::unknown;
    std::vector<std::string> rule_trace;  // structural rules applied, or numeric-pass notes
    std::optional<MembershipWitness> witness;
    double max_residual = 0.0;   // numeric pass: worst |N(theta*w) - theta*N(w)|
    double residual_bound = 0.0; // the tolerance it was compared against

    bool is_member() const {
        return status == Status::member_structural || status == Status::member_numeric;
    }
};

namespace detail {

constexpr int kInfiniteOrder = 1 << 20;

// Vanishing order of the expression at w = 0 (generic estimate: sums use the
// minimum of their parts).  Used by the quotient closure rule.
inline int vanishing_order(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::constant: return n->value == 0.0 ? kInfiniteOrder : 0;
        case NodeKind::variable: return 1;
        case NodeKind::add: return std::min(vanishing_order(n->a), vanishing_order(n->b));
        case NodeKind::mul: {
            int oa = vanishing_order(n->a), ob = vanishing_order(n->b);
            if (oa >= kInfiniteOrder || ob >= kInfiniteOrder) return kInfiniteOrder;
            return oa + ob;
        }
        case NodeKind::div: return vanishing_order(n->a) - vanishing_order(n->b);
        case NodeKind::pow_int:
            return static_cast<int>(n->ipow) * vanishing_order(n->a);
        case NodeKind::pow_real: return 0;  // non-integer order; handled elsewhere
        case NodeKind::fun:
            switch (n->fun) {
                case FunKind::sin_:
                case FunKind::tan_:
                case FunKind::sinh_:
                case FunKind::tanh_:
                case FunKind::asin_:
                case FunKind::atan_:
                case FunKind::asinh_:
                case FunKind::atanh_:
                case FunKind::ln1p_:
                    return vanishing_order(n->a);  // all behave like their argument at 0
                default:
                    return 0;  // cos-family and exp do not vanish with the argument
            }
    }
    return 0;
}

inline bool is_odd_primitive(FunKind f) {
    switch (f) {
        case FunKind::sin_:
        case FunKind::tan_:
        case FunKind::sinh_:
        case FunKind::tanh_:
        case FunKind::asin_:
        case FunKind::atan_:
        case FunKind::asinh_:
        case FunKind::atanh_:
        case FunKind::ln1p_:
            return true;
        default:
            return false;
    }
}

// Structural membership.  Returns false and leaves `trace` untouched on the
// first non-matching node.
inline bool structural_member(const NodePtr& n, std::vector<std::string>& trace) {
    auto describe = [&](const NodePtr& p) {
        std::string s;
        print_node(p, s, 0);
        return s;
    };
    switch (n->kind) {
        case NodeKind::variable:
            trace.push_back("w: power primitive (n=1)");
            return true;
        case NodeKind::constant:
            if (n->value == 0.0) {
                trace.push_back("0: zero constant");
                return true;
            }
            return false;
        case NodeKind::add: {
            std::vector<std::string> sub;
            if (!structural_member(n->a, sub) || !structural_member(n->b, sub)) return false;
            trace.push_back(describe(n) + ": linear combination of members");
            trace.insert(trace.end(), sub.begin(), sub.end());
            return true;
        }
        case NodeKind::mul: {
            // scalar coefficients are allowed; at least one factor must be a member
            const bool a_const = n->a->kind == NodeKind::constant && n->a->value != 0.0;
            const bool b_const = n->b->kind == NodeKind::constant && n->b->value != 0.0;
            std::vector<std::string> sub;
            bool a_ok = a_const || structural_member(n->a, sub);
            bool b_ok = b_const || structural_member(n->b, sub);
            if (!a_ok || !b_ok || (a_const && b_const)) return false;
            trace.push_back(describe(n) + (a_const || b_const ? ": scalar multiple of a member"
                                                              : ": product of members"));
            trace.insert(trace.end(), sub.begin(), sub.end());
            return true;
        }
        case NodeKind::div: {
            std::vector<std::string> sub;
            const bool den_const = n->b->kind == NodeKind::constant && n->b->value != 0.0;
            if (!structural_member(n->a, sub)) return false;
            if (den_const) {
                trace.push_back(describe(n) + ": scalar multiple of a member");
                trace.insert(trace.end(), sub.begin(), sub.end());
                return true;
            }
            if (!structural_member(n->b, sub)) return false;
            int on = vanishing_order(n->a), od = vanishing_order(n->b);
            // strict: equal orders leave N(0) != 0 (e.g. sinh(w)/w -> 1)
            if (on <= od) return false;
            trace.push_back(describe(n) + ": quotient closure (numerator order " +
                            std::to_string(on) + " > denominator order " + std::to_string(od) + ")");
            trace.insert(trace.end(), sub.begin(), sub.end());
            return true;
        }
        case NodeKind::pow_int: {
            if (n->ipow < 1) return false;
            std::vector<std::string> sub;
            if (!structural_member(n->a, sub)) return false;
            trace.push_back(describe(n) + ": integer power of a member (n=" +
                            std::to_string(n->ipow) + ")");
            trace.insert(trace.end(), sub.begin(), sub.end());
            return true;
        }
        case NodeKind::pow_real:
            return false;  // real powers are numeric-evidence only
        case NodeKind::fun: {
            if (!is_odd_primitive(n->fun)) return false;
            std::vector<std::string> sub;
            if (!structural_member(n->a, sub)) return false;
            trace.push_back(describe(n) + std::string(": ") + fun_name(n->fun) +
                            " primitive applied to a member");
            trace.insert(trace.end(), sub.begin(), sub.end());
            return true;
        }
    }
    return false;
}

inline bool contains_real_power(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == NodeKind::pow_real) return true;
    return contains_real_power(n->a) || contains_real_power(n->b);
}

}  // namespace detail

/// Decide membership in the multiplicability class.  Structural recognition
/// first; otherwise the identity N(theta*w) = theta*N(w) is sampled on
/// polynomial paths w(t) with w(0)=0 over t in [-1,1].
///
/// The numeric residual is accepted when <= tol * (1 + max |N(w)|) per path.
/// Expressions containing real powers are tested on nonnegative paths only.
inline MembershipVerdict check_membership(const NonlinExpr& expr, double tol = 1e-9,
                                          int samples = 20, std::uint64_t seed = 1437) {
    if (tol <= 0.0) throw std::invalid_argument("check_membership: tol must be positive");
    if (samples < 1) throw std::invalid_argument("check_membership: samples must be >= 1");

    MembershipVerdict v;

    // necessary condition N(0) = 0 (evaluated as a limit where needed)
    double n0 = 0.0;
    bool n0_defined = true;
    std::string n0_note;
    try {
        n0 = evaluate_lim(expr, 0.0);
    } catch (const DomainError& err) {
        n0_defined = false;
        n0_note = err.what();
    }
    if (!n0_defined || n0 != 0.0) {
        v.status = MembershipVerdict::Status::non_member;
        MembershipWitness w;
        w.t = -0.5;
        w.w_value = 1.0;
        w.domain_failure = !n0_defined;
        w.lhs = n0_defined ? n0 : std::numeric_limits<double>::quiet_NaN();
        w.rhs = 0.0;
        w.note = n0_defined
                     ? "N(0) = " + std::to_string(n0) + " != 0, so N(theta*w) != theta*N(w) for t <= 0"
                     : "N(0) undefined: " + n0_note;
        v.witness = w;
        return v;
    }

    std::vector<std::string> trace;
    if (detail::structural_member(expr.root(), trace)) {
        v.status = MembershipVerdict::Status::member_structural;
        v.rule_trace = std::move(trace);
        return v;
    }

    // numeric pass
    const bool nonneg_paths = detail::contains_real_power(expr.root());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);

    const int grid_n = 80;  // symmetric, excludes t = 0
    int paths_used = 0;
    double worst = 0.0, worst_bound = 0.0;
    std::string skip_note;

    for (int sidx = 0; sidx < samples; ++sidx) {
        std::vector<double> cs = {coeff(rng), coeff(rng), coeff(rng)};
        auto path = [&](double t) {
            double p = cs[0] + t * (cs[1] + t * cs[2]);
            if (nonneg_paths) return t * t * p * p;  // w >= 0, w(0) = 0
            return t * p;                            // w(0) = 0, both signs
        };
        double max_abs_n = 0.0, max_res = 0.0;
        double res_t = 0.0, res_w = 0.0, res_lhs = 0.0, res_rhs = 0.0;
        bool skipped = false;
        for (int i = 0; i < grid_n; ++i) {
            double t = -1.0 + (i + 0.5) * (2.0 / grid_n);
            double w = path(t);
            double lhs, rhs;
            try {
                lhs = evaluate_lim(expr, theta(t) * w);
                rhs = theta(t) * evaluate_lim(expr, w);
            } catch (const DomainError& err) {
                skipped = true;
                skip_note = err.what();
                break;
            }
            max_abs_n = std::max(max_abs_n, std::fabs(rhs));
            double res = std::fabs(lhs - rhs);
            if (res > max_res) {
                max_res = res;
                res_t = t;
                res_w = w;
                res_lhs = lhs;
                res_rhs = rhs;
            }
        }
        if (skipped) continue;
        ++paths_used;
        double bound = tol * (1.0 + max_abs_n);
        if (max_res > v.max_residual) {
            v.max_residual = max_res;
            v.residual_bound = bound;
        }
        if (max_res > bound) {
            v.status = MembershipVerdict::Status::non_member;
            MembershipWitness w;
            w.t = res_t;
            w.w_value = res_w;
            w.lhs = res_lhs;
            w.rhs = res_rhs;
            w.path_coeffs = cs;
            w.note = "identity residual " + std::to_string(max_res) + " exceeds tolerance";
            v.witness = w;
            return v;
        }
        worst = std::max(worst, max_res);
        worst_bound = bound;
    }

    if (paths_used == 0) {
        v.status = MembershipVerdict::Status::unknown;
        v.rule_trace.push_back("all sample paths left the domain: " + skip_note);
        return v;
    }
    v.status = MembershipVerdict::Status::member_numeric;
    v.rule_trace.push_back("numeric identity held on " + std::to_string(paths_used) + " of " +
                           std::to_string(samples) + " sample paths");
    if (nonneg_paths)
        v.rule_trace.push_back("restricted to nonnegative paths (real power present; "
                               "numeric evidence only)");
    if (paths_used < samples)
        v.rule_trace.push_back(std::to_string(samples - paths_used) +
                               " paths skipped on domain violations: " + skip_note);
    return v;
}

/// Re-evaluate the identity at a stored witness; returns |lhs - rhs| (NaN if
/// the violation is a domain failure, which is itself the reproduction).
inline double replay_witness(const NonlinExpr& expr, const MembershipWitness& w) {
    if (w.domain_failure || w.path_coeffs.empty()) {
        try {
            double lhs = evaluate_lim(expr, 0.0);
            return std::fabs(lhs - 0.0);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }
    double lhs = evaluate_lim(expr, theta(w.t) * w.w_value);
    double rhs = theta(w.t) * evaluate_lim(expr, w.w_value);
    return std::fabs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// theta-power identity

/// Checks theta(t)^n = theta(t) on the given grid (t = 0 must be excluded)
/// and the exact binomial identity sum_even C(n,k) = sum_odd C(n,k) = 2^(n-1)
/// in integer arithmetic.
inline bool theta_power_identity(int n, const std::vector<double>& grid) {
    if (n < 1) throw std::invalid_argument("theta_power_identity: n must be positive");
    if (n > 62) throw std::invalid_argument("theta_power_identity: n too large for exact arithmetic");
    if (grid.empty()) throw std::invalid_argument("theta_power_identity: empty grid");
    for (double t : grid) {
        if (t == 0.0)
            throw std::invalid_argument("theta_power_identity: grid must exclude t = 0");
        double th = theta(t);
        double p = 1.0;
        for (int i = 0; i < n; ++i) p *= th;
        if (p != th) return false;
    }
    // Pascal row n in 64-bit integers
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    std::uint64_t even = 0, odd = 0;
    for (int k = 0; k <= n; ++k) (k % 2 == 0 ? even : odd) += row[static_cast<std::size_t>(k)];
    std::uint64_t expected = 1ull << (n - 1);
    return even == expected && odd == expected;
}

// ---------------------------------------------------------------------------
// hierarchy generator

enum class HierarchyFamily {
    power,               // sign * w^n
    power_sum,           // s1*w^n + s2*w^m
    power_sum_pow,       // s0*(s1*w^n + s2*w^m)^k
    sinh_sum_pow,        // s0*(s1*sinh^n + s2*sinh^m)^k
    sinh_tanh_pow,       // s0*(s1*sinh^n + s2*tanh^m)^k
    tanh_sum_pow,        // s0*(s1*tanh^n + s2*tanh^m)^k
    sinh_tanh_product,   // sign * sinh^n * tanh^m, n >= m
    sinh_over_tanh,      // sign * sinh^n / tanh^m, n > m
    sinh_power_sum,      // s1*sinh^n + s2*w^m
    tanh_power_sum,      // s1*tanh^n + s2*w^m
    sinh_power_product,  // sign * sinh^n * w^m
    tanh_power_product,  // sign * tanh^n * w^m
    sinh_over_power,     // sign * sinh^n / w^m, n > m
    log_tanh_combo,      // s1*ln^n(1+w)/tanh^m + s2*sinh^k + s3*(sin^p(w^q) + s4*tanh^r(w^s))^l
};

struct HierarchyParams {
    std::vector<long long> exponents;  // family-specific, see generate_hierarchy
    std::vector<int> signs;            // entries in {+1,-1}; defaults to all +1
};

namespace detail {

inline int sign_at(const HierarchyParams& p, std::size_t i) {
    if (i < p.signs.size()) {
        if (p.signs[i] != 1 && p.signs[i] != -1)
            throw std::invalid_argument("hierarchy signs must be +1 or -1");
        return p.signs[i];
    }
    return 1;
}

inline long long exp_at(const HierarchyParams& p, std::size_t i, const char* family) {
    if (i >= p.exponents.size())
        throw std::invalid_argument(std::string("hierarchy family ") + family +
                                    ": missing exponent parameter");
    long long e = p.exponents[i];
    if (e < 1)
        throw std::invalid_argument(std::string("hierarchy family ") + family +
                                    ": exponents must be positive integers");
    return e;
}

inline NonlinExpr signed_expr(int s, NonlinExpr e) {
    return s > 0 ? e : f_neg(std::move(e));
}

inline NonlinExpr fpow(NonlinExpr e, long long n) { return f_pow(std::move(e), n); }

}  // namespace detail

/// Instantiate one member of the published equation hierarchies.  Quotient
/// families require the numerator exponent to strictly exceed the
/// denominator exponent so that the result vanishes at w = 0 (equality would
/// give N(0) = 1, e.g. sinh(w)/w).
inline NonlinExpr generate_hierarchy(HierarchyFamily family, const HierarchyParams& p) {
    using detail::exp_at;
    using detail::fpow;
    using detail::sign_at;
    using detail::signed_expr;
    using E = NonlinExpr;

    const E w = E::variable();
    const E sinh_w = E::fun(FunKind::sinh_, w);
    const E tanh_w = E::fun(FunKind::tanh_, w);

    auto quotient_guard = [](long long n, long long m, const char* family_name) {
        if (n <= m)
            throw std::invalid_argument(
                std::string("hierarchy family ") + family_name + ": constraint n > m violated (n=" +
                std::to_string(n) + ", m=" + std::to_string(m) +
                "); equal orders leave N(0) != 0");
    };

    switch (family) {
        case HierarchyFamily::power: {
            long long n = exp_at(p, 0, "power");
            return signed_expr(sign_at(p, 0), fpow(w, n));
        }
        case HierarchyFamily::power_sum: {
            long long n = exp_at(p, 0, "power_sum"), m = exp_at(p, 1, "power_sum");
            return E::add(signed_expr(sign_at(p, 0), fpow(w, n)),
                          signed_expr(sign_at(p, 1), fpow(w, m)));
        }
        case HierarchyFamily::power_sum_pow: {
            long long n = exp_at(p, 0, "power_sum_pow"), m = exp_at(p, 1, "power_sum_pow"),
                      k = exp_at(p, 2, "power_sum_pow");
            E inner = E::add(signed_expr(sign_at(p, 1), fpow(w, n)),
                             signed_expr(sign_at(p, 2), fpow(w, m)));
            return signed_expr(sign_at(p, 0), fpow(inner, k));
        }
        case HierarchyFamily::sinh_sum_pow:
        case HierarchyFamily::sinh_tanh_pow:
        case HierarchyFamily::tanh_sum_pow: {
            const char* nm = family == HierarchyFamily::sinh_sum_pow   ? "sinh_sum_pow"
                             : family == HierarchyFamily::sinh_tanh_pow ? "sinh_tanh_pow"
                                                                        : "tanh_sum_pow";
            long long n = exp_at(p, 0, nm), m = exp_at(p, 1, nm), k = exp_at(p, 2, nm);
            const E& first = family == HierarchyFamily::tanh_sum_pow ? tanh_w : sinh_w;
            const E& second = family == HierarchyFamily::sinh_sum_pow ? sinh_w : tanh_w;
            E inner = E::add(signed_expr(sign_at(p, 1), fpow(first, n)),
                             signed_expr(sign_at(p, 2), fpow(second, m)));
            return signed_expr(sign_at(p, 0), fpow(inner, k));
        }
        case HierarchyFamily::sinh_tanh_product: {
            long long n = exp_at(p, 0, "sinh_tanh_product"), m = exp_at(p, 1, "sinh_tanh_product");
            if (n < m)
                throw std::invalid_argument(
                    "hierarchy family sinh_tanh_product: constraint n >= m violated (n=" +
                    std::to_string(n) + ", m=" + std::to_string(m) + ")");
            return signed_expr(sign_at(p, 0), E::mul(fpow(sinh_w, n), fpow(tanh_w, m)));
        }
        case HierarchyFamily::sinh_over_tanh: {
            long long n = exp_at(p, 0, "sinh_over_tanh"), m = exp_at(p, 1, "sinh_over_tanh");
            quotient_guard(n, m, "sinh_over_tanh");
            return signed_expr(sign_at(p, 0), E::div(fpow(sinh_w, n), fpow(tanh_w, m)));
        }
        case HierarchyFamily::sinh_power_sum:
        case HierarchyFamily::tanh_power_sum: {
            const char* nm = family == HierarchyFamily::sinh_power_sum ? "sinh_power_sum"
                                                                       : "tanh_power_sum";
            long long n = exp_at(p, 0, nm), m = exp_at(p, 1, nm);
            const E& f = family == HierarchyFamily::sinh_power_sum ? sinh_w : tanh_w;
            return E::add(signed_expr(sign_at(p, 0), fpow(f, n)),
                          signed_expr(sign_at(p, 1), fpow(w, m)));
        }
        case HierarchyFamily::sinh_power_product:
        case HierarchyFamily::tanh_power_product: {
            const char* nm = family == HierarchyFamily::sinh_power_product ? "sinh_power_product"
                                                                           : "tanh_power_product";
            long long n = exp_at(p, 0, nm), m = exp_at(p, 1, nm);
            const E& f = family == HierarchyFamily::sinh_power_product ? sinh_w : tanh_w;
            return signed_expr(sign_at(p, 0), E::mul(fpow(f, n), fpow(w, m)));
        }
        case HierarchyFamily::sinh_over_power: {
            long long n = exp_at(p, 0, "sinh_over_power"), m = exp_at(p, 1, "sinh_over_power");
            quotient_guard(n, m, "sinh_over_power");
            return signed_expr(sign_at(p, 0), E::div(fpow(sinh_w, n), fpow(w, m)));
        }
        case HierarchyFamily::log_tanh_combo: {
            // exponents: n, m, k, p, q, r, s, l  with n > m
            long long n = exp_at(p, 0, "log_tanh_combo"), m = exp_at(p, 1, "log_tanh_combo"),
                      k = exp_at(p, 2, "log_tanh_combo"), pp = exp_at(p, 3, "log_tanh_combo"),
                      q = exp_at(p, 4, "log_tanh_combo"), r = exp_at(p, 5, "log_tanh_combo"),
                      ss = exp_at(p, 6, "log_tanh_combo"), l = exp_at(p, 7, "log_tanh_combo");
            quotient_guard(n, m, "log_tanh_combo");
            E ln_term = E::div(fpow(E::fun(FunKind::ln1p_, w), n), fpow(tanh_w, m));
            E sin_part = fpow(E::fun(FunKind::sin_, fpow(w, q)), pp);
            E tanh_part = fpow(E::fun(FunKind::tanh_, fpow(w, ss)), r);
            E combo = fpow(E::add(sin_part, signed_expr(sign_at(p, 3), tanh_part)), l);
            return E::add(E::add(signed_expr(sign_at(p, 0), ln_term),
                                 signed_expr(sign_at(p, 1), fpow(sinh_w, k))),
                          signed_expr(sign_at(p, 2), combo));
        }
    }
    throw std::invalid_argument("unknown hierarchy family");
}

}  // namespace nlgreen

#endif  // NLGREEN_MEMBERSHIP_HPP

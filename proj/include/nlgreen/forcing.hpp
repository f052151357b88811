// Forcing terms for the non-homogeneous equation: zero, a unit impulse at
// t = 0, or a smooth expression in t.  The compactly supported bump mollifier
// used to regularize the impulse lives here as well.
#ifndef NLGREEN_FORCING_HPP
#define NLGREEN_FORCING_HPP

#include <cmath>
#include <string>
#include <vector>

#include "nlgreen/parse.hpp"
#include "nlgreen/quadrature.hpp"
#include "nlgreen/series.hpp"

namespace nlgreen {

class Forcing {
public:
    enum class Kind { zero, delta, smooth };

    static Forcing zero() { return Forcing(Kind::zero, NonlinExpr(), "zero"); }
    static Forcing delta() { return Forcing(Kind::delta, NonlinExpr(), "delta"); }
    static Forcing smooth(NonlinExpr f_of_t, std::string source) {
        return Forcing(Kind::smooth, std::move(f_of_t), std::move(source));
    }
    /// Parse "zero", "delta", or an expression in t.
    static Forcing parse(const std::string& text) {
        if (text == "zero" || text == "0") return zero();
        if (text == "delta") return delta();
        return smooth(parse_nonlin(text, "t"), text);
    }

    Kind kind() const { return kind_; }
    const std::string& source() const { return source_; }
    const NonlinExpr& expr() const { return expr_; }

    /// Pointwise value; only meaningful for zero/smooth forcing.
    double operator()(double t) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::smooth: return evaluate_lim(expr_, t);
            case Kind::delta:
                throw std::logic_error("delta forcing has no pointwise value; mollify or sift");
        }
        return 0.0;
    }

    /// f(0), f'(0), ..., f^{(M)}(0); zero forcing gives all zeros.
    std::vector<double> derivatives_at_zero(int M) const {
        if (kind_ == Kind::zero) return std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0);
        if (kind_ == Kind::delta)
            throw std::logic_error("delta forcing has no Taylor data at 0");
        return derivatives_at(expr_, 0.0, M);
    }

private:
    Forcing(Kind k, NonlinExpr e, std::string src)
        : kind_(k), expr_(std::move(e)), source_(std::move(src)) {}
    Kind kind_;
    NonlinExpr expr_;
    std::string source_;
};

/// Bump mollifier: delta_eta(t) = (c/eta) exp(-1/(1-(t/eta)^2)) on |t| < eta,
/// zero outside, with c fixed once so the mass is 1 to ~1e-12.
class Mollifier {
public:
    explicit Mollifier(double eta) : eta_(eta) {
        if (eta <= 0.0) throw std::invalid_argument("Mollifier: eta must be positive");
    }

    double eta() const { return eta_; }

    double operator()(double t) const {
        const double x = t / eta_;
        if (std::fabs(x) >= 1.0) return 0.0;
        return norm_constant() / eta_ * std::exp(-1.0 / (1.0 - x * x));
    }

    /// 1 / int_{-1}^{1} exp(-1/(1-x^2)) dx, computed once by quadrature.
    static double norm_constant() {
        static const double c = [] {
            double integral = integrate(
                [](double x) {
                    const double d = 1.0 - x * x;
                    return d <= 0.0 ? 0.0 : std::exp(-1.0 / d);
                },
                -1.0, 1.0, QuadSpec{1e-13, 4, 18});
            return 1.0 / integral;
        }();
        return c;
    }

private:
    double eta_;
};

}  // namespace nlgreen

#endif  // NLGREEN_FORCING_HPP

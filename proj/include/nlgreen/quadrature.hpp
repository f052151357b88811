// Composite 8-point Gauss-Legendre quadrature with panel doubling until the
// estimate is self-consistent.
#ifndef NLGREEN_QUADRATURE_HPP
#define NLGREEN_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>

namespace nlgreen {

struct QuadSpec {
    double rel_tol = 1e-10;
    int initial_panels = 1;
    int max_doublings = 14;
};

namespace detail {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr double kGl8X[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168,
};
inline constexpr double kGl8W[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915,
};

template <class F>
double gl8_panels(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            acc += kGl8W[i] * (f(mid - half * kGl8X[i]) + f(mid + half * kGl8X[i]));
        }
        total += acc * half;
    }
    return total;
}

}  // namespace detail

/// Integrate f over [a, b]; panels are doubled until two successive
/// estimates agree to spec.rel_tol * (1 + |I|).
template <class F>
double integrate(F&& f, double a, double b, const QuadSpec& spec = {}) {
    if (a == b) return 0.0;
    int panels = spec.initial_panels;
    double prev = detail::gl8_panels(f, a, b, panels);
    for (int d = 0; d < spec.max_doublings; ++d) {
        panels *= 2;
        double cur = detail::gl8_panels(f, a, b, panels);
        if (!std::isfinite(cur)) throw std::runtime_error("quadrature: non-finite integrand sample");
        if (std::fabs(cur - prev) <= spec.rel_tol * (1.0 + std::fabs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("quadrature: panel doubling did not converge");
}

}  // namespace nlgreen

#endif  // NLGREEN_QUADRATURE_HPP

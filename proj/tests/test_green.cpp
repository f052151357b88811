#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nlgreen/green.hpp"
#include "nlgreen/parse.hpp"

using namespace nlgreen;

TEST_CASE("causal support: G vanishes for t <= 0 and jumps with slope s") {
    GreenFn cubic = green_catalog(CatalogName::cubic, 1.0);
    GreenFn sine = green_catalog(CatalogName::sine, std::sqrt(2.0));
    GreenFn sinh1 = green_catalog(CatalogName::sinh_gordon, 1.0);
    GreenFn num = green_numeric(parse_nonlin("tanh(w)"), 0.7, 2.0);
    for (const GreenFn* g : {&cubic, &sine, &sinh1, &num}) {
        CHECK((*g)(-0.5) == 0.0);
        CHECK((*g)(0.0) == 0.0);
        const double h = 1e-7;
        CHECK((*g)(h) / h == Catch::Approx(g->s()).epsilon(1e-4));
    }
    // derivative at 0+ to a tighter tolerance via the closed-form derivative
    CHECK(cubic.deriv(1e-12) == Catch::Approx(1.0).margin(1e-8));
    CHECK(sine.deriv(1e-12) == Catch::Approx(std::sqrt(2.0)).margin(1e-8));
}

TEST_CASE("catalog scale coupling: printed closed forms carry intrinsic s") {
    // sine: G'(0+) = 2 (1/sqrt(2)) dn(0) = sqrt(2)
    CHECK(green_catalog(CatalogName::sine, std::sqrt(2.0)).s() == Catch::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(green_catalog(CatalogName::sine, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(green_catalog(CatalogName::cubic, 2.0), std::invalid_argument);
    CHECK_NOTHROW(green_catalog(CatalogName::sinh_gordon, 2.0));
    CHECK_THROWS_AS(green_catalog(CatalogName::sinh_gordon, 0.0), std::invalid_argument);
}

TEST_CASE("cubic closed form matches the homogeneous solve") {
    GreenFn cat = green_catalog(CatalogName::cubic, 1.0);
    GreenFn num = green_numeric(parse_nonlin("w^3"), 1.0, 3.0, 1e-11, 1e-13);
    double worst = 0.0;
    for (int i = 1; i <= 300; ++i) {
        double t = 3.0 * i / 300.0;
        worst = std::max(worst, std::fabs(cat(t) - num(t)));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("sine closed form matches the homogeneous solve") {
    GreenFn cat = green_catalog(CatalogName::sine, std::sqrt(2.0));
    GreenFn num = green_numeric(parse_nonlin("sin(w)"), std::sqrt(2.0), 3.0, 1e-11, 1e-13);
    double worst = 0.0;
    for (int i = 1; i <= 300; ++i) {
        double t = 3.0 * i / 300.0;
        worst = std::max(worst, std::fabs(cat(t) - num(t)));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("sinh closed form matches the homogeneous solve, s = 1 and s = 2") {
    for (double s : {1.0, 2.0}) {
        GreenFn cat = green_catalog(CatalogName::sinh_gordon, s);
        GreenFn num = green_numeric(parse_nonlin("sinh(w)"), s, 2.0, 1e-12, 1e-14);
        double worst = 0.0;
        for (int i = 1; i <= 200; ++i) {
            double t = 2.0 * i / 200.0;
            worst = std::max(worst, std::fabs(cat(t) - num(t)));
        }
        INFO("s=" << s);
        CHECK(worst <= 1e-7);
    }
    // frozen anchor at t=0.5 for s=1: 2 asinh(0.5 sn(0.5, -1/4))
    GreenFn cat = green_catalog(CatalogName::sinh_gordon, 1.0);
    CHECK(cat(0.5) ==
          Catch::Approx(2.0 * std::asinh(0.5 * 0.4837779775225299859281)).margin(1e-13));
}

TEST_CASE("green_numeric rejects non-members, pointing at the special handling") {
    try {
        green_numeric(parse_nonlin("exp(w)"), 1.0, 1.0);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("liouville") != std::string::npos);
    }
    CHECK_THROWS_AS(green_numeric(parse_nonlin("w^3"), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("liouville entry: constants, continuity, branch residual, jump") {
    const double eps = 1.0;
    GreenFn g = liouville_green(eps);
    const double phi = -std::atanh(0.25);
    CHECK(g.liouville_phi() == Catch::Approx(phi).margin(1e-15));
    // continuity value at 0 from both branches
    const double g0 = 2.0 * std::log(std::sqrt(2.0) / std::cosh(phi));
    CHECK(g(0.0) == Catch::Approx(g0).margin(1e-14));
    CHECK(g(1e-14) == Catch::Approx(g0).margin(1e-10));
    CHECK(g(-1e-14) == Catch::Approx(g0).margin(1e-10));
    CHECK(g0 == Catch::Approx(0.62860865942237413774).margin(1e-14));
    CHECK_FALSE(g.causal());

    // residual of G'' + e^G on both branches by 5-point stencils
    const double h = 3e-3;
    double worst = 0.0;
    for (double t = -3.0; t <= 3.0; t += 0.05) {
        if (std::fabs(t) < 5 * h) continue;
        double d2 = (-g(t - 2 * h) + 16 * g(t - h) - 30 * g(t) + 16 * g(t + h) - g(t + 2 * h)) /
                    (12 * h * h);
        worst = std::max(worst, std::fabs(d2 + std::exp(g(t))));
    }
    CHECK(worst <= 1e-9);

    // derivative jump at 0: -4 sqrt(eps) tanh(phi) = 1 = s
    double jump = g.deriv(0.0) - (-2.0 * std::sqrt(eps) * std::tanh(-phi));
    CHECK(jump == Catch::Approx(1.0).margin(1e-12));
    CHECK(-4.0 * std::sqrt(eps) * std::tanh(phi) == Catch::Approx(1.0).margin(1e-14));
    CHECK(g.s() == 1.0);

    // eps below the arctanh window is rejected
    CHECK_THROWS_AS(liouville_green(0.05), std::invalid_argument);
    CHECK_THROWS_AS(liouville_green(1.0 / 16.0), std::invalid_argument);
    CHECK_NOTHROW(liouville_green(0.0626));
}

TEST_CASE("mollifier: unit mass and compact support") {
    Mollifier m(1e-2);
    CHECK(m(0.02) == 0.0);
    CHECK(m(-0.02) == 0.0);
    CHECK(m(0.0) > 0.0);
    double mass = integrate([&](double t) { return m(t); }, -1e-2, 1e-2, QuadSpec{1e-12, 8, 16});
    CHECK(mass == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("mollified impulse solutions converge to theta * w0") {
    GreenFn g = green_numeric(parse_nonlin("w^3"), 1.0, 1.0, 1e-11, 1e-13);
    auto rows = validate_distributional(g, parse_nonlin("w^3"), {1e-2, 1e-3}, 1.0, 1e-10, 1e-12);
    REQUIRE(rows.size() == 2);
    REQUIRE_FALSE(rows[0].solver_failed);
    REQUIRE_FALSE(rows[1].solver_failed);
    CHECK(rows[1].sup_error < rows[0].sup_error);  // eta = 1e-3 beats eta = 1e-2
}

TEST_CASE("causality: the mollified solution rests until the impulse support") {
    Trajectory tr = mollified_impulse_solution(parse_nonlin("sin(w)"), 1.0, 1e-3, -0.2, 0.5,
                                               1e-10, 1e-12);
    REQUIRE(tr.complete());
    for (double t : {-0.15, -0.05, -0.002}) {
        CHECK(std::fabs(tr.eval(t, 0)) <= 1e-12);
    }
}

TEST_CASE("catalog CSV lists the four entries") {
    std::string csv = catalog_csv();
    CHECK(csv.find("name,parameters,s,window_lo,window_hi,notes") == 0);
    for (const char* name : {"cubic", "sine", "sinh", "liouville"})
        CHECK(csv.find(name) != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);  // LF only
}

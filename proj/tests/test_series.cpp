#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nlgreen/parse.hpp"
#include "nlgreen/series.hpp"

using namespace nlgreen;

TEST_CASE("series_eval matches nested symbolic derivatives for every primitive") {
    // the two routes are independent: chain-rule trees vs coefficient
    // recurrences (and the trees themselves are checked against finite
    // differences in the expr tests)
    struct Case {
        const char* src;
        double x0;
    };
    const Case cases[] = {
        {"sin(w)", 0.4},     {"cos(w)", 0.4},    {"tan(w)", 0.4},     {"cot(w)", 0.7},
        {"sinh(w)", 0.4},    {"cosh(w)", 0.4},   {"tanh(w)", 0.4},    {"coth(w)", 0.8},
        {"arcsin(w)", 0.3},  {"arccos(w)", 0.3}, {"arctan(w)", 0.5},  {"arccot(w)", 0.5},
        {"arcsinh(w)", 0.5}, {"arccosh(w)", 1.6},{"arctanh(w)", 0.4}, {"arccoth(w)", 1.7},
        {"ln(1+w)", 0.5},    {"exp(w)", 0.4},    {"w^3", 0.7},        {"w^2.5", 0.9},
        {"sinh(w)^2/w", 0.6},{"sin(w)*exp(w)+w^2", 0.3},
    };
    for (const Case& c : cases) {
        NonlinExpr e = parse_nonlin(c.src);
        TaylorSeries s = series_eval(e, TaylorSeries::identity(c.x0, 8));
        INFO(c.src << " at " << c.x0);
        NonlinExpr d = e;
        double fact = 1.0;
        for (int k = 0; k <= 4; ++k) {
            if (k > 0) {
                d = diff_nonlin(d);
                fact *= k;
            }
            double symbolic = eval_nonlin(d, c.x0);
            double series_val = s.c[static_cast<std::size_t>(k)] * fact;
            double scale = std::max(1.0, std::fabs(symbolic));
            INFO("derivative order " << k);
            CHECK(std::fabs(series_val - symbolic) / scale < 1e-11);
        }
    }
}

TEST_CASE("series division factors removable 0/0 quotients") {
    // sinh(w)^2 / w  ->  w + w^3/3 + ... near 0; value 0, slope 1
    NonlinExpr e = parse_nonlin("sinh(w)^2/w");
    TaylorSeries s = series_eval(e, TaylorSeries::identity(0.0, 10));
    CHECK(s.c[0] == 0.0);
    CHECK(s.c[1] == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(s.c[3] == Catch::Approx(1.0 / 3.0).epsilon(1e-12));

    // sinh(w)/w -> 1 at 0 (finite, nonzero limit)
    CHECK(series_eval(parse_nonlin("sinh(w)/w"), TaylorSeries::identity(0.0, 8)).c[0] ==
          Catch::Approx(1.0).epsilon(1e-14));

    // true pole stays an error
    CHECK_THROWS_AS(series_eval(parse_nonlin("w/w^2"), TaylorSeries::identity(0.0, 8)),
                    DomainError);
}

TEST_CASE("evaluate_lim resolves 0/0 only; genuine violations still throw") {
    CHECK(evaluate_lim(parse_nonlin("sinh(w)^2/w"), 0.0) == 0.0);
    CHECK(evaluate_lim(parse_nonlin("sinh(w)/tanh(w)"), 0.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(evaluate_lim(parse_nonlin("1/w"), 0.0), DomainError);
    CHECK_THROWS_AS(evaluate_lim(parse_nonlin("arccosh(w)"), 0.0), DomainError);
    // removable point away from zero: sin(w)/(w - 1) is fine at 0.5, pole at 1
    CHECK(evaluate_lim(parse_nonlin("sin(w)/(w + -1)"), 0.5) ==
          Catch::Approx(std::sin(0.5) / -0.5).epsilon(1e-14));
}

TEST_CASE("derivatives_at extracts forcing jets") {
    NonlinExpr f = parse_nonlin("cos(t)", "t");
    auto d = derivatives_at(f, 0.0, 6);
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == Catch::Approx(-1.0).epsilon(1e-14));
    CHECK(d[4] == Catch::Approx(1.0).epsilon(1e-12));
    auto one = derivatives_at(parse_nonlin("1", "t"), 0.0, 3);
    CHECK(one[0] == 1.0);
    CHECK(one[1] == 0.0);
}

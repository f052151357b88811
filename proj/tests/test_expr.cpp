#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nlgreen/expr.hpp"
#include "nlgreen/parse.hpp"

using namespace nlgreen;
using E = NonlinExpr;

TEST_CASE("parse: single primitives and grammar exercise") {
    // "w^3" is a power node (w, 3)
    E e = parse_nonlin("w^3");
    REQUIRE(e.root()->kind == NodeKind::pow_int);
    REQUIRE(e.root()->ipow == 3);
    REQUIRE(e.root()->a->kind == NodeKind::variable);

    // sum(product(power(sinh w, 2), tanh w), power(w, 4))
    E f = parse_nonlin("sinh(w)^2 * tanh(w) + w^4");
    REQUIRE(f.root()->kind == NodeKind::add);
    const auto& prod = f.root()->a;
    REQUIRE(prod->kind == NodeKind::mul);
    REQUIRE(prod->a->kind == NodeKind::pow_int);
    REQUIRE(prod->a->a->kind == NodeKind::fun);
    REQUIRE(prod->a->a->fun == FunKind::sinh_);
    REQUIRE(prod->b->kind == NodeKind::fun);
    REQUIRE(prod->b->fun == FunKind::tanh_);
    REQUIRE(f.root()->b->kind == NodeKind::pow_int);
    REQUIRE(f.root()->b->ipow == 4);
}

TEST_CASE("parse: errors carry 1-based byte offsets") {
    try {
        parse_nonlin("ln(1+w");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 7);  // EOF position, one past the last byte
    }
    try {
        parse_nonlin("foo(w)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 1);
        CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
    }
    try {
        parse_nonlin("sin(w, w)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("arity") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_nonlin("ln(w)"), ParseError);       // only ln(1+...) is in the node set
    CHECK_THROWS_AS(parse_nonlin("w^w"), ParseError);         // exponent must be a literal
    CHECK_THROWS_AS(parse_nonlin(""), ParseError);
    CHECK_THROWS_AS(parse_nonlin("w + "), ParseError);
}

TEST_CASE("parse: ln(1+...) becomes the ln1p node, both orders") {
    E a = parse_nonlin("ln(1+w)");
    REQUIRE(a.root()->kind == NodeKind::fun);
    REQUIRE(a.root()->fun == FunKind::ln1p_);
    E b = parse_nonlin("ln(w^2+1)");
    REQUIRE(b.root()->fun == FunKind::ln1p_);
    REQUIRE(b.root()->a->kind == NodeKind::pow_int);
}

TEST_CASE("parse: precedence matches power > product > sum") {
    CHECK(parse_nonlin("w^2*w^3+w") ==
          E::add(E::mul(E::pow_int(E::variable(), 2), E::pow_int(E::variable(), 3)), E::variable()));
    CHECK(parse_nonlin("-w^2") == E::mul(E::constant(-1.0), E::pow_int(E::variable(), 2)));
    CHECK(parse_nonlin("w^-2") == E::pow_int(E::variable(), -2));
    CHECK(parse_nonlin("w^2.5") == E::pow_real(E::variable(), 2.5));
    CHECK(parse_nonlin("(w^3+w^2)^2") ==
          E::pow_int(E::add(E::pow_int(E::variable(), 3), E::pow_int(E::variable(), 2)), 2));
}

TEST_CASE("eval: spec anchor values") {
    CHECK(eval_nonlin(parse_nonlin("w^3"), 2.0) == 8.0);  // exact for polynomials
    CHECK(eval_nonlin(parse_nonlin("sinh(w)"), 0.0) == 0.0);
    CHECK(eval_nonlin(parse_nonlin("ln(1+w)"), std::exp(1.0) - 1.0) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eval: domain violations report the offending node") {
    try {
        eval_nonlin(parse_nonlin("arctanh(w)"), 1.5);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.node_text.find("arctanh") != std::string::npos);
        CHECK(e.argument == 1.5);
    }
    CHECK_THROWS_AS(eval_nonlin(parse_nonlin("ln(1+w)"), -1.0), DomainError);
    CHECK_THROWS_AS(eval_nonlin(parse_nonlin("arccosh(w)"), 0.5), DomainError);
    CHECK_THROWS_AS(eval_nonlin(parse_nonlin("w^0.5"), -1.0), DomainError);
    CHECK_THROWS_AS(eval_nonlin(parse_nonlin("coth(w)"), 0.0), DomainError);
    // 0/0 quotients are flagged as removable candidates
    try {
        eval_nonlin(parse_nonlin("sinh(w)^2/w"), 0.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.removable_candidate);
    }
}

TEST_CASE("diff: table of primitives") {
    CHECK(diff_nonlin(parse_nonlin("w^3")) == parse_nonlin("3*w^2"));
    CHECK(diff_nonlin(parse_nonlin("sinh(w)")) == parse_nonlin("cosh(w)"));
    // arctan'(1) = 1/2
    E d = diff_nonlin(parse_nonlin("arctan(w)"));
    CHECK(eval_nonlin(d, 1.0) == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("diff: agrees with central differences at random in-domain points") {
    const char* exprs[] = {
        "w^3", "sinh(w)", "tanh(w)", "sin(w)", "tan(w)", "arctan(w)", "arcsinh(w)",
        "ln(1+w)", "exp(w)", "cos(w)", "cosh(w)", "sinh(w)^2*tanh(w)+w^4",
        "sin(w)/(1+w^2)", "arcsin(w)", "arctanh(w)", "w^2.5", "arccot(w)",
    };
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> dist(-0.9, 0.9);
    const double h = 1e-5;
    for (const char* src : exprs) {
        E e = parse_nonlin(src);
        E d = diff_nonlin(e);
        int checked = 0;
        for (int i = 0; i < 100; ++i) {
            double w = dist(rng);
            if (std::string(src) == "w^2.5") w = std::fabs(w) + 0.05;  // keep in domain
            double fd, exact;
            try {
                fd = (eval_nonlin(e, w + h) - eval_nonlin(e, w - h)) / (2 * h);
                exact = eval_nonlin(d, w);
            } catch (const DomainError&) {
                continue;
            }
            ++checked;
            double scale = std::max(1.0, std::fabs(exact));
            INFO(src << " at w=" << w);
            CHECK(std::fabs(fd - exact) / scale < 1e-6);
        }
        CHECK(checked > 50);
    }
}

TEST_CASE("diff: derivative of a tree is again a tree (second derivatives evaluate)") {
    E e = parse_nonlin("arcsin(w)*ln(1+w)");
    E d2 = diff_nonlin(diff_nonlin(e));
    CHECK(std::isfinite(eval_nonlin(d2, 0.3)));
}

TEST_CASE("print/parse round trips") {
    const char* sources[] = {
        "w^3",
        "sinh(w)^2 * tanh(w) + w^4",
        "ln(1 + w)",
        "sin(w) / (1 + w^2)",
        "-w^2 + 3.5 * w",
        "w^-2",
        "w^2.5",
        "(w^3 + w^2)^2",
        "arccoth(w) - exp(w)",
        "2 * arctan(w) * w",
    };
    for (const char* src : sources) {
        E e = parse_nonlin(src);
        // parse(print(X)) == X on ASTs
        CHECK(parse_nonlin(print_nonlin(e)) == e);
        // print(parse(.)) is the identity on canonical text
        std::string canon = print_nonlin(e);
        CHECK(print_nonlin(parse_nonlin(canon)) == canon);
    }
}

TEST_CASE("print/parse round trips on derivative trees") {
    const char* sources[] = {"arcsin(w)", "tan(w)", "sinh(w)^3/w^2", "ln(1+w)*cos(w)"};
    for (const char* src : sources) {
        E d = diff_nonlin(parse_nonlin(src));
        CHECK(parse_nonlin(print_nonlin(d)) == d);
    }
}

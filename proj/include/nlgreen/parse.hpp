// Recursive-descent parser for the nonlinearity grammar.
//
// Precedence (loosest to tightest): sum, product/quotient, unary sign,
// power, function application / atoms.  `ln` is accepted only in the shape
// ln(1 + <expr>) and maps to the ln1p node.  Exponents are numeric literals.
#ifndef NLGREEN_PARSE_HPP
#define NLGREEN_PARSE_HPP

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nlgreen/expr.hpp"

namespace nlgreen {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset_, const std::string& what_)
        : std::runtime_error("parse error at offset " + std::to_string(offset_) + ": " + what_),
          offset(offset_) {}
    std::size_t offset;  // 1-based byte offset into the source text
};

namespace detail {

struct ParserState {
    std::string_view src;
    std::size_t pos = 0;  // 0-based cursor
    std::string var_name = "w";

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError(at + 1, msg);
    }
    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= src.size() || src[pos] != c)
            fail(std::string("expected '") + c + "' " + what, pos);
        ++pos;
    }

    struct Number {
        double value;
        bool is_integer;
        long long int_value;
    };

    std::optional<Number> try_number() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= src.size()) return std::nullopt;
        if (!std::isdigit(static_cast<unsigned char>(src[pos])) && src[pos] != '.')
            return std::nullopt;
        bool has_dot = false, has_exp = false;
        while (pos < src.size()) {
            char c = src[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos;
            } else if (c == '.' && !has_dot && !has_exp) {
                has_dot = true;
                ++pos;
            } else if ((c == 'e' || c == 'E') && !has_exp && pos > start &&
                       pos + 1 < src.size() &&
                       (std::isdigit(static_cast<unsigned char>(src[pos + 1])) ||
                        ((src[pos + 1] == '+' || src[pos + 1] == '-') && pos + 2 < src.size() &&
                         std::isdigit(static_cast<unsigned char>(src[pos + 2]))))) {
                has_exp = true;
                ++pos;
                if (src[pos] == '+' || src[pos] == '-') ++pos;
            } else {
                break;
            }
        }
        std::string text(src.substr(start, pos - start));
        if (text == ".") fail("malformed number", start);
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) fail("malformed number '" + text + "'", start);
        Number num{v, false, 0};
        if (!has_dot && !has_exp && text.size() <= 18) {
            num.is_integer = true;
            num.int_value = std::strtoll(text.c_str(), nullptr, 10);
        }
        return num;
    }

    std::string try_ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && (std::isalpha(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '_')) ++pos;
        return std::string(src.substr(start, pos - start));
    }

    NonlinExpr parse_sum() {
        NonlinExpr lhs = parse_product();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                lhs = NonlinExpr::add(lhs, parse_product());
            } else if (accept('-')) {
                lhs = NonlinExpr::add(lhs, negate(parse_product()));
            } else {
                return lhs;
            }
        }
    }

    NonlinExpr parse_product() {
        NonlinExpr lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                lhs = NonlinExpr::mul(lhs, parse_unary());
            } else if (accept('/')) {
                lhs = NonlinExpr::div(lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NonlinExpr parse_unary() {
        if (accept('-')) return negate(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    static NonlinExpr negate(NonlinExpr e) {
        if (e.root()->kind == NodeKind::constant) return NonlinExpr::constant(-e.root()->value);
        return NonlinExpr::mul(NonlinExpr::constant(-1.0), std::move(e));
    }

    NonlinExpr parse_power() {
        NonlinExpr base = parse_atom();
        skip_ws();
        if (!accept('^')) return base;
        bool neg = false;
        bool parenthesized = accept('(');
        skip_ws();
        if (accept('-')) neg = true;
        std::size_t at = pos;
        auto num = try_number();
        if (!num) fail("exponent must be a numeric literal", at);
        if (parenthesized) expect(')', "after exponent");
        if (num->is_integer) {
            long long k = neg ? -num->int_value : num->int_value;
            return NonlinExpr::pow_int(std::move(base), k);
        }
        return NonlinExpr::pow_real(std::move(base), neg ? -num->value : num->value);
    }

    NonlinExpr parse_atom() {
        skip_ws();
        std::size_t at = pos;
        if (accept('(')) {
            NonlinExpr inner = parse_sum();
            expect(')', "to close parenthesis");
            return inner;
        }
        if (auto num = try_number()) return NonlinExpr::constant(num->value);

        std::string id = try_ident();
        if (id.empty()) fail("expected a value", at);
        if (id == var_name) return NonlinExpr::variable();
        if (id == "ln") return parse_ln(at);

        static const std::map<std::string, FunKind, std::less<>> funs = {
            {"sin", FunKind::sin_},       {"cos", FunKind::cos_},
            {"tan", FunKind::tan_},       {"cot", FunKind::cot_},
            {"sinh", FunKind::sinh_},     {"cosh", FunKind::cosh_},
            {"tanh", FunKind::tanh_},     {"coth", FunKind::coth_},
            {"arcsin", FunKind::asin_},   {"arccos", FunKind::acos_},
            {"arctan", FunKind::atan_},   {"arccot", FunKind::acot_},
            {"arcsinh", FunKind::asinh_}, {"arccosh", FunKind::acosh_},
            {"arctanh", FunKind::atanh_}, {"arccoth", FunKind::acoth_},
            {"ln1p", FunKind::ln1p_},     {"exp", FunKind::exp_},
        };
        auto it = funs.find(id);
        if (it == funs.end()) fail("unknown function '" + id + "'", at);
        expect('(', ("after function '" + id + "'").c_str());
        NonlinExpr arg = parse_sum();
        if (peek() == ',') fail("arity mismatch: '" + id + "' takes one argument", pos);
        expect(')', "to close function argument");
        return NonlinExpr::fun(it->second, std::move(arg));
    }

    // ln is supported only as ln(1 + <expr>) / ln(<expr> + 1)
    NonlinExpr parse_ln(std::size_t at) {
        expect('(', "after function 'ln'");
        NonlinExpr arg = parse_sum();
        if (peek() == ',') fail("arity mismatch: 'ln' takes one argument", pos);
        expect(')', "to close function argument");
        const NodePtr& r = arg.root();
        if (r->kind == NodeKind::add) {
            if (r->a->kind == NodeKind::constant && r->a->value == 1.0)
                return NonlinExpr::fun(FunKind::ln1p_, NonlinExpr(r->b));
            if (r->b->kind == NodeKind::constant && r->b->value == 1.0)
                return NonlinExpr::fun(FunKind::ln1p_, NonlinExpr(r->a));
        }
        fail("ln is supported as ln(1 + <expr>) only", at);
    }
};

}  // namespace detail

/// Parse an expression in the variable `var` (default "w").  The returned
/// tree mirrors the source text exactly; no simplification is applied.
inline NonlinExpr parse_nonlin(std::string_view source, const std::string& var = "w") {
    detail::ParserState p{source, 0, var};
    if (p.eof()) p.fail("empty input", 0);
    NonlinExpr e = p.parse_sum();
    p.skip_ws();
    if (p.pos != source.size()) p.fail("unexpected trailing input", p.pos);
    return e;
}

}  // namespace nlgreen

#endif  // NLGREEN_PARSE_HPP

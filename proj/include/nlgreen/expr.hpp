// Expression trees for scalar nonlinearities N(w): construction, evaluation,
// symbolic differentiation and canonical printing.
#ifndef NLGREEN_EXPR_HPP
#define NLGREEN_EXPR_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace nlgreen {

class DomainError : public std::runtime_error {
public:
    DomainError(std::string node, double arg, std::string what_, bool zero_over_zero = false)
        : std::runtime_error("domain violation in '" + node + "' at argument " +
                             std::to_string(arg) + ": " + what_),
          node_text(std::move(node)), argument(arg), removable_candidate(zero_over_zero) {}
    std::string node_text;
    double argument;
    // true for 0/0 quotients, which may still have a finite limit
    bool removable_candidate;
};

enum class NodeKind : std::uint8_t {
    constant,
    variable,
    add,
    mul,
    div,
    pow_int,
    pow_real,
    fun,
};

enum class FunKind : std::uint8_t {
    sin_, cos_, tan_, cot_,
    sinh_, cosh_, tanh_, coth_,
    asin_, acos_, atan_, acot_,
    asinh_, acosh_, atanh_, acoth_,
    ln1p_, exp_,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double value = 0.0;        // constant
    long long ipow = 0;        // pow_int exponent
    double rpow = 0.0;         // pow_real exponent
    FunKind fun = FunKind::sin_;
    NodePtr a, b;              // children (a for unary, a/b for binary)
};

inline const char* fun_name(FunKind f) {
    switch (f) {
        case FunKind::sin_: return "sin";
        case FunKind::cos_: return "cos";
        case FunKind::tan_: return "tan";
        case FunKind::cot_: return "cot";
        case FunKind::sinh_: return "sinh";
        case FunKind::cosh_: return "cosh";
        case FunKind::tanh_: return "tanh";
        case FunKind::coth_: return "coth";
        case FunKind::asin_: return "arcsin";
        case FunKind::acos_: return "arccos";
        case FunKind::atan_: return "arctan";
        case FunKind::acot_: return "arccot";
        case FunKind::asinh_: return "arcsinh";
        case FunKind::acosh_: return "arccosh";
        case FunKind::atanh_: return "arctanh";
        case FunKind::acoth_: return "arccoth";
        case FunKind::ln1p_: return "ln1p";
        case FunKind::exp_: return "exp";
    }
    return "?";
}

/// Immutable expression tree over one scalar variable.  All operations on
/// the tree are pure; instances may be shared freely across threads.
class NonlinExpr {
public:
    NonlinExpr() = default;
    explicit NonlinExpr(NodePtr root) : root_(std::move(root)) {}

    const NodePtr& root() const { return root_; }
    bool empty() const { return root_ == nullptr; }

    // -- raw constructors (no simplification) --
    static NonlinExpr variable() {
        return NonlinExpr(std::make_shared<Node>(Node{NodeKind::variable}));
    }
    static NonlinExpr constant(double c) {
        Node n{NodeKind::constant};
        n.value = c;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr add(NonlinExpr x, NonlinExpr y) {
        Node n{NodeKind::add};
        n.a = x.root_;
        n.b = y.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr mul(NonlinExpr x, NonlinExpr y) {
        Node n{NodeKind::mul};
        n.a = x.root_;
        n.b = y.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr div(NonlinExpr x, NonlinExpr y) {
        Node n{NodeKind::div};
        n.a = x.root_;
        n.b = y.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr pow_int(NonlinExpr x, long long k) {
        Node n{NodeKind::pow_int};
        n.ipow = k;
        n.a = x.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr pow_real(NonlinExpr x, double p) {
        Node n{NodeKind::pow_real};
        n.rpow = p;
        n.a = x.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }
    static NonlinExpr fun(FunKind f, NonlinExpr x) {
        Node n{NodeKind::fun};
        n.fun = f;
        n.a = x.root_;
        return NonlinExpr(std::make_shared<Node>(n));
    }

private:
    NodePtr root_;
};

// ---------------------------------------------------------------------------
// structural equality

inline bool equal(const NodePtr& x, const NodePtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case NodeKind::constant: return x->value == y->value;
        case NodeKind::variable: return true;
        case NodeKind::pow_int: return x->ipow == y->ipow && equal(x->a, y->a);
        case NodeKind::pow_real: return x->rpow == y->rpow && equal(x->a, y->a);
        case NodeKind::fun: return x->fun == y->fun && equal(x->a, y->a);
        default: return equal(x->a, y->a) && equal(x->b, y->b);
    }
}

inline bool operator==(const NonlinExpr& x, const NonlinExpr& y) {
    return equal(x.root(), y.root());
}
inline bool operator!=(const NonlinExpr& x, const NonlinExpr& y) { return !(x == y); }

// ---------------------------------------------------------------------------
// canonical printing

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// precedence: 1 sum, 2 product/quotient, 3 power, 4 atom
inline int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::add: return 1;
        case NodeKind::mul:
        case NodeKind::div: return 2;
        case NodeKind::pow_int:
        case NodeKind::pow_real: return 3;
        default: return 4;
    }
}

inline bool is_const(const NodePtr& n, double v) {
    return n && n->kind == NodeKind::constant && n->value == v;
}

inline void print_node(const NodePtr& n, std::string& out, int parent_prec);

inline void print_child(const NodePtr& n, std::string& out, int min_prec) {
    if (precedence(*n) < min_prec) {
        out += '(';
        print_node(n, out, 0);
        out += ')';
    } else {
        print_node(n, out, min_prec);
    }
}

inline void print_node(const NodePtr& n, std::string& out, int) {
    switch (n->kind) {
        case NodeKind::constant:
            if (n->value < 0) {
                out += '-';
                out += format_number(-n->value);
            } else {
                out += format_number(n->value);
            }
            return;
        case NodeKind::variable:
            out += 'w';
            return;
        case NodeKind::add: {
            print_child(n->a, out, 1);
            // render  x + (-1)*y  and  x + (-c)  as subtraction
            const NodePtr& r = n->b;
            if (r->kind == NodeKind::mul && is_const(r->a, -1.0)) {
                out += " - ";
                print_child(r->b, out, 2);
            } else if (r->kind == NodeKind::constant && r->value < 0) {
                out += " - ";
                out += format_number(-r->value);
            } else {
                out += " + ";
                print_child(r, out, 2);
            }
            return;
        }
        case NodeKind::mul:
            if (is_const(n->a, -1.0)) {
                out += '-';
                print_child(n->b, out, 2);
                return;
            }
            print_child(n->a, out, 2);
            out += " * ";
            print_child(n->b, out, 3);
            return;
        case NodeKind::div:
            print_child(n->a, out, 2);
            out += " / ";
            print_child(n->b, out, 3);
            return;
        case NodeKind::pow_int:
            print_child(n->a, out, 4);
            out += '^';
            out += std::to_string(n->ipow);
            return;
        case NodeKind::pow_real:
            print_child(n->a, out, 4);
            out += '^';
            if (n->rpow < 0) {
                out += '-';
                out += format_number(-n->rpow);
            } else {
                out += format_number(n->rpow);
            }
            return;
        case NodeKind::fun:
            if (n->fun == FunKind::ln1p_) {
                out += "ln(1 + ";
                print_node(n->a, out, 0);
                out += ')';
            } else {
                out += fun_name(n->fun);
                out += '(';
                print_node(n->a, out, 0);
                out += ')';
            }
            return;
    }
}

}  // namespace detail

inline std::string print_nonlin(const NonlinExpr& e) {
    std::string out;
    if (!e.empty()) detail::print_node(e.root(), out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// evaluation

namespace detail {

inline double ipow_eval(double x, long long n) {
    // exact for small integer exponents on exact inputs
    bool neg = n < 0;
    unsigned long long k = neg ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
    double r = 1.0, base = x;
    while (k) {
        if (k & 1ull) r *= base;
        base *= base;
        k >>= 1;
    }
    return neg ? 1.0 / r : r;
}

inline double eval_node(const NodePtr& n, double w) {
    switch (n->kind) {
        case NodeKind::constant: return n->value;
        case NodeKind::variable: return w;
        case NodeKind::add: return eval_node(n->a, w) + eval_node(n->b, w);
        case NodeKind::mul: return eval_node(n->a, w) * eval_node(n->b, w);
        case NodeKind::div: {
            double num = eval_node(n->a, w);
            double den = eval_node(n->b, w);
            if (den == 0.0) {
                std::string txt;
                print_node(n, txt, 0);
                throw DomainError(txt, w, num == 0.0 ? "0/0 quotient" : "division by zero",
                                  num == 0.0);
            }
            return num / den;
        }
        case NodeKind::pow_int: {
            double base = eval_node(n->a, w);
            if (base == 0.0 && n->ipow < 0) {
                std::string txt;
                print_node(n, txt, 0);
                throw DomainError(txt, w, "zero base with negative exponent");
            }
            return ipow_eval(base, n->ipow);
        }
        case NodeKind::pow_real: {
            double base = eval_node(n->a, w);
            if (base < 0.0) {
                std::string txt;
                print_node(n, txt, 0);
                throw DomainError(txt, w, "negative base of real power");
            }
            if (base == 0.0) {
                if (n->rpow > 0.0) return 0.0;
                if (n->rpow == 0.0) return 1.0;
                std::string txt;
                print_node(n, txt, 0);
                throw DomainError(txt, w, "zero base with negative exponent");
            }
            return std::pow(base, n->rpow);
        }
        case NodeKind::fun: {
            double x = eval_node(n->a, w);
            auto fail = [&](const char* why) -> double {
                std::string txt;
                print_node(n, txt, 0);
                throw DomainError(txt, w, why);
            };
            switch (n->fun) {
                case FunKind::sin_: return std::sin(x);
                case FunKind::cos_: return std::cos(x);
                case FunKind::tan_: return std::tan(x);
                case FunKind::cot_: {
                    double s = std::sin(x);
                    if (s == 0.0) return fail("cot at a zero of sin");
                    return std::cos(x) / s;
                }
                case FunKind::sinh_: return std::sinh(x);
                case FunKind::cosh_: return std::cosh(x);
                case FunKind::tanh_: return std::tanh(x);
                case FunKind::coth_:
                    if (x == 0.0) return fail("coth at 0");
                    return 1.0 / std::tanh(x);
                case FunKind::asin_:
                    if (std::fabs(x) > 1.0) return fail("arcsin argument outside [-1,1]");
                    return std::asin(x);
                case FunKind::acos_:
                    if (std::fabs(x) > 1.0) return fail("arccos argument outside [-1,1]");
                    return std::acos(x);
                case FunKind::atan_: return std::atan(x);
                case FunKind::acot_: return 1.5707963267948966 - std::atan(x);
                case FunKind::asinh_: return std::asinh(x);
                case FunKind::acosh_:
                    if (x < 1.0) return fail("arccosh argument below 1");
                    return std::acosh(x);
                case FunKind::atanh_:
                    if (std::fabs(x) >= 1.0) return fail("arctanh argument outside (-1,1)");
                    return std::atanh(x);
                case FunKind::acoth_:
                    if (std::fabs(x) <= 1.0) return fail("arccoth argument inside [-1,1]");
                    return std::atanh(1.0 / x);
                case FunKind::ln1p_:
                    if (x <= -1.0) return fail("ln(1+x) argument at or below -1");
                    return std::log1p(x);
                case FunKind::exp_: return std::exp(x);
            }
            return fail("unreachable");
        }
    }
    throw std::logic_error("corrupt expression node");
}

}  // namespace detail

/// Evaluate N(w).  Throws DomainError outside the composite domain; a 0/0
/// quotient is reported with removable_candidate set (see evaluate_lim in
/// series.hpp for the limit-taking variant).
inline double eval_nonlin(const NonlinExpr& e, double w) {
    if (e.empty()) throw std::invalid_argument("empty expression");
    return detail::eval_node(e.root(), w);
}

// ---------------------------------------------------------------------------
// folding constructors (used by diff/antiderivative/hierarchy builders)

namespace detail {

inline NonlinExpr from(NodePtr p) { return NonlinExpr(std::move(p)); }

inline NonlinExpr f_add(NonlinExpr x, NonlinExpr y) {
    const NodePtr &a = x.root(), &b = y.root();
    if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
        return NonlinExpr::constant(a->value + b->value);
    if (is_const(a, 0.0)) return y;
    if (is_const(b, 0.0)) return x;
    return NonlinExpr::add(std::move(x), std::move(y));
}

inline NonlinExpr f_mul(NonlinExpr x, NonlinExpr y) {
    const NodePtr &a = x.root(), &b = y.root();
    if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
        return NonlinExpr::constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return NonlinExpr::constant(0.0);
    if (is_const(a, 1.0)) return y;
    if (is_const(b, 1.0)) return x;
    return NonlinExpr::mul(std::move(x), std::move(y));
}

inline NonlinExpr f_div(NonlinExpr x, NonlinExpr y) {
    if (is_const(y.root(), 1.0)) return x;
    if (is_const(x.root(), 0.0)) return NonlinExpr::constant(0.0);
    return NonlinExpr::div(std::move(x), std::move(y));
}

inline NonlinExpr f_pow(NonlinExpr x, long long k) {
    if (k == 0) return NonlinExpr::constant(1.0);
    if (k == 1) return x;
    return NonlinExpr::pow_int(std::move(x), k);
}

inline NonlinExpr f_neg(NonlinExpr x) {
    if (x.root()->kind == NodeKind::constant) return NonlinExpr::constant(-x.root()->value);
    return f_mul(NonlinExpr::constant(-1.0), std::move(x));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// symbolic derivative

namespace detail {

inline NonlinExpr diff_node(const NodePtr& n);

// derivative of the primitive f at inner expression u (chain factor excluded)
inline NonlinExpr fun_derivative(FunKind f, const NonlinExpr& u) {
    using E = NonlinExpr;
    const E one = E::constant(1.0);
    switch (f) {
        case FunKind::sin_: return E::fun(FunKind::cos_, u);
        case FunKind::cos_: return f_neg(E::fun(FunKind::sin_, u));
        case FunKind::tan_:  // 1 + tan^2
            return f_add(one, E::pow_int(E::fun(FunKind::tan_, u), 2));
        case FunKind::cot_:  // -(1 + cot^2)
            return f_neg(f_add(one, E::pow_int(E::fun(FunKind::cot_, u), 2)));
        case FunKind::sinh_: return E::fun(FunKind::cosh_, u);
        case FunKind::cosh_: return E::fun(FunKind::sinh_, u);
        case FunKind::tanh_:  // 1 - tanh^2
            return f_add(one, f_neg(E::pow_int(E::fun(FunKind::tanh_, u), 2)));
        case FunKind::coth_:  // 1 - coth^2
            return f_add(one, f_neg(E::pow_int(E::fun(FunKind::coth_, u), 2)));
        case FunKind::asin_:  // (1 - u^2)^(-1/2)
            return E::pow_real(f_add(one, f_neg(E::pow_int(u, 2))), -0.5);
        case FunKind::acos_:
            return f_neg(E::pow_real(f_add(one, f_neg(E::pow_int(u, 2))), -0.5));
        case FunKind::atan_:  // 1/(1 + u^2)
            return f_div(one, f_add(one, E::pow_int(u, 2)));
        case FunKind::acot_:
            return f_neg(f_div(one, f_add(one, E::pow_int(u, 2))));
        case FunKind::asinh_:  // (1 + u^2)^(-1/2)
            return E::pow_real(f_add(one, E::pow_int(u, 2)), -0.5);
        case FunKind::acosh_:  // (u^2 - 1)^(-1/2)
            return E::pow_real(f_add(E::pow_int(u, 2), E::constant(-1.0)), -0.5);
        case FunKind::atanh_:  // 1/(1 - u^2)
        case FunKind::acoth_:
            return f_div(one, f_add(one, f_neg(E::pow_int(u, 2))));
        case FunKind::ln1p_:  // 1/(1 + u)
            return f_div(one, f_add(one, u));
        case FunKind::exp_: return E::fun(FunKind::exp_, u);
    }
    throw std::logic_error("unknown function kind");
}

inline NonlinExpr diff_node(const NodePtr& n) {
    using E = NonlinExpr;
    switch (n->kind) {
        case NodeKind::constant: return E::constant(0.0);
        case NodeKind::variable: return E::constant(1.0);
        case NodeKind::add: return f_add(diff_node(n->a), diff_node(n->b));
        case NodeKind::mul: {
            E a = from(n->a), b = from(n->b);
            return f_add(f_mul(diff_node(n->a), b), f_mul(a, diff_node(n->b)));
        }
        case NodeKind::div: {
            // (a/b)' = a'/b - a b'/b^2
            E a = from(n->a), b = from(n->b);
            E t1 = f_div(diff_node(n->a), b);
            E t2 = f_div(f_mul(a, diff_node(n->b)), E::pow_int(b, 2));
            return f_add(t1, f_neg(t2));
        }
        case NodeKind::pow_int: {
            E u = from(n->a);
            E base = f_mul(E::constant(static_cast<double>(n->ipow)), f_pow(u, n->ipow - 1));
            return f_mul(base, diff_node(n->a));
        }
        case NodeKind::pow_real: {
            E u = from(n->a);
            E base = f_mul(E::constant(n->rpow), E::pow_real(u, n->rpow - 1.0));
            return f_mul(base, diff_node(n->a));
        }
        case NodeKind::fun: {
            E u = from(n->a);
            return f_mul(fun_derivative(n->fun, u), diff_node(n->a));
        }
    }
    throw std::logic_error("corrupt expression node");
}

}  // namespace detail

/// Symbolic dN/dw; the result is again an expression tree.
inline NonlinExpr diff_nonlin(const NonlinExpr& e) {
    if (e.empty()) throw std::invalid_argument("empty expression");
    return detail::diff_node(e.root());
}

}  // namespace nlgreen

#endif  // NLGREEN_EXPR_HPP

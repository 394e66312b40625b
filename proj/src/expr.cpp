#include "ekwave/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace ekwave {

// ============================================================
// Tree nodes
// ============================================================

struct expression::node {
    enum class op { constant, variable, parameter, add, sub, mul, divide, power, negate };
    op kind;
    double value = 0.0;   // op::constant
    std::string name;     // op::parameter
    node_ptr a, b;
};

namespace {

using node = expression::node;
using node_ptr = expression::node_ptr;
using op = node::op;

node_ptr make_const(double v) {
    auto n = std::make_shared<node>();
    n->kind = op::constant;
    n->value = v;
    return n;
}

node_ptr make_var() {
    auto n = std::make_shared<node>();
    n->kind = op::variable;
    return n;
}

node_ptr make_param(std::string name) {
    auto n = std::make_shared<node>();
    n->kind = op::parameter;
    n->name = std::move(name);
    return n;
}

bool is_const(const node_ptr& n, double v) {
    return n->kind == op::constant && n->value == v;
}

node_ptr make_binary(op kind, node_ptr a, node_ptr b);

node_ptr make_neg(node_ptr a) {
    if (a->kind == op::constant) return make_const(-a->value);
    if (a->kind == op::negate) return a->a;
    auto n = std::make_shared<node>();
    n->kind = op::negate;
    n->a = std::move(a);
    return n;
}

// Light constant folding keeps derivative trees small; no reassociation,
// so evaluation order (and thus floating-point results) is predictable.
node_ptr make_binary(op kind, node_ptr a, node_ptr b) {
    if (a->kind == op::constant && b->kind == op::constant) {
        switch (kind) {
            case op::add: return make_const(a->value + b->value);
            case op::sub: return make_const(a->value - b->value);
            case op::mul: return make_const(a->value * b->value);
            case op::divide: return make_const(a->value / b->value);
            case op::power: return make_const(std::pow(a->value, b->value));
            default: break;
        }
    }
    switch (kind) {
        case op::add:
            if (is_const(a, 0)) return b;
            if (is_const(b, 0)) return a;
            break;
        case op::sub:
            if (is_const(b, 0)) return a;
            if (is_const(a, 0)) return make_neg(b);
            break;
        case op::mul:
            if (is_const(a, 0) || is_const(b, 0)) return make_const(0);
            if (is_const(a, 1)) return b;
            if (is_const(b, 1)) return a;
            break;
        case op::divide:
            if (is_const(a, 0)) return make_const(0);
            if (is_const(b, 1)) return a;
            break;
        case op::power:
            if (is_const(b, 1)) return a;
            if (is_const(b, 0)) return make_const(1);
            break;
        default:
            break;
    }
    auto n = std::make_shared<node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool contains_variable(const node_ptr& n) {
    switch (n->kind) {
        case op::constant:
        case op::parameter:
            return false;
        case op::variable:
            return true;
        case op::negate:
            return contains_variable(n->a);
        default:
            return contains_variable(n->a) || contains_variable(n->b);
    }
}

double eval_node(const node_ptr& n, double v, const param_map& params) {
    switch (n->kind) {
        case op::constant: return n->value;
        case op::variable: return v;
        case op::parameter: {
            auto it = params.find(n->name);
            if (it == params.end())
                throw ek_error("unknown identifier '" + n->name + "'");
            return it->second;
        }
        case op::add: return eval_node(n->a, v, params) + eval_node(n->b, v, params);
        case op::sub: return eval_node(n->a, v, params) - eval_node(n->b, v, params);
        case op::mul: return eval_node(n->a, v, params) * eval_node(n->b, v, params);
        case op::divide: return eval_node(n->a, v, params) / eval_node(n->b, v, params);
        case op::power: return std::pow(eval_node(n->a, v, params), eval_node(n->b, v, params));
        case op::negate: return -eval_node(n->a, v, params);
    }
    return 0.0;  // unreachable
}

node_ptr diff_node(const node_ptr& n) {
    switch (n->kind) {
        case op::constant:
        case op::parameter:
            return make_const(0);
        case op::variable:
            return make_const(1);
        case op::add:
            return make_binary(op::add, diff_node(n->a), diff_node(n->b));
        case op::sub:
            return make_binary(op::sub, diff_node(n->a), diff_node(n->b));
        case op::mul:
            return make_binary(op::add,
                               make_binary(op::mul, diff_node(n->a), n->b),
                               make_binary(op::mul, n->a, diff_node(n->b)));
        case op::divide:
            return make_binary(op::divide,
                               make_binary(op::sub,
                                           make_binary(op::mul, diff_node(n->a), n->b),
                                           make_binary(op::mul, n->a, diff_node(n->b))),
                               make_binary(op::power, n->b, make_const(2)));
        case op::power: {
            if (contains_variable(n->b))
                throw ek_error(
                    "cannot differentiate: exponent depends on v (grammar restricts "
                    "'^' to v-free exponents)");
            // d/dv a^e = e * a^(e-1) * a'
            auto em1 = make_binary(op::sub, n->b, make_const(1));
            return make_binary(op::mul,
                               make_binary(op::mul, n->b, make_binary(op::power, n->a, em1)),
                               diff_node(n->a));
        }
        case op::negate:
            return make_neg(diff_node(n->a));
    }
    return make_const(0);  // unreachable
}

void collect_params_node(const node_ptr& n, std::set<std::string>& out) {
    switch (n->kind) {
        case op::parameter:
            out.insert(n->name);
            return;
        case op::constant:
        case op::variable:
            return;
        case op::negate:
            collect_params_node(n->a, out);
            return;
        default:
            collect_params_node(n->a, out);
            collect_params_node(n->b, out);
    }
}

int precedence(op kind) {
    switch (kind) {
        case op::add:
        case op::sub: return 1;
        case op::mul:
        case op::divide: return 2;
        case op::negate: return 3;
        case op::power: return 4;
        default: return 5;
    }
}

std::string print_node(const node_ptr& n, int parent_prec) {
    auto wrap = [&](const std::string& s, int prec) {
        return prec < parent_prec ? "(" + s + ")" : s;
    };
    switch (n->kind) {
        case op::constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            std::string s(buf);
            return n->value < 0 ? wrap(s, precedence(op::negate)) : s;
        }
        case op::variable: return "v";
        case op::parameter: return n->name;
        case op::add:
            return wrap(print_node(n->a, 1) + " + " + print_node(n->b, 2), 1);
        case op::sub:
            return wrap(print_node(n->a, 1) + " - " + print_node(n->b, 2), 1);
        case op::mul:
            return wrap(print_node(n->a, 2) + "*" + print_node(n->b, 3), 2);
        case op::divide:
            return wrap(print_node(n->a, 2) + "/" + print_node(n->b, 3), 2);
        case op::power:
            return wrap(print_node(n->a, 5) + "^" + print_node(n->b, 4), 4);
        case op::negate:
            return wrap("-" + print_node(n->a, 3), 3);
    }
    return "";  // unreachable
}

// ============================================================
// Recursive-descent parser
// ============================================================

class parser {
public:
    explicit parser(std::string_view src) : src_(src) {}

    node_ptr run() {
        auto e = parse_expression();
        skip_ws();
        if (pos_ != src_.size())
            throw parse_error("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    node_ptr parse_expression() {
        auto lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(op::add, lhs, parse_term());
            else if (accept('-'))
                lhs = make_binary(op::sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    node_ptr parse_term() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(op::mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make_binary(op::divide, lhs, parse_unary());
            else
                return lhs;
        }
    }

    node_ptr parse_unary() {
        if (accept('-')) return make_neg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    node_ptr parse_power() {
        auto base = parse_atom();
        if (accept('^')) return make_binary(op::power, base, parse_unary());
        return base;
    }

    node_ptr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size())
            throw parse_error("expected number, identifier, or '('", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_expression();
            if (!accept(')'))
                throw parse_error("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    node_ptr parse_number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double value = 0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            throw parse_error("malformed number", pos_);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_const(value);
    }

    node_ptr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "v") return make_var();
        return make_param(std::move(name));
    }
};

}  // namespace

// ============================================================
// expression public methods
// ============================================================

expression::expression() : root_(make_const(0)) {}

expression expression::parse(std::string_view src) {
    return expression(parser(src).run());
}

expression expression::constant(double value) {
    return expression(make_const(value));
}

double expression::eval(double v, const param_map& params) const {
    return eval_node(root_, v, params);
}

expression expression::derivative() const {
    return expression(diff_node(root_));
}

std::string expression::to_string() const {
    return print_node(root_, 0);
}

std::set<std::string> expression::referenced_params() const {
    std::set<std::string> out;
    collect_params_node(root_, out);
    return out;
}

}  // namespace ekwave

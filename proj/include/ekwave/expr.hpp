#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "ekwave/errors.hpp"

namespace ekwave {

using param_map = std::map<std::string, double>;

// ============================================================
// Small arithmetic expressions in one variable `v`
// ============================================================
//
// Grammar (whitespace insensitive):
//   expression := term (('+' | '-') term)*
//   term       := unary (('*' | '/') unary)*
//   unary      := ('-' | '+') unary | power
//   power      := atom ('^' unary)?          (right associative)
//   atom       := number | identifier | '(' expression ')'
//
// Identifiers other than `v` are named parameters supplied at evaluation
// time.  Trees are immutable; derivative() differentiates symbolically
// with respect to v.  Exponents that themselves depend on v cannot be
// differentiated by the power rule used here and raise ek_error.
class expression {
public:
    expression();  // the constant 0

    static expression parse(std::string_view src);  // throws parse_error
    static expression constant(double value);

    double eval(double v, const param_map& params = {}) const;
    expression derivative() const;
    std::string to_string() const;

    // Names of every parameter referenced anywhere in the tree.
    std::set<std::string> referenced_params() const;

    struct node;
    using node_ptr = std::shared_ptr<const node>;

private:
    explicit expression(node_ptr n) : root_(std::move(n)) {}
    node_ptr root_;
};

}  // namespace ekwave

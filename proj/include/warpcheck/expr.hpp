#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/jet.hpp"

namespace warpcheck {

/// Exact rational exponent for the power operator.
struct Rational {
    long long num = 0;
    long long den = 1;

    bool is_integer() const { return den == 1; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

namespace ast {

enum class Kind : std::uint8_t {
    Constant,   // numeric literal or bound constant
    Coordinate, // reference to a chart coordinate, resolved to an index
    Symbol,     // free identifier; must be bound before evaluation
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow, // base ^ rational exponent
    Call // unary function application
};

enum class Func : std::uint8_t { Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

struct Node {
    Kind kind;
    double constant = 0.0;
    std::size_t coord_index = 0;
    std::string name; // coordinate or symbol name
    Func func = Func::Sin;
    Rational exponent;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

} // namespace ast

/// Immutable parsed expression over an ordered set of coordinate names.
/// Evaluation is pure; instances are safe to share across threads.
class Expression {
  public:
    Expression() = default;
    Expression(ast::NodePtr root, std::vector<std::string> coords);

    /// Plain value at a point (point.size() == coords().size()).
    double value(std::span<const double> point) const;

    /// Value, gradient, and Hessian at a point, exact to machine precision.
    Jet2 jet2(std::span<const double> point) const;

    /// Substitute named constants, returning a new expression. Symbols left
    /// unbound remain and trigger EvalError if evaluation reaches them.
    Expression bind(const std::map<std::string, double>& constants) const;

    /// Names of symbols that are neither coordinates nor bound constants.
    std::vector<std::string> unbound_symbols() const;

    /// Printed form; reparsing it yields a structurally equal expression.
    std::string str() const;

    const std::vector<std::string>& coords() const { return coords_; }
    const ast::NodePtr& root() const { return root_; }

    /// Re-home the expression onto a larger coordinate list, shifting every
    /// coordinate index by `offset` (used when embedding factor charts into a
    /// product chart).
    Expression remap_coords(std::vector<std::string> new_coords, std::size_t offset) const;

  private:
    ast::NodePtr root_;
    std::vector<std::string> coords_;
};

/// Parse `source` against the declared coordinate names.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' signed_rational)?
///   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
///
/// Identifiers matching a coordinate become coordinate references; in call
/// position they must name a supported function; anything else becomes a free
/// symbol to be bound later.
Expression parse(const std::string& source, const std::vector<std::string>& coords);

bool structurally_equal(const Expression& a, const Expression& b);

/// Helper for tests and chart builders: expression holding a single constant.
Expression constant_expression(double v, const std::vector<std::string>& coords);

/// Product of two expressions over the same coordinate list (used to build
/// warped metric components f*f*h without reparsing).
Expression multiply(const Expression& a, const Expression& b);

inline Jet2 eval_jet2(const Expression& e, std::span<const double> point) {
    return e.jet2(point);
}

} // namespace warpcheck

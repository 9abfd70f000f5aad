#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpcheck {

/// Malformed expression text. `offset` is a byte position into the source.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// Expression cannot be evaluated at a point: division by zero, log of a
/// nonpositive value, fractional power of a nonpositive base, unbound symbol.
/// Carries the offending subexpression in printed form.
class EvalError : public std::runtime_error {
  public:
    EvalError(const std::string& msg, std::string subexpr)
        : std::runtime_error(msg + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}

    const std::string& subexpression() const noexcept { return subexpr_; }

  private:
    std::string subexpr_;
};

/// Geometric precondition failure: singular metric, nonpositive warping
/// function, dimension mismatch, coordinate-name collision.
class GeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration.
class ScenarioError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace warpcheck

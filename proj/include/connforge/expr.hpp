#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace connforge {

/// Parse failure; `position` is the 0-based offset into the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg), position(position) {}
    std::size_t position;
};

/// Evaluation failure (division by zero, non-finite result).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable symbolic scalar expression over chart coordinates x1..xn.
///
/// Supported operations: rational constants, coordinates, + - * /,
/// integer powers, exp, sin, cos. Closed under partial differentiation.
/// Coordinate indices are 0-based in this API; the surface syntax "x1"
/// maps to index 0.
class ScalarExpr {
public:
    ScalarExpr() = default;

    static ScalarExpr constant(double value);
    static ScalarExpr variable(int index, int dimension);

    /// Grammar:
    ///   expr   := ('-')? term (('+'|'-') term)*
    ///   term   := factor (('*'|'/') factor)*
    ///   factor := base ('^' integer)?
    ///   base   := number | 'x'digits | '(' expr ')' | func '(' expr ')'
    ///   func   := exp | sin | cos
    /// Whitespace is insignificant. Throws ParseError on malformed input,
    /// unknown symbols, or coordinates beyond the chart dimension.
    static ScalarExpr parse(std::string_view text, int dimension);

    double eval(std::span<const double> point) const;

    /// Exact symbolic partial derivative with respect to coordinate `index`.
    ScalarExpr diff(int index) const;

    int dimension() const { return dim_; }
    bool is_zero() const;

    /// Round-trippable source form (re-parsing yields the same values).
    std::string to_string() const;

    struct Node;

private:
    ScalarExpr(std::shared_ptr<const Node> root, int dim)
        : root_(std::move(root)), dim_(dim) {}

    std::shared_ptr<const Node> root_;
    int dim_ = 0;
};

} // namespace connforge

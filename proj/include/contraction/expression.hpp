#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace contraction {

/// Parse failure with a 0-based character offset into the source.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Comparison { Lt, Le, Eq, Ge, Gt };
enum class Builtin { Min, Max, Abs };

struct ExprNode;

/// Immutable scalar expression over named variables.
///
/// Grammar (see GRAMMAR.md): real literals, variables, + - * / ^,
/// min/max/abs, and "if <cmp> then <expr> else <expr>" with comparisons
/// < <= = >= >. Operators are left-associative except ^ (right).
/// Branches of a piecewise expression evaluate lazily.
class Expression {
public:
    Expression() = default;

    /// Parses source; any identifier is accepted as a variable name.
    static Expression parse(std::string_view source);

    /// Parses and binds in one step; identifiers outside `variables` raise
    /// ParseError ("unknown identifier").
    static Expression parse(std::string_view source, std::span<const std::string> variables);

    bool valid() const { return root_ != nullptr; }

    /// Free variables in first-appearance order.
    std::vector<std::string> variables() const;

    /// Returns a copy with variable slots resolved against `variables`
    /// (position = evaluation slot). Throws std::invalid_argument on a
    /// variable not in the list.
    Expression bound(std::span<const std::string> variables) const;

    /// Evaluates a bound expression. `env[i]` supplies the value of the
    /// i-th bound variable. Returns NaN-free results or propagates IEEE
    /// specials as computed; callers impose domain contracts.
    double eval(std::span<const double> env) const;

    /// Copy with every occurrence of `name` replaced by the literal value.
    Expression substituted(const std::string& name, double value) const;

    /// Minimal-parenthesis rendering; parse(to_string()) reproduces an
    /// equal AST.
    std::string to_string() const;

    friend bool operator==(const Expression& a, const Expression& b);
    friend bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }

private:
    explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
    std::shared_ptr<const ExprNode> root_;
};

/// Free-function alias of Expression::parse(source).
Expression parse_expression(std::string_view source);

}  // namespace contraction

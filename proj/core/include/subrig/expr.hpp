#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace subrig {

using Coordinates = std::vector<std::string>;

enum class Op : std::uint8_t {
    Constant,
    Variable,
    Negate,
    Add,
    Subtract,
    Multiply,
    Divide,
    Power,
    Call,
};

enum class Function : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Atan };

std::string_view function_name(Function f) noexcept;

/// Immutable scalar expression over a fixed coordinate list.
///
/// Nodes are shared, so copies are cheap and expressions can be evaluated
/// concurrently. Variables are stored as indices into the coordinate list.
class Expression {
public:
    struct Node;

    /// The constant 0 over an empty coordinate list.
    Expression();

    static Expression constant(double value, const Coordinates& coords);
    static Expression variable(std::size_t index, const Coordinates& coords);
    static Expression variable(std::string_view name, const Coordinates& coords);

    Op op() const noexcept;
    double constant_value() const noexcept;
    std::size_t variable_index() const noexcept;
    Function function() const noexcept;
    Expression operand(std::size_t i) const;
    std::size_t operand_count() const noexcept;

    /// True when the subtree references no variables.
    bool is_constant() const noexcept;

    const Coordinates& coordinates() const noexcept { return *coords_; }
    std::size_t dimension() const noexcept { return coords_->size(); }

    /// Same expression over a different (superset or reordered) coordinate list.
    Expression rebind(const Coordinates& coords) const;

    /// Fully parenthesised text; reparsing it yields an identical tree.
    std::string to_string() const;

    /// Structural equality of the trees and of the coordinate lists.
    friend bool operator==(const Expression& a, const Expression& b);

    friend Expression operator-(const Expression& a);
    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    friend Expression operator*(double a, const Expression& b);
    friend Expression operator+(const Expression& a, double b);
    friend Expression pow(const Expression& base, const Expression& exponent);
    friend Expression pow(const Expression& base, double exponent);
    friend Expression call(Function f, const Expression& argument);
    friend Expression parse(std::string_view source, const Coordinates& coords);

    const Node& node() const noexcept { return *node_; }

private:
    Expression(std::shared_ptr<const Node> node, std::shared_ptr<const Coordinates> coords);

    std::shared_ptr<const Node> node_;
    std::shared_ptr<const Coordinates> coords_;
};

struct Expression::Node {
    Op op = Op::Constant;
    Function function = Function::Sin;
    bool constant = true;
    double value = 0.0;
    std::size_t variable = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

/// Parses `source` with variables drawn from `coords`.
///
/// Precedence from tightest: `^` (right associative), unary minus, `*` `/`,
/// `+` `-`. So `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.
/// Throws SyntaxError, UnknownVariable or UnknownFunction.
Expression parse(std::string_view source, const Coordinates& coords);

} // namespace subrig

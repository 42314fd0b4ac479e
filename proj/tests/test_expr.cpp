#include <doctest.h>

#include "subrig/errors.hpp"
#include "subrig/expr.hpp"

using namespace subrig;

namespace {
const Coordinates xyt{"x", "y", "t"};
}

TEST_CASE("precedence and associativity")
{
    CHECK(parse("x*y/2", xyt).to_string() == "((x * y) / 2)");
    CHECK(parse("x^2 + sin(y)", xyt).to_string() == "((x ^ 2) + sin(y))");
    CHECK(parse("-x^2", xyt).to_string() == "(-(x ^ 2))");
    CHECK(parse("2^3^2", xyt).to_string() == "(2 ^ (3 ^ 2))");
    CHECK(parse("x - y - t", xyt).to_string() == "((x - y) - t)");
    CHECK(parse("x / y * t", xyt).to_string() == "((x / y) * t)");
    CHECK(parse("-x*y", xyt) == parse("(-x)*y", xyt));
}

TEST_CASE("node structure")
{
    const Expression e = parse("x^2 + sin(y)", xyt);
    REQUIRE(e.op() == Op::Add);
    CHECK(e.operand(0).op() == Op::Power);
    CHECK(e.operand(1).op() == Op::Call);
    CHECK(e.operand(1).function() == Function::Sin);
    CHECK(e.operand(1).operand(0).variable_index() == 1);
}

TEST_CASE("literals")
{
    CHECK(parse("1.5e-3", xyt).constant_value() == doctest::Approx(1.5e-3));
    CHECK(parse(".25", xyt).constant_value() == 0.25);
    CHECK(parse("1e3*x", xyt).operand(0).constant_value() == 1000.0);
}

TEST_CASE("syntax errors carry byte offsets")
{
    auto offset_of = [](const char* src) -> std::size_t {
        try {
            parse(src, xyt);
        } catch (const SyntaxError& e) {
            return e.offset();
        }
        return 999;
    };
    CHECK(offset_of("x +") == 3);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("(x") == 2);
    CHECK(offset_of("x y") == 2);
    CHECK(offset_of("sin(x") == 5);
}

TEST_CASE("unknown names")
{
    CHECK_THROWS_AS(parse("z + 1", xyt), UnknownVariable);
    CHECK_THROWS_AS(parse("cosh(x)", xyt), UnknownFunction);
    try {
        parse("x * w", xyt);
    } catch (const UnknownVariable& e) {
        CHECK(e.name() == "w");
    }
}

TEST_CASE("round trip is stable")
{
    const char* sources[] = {"x*y/2", "-x^2 + 3", "sqrt(abs(x) + 1) - atan(y/t)", "2^3^2", "--x",
                             "exp(-x^2/2)*cos(t)", "x^-1", "1e-07*y", "log(1 + x^2)^0.5", "-(x - -y)"};
    for (const char* s : sources) {
        const Expression a = parse(s, xyt);
        const Expression b = parse(a.to_string(), xyt);
        CHECK(a == b);
        CHECK(b.to_string() == a.to_string());
    }
}

TEST_CASE("built expressions unparse and reparse")
{
    const Expression x = Expression::variable("x", xyt);
    const Expression y = Expression::variable("y", xyt);
    const Expression e = -0.5 * (x * y) + pow(x, 2.0);
    CHECK(parse(e.to_string(), xyt) == e);
    CHECK_FALSE(e.is_constant());
    CHECK(Expression::constant(2.0, xyt).is_constant());
}

TEST_CASE("rebind maps variables by name")
{
    const Expression e = parse("x + t", xyt);
    const Expression r = e.rebind({"t", "x", "lambda"});
    CHECK(r.operand(0).variable_index() == 1);
    CHECK(r.operand(1).variable_index() == 0);
    CHECK_THROWS_AS(e.rebind({"x", "y"}), UnknownVariable);
}

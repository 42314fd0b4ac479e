#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "subrig/catalog.hpp"
#include "subrig/errors.hpp"
#include "subrig/jet.hpp"

using namespace subrig;

TEST_CASE("square")
{
    const Jet2 j = eval_jet2(parse("x^2", {"x"}), Eigen::VectorXd::Constant(1, 3.0));
    CHECK(j.value == 9.0);
    CHECK(j.gradient[0] == 6.0);
    CHECK(j.hessian(0, 0) == 2.0);
}

TEST_CASE("product over quotient")
{
    const Jet2 j = eval_jet2(parse("x*y/2", {"x", "y"}), Eigen::Vector2d(1, 2));
    CHECK(j.value == 1.0);
    CHECK(j.gradient[0] == 1.0);
    CHECK(j.gradient[1] == 0.5);
    CHECK(j.hessian(0, 0) == 0.0);
    CHECK(j.hessian(0, 1) == 0.5);
    CHECK(j.hessian(1, 0) == 0.5);
    CHECK(j.hessian(1, 1) == 0.0);
}

TEST_CASE("domain errors name the subexpression")
{
    const Coordinates c{"x"};
    const Eigen::VectorXd neg = Eigen::VectorXd::Constant(1, -1.0);
    try {
        eval_jet2(parse("1 + sqrt(x)", c), neg);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.subexpression() == "sqrt(x)");
    }
    CHECK_THROWS_AS(eval_jet2(parse("log(x)", c), neg), DomainError);
    CHECK_THROWS_AS(eval_jet2(parse("x^0.5", c), neg), DomainError);
    CHECK_THROWS_AS(evaluate(parse("1/(x+1)", c), neg), DomainError);
    CHECK_THROWS_AS(eval_jet2(parse("x^-2", c), Eigen::VectorXd::Zero(1)), DomainError);
    CHECK_NOTHROW(eval_jet2(parse("x^3", c), neg));
    CHECK(eval_jet2(parse("x^3", c), neg).value == -1.0);
}

TEST_CASE("dimension mismatch")
{
    CHECK_THROWS_AS(eval_jet2(parse("x", {"x", "y"}), Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("every function agrees with finite differences")
{
    const Coordinates c{"x", "y", "t"};
    const char* sources[] = {"sin(x*y) + cos(t)", "tan(x/3)", "exp(x - y^2)", "log(2 + x^2 + t)",
                             "sqrt(5 + x*y)", "abs(x - 7)", "atan(x*y*t)", "x^2.5 + y^-3",
                             "(1 + x^2)^(1 + y^2)", "x*y/(1 + t^2)"};
    std::mt19937_64 rng(7);
    for (const char* s : sources) {
        const Expression e = parse(s, c);
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd p = oracle::random_point(rng, 3, 0.3, 1.7);
            const Jet2 j = eval_jet2(e, p);
            CHECK(j.value == doctest::Approx(evaluate(e, p)).epsilon(1e-15));
            CHECK(oracle::relative_error(j.gradient, oracle::fd_gradient(oracle::scalar(e), p)) < 1e-6);
            CHECK(oracle::relative_error(j.hessian, oracle::fd_hessian(oracle::scalar(e), p)) < 1e-6);
            CHECK(j.hessian == j.hessian.transpose());
            const Jet1 j1 = eval_jet1(e, p);
            CHECK((j1.gradient - j.gradient).norm() < 1e-12);
        }
    }
}

TEST_CASE("linearity")
{
    const Coordinates c{"x", "y"};
    const Expression e1 = parse("sin(x)*y^3", c);
    const Expression e2 = parse("exp(x/2) - y", c);
    const Expression combo = 2.5 * e1 + e2;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXd p = oracle::random_point(rng, 2, -2, 2);
        const Jet2 a = eval_jet2(e1, p);
        const Jet2 b = eval_jet2(e2, p);
        const Jet2 s = eval_jet2(combo, p);
        CHECK(std::abs(s.value - (2.5 * a.value + b.value)) < 1e-12);
        CHECK((s.gradient - (2.5 * a.gradient + b.gradient)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.hessian - (2.5 * a.hessian + b.hessian)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("catalog coefficients agree with finite differences")
{
    std::vector<VRStructure> structures{heisenberg(1), heisenberg(2), heisenberg_times_r(),
                                        martinet("0", "x^2", 1), martinet("sin(y)", "x*exp(y)"),
                                        carnot(engel_algebra(), "engel")};
    std::mt19937_64 rng(3);
    for (const auto& s : structures) {
        for (std::size_t a = 0; a < s.dim(); ++a) {
            for (const auto& e : s.field(a).coefficients) {
                for (int i = 0; i < 5; ++i) {
                    const Eigen::VectorXd p = oracle::random_point(rng, static_cast<Eigen::Index>(s.dim()), -2, 2);
                    const Jet2 j = eval_jet2(e, p);
                    CHECK(oracle::relative_error(j.gradient, oracle::fd_gradient(oracle::scalar(e), p)) < 1e-6);
                    CHECK(oracle::relative_error(j.hessian, oracle::fd_hessian(oracle::scalar(e), p)) < 1e-6);
                }
            }
        }
    }
}

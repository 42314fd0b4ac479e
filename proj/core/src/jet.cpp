#include "subrig/jet.hpp"

#include <cmath>
#include <string>

#include "subrig/errors.hpp"

namespace subrig {

namespace {

using Node = Expression::Node;

std::string describe(const Node& n, const Coordinates& coords)
{
    // Rebuild a throwaway Expression to reuse the unparser.
    struct Walker {
        const Coordinates& coords;
        Expression operator()(const Node& m) const
        {
            switch (m.op) {
            case Op::Constant: return Expression::constant(m.value, coords);
            case Op::Variable: return Expression::variable(m.variable, coords);
            case Op::Negate: return -(*this)(*m.lhs);
            case Op::Call: return call(m.function, (*this)(*m.lhs));
            case Op::Add: return (*this)(*m.lhs) + (*this)(*m.rhs);
            case Op::Subtract: return (*this)(*m.lhs) - (*this)(*m.rhs);
            case Op::Multiply: return (*this)(*m.lhs) * (*this)(*m.rhs);
            case Op::Divide: return (*this)(*m.lhs) / (*this)(*m.rhs);
            case Op::Power: return pow((*this)(*m.lhs), (*this)(*m.rhs));
            }
            return Expression::constant(0.0, coords);
        }
    };
    return Walker{coords}(n).to_string();
}

// Arithmetic policies. Each provides the same operation set so a single
// tree walker serves plain values and both jet orders.

struct ValueOps {
    using T = double;
    static T constant(double v, Eigen::Index) { return v; }
    static T variable(Eigen::Index, double v, Eigen::Index) { return v; }
    static double value(const T& a) { return a; }
    static T neg(const T& a) { return -a; }
    static T add(const T& a, const T& b) { return a + b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T div(const T& a, const T& b) { return a / b; }
    static T chain(const T&, double f, double, double) { return f; }
    static constexpr bool needs_derivatives = false;
};

struct Jet1Ops {
    using T = Jet1;
    static T constant(double v, Eigen::Index n) { return {v, Eigen::VectorXd::Zero(n)}; }
    static T variable(Eigen::Index i, double v, Eigen::Index n)
    {
        T t{v, Eigen::VectorXd::Zero(n)};
        t.gradient[i] = 1.0;
        return t;
    }
    static double value(const T& a) { return a.value; }
    static T neg(const T& a) { return {-a.value, -a.gradient}; }
    static T add(const T& a, const T& b) { return {a.value + b.value, a.gradient + b.gradient}; }
    static T sub(const T& a, const T& b) { return {a.value - b.value, a.gradient - b.gradient}; }
    static T mul(const T& a, const T& b)
    {
        return {a.value * b.value, a.value * b.gradient + b.value * a.gradient};
    }
    static T div(const T& a, const T& b)
    {
        const double q = a.value / b.value;
        return {q, (a.gradient - q * b.gradient) / b.value};
    }
    static T chain(const T& u, double f, double df, double) { return {f, df * u.gradient}; }
    static constexpr bool needs_derivatives = true;
};

struct Jet2Ops {
    using T = Jet2;
    static T constant(double v, Eigen::Index n)
    {
        return {v, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    }
    static T variable(Eigen::Index i, double v, Eigen::Index n)
    {
        T t = constant(v, n);
        t.gradient[i] = 1.0;
        return t;
    }
    static double value(const T& a) { return a.value; }
    static T neg(const T& a) { return {-a.value, -a.gradient, -a.hessian}; }
    static T add(const T& a, const T& b)
    {
        return {a.value + b.value, a.gradient + b.gradient, a.hessian + b.hessian};
    }
    static T sub(const T& a, const T& b)
    {
        return {a.value - b.value, a.gradient - b.gradient, a.hessian - b.hessian};
    }
    static T mul(const T& a, const T& b)
    {
        Eigen::MatrixXd cross = a.gradient * b.gradient.transpose();
        return {a.value * b.value, a.value * b.gradient + b.value * a.gradient,
                a.value * b.hessian + b.value * a.hessian + cross + cross.transpose()};
    }
    // a = q b  =>  q'' = (a'' - q b'' - q' b'^T - b' q'^T) / b
    static T div(const T& a, const T& b)
    {
        const double q = a.value / b.value;
        Eigen::VectorXd g = (a.gradient - q * b.gradient) / b.value;
        Eigen::MatrixXd cross = g * b.gradient.transpose();
        Eigen::MatrixXd h = (a.hessian - q * b.hessian - cross - cross.transpose()) / b.value;
        return {q, std::move(g), std::move(h)};
    }
    static T chain(const T& u, double f, double df, double d2f)
    {
        return {f, df * u.gradient, df * u.hessian + d2f * (u.gradient * u.gradient.transpose())};
    }
    static constexpr bool needs_derivatives = true;
};

template <class Ops>
class Evaluator {
public:
    using T = typename Ops::T;

    Evaluator(const Coordinates& coords, const Eigen::Ref<const Eigen::VectorXd>& p)
        : coords_(coords), p_(p), n_(p.size())
    {
    }

    T eval(const Node& n) const
    {
        T r = eval_unchecked(n);
        if (!std::isfinite(Ops::value(r))) {
            fail(n, "non-finite value");
        }
        return r;
    }

private:
    [[noreturn]] void fail(const Node& n, const char* what) const
    {
        throw DomainError(what, describe(n, coords_));
    }

    T eval_unchecked(const Node& n) const
    {
        switch (n.op) {
        case Op::Constant:
            return Ops::constant(n.value, n_);
        case Op::Variable:
            return Ops::variable(static_cast<Eigen::Index>(n.variable), p_[static_cast<Eigen::Index>(n.variable)], n_);
        case Op::Negate:
            return Ops::neg(eval(*n.lhs));
        case Op::Add:
            return Ops::add(eval(*n.lhs), eval(*n.rhs));
        case Op::Subtract:
            return Ops::sub(eval(*n.lhs), eval(*n.rhs));
        case Op::Multiply:
            return Ops::mul(eval(*n.lhs), eval(*n.rhs));
        case Op::Divide: {
            T b = eval(*n.rhs);
            if (Ops::value(b) == 0.0) {
                fail(n, "division by zero");
            }
            return Ops::div(eval(*n.lhs), b);
        }
        case Op::Power:
            return power(n);
        case Op::Call:
            return function(n);
        }
        fail(n, "corrupt expression node");
    }

    T power(const Node& n) const
    {
        T base = eval(*n.lhs);
        const double b = Ops::value(base);
        if (n.rhs->constant) {
            const double c = Evaluator<ValueOps>(coords_, p_).eval(*n.rhs);
            if (c == std::round(c) && std::abs(c) <= 1024.0) {
                return integer_power(n, base, static_cast<long>(c));
            }
            if (!(b > 0.0)) {
                fail(n, "non-integer power of a nonpositive base");
            }
            const double f = std::pow(b, c);
            return Ops::chain(base, f, c * f / b, c * (c - 1.0) * f / (b * b));
        }
        if (!(b > 0.0)) {
            fail(n, "variable exponent requires a positive base");
        }
        // u^v = exp(v log u)
        T logu = Ops::chain(base, std::log(b), 1.0 / b, -1.0 / (b * b));
        T prod = Ops::mul(eval(*n.rhs), logu);
        const double e = std::exp(Ops::value(prod));
        return Ops::chain(prod, e, e, e);
    }

    T integer_power(const Node& n, const T& base, long k) const
    {
        if (k == 0) {
            return Ops::constant(1.0, n_);
        }
        const bool invert = k < 0;
        unsigned long m = static_cast<unsigned long>(invert ? -k : k);
        T result = base;
        T square = base;
        bool first = true;
        while (m > 0) {
            if (m & 1UL) {
                result = first ? square : Ops::mul(result, square);
                first = false;
            }
            m >>= 1U;
            if (m > 0) {
                square = Ops::mul(square, square);
            }
        }
        if (invert) {
            if (Ops::value(result) == 0.0) {
                fail(n, "negative power of zero");
            }
            return Ops::div(Ops::constant(1.0, n_), result);
        }
        return result;
    }

    T function(const Node& n) const
    {
        T u = eval(*n.lhs);
        const double x = Ops::value(u);
        switch (n.function) {
        case Function::Sin:
            return Ops::chain(u, std::sin(x), std::cos(x), -std::sin(x));
        case Function::Cos:
            return Ops::chain(u, std::cos(x), -std::sin(x), -std::cos(x));
        case Function::Tan: {
            const double t = std::tan(x);
            const double sec2 = 1.0 + t * t;
            return Ops::chain(u, t, sec2, 2.0 * t * sec2);
        }
        case Function::Exp: {
            const double e = std::exp(x);
            return Ops::chain(u, e, e, e);
        }
        case Function::Log:
            if (!(x > 0.0)) {
                fail(n, "log of a nonpositive value");
            }
            return Ops::chain(u, std::log(x), 1.0 / x, -1.0 / (x * x));
        case Function::Sqrt: {
            if (x < 0.0) {
                fail(n, "sqrt of a negative value");
            }
            const double s = std::sqrt(x);
            if (!Ops::needs_derivatives) {
                return Ops::chain(u, s, 0.0, 0.0);
            }
            if (s == 0.0) {
                fail(n, "sqrt is not differentiable at 0");
            }
            return Ops::chain(u, s, 0.5 / s, -0.25 / (s * x));
        }
        case Function::Abs: {
            const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            return Ops::chain(u, std::abs(x), sign, 0.0);
        }
        case Function::Atan: {
            const double d = 1.0 / (1.0 + x * x);
            return Ops::chain(u, std::atan(x), d, -2.0 * x * d * d);
        }
        }
        fail(n, "corrupt function node");
    }

    const Coordinates& coords_;
    const Eigen::Ref<const Eigen::VectorXd>& p_;
    Eigen::Index n_;
};

void check_dimension(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p)
{
    if (e.dimension() != 0 && static_cast<std::size_t>(p.size()) != e.dimension()) {
        throw Error("point has dimension " + std::to_string(p.size()) + " but expression expects " +
                    std::to_string(e.dimension()));
    }
}

} // namespace

double evaluate(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p)
{
    check_dimension(e, p);
    return Evaluator<ValueOps>(e.coordinates(), p).eval(e.node());
}

Jet1 eval_jet1(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p)
{
    check_dimension(e, p);
    return Evaluator<Jet1Ops>(e.coordinates(), p).eval(e.node());
}

Jet2 eval_jet2(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p)
{
    check_dimension(e, p);
    Jet2 j = Evaluator<Jet2Ops>(e.coordinates(), p).eval(e.node());
    Eigen::MatrixXd sym = j.hessian + j.hessian.transpose();
    j.hessian = 0.5 * sym;
    return j;
}

} // namespace subrig

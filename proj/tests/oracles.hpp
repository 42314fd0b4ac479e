#pragma once

// Independent reference computations used by the tests.

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "subrig/expr.hpp"
#include "subrig/jet.hpp"

namespace oracle {

using Scalar = std::function<double(const Eigen::VectorXd&)>;

inline Scalar scalar(const subrig::Expression& e)
{
    return [e](const Eigen::VectorXd& p) { return subrig::evaluate(e, p); };
}

inline Eigen::VectorXd fd_gradient(const Scalar& f, const Eigen::VectorXd& p, double h = 1e-5)
{
    Eigen::VectorXd g(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        Eigen::VectorXd a = p, b = p;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

inline Eigen::MatrixXd fd_hessian_plain(const Scalar& f, const Eigen::VectorXd& p, double h)
{
    const Eigen::Index n = p.size();
    Eigen::MatrixXd H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            auto at = [&](double si, double sj) {
                Eigen::VectorXd q = p;
                q[i] += si * h;
                q[j] += sj * h;
                return f(q);
            };
            H(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
        }
    }
    return H;
}

/// Central-difference Hessian, Richardson-extrapolated from steps h and h/2.
inline Eigen::MatrixXd fd_hessian(const Scalar& f, const Eigen::VectorXd& p, double h = 1e-3)
{
    return (4.0 * fd_hessian_plain(f, p, 0.5 * h) - fd_hessian_plain(f, p, h)) / 3.0;
}

/// max_i |a_i - b_i| / (1 + |b_i|)
inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return ((a - b).cwiseAbs().array() / (1.0 + b.cwiseAbs().array())).maxCoeff();
}

inline Eigen::VectorXd random_point(std::mt19937_64& rng, Eigen::Index n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd p(n);
    for (auto& x : p) {
        x = u(rng);
    }
    return p;
}

} // namespace oracle

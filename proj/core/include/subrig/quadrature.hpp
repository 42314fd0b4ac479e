#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace subrig {

/// Nodes and weights of a quadrature rule.
struct QuadratureRule {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
};

using Box = std::vector<std::pair<double, double>>;

/// Gauss-Legendre rule of the given order on [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

/// Tensor-product Gauss-Legendre rule over a box.
QuadratureRule tensor_gauss_legendre(int order, const Box& box);

} // namespace subrig

#include "subrig/quadrature.hpp"

#include <memory>

#include <gsl/gsl_integration.h>

#include "subrig/errors.hpp"

namespace subrig {

QuadratureRule gauss_legendre(int order, double a, double b)
{
    if (order < 1) {
        throw ConfigError("quadrature order must be positive");
    }
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)), &gsl_integration_glfixed_table_free);
    if (!table) {
        throw Error("could not allocate a Gauss-Legendre table of order " + std::to_string(order));
    }
    QuadratureRule rule;
    for (std::size_t i = 0; i < static_cast<std::size_t>(order); ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(a, b, i, &x, &w, table.get());
        rule.nodes.push_back(Eigen::VectorXd::Constant(1, x));
        rule.weights.push_back(w);
    }
    return rule;
}

QuadratureRule tensor_gauss_legendre(int order, const Box& box)
{
    QuadratureRule rule;
    rule.nodes.push_back(Eigen::VectorXd(0));
    rule.weights.push_back(1.0);
    for (const auto& [lo, hi] : box) {
        const QuadratureRule axis = gauss_legendre(order, lo, hi);
        QuadratureRule next;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            for (std::size_t j = 0; j < axis.nodes.size(); ++j) {
                Eigen::VectorXd node(rule.nodes[i].size() + 1);
                node << rule.nodes[i], axis.nodes[j][0];
                next.nodes.push_back(std::move(node));
                next.weights.push_back(rule.weights[i] * axis.weights[j]);
            }
        }
        rule = std::move(next);
    }
    return rule;
}

} // namespace subrig

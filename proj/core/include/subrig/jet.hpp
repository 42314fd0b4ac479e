#pragma once

#include <Eigen/Core>

#include "subrig/expr.hpp"

namespace subrig {

using Point = Eigen::VectorXd;

/// Value and gradient of a scalar at a point.
struct Jet1 {
    double value = 0.0;
    Eigen::VectorXd gradient;
};

/// Value, gradient and Hessian of a scalar at a point.
///
/// The Hessian is symmetrised on construction, so it is bit-exactly symmetric.
struct Jet2 {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

/// Plain evaluation. Throws DomainError outside the domain of a function.
double evaluate(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p);

/// First-order forward-mode evaluation.
Jet1 eval_jet1(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p);

/// Second-order forward-mode evaluation.
///
/// Integer constant exponents are expanded by repeated multiplication; any
/// other exponent requires a positive base.
Jet2 eval_jet2(const Expression& e, const Eigen::Ref<const Eigen::VectorXd>& p);

} // namespace subrig

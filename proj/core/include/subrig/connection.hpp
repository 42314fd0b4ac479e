#pragma once

#include <vector>

#include <Eigen/Core>

#include "subrig/structure.hpp"

namespace subrig {

/// Dense n x n x n array indexed (a, b, c).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * n_ + b) * n_ + c]; }
    double operator()(std::size_t a, std::size_t b, std::size_t c) const { return data_[(a * n_ + b) * n_ + c]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// c_{ab}^c: frame components of [F_a, F_b] at p.
Tensor3 structure_coefficients(const VRStructure& s, const Point& p);

/// Levi-Civita coefficients <nabla_{F_a} F_b, F_c> in the orthonormal frame.
Tensor3 levi_civita(const VRStructure& s, const Point& p);
Tensor3 levi_civita(const Tensor3& structure);

/// Adapted connection coefficients Gamma_{ab}^c over the full frame.
struct ConnectionCoefficients {
    Point point;
    std::size_t horizontal_rank = 0;
    Tensor3 gammas;

    double operator()(std::size_t a, std::size_t b, std::size_t c) const { return gammas(a, b, c); }
};

/// Horizontal part of the Levi-Civita derivative for horizontal b, zero for
/// vertical b (vertical frame fields are parallel).
ConnectionCoefficients adapted_connection(const VRStructure& s, const Point& p);
ConnectionCoefficients adapted_connection(const VRStructure& s, const Point& p, const Tensor3& structure);

/// <nabla_{X_a} X_b, X_c> for horizontal a, b, c from the coordinate Koszul
/// formula with constant inner products:
/// 1/2 (<[X,Y], Z> + <[Z,X], Y> + <[Z,Y], X>), using coordinate brackets
/// and the coordinate metric (M^T M)^-1.
double horizontal_koszul(const VRStructure& s, const Point& p, std::size_t a, std::size_t b, std::size_t c);

/// Horizontal components of a section and their coordinate gradients.
struct SectionJet {
    Eigen::VectorXd values;   // W^b, length k+1
    Eigen::MatrixXd gradient; // gradient(b, m) = d_m W^b
};

/// Horizontal components of nabla_{F_a} W:
/// F_a(W^c) + sum_b W^b Gamma_{ab}^c.
Eigen::VectorXd covariant_derivative_of_section(const ConnectionCoefficients& gamma, const FrameMatrix& frame,
                                                const SectionJet& w, std::size_t a);

Eigen::VectorXd covariant_derivative_of_section(const VRStructure& s, const std::vector<Expression>& components,
                                                std::size_t a, const Point& p);

/// Frame components of Tor(F_a, F_b) = nabla_a F_b - nabla_b F_a - [F_a, F_b].
Eigen::VectorXd torsion(const VRStructure& s, std::size_t a, std::size_t b, const Point& p);
Eigen::VectorXd torsion(const ConnectionCoefficients& gamma, const Tensor3& structure, std::size_t a, std::size_t b);

} // namespace subrig

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "subrig/expr.hpp"
#include "subrig/jet.hpp"

namespace subrig {

/// A vector field given by its components in the coordinate basis.
struct VectorFieldSpec {
    std::vector<Expression> coefficients;
};

/// Structure constants of a graded nilpotent Lie algebra.
///
/// Basis vectors are ordered layer by layer; `grading[j]` is the dimension of
/// layer j. Layer 0 is the horizontal layer.
struct CarnotData {
    std::vector<int> grading;
    std::vector<double> constants; // c_{ab}^c stored at (a*n + b)*n + c

    CarnotData() = default;
    explicit CarnotData(std::vector<int> layer_dims);

    std::size_t dimension() const noexcept;
    int step() const noexcept { return static_cast<int>(grading.size()) - 1; }
    int layer(std::size_t basis) const;

    double c(std::size_t a, std::size_t b, std::size_t c) const;
    /// Sets c_{ab}^c and the antisymmetric partner c_{ba}^c.
    void set_bracket(std::size_t a, std::size_t b, std::size_t c, double value);
};

/// Checks antisymmetry, grading compatibility and the Jacobi identity.
/// Throws InvalidCarnotData.
void validate_carnot(const CarnotData& data, double tol = 1e-12);

/// A dilating flow: vertical weights and the dilation map delta_lambda.
///
/// `map` expressions range over the structure coordinates followed by
/// `lambda`.
struct DilatingFlow {
    std::vector<double> gammas;
    std::vector<Expression> map;
    Point origin;
};

/// A vertically rigid sub-Riemannian structure.
///
/// The metric is the one making the declared frame (horizontal fields then
/// vertical fields) orthonormal.
struct VRStructure {
    std::string name;
    Coordinates coords;
    std::vector<VectorFieldSpec> horizontal;
    std::vector<VectorFieldSpec> vertical;
    std::vector<int> partition; // class label of each vertical field
    std::optional<CarnotData> carnot;
    std::optional<DilatingFlow> flow;

    std::size_t dim() const noexcept { return coords.size(); }
    std::size_t horizontal_rank() const noexcept { return horizontal.size(); }
    std::size_t vertical_rank() const noexcept { return vertical.size(); }
    bool is_horizontal(std::size_t a) const noexcept { return a < horizontal.size(); }

    /// Frame field by full-frame index (horizontal first).
    const VectorFieldSpec& field(std::size_t a) const;
};

/// Validates shape, partition and frame invertibility at `samples`.
/// Throws ConfigError, PartitionError or FrameDegenerate.
void validate_structure(const VRStructure& s, std::span<const Point> samples);

struct FrameMatrix {
    Eigen::MatrixXd matrix;  // row a holds the coordinate components of F_a
    Eigen::MatrixXd inverse;
    double determinant = 0.0;

    /// Frame components of a coordinate vector.
    Eigen::VectorXd components(const Eigen::VectorXd& v) const { return inverse.transpose() * v; }
    /// Coordinate vector with the given frame components.
    Eigen::VectorXd vector(const Eigen::VectorXd& w) const { return matrix.transpose() * w; }
};

inline constexpr double kFrameDeterminantFloor = 1e-12;

/// Throws FrameDegenerate when |det| < 1e-12.
FrameMatrix frame_matrix(const VRStructure& s, const Point& p);

/// Frame coefficients and their first derivatives at a point.
struct FrameJets {
    Eigen::MatrixXd values;                 // values(a, m) = F_a^m
    std::vector<Eigen::MatrixXd> jacobians; // jacobians[a](m, l) = d_l F_a^m
};

FrameJets frame_jets(const VRStructure& s, const Point& p);

/// [a, b]^c = sum_m a^m d_m b^c - b^m d_m a^c, in coordinates.
Eigen::VectorXd lie_bracket(const VectorFieldSpec& a, const VectorFieldSpec& b, const Point& p);

struct RigidityReport {
    double max_residual = 0.0;
    Point worst_point;
    std::size_t worst_horizontal = 0;
    std::size_t worst_j = 0;
    std::size_t worst_i = 0;
    std::size_t samples = 0;
    bool pass = false;
};

/// Max over horizontal frame fields X, vertical pairs j ~ i and samples of
/// |g([X, T_j], T_i)|; pass iff that maximum is below `tol`.
RigidityReport check_vertical_rigidity(const VRStructure& s, std::span<const Point> samples, double tol);

/// Uniform samples in [lo, hi]^dim from a seeded generator.
std::vector<Point> sample_box(std::size_t dim, std::size_t count, double lo, double hi, std::uint64_t seed);

} // namespace subrig

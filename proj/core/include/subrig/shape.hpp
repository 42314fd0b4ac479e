#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "subrig/hypersurface.hpp"
#include "subrig/structure.hpp"

namespace subrig {

enum class Classification {
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    MixedSign,
    Flat,
    Indeterminate,
};

std::string_view to_string(Classification c) noexcept;

/// Which formula supplies the horizontal connection coefficients.
enum class ConnectionRoute {
    ProjectedLeviCivita, // horizontal projection of the orthonormal-frame Levi-Civita connection
    HorizontalKoszul,    // coordinate Koszul formula restricted to V0
};

struct ShapeOptions {
    ConnectionRoute route = ConnectionRoute::ProjectedLeviCivita;
    double tol = 1e-7;
    /// Columns e_1..e_k in horizontal components; defaults to complement_frame(nu).
    std::optional<Eigen::MatrixXd> tangent_frame;
    /// Multiplies the level-set extension of nu by this scalar field.
    std::optional<Expression> extension_factor;
};

struct HorizontalShape {
    Point point;
    Eigen::VectorXd nu;
    Eigen::MatrixXd tangent_frame;
    Eigen::MatrixXd ii0; // ii0(i, j) = <nabla_{e_i} nu, e_j>
    double h = 0.0;
    std::vector<double> kappas; // real parts of the eigenvalues, descending
    std::vector<std::complex<double>> eigen;
    Classification classification = Classification::Indeterminate;
};

inline constexpr std::size_t kMaxShapeRank = 6;

/// Throws OffSurface, CharacteristicPoint, UnsupportedDimension for k > 6,
/// EigenSolverFailure.
HorizontalShape second_fundamental_form(const VRStructure& s, const Hypersurface& surf, const Point& p,
                                        const ShapeOptions& options = {});

double mean_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p,
                      const ShapeOptions& options = {});

/// Eigenvalues of a small real matrix: closed form for k <= 2, Hessenberg QR
/// otherwise. Sorted by descending real part, then descending imaginary part.
std::vector<std::complex<double>> small_eigenvalues(const Eigen::MatrixXd& a);

/// Definiteness from the symmetric part, then the sign pattern of the kappas.
Classification classify(const Eigen::MatrixXd& ii0, const std::vector<double>& kappas, double tol);

/// (1/rho) sum_m d_m(rho nu^m) with central differences, where nu^m are the
/// coordinate components of the level-set extension of nu and rho the
/// coordinate density of dV_g.
double divergence_oracle(const VRStructure& s, const Hypersurface& surf, const Point& p, double step = 1e-5);

/// k_c = <acc, nu> for a horizontal curve through p with unit tangent u.
/// `u` and `acc` are horizontal frame components. Throws
/// CharacteristicPoint, NonTangentDirection.
double curve_horizontal_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& acc);

struct PrincipalDirection {
    double kappa = 0.0;
    double imaginary = 0.0; // beta of a complex pair kappa +- i beta
    int multiplicity = 1;
    std::vector<Eigen::VectorXd> vectors; // in the basis e_1..e_k
    bool deficient = false;               // fewer eigenvectors than the multiplicity
};

/// Real principal directions, ordered by descending kappa.
std::vector<PrincipalDirection> principal_directions(const HorizontalShape& shape);
std::vector<PrincipalDirection> principal_directions(const Eigen::MatrixXd& ii0);

} // namespace subrig

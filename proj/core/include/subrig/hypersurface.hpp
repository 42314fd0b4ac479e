#pragma once

#include <vector>

#include <Eigen/Core>

#include "subrig/quadrature.hpp"
#include "subrig/structure.hpp"

namespace subrig {

/// The level set {phi = 0}. Orientation +1 makes the normal point towards
/// increasing phi.
struct Hypersurface {
    Expression phi;
    int orientation = 1;
    double char_tol = 1e-8;
};

inline constexpr double kOnSurfaceTolerance = 1e-9;
inline constexpr double kPatchTolerance = 1e-6;

/// First and second order data of phi and the frame at a point.
struct LevelSetJet {
    Point point;
    FrameMatrix frame;
    FrameJets frame_jets;
    Jet2 phi;
    Eigen::VectorXd h;  // h_a = F_a phi over the full frame
    Eigen::MatrixXd dh; // dh(a, l) = d_l h_a
};

LevelSetJet level_set_jet(const VRStructure& s, const Hypersurface& surf, const Point& p);

/// The level-set extension nu = orientation * h0 / |h0| and its coordinate
/// gradient, gradient(b, m) = d_m nu^b.
struct NormalJet {
    Eigen::VectorXd nu;
    Eigen::MatrixXd gradient;
    double hnorm = 0.0;
};

/// Throws RegularityError, CharacteristicPoint.
NormalJet normal_jet(const LevelSetJet& jet, std::size_t horizontal_rank, const Hypersurface& surf);

struct RiemannianNormal {
    Eigen::VectorXd nu_g; // frame components, unit length
    double gradient_norm = 0.0;
};

/// Throws OffSurface when |phi(p)| >= 1e-9 and RegularityError when the
/// gradient vanishes.
RiemannianNormal riemannian_normal(const VRStructure& s, const Hypersurface& surf, const Point& p);

struct SurfacePointFrame {
    Point point;
    Eigen::VectorXd nu;              // horizontal components of the horizontal normal
    Eigen::VectorXd nu_g;            // frame components of the Riemannian normal
    double hnorm = 0.0;              // |(nu_g)_0|
    Eigen::MatrixXd tangent_frame;   // columns e_1..e_k in horizontal components
    Eigen::MatrixXd vertical_frame;  // columns T_j in full frame components
    bool characteristic = false;
};

/// Adapted frame at a point of the surface. Throws OffSurface, RegularityError.
SurfacePointFrame horizontal_frame_at(const VRStructure& s, const Hypersurface& surf, const Point& p);

/// Same frame for the level set of phi through p; no on-surface check.
SurfacePointFrame level_set_frame(const VRStructure& s, const Hypersurface& surf, const Point& p);

/// Orthonormal basis of the complement of a unit vector, by Gram-Schmidt on
/// the standard basis with the index of largest |nu_a| skipped.
Eigen::MatrixXd complement_frame(const Eigen::VectorXd& nu);

/// A parameterised patch u -> p(u) over a box.
struct Patch {
    Coordinates params;
    std::vector<Expression> map;
    Box domain;
};

struct PatchNode {
    Eigen::VectorXd u;
    Point p;
    Eigen::MatrixXd tangent; // column i = dp/du_i in coordinates
    double weight = 0.0;
};

/// Quadrature nodes of a patch. Throws PatchOffSurface if any node has
/// |phi| >= 1e-6.
std::vector<PatchNode> patch_nodes(const Hypersurface& surf, const Patch& patch, int order);

/// Integral of |(nu_g)_0| against the Riemannian area of the patch.
double perimeter(const VRStructure& s, const Hypersurface& surf, const Patch& patch, int order = 16);

/// Damped Newton iteration on phi along the coordinate gradient.
/// Throws RootFindFailure.
Point project_to_surface(const Hypersurface& surf, const Point& p, int max_iterations = 50);

struct CharacteristicLocus {
    std::vector<Point> projected;
    std::vector<Point> flagged;
    std::vector<double> hnorms;
    double min_hnorm = 1.0;
};

CharacteristicLocus characteristic_locus(const VRStructure& s, const Hypersurface& surf,
                                         const std::vector<Point>& grid);

} // namespace subrig

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "subrig/errors.hpp"
#include "subrig/hypersurface.hpp"
#include "subrig/structure.hpp"

namespace subrig {

/// A sample of a horizontal curve.
struct CurveState {
    Point p;
    Eigen::VectorXd u; // horizontal frame components of the unit tangent
    double arclength = 0.0;
    double kc = 0.0;   // horizontal curvature <nabla_c' c', nu>, when measured
    double c0 = 0.0;   // side coordinate, for convexity probes
};

using Polyline = std::vector<CurveState>;

/// Raised when a curve reaches a characteristic point; carries the curve so far.
class CharacteristicEncountered : public Error {
public:
    CharacteristicEncountered(const std::string& message, Polyline partial)
        : Error(message), partial_(std::move(partial))
    {
    }
    const Polyline& partial() const noexcept { return partial_; }

private:
    Polyline partial_;
};

inline constexpr double kMaxNormDrift = 1e-6;

/// RK4 for p' = sum u^a X_a(p), u'^c = -sum u^a u^b Gamma_ab^c(p).
/// Throws StepTooLarge when |u| drifts by more than 1e-6 in one step.
Polyline integrate_horizontal_geodesic(const VRStructure& s, const Point& start, const Eigen::VectorXd& direction,
                                       double length, double step);

struct RulingResult {
    Polyline polyline;
    double max_phi = 0.0;          // max |phi| along the path
    double max_curvature_error = 0.0; // max |k_c - rho|
};

/// Follows the horizontal direction tangent to the surface (dim V0 = 2).
///
/// Each step resets u to the unit horizontal vector orthogonal to nu (sign
/// kept continuous) and advances by RK4 with acceleration rho * nu; rho = 0
/// gives horizontal geodesics. Throws UnsupportedDimension unless k+1 = 2,
/// CharacteristicEncountered.
RulingResult integrate_ruling(const VRStructure& s, const Hypersurface& surf, const Point& p0, double length,
                              double step, double rho = 0.0);

/// Which tangent field generates a probe curve.
enum class ProbeField {
    FrameConstant,      // project fixed horizontal frame components
    CoordinateConstant, // project a fixed coordinate vector
};

/// Horizontal curvature of a curve in the surface with tangent u at p.
///
/// The curve is the integral curve of the projection of u (in the chosen
/// sense) onto the horizontal tangent space; its acceleration is taken by a
/// central difference of the tangent over +-step, Richardson-extrapolated.
double probe_curve_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p,
                             const Eigen::VectorXd& u, ProbeField field = ProbeField::FrameConstant,
                             double step = 1e-4);

// ---------------------------------------------------------------------------
// Dilations
// ---------------------------------------------------------------------------

double homogeneous_dimension(const DilatingFlow& flow, std::size_t horizontal_rank);
double homogeneous_dimension(const VRStructure& s);

/// delta_lambda(p). Throws Error unless lambda > 0.
Point dilate(const DilatingFlow& flow, const Point& p, double lambda);

/// Generator X_p = d/d lambda delta_lambda(p) at lambda = 1.
Eigen::VectorXd dilation_generator(const DilatingFlow& flow, const Point& p);

struct DilationCheck {
    double identity_error = 0.0; // max |delta_1 p - p|
    double group_error = 0.0;     // max |delta_a delta_b p - delta_ab p|
    double pushforward_error = 0.0; // max frame residual of (delta)_* F_a vs lambda^w F_a
};

/// Group law and pushforward checks at samples for the scale pairs given.
DilationCheck check_dilation(const VRStructure& s, const DilatingFlow& flow, const std::vector<Point>& samples,
                             const std::vector<double>& lambdas);

struct ConeVolume {
    double via_mu = 0.0;
    double via_solid = 0.0;
    double q = 0.0;
};

/// Volume of {delta_t p : t in [0, 1], p in patch} as the integral of
/// mu = Q^-1 X _| dV_g over the patch (oriented by nu_g) and by direct
/// quadrature of dV_g. Throws PatchOffSurface, RayRecrossing.
ConeVolume cone_volume(const VRStructure& s, const DilatingFlow& flow, const Hypersurface& surf,
                       const Patch& patch, int order = 16);

struct VolumeScaling {
    double ratio = 0.0;
    double expected = 0.0;
};

/// Vol_g(delta_lambda(box)) / Vol_g(box) against lambda^Q.
VolumeScaling volume_scaling_check(const VRStructure& s, const DilatingFlow& flow, const Box& box, double lambda,
                                   int order = 16);

// ---------------------------------------------------------------------------
// Constancy of the mean curvature
// ---------------------------------------------------------------------------

struct ConstancyReport {
    std::vector<Point> points;
    std::vector<double> h;
    std::vector<Point> characteristic;
    double mean = 0.0;
    double max_abs = 0.0;
    double max_deviation = 0.0;
    bool minimal = false;
    bool cmc = false;
};

/// Throws EmptyGrid when every point is characteristic.
ConstancyReport verify_constancy(const VRStructure& s, const Hypersurface& surf, const std::vector<Point>& grid,
                                 double tol);

// ---------------------------------------------------------------------------
// hg-convexity
// ---------------------------------------------------------------------------

enum class Verdict { OneSidedPositive, OneSidedNegative, Flat, TwoSided };

std::string_view to_string(Verdict v) noexcept;

struct ConvexityOptions {
    double length = 0.3;
    int directions = 8;
    double step = 1e-3;
    std::optional<double> side_tol; // default 1e-7 * length^2
    std::uint64_t seed = 1;
};

struct DirectionTrace {
    Eigen::VectorXd direction; // horizontal frame components at x
    Polyline curve;
    double min_c0 = 0.0;
    double max_c0 = 0.0;
    bool truncated = false;    // stopped at a characteristic point
};

struct ConvexityReport {
    Verdict verdict = Verdict::Flat;
    double min_c0 = 0.0;
    double max_c0 = 0.0;
    double side_tol = 0.0;
    std::vector<DirectionTrace> traces;
};

/// Side test of the horizontal curves through x against the horizontal
/// tangent plane. Throws NotCarnot, CharacteristicPoint, ProjectionFailure.
ConvexityReport hg_convexity_test(const VRStructure& s, const Hypersurface& surf, const Point& x,
                                  const ConvexityOptions& options = {});

} // namespace subrig

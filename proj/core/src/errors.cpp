#include "subrig/errors.hpp"

#include <sstream>

namespace subrig {

namespace {

std::string format_point(const Eigen::VectorXd& p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        os << (i ? ", " : "") << p[i];
    }
    os << ')';
    return os.str();
}

} // namespace

FrameDegenerate::FrameDegenerate(Eigen::VectorXd point, double determinant)
    : Error("frame is degenerate at " + format_point(point) + " (determinant " +
            std::to_string(determinant) + ")"),
      point_(std::move(point)),
      determinant_(determinant)
{
}

OffSurface::OffSurface(Eigen::VectorXd point, double residual)
    : Error("point " + format_point(point) + " is off the surface (|phi| = " + std::to_string(residual) + ")"),
      point_(std::move(point)),
      residual_(residual)
{
}

PatchOffSurface::PatchOffSurface(Eigen::VectorXd worst_node, double residual)
    : Error("patch leaves the surface at node " + format_point(worst_node) +
            " (|phi| = " + std::to_string(residual) + ")"),
      worst_node_(std::move(worst_node)),
      residual_(residual)
{
}

} // namespace subrig

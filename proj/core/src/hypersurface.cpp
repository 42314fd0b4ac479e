#include "subrig/hypersurface.hpp"

#include <cmath>

#include <Eigen/LU>

#include "subrig/errors.hpp"
#include "subrig/parallel.hpp"

namespace subrig {

LevelSetJet level_set_jet(const VRStructure& s, const Hypersurface& surf, const Point& p)
{
    LevelSetJet j{p, frame_matrix(s, p), frame_jets(s, p), eval_jet2(surf.phi, p), {}, {}};
    const Eigen::Index n = p.size();
    j.h = j.frame.matrix * j.phi.gradient;
    j.dh.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        j.dh.row(a) = (j.frame_jets.jacobians[static_cast<std::size_t>(a)].transpose() * j.phi.gradient +
                       j.phi.hessian * j.frame.matrix.row(a).transpose())
                          .transpose();
    }
    return j;
}

NormalJet normal_jet(const LevelSetJet& jet, std::size_t horizontal_rank, const Hypersurface& surf)
{
    const auto k1 = static_cast<Eigen::Index>(horizontal_rank);
    const double norm = jet.h.norm();
    if (!(norm > 0.0)) {
        throw RegularityError("phi has vanishing gradient");
    }
    const Eigen::VectorXd h0 = jet.h.head(k1);
    const double norm0 = h0.norm();
    NormalJet out;
    out.hnorm = std::min(1.0, norm0 / norm);
    if (out.hnorm < surf.char_tol) {
        throw CharacteristicPoint("point is characteristic (|(nu_g)_0| = " + std::to_string(out.hnorm) + ")");
    }
    out.nu = surf.orientation * h0 / norm0;
    const Eigen::MatrixXd projector = Eigen::MatrixXd::Identity(k1, k1) - out.nu * out.nu.transpose();
    out.gradient = surf.orientation * projector * jet.dh.topRows(k1) / norm0;
    return out;
}

namespace {

void check_on_surface(const Hypersurface& surf, const Point& p)
{
    const double r = std::abs(evaluate(surf.phi, p));
    if (!(r < kOnSurfaceTolerance)) {
        throw OffSurface(p, r);
    }
}

SurfacePointFrame frame_from_gradient(const VRStructure& s, const Hypersurface& surf, const Point& p,
                                      const Eigen::VectorXd& h)
{
    const auto k1 = static_cast<Eigen::Index>(s.horizontal_rank());
    const auto n = static_cast<Eigen::Index>(s.dim());
    const double norm = h.norm();
    if (!(norm > 0.0)) {
        throw RegularityError("phi has vanishing gradient at a surface point");
    }
    SurfacePointFrame f;
    f.point = p;
    f.nu_g = (surf.orientation * h / norm).eval();
    const Eigen::VectorXd h0 = h.head(k1);
    f.hnorm = std::min(1.0, h0.norm() / norm);
    f.characteristic = f.hnorm < surf.char_tol;
    f.vertical_frame = Eigen::MatrixXd::Identity(n, n).rightCols(n - k1);
    if (!f.characteristic) {
        f.nu = surf.orientation * h0 / h0.norm();
        f.tangent_frame = complement_frame(f.nu);
    }
    return f;
}

} // namespace

RiemannianNormal riemannian_normal(const VRStructure& s, const Hypersurface& surf, const Point& p)
{
    check_on_surface(surf, p);
    const FrameMatrix fm = frame_matrix(s, p);
    const Eigen::VectorXd h = fm.matrix * eval_jet1(surf.phi, p).gradient;
    const double norm = h.norm();
    if (!(norm > 0.0)) {
        throw RegularityError("phi has vanishing gradient at a surface point");
    }
    return {surf.orientation * h / norm, norm};
}

SurfacePointFrame level_set_frame(const VRStructure& s, const Hypersurface& surf, const Point& p)
{
    const FrameMatrix fm = frame_matrix(s, p);
    return frame_from_gradient(s, surf, p, fm.matrix * eval_jet1(surf.phi, p).gradient);
}

SurfacePointFrame horizontal_frame_at(const VRStructure& s, const Hypersurface& surf, const Point& p)
{
    check_on_surface(surf, p);
    return level_set_frame(s, surf, p);
}

Eigen::MatrixXd complement_frame(const Eigen::VectorXd& nu)
{
    const Eigen::Index k1 = nu.size();
    Eigen::Index skip = 0;
    for (Eigen::Index a = 1; a < k1; ++a) {
        if (std::abs(nu[a]) > std::abs(nu[skip])) {
            skip = a;
        }
    }
    Eigen::MatrixXd e(k1, k1 - 1);
    Eigen::Index col = 0;
    for (Eigen::Index a = 0; a < k1; ++a) {
        if (a == skip) {
            continue;
        }
        Eigen::VectorXd v = Eigen::VectorXd::Unit(k1, a);
        // Two passes of modified Gram-Schmidt keep orthogonality at roundoff level.
        for (int pass = 0; pass < 2; ++pass) {
            v -= v.dot(nu) * nu;
            for (Eigen::Index j = 0; j < col; ++j) {
                v -= v.dot(e.col(j)) * e.col(j);
            }
        }
        e.col(col++) = v / v.norm();
    }
    return e;
}

std::vector<PatchNode> patch_nodes(const Hypersurface& surf, const Patch& patch, int order)
{
    const std::size_t d = patch.params.size();
    if (patch.domain.size() != d) {
        throw ConfigError("patch domain must give one interval per parameter");
    }
    if (patch.map.size() != surf.phi.dimension()) {
        throw ConfigError("patch map must give one expression per coordinate");
    }
    const QuadratureRule rule = tensor_gauss_legendre(order, patch.domain);
    auto nodes = parallel_map(rule.nodes.size(), [&](std::size_t i) {
        PatchNode node;
        node.u = rule.nodes[i];
        node.weight = rule.weights[i];
        const auto dim = static_cast<Eigen::Index>(patch.map.size());
        node.p.resize(dim);
        node.tangent.resize(dim, static_cast<Eigen::Index>(d));
        for (Eigen::Index m = 0; m < dim; ++m) {
            Jet1 j = eval_jet1(patch.map[static_cast<std::size_t>(m)], node.u);
            node.p[m] = j.value;
            node.tangent.row(m) = j.gradient.transpose();
        }
        return node;
    });
    double worst = 0.0;
    const PatchNode* worst_node = nullptr;
    for (const auto& node : nodes) {
        const double r = std::abs(evaluate(surf.phi, node.p));
        if (worst_node == nullptr || !(r <= worst)) {
            worst = r;
            worst_node = &node;
        }
    }
    if (worst_node != nullptr && !(worst < kPatchTolerance)) {
        throw PatchOffSurface(worst_node->p, worst);
    }
    return nodes;
}

double perimeter(const VRStructure& s, const Hypersurface& surf, const Patch& patch, int order)
{
    const auto nodes = patch_nodes(surf, patch, order);
    const auto terms = parallel_map(nodes.size(), [&](std::size_t i) {
        const auto& node = nodes[i];
        const FrameMatrix fm = frame_matrix(s, node.p);
        const Eigen::VectorXd h = fm.matrix * eval_jet1(surf.phi, node.p).gradient;
        const double norm = h.norm();
        if (!(norm > 0.0)) {
            throw RegularityError("phi has vanishing gradient on the patch");
        }
        const double hnorm = h.head(static_cast<Eigen::Index>(s.horizontal_rank())).norm() / norm;
        const Eigen::MatrixXd w = fm.inverse.transpose() * node.tangent;
        const double area = std::sqrt(std::max(0.0, (w.transpose() * w).determinant()));
        return node.weight * hnorm * area;
    });
    double total = 0.0;
    for (double t : terms) {
        total += t;
    }
    return total;
}

Point project_to_surface(const Hypersurface& surf, const Point& p, int max_iterations)
{
    // Damped Newton along the coordinate gradient.
    Point q = p;
    Jet1 j = eval_jet1(surf.phi, q);
    for (int it = 0; it < max_iterations; ++it) {
        if (std::abs(j.value) < 1e-14 * (1.0 + q.norm())) {
            return q;
        }
        const double g2 = j.gradient.squaredNorm();
        if (g2 == 0.0 || !std::isfinite(g2)) {
            break;
        }
        const Eigen::VectorXd step = (j.value / g2) * j.gradient;
        double damping = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k) {
            const Point trial = q - damping * step;
            try {
                Jet1 next = eval_jet1(surf.phi, trial);
                if (std::abs(next.value) < std::abs(j.value)) {
                    q = trial;
                    j = std::move(next);
                    improved = true;
                    break;
                }
            } catch (const DomainError&) {
            }
            damping *= 0.5;
        }
        if (!improved) {
            break;
        }
    }
    if (std::abs(j.value) < 0.1 * kOnSurfaceTolerance) {
        return q;
    }
    throw RootFindFailure("projection onto the surface did not converge (|phi| = " +
                          std::to_string(std::abs(j.value)) + ")");
}

CharacteristicLocus characteristic_locus(const VRStructure& s, const Hypersurface& surf,
                                         const std::vector<Point>& grid)
{
    struct Item {
        Point q;
        double hnorm;
    };
    const auto items = parallel_map(grid.size(), [&](std::size_t i) {
        Point q = project_to_surface(surf, grid[i]);
        return Item{q, level_set_frame(s, surf, q).hnorm};
    });
    CharacteristicLocus out;
    for (const auto& it : items) {
        out.projected.push_back(it.q);
        out.hnorms.push_back(it.hnorm);
        out.min_hnorm = std::min(out.min_hnorm, it.hnorm);
        if (it.hnorm < surf.char_tol) {
            out.flagged.push_back(it.q);
        }
    }
    return out;
}

} // namespace subrig

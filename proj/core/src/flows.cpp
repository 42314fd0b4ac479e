#include "subrig/flows.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "subrig/connection.hpp"
#include "subrig/parallel.hpp"
#include "subrig/shape.hpp"

namespace subrig {

namespace {

struct Derivative {
    Eigen::VectorXd dp;
    Eigen::VectorXd du;
};

// -Gamma(u, u) over the horizontal block.
Eigen::VectorXd geodesic_term(const ConnectionCoefficients& gamma, const Eigen::VectorXd& u)
{
    const auto k1 = u.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(k1);
    for (Eigen::Index c = 0; c < k1; ++c) {
        double sum = 0.0;
        for (Eigen::Index a = 0; a < k1; ++a) {
            for (Eigen::Index b = 0; b < k1; ++b) {
                sum += u[a] * u[b] *
                       gamma(static_cast<std::size_t>(a), static_cast<std::size_t>(b), static_cast<std::size_t>(c));
            }
        }
        out[c] = -sum;
    }
    return out;
}

Eigen::VectorXd horizontal_vector(const FrameMatrix& fm, const Eigen::VectorXd& u)
{
    Eigen::VectorXd w = Eigen::VectorXd::Zero(fm.matrix.rows());
    w.head(u.size()) = u;
    return fm.vector(w);
}

template <class F>
std::pair<Point, Eigen::VectorXd> rk4_step(F&& f, const Point& p, const Eigen::VectorXd& u, double h)
{
    const Derivative k1 = f(p, u);
    const Derivative k2 = f(p + 0.5 * h * k1.dp, u + 0.5 * h * k1.du);
    const Derivative k3 = f(p + 0.5 * h * k2.dp, u + 0.5 * h * k2.du);
    const Derivative k4 = f(p + h * k3.dp, u + h * k3.du);
    return {p + h / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp),
            u + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)};
}

std::size_t step_count(double length, double step)
{
    if (!(length >= 0.0) || !(step > 0.0)) {
        throw Error("curve length must be nonnegative and the step positive");
    }
    return static_cast<std::size_t>(std::ceil(length / step - 1e-9));
}

Eigen::VectorXd perpendicular(const Eigen::VectorXd& nu) { return Eigen::Vector2d(-nu[1], nu[0]); }

} // namespace

Polyline integrate_horizontal_geodesic(const VRStructure& s, const Point& start, const Eigen::VectorXd& direction,
                                       double length, double step)
{
    const auto k1 = static_cast<Eigen::Index>(s.horizontal_rank());
    if (direction.size() != k1 || start.size() != static_cast<Eigen::Index>(s.dim())) {
        throw Error("geodesic start or direction has the wrong dimension");
    }
    const std::size_t count = step_count(length, step);
    const double h = count == 0 ? 0.0 : length / static_cast<double>(count);
    auto rhs = [&](const Point& p, const Eigen::VectorXd& u) {
        const Tensor3 c = structure_coefficients(s, p);
        return Derivative{horizontal_vector(frame_matrix(s, p), u), geodesic_term(adapted_connection(s, p, c), u)};
    };
    Polyline out;
    out.push_back({start, direction.normalized(), 0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < count; ++i) {
        auto [p, u] = rk4_step(rhs, out.back().p, out.back().u, h);
        const double drift = std::abs(u.norm() - 1.0);
        if (drift > kMaxNormDrift) {
            throw StepTooLarge("tangent norm drifted by " + std::to_string(drift) + " in one step");
        }
        out.push_back({p, u / u.norm(), out.back().arclength + h, 0.0, 0.0});
    }
    return out;
}

RulingResult integrate_ruling(const VRStructure& s, const Hypersurface& surf, const Point& p0, double length,
                              double step, double rho)
{
    if (s.horizontal_rank() != 2) {
        throw UnsupportedDimension("rulings need a two-dimensional horizontal distribution");
    }
    const std::size_t count = step_count(length, step);
    const double h = count == 0 ? 0.0 : length / static_cast<double>(count);
    RulingResult result;

    auto fail = [&](const std::string& what) { throw CharacteristicEncountered(what, result.polyline); };
    auto nu_at = [&](const Point& q) {
        const SurfacePointFrame f = level_set_frame(s, surf, q);
        if (f.characteristic) {
            fail("ruling reached a characteristic point");
        }
        return f.nu;
    };
    auto rhs = [&](const Point& p, const Eigen::VectorXd& u) {
        const Tensor3 c = structure_coefficients(s, p);
        Eigen::VectorXd du = geodesic_term(adapted_connection(s, p, c), u);
        if (rho != 0.0) {
            du += rho * nu_at(p);
        }
        return Derivative{horizontal_vector(frame_matrix(s, p), u), du};
    };
    // Curvature of the integral curve of sign * nu^perp through p.
    auto measure = [&](const Point& p, double sign, CurveState& state) {
        const LevelSetJet jet = level_set_jet(s, surf, p);
        NormalJet nj;
        try {
            nj = normal_jet(jet, 2, surf);
        } catch (const CharacteristicPoint&) {
            fail("ruling reached a characteristic point");
        }
        Eigen::Matrix2d rotation;
        rotation << 0.0, -1.0, 1.0, 0.0;
        const Eigen::VectorXd u = sign * rotation * nj.nu;
        const Eigen::VectorXd velocity = horizontal_vector(jet.frame, u);
        const Eigen::VectorXd acc =
            sign * rotation * nj.gradient * velocity - geodesic_term(adapted_connection(s, p), u);
        state.u = u;
        state.kc = acc.dot(nj.nu);
        result.max_phi = std::max(result.max_phi, std::abs(jet.phi.value));
        result.max_curvature_error = std::max(result.max_curvature_error, std::abs(state.kc - rho));
    };

    double sign = 1.0;
    CurveState first{p0, {}, 0.0, 0.0, 0.0};
    measure(p0, sign, first);
    result.polyline.push_back(first);
    for (std::size_t i = 0; i < count; ++i) {
        const CurveState& prev = result.polyline.back();
        const Eigen::VectorXd perp = perpendicular(nu_at(prev.p));
        sign = perp.dot(prev.u) >= 0.0 ? 1.0 : -1.0;
        auto [p, u] = rk4_step(rhs, prev.p, (sign * perp).eval(), h);
        (void)u;
        CurveState next{p, {}, prev.arclength + h, 0.0, 0.0};
        const Eigen::VectorXd next_perp = perpendicular(nu_at(p));
        measure(p, next_perp.dot(prev.u) >= 0.0 ? 1.0 : -1.0, next);
        result.polyline.push_back(std::move(next));
    }
    return result;
}

double probe_curve_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p,
                             const Eigen::VectorXd& u, ProbeField field, double step)
{
    const auto k1 = static_cast<Eigen::Index>(s.horizontal_rank());
    const FrameMatrix at = frame_matrix(s, p);
    const Eigen::VectorXd coordinate = horizontal_vector(at, u);
    auto tangent_field = [&](const Point& q) -> Eigen::VectorXd {
        const SurfacePointFrame f = level_set_frame(s, surf, q);
        if (f.characteristic) {
            throw CharacteristicPoint("probe curve reached a characteristic point");
        }
        Eigen::VectorXd b = field == ProbeField::FrameConstant
                                ? u
                                : Eigen::VectorXd(frame_matrix(s, q).components(coordinate).head(k1));
        b -= b.dot(f.nu) * f.nu;
        return b / b.norm();
    };
    auto advance = [&](double h) {
        auto rhs = [&](const Point& q, const Eigen::VectorXd&) {
            return Derivative{horizontal_vector(frame_matrix(s, q), tangent_field(q)), Eigen::VectorXd::Zero(k1)};
        };
        return rk4_step(rhs, p, Eigen::VectorXd::Zero(k1), h).first;
    };
    auto central = [&](double h) -> Eigen::VectorXd {
        return (tangent_field(advance(h)) - tangent_field(advance(-h))) / (2.0 * h);
    };
    // Richardson extrapolation of the central difference.
    const Eigen::VectorXd derivative = (4.0 * central(0.5 * step) - central(step)) / 3.0;
    const Eigen::VectorXd here = tangent_field(p);
    const Eigen::VectorXd acc = derivative - geodesic_term(adapted_connection(s, p), here);
    return curve_horizontal_curvature(s, surf, p, here, acc);
}

double homogeneous_dimension(const DilatingFlow& flow, std::size_t horizontal_rank)
{
    double q = static_cast<double>(horizontal_rank);
    for (double g : flow.gammas) {
        q += g;
    }
    return q;
}

double homogeneous_dimension(const VRStructure& s)
{
    if (!s.flow) {
        throw ConfigError("structure '" + s.name + "' has no dilation");
    }
    return homogeneous_dimension(*s.flow, s.horizontal_rank());
}

namespace {

Eigen::VectorXd with_lambda(const Point& p, double lambda)
{
    Eigen::VectorXd q(p.size() + 1);
    q << p, lambda;
    return q;
}

// Value and Jacobian (columns: coordinates then lambda) of the dilation map.
std::pair<Point, Eigen::MatrixXd> dilation_jet(const DilatingFlow& flow, const Point& p, double lambda)
{
    const Eigen::VectorXd q = with_lambda(p, lambda);
    Point value(p.size());
    Eigen::MatrixXd jac(p.size(), p.size() + 1);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        Jet1 j = eval_jet1(flow.map[static_cast<std::size_t>(i)], q);
        value[i] = j.value;
        jac.row(i) = j.gradient.transpose();
    }
    return {value, jac};
}

void check_lambda(double lambda)
{
    if (!(lambda > 0.0)) {
        throw Error("dilation factor must be positive");
    }
}

double density(const VRStructure& s, const Point& p) { return 1.0 / std::abs(frame_matrix(s, p).determinant); }

} // namespace

Point dilate(const DilatingFlow& flow, const Point& p, double lambda)
{
    check_lambda(lambda);
    const Eigen::VectorXd q = with_lambda(p, lambda);
    Point out(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        out[i] = evaluate(flow.map[static_cast<std::size_t>(i)], q);
    }
    return out;
}

Eigen::VectorXd dilation_generator(const DilatingFlow& flow, const Point& p)
{
    return dilation_jet(flow, p, 1.0).second.rightCols(1);
}

DilationCheck check_dilation(const VRStructure& s, const DilatingFlow& flow, const std::vector<Point>& samples,
                             const std::vector<double>& lambdas)
{
    DilationCheck out;
    const std::size_t h = s.horizontal_rank();
    for (const auto& p : samples) {
        out.identity_error = std::max(out.identity_error, (dilate(flow, p, 1.0) - p).cwiseAbs().maxCoeff());
        for (double a : lambdas) {
            for (double b : lambdas) {
                const Point lhs = dilate(flow, dilate(flow, p, b), a);
                out.group_error = std::max(out.group_error, (lhs - dilate(flow, p, a * b)).cwiseAbs().maxCoeff());
            }
            const auto [image, jac] = dilation_jet(flow, p, a);
            const Eigen::MatrixXd push = jac.leftCols(p.size());
            const FrameMatrix here = frame_matrix(s, p);
            const FrameMatrix there = frame_matrix(s, image);
            for (std::size_t f = 0; f < s.dim(); ++f) {
                const double weight = f < h ? 1.0 : flow.gammas[f - h];
                const auto row = static_cast<Eigen::Index>(f);
                const Eigen::VectorXd lhs = push * here.matrix.row(row).transpose();
                const Eigen::VectorXd rhs = std::pow(a, weight) * there.matrix.row(row).transpose();
                out.pushforward_error = std::max(out.pushforward_error, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        }
    }
    return out;
}

ConeVolume cone_volume(const VRStructure& s, const DilatingFlow& flow, const Hypersurface& surf,
                       const Patch& patch, int order)
{
    const auto nodes = patch_nodes(surf, patch, order);
    ConeVolume out;
    out.q = homogeneous_dimension(flow, s.horizontal_rank());
    const auto n = static_cast<Eigen::Index>(s.dim());

    // A dilation ray from the origin should meet the surface only at its end.
    const std::size_t stride = std::max<std::size_t>(1, nodes.size() / 16);
    for (std::size_t i = 0; i < nodes.size(); i += stride) {
        int last_sign = 0;
        for (int j = 1; j < 64; ++j) {
            const double t = j / 64.0;
            const double v = evaluate(surf.phi, dilate(flow, nodes[i].p, t));
            const int sign = v > kOnSurfaceTolerance ? 1 : (v < -kOnSurfaceTolerance ? -1 : 0);
            if (sign != 0 && last_sign != 0 && sign != last_sign) {
                throw RayRecrossing("dilation ray through a patch node crosses the surface before reaching it");
            }
            if (sign != 0) {
                last_sign = sign;
            }
        }
    }

    const auto mu_terms = parallel_map(nodes.size(), [&](std::size_t i) {
        const auto& node = nodes[i];
        const FrameMatrix fm = frame_matrix(s, node.p);
        const Eigen::VectorXd normal = fm.vector(level_set_frame(s, surf, node.p).nu_g);
        Eigen::MatrixXd m(n, n);
        m.col(0) = dilation_generator(flow, node.p);
        m.rightCols(n - 1) = node.tangent;
        Eigen::MatrixXd oriented(n, n);
        oriented.col(0) = normal;
        oriented.rightCols(n - 1) = node.tangent;
        const double orientation = oriented.determinant() >= 0.0 ? 1.0 : -1.0;
        return node.weight * orientation * m.determinant() / std::abs(fm.determinant);
    });
    for (double t : mu_terms) {
        out.via_mu += t;
    }
    out.via_mu /= out.q;

    const QuadratureRule radial = gauss_legendre(order, 0.0, 1.0);
    const auto solid_terms = parallel_map(nodes.size(), [&](std::size_t i) {
        const auto& node = nodes[i];
        double sum = 0.0;
        for (std::size_t r = 0; r < radial.nodes.size(); ++r) {
            const double t = radial.nodes[r][0];
            const auto [image, jac] = dilation_jet(flow, node.p, t);
            Eigen::MatrixXd m(n, n);
            m.col(0) = jac.rightCols(1);
            m.rightCols(n - 1) = jac.leftCols(n) * node.tangent;
            sum += radial.weights[r] * std::abs(m.determinant()) * density(s, image);
        }
        return node.weight * sum;
    });
    for (double t : solid_terms) {
        out.via_solid += t;
    }
    return out;
}

VolumeScaling volume_scaling_check(const VRStructure& s, const DilatingFlow& flow, const Box& box, double lambda,
                                   int order)
{
    check_lambda(lambda);
    const QuadratureRule rule = tensor_gauss_legendre(order, box);
    const auto n = static_cast<Eigen::Index>(s.dim());
    struct Term {
        double original;
        double image;
    };
    const auto terms = parallel_map(rule.nodes.size(), [&](std::size_t i) {
        const Point& p = rule.nodes[i];
        const auto [image, jac] = dilation_jet(flow, p, lambda);
        const double w = rule.weights[i];
        return Term{w * density(s, p), w * density(s, image) * std::abs(jac.leftCols(n).determinant())};
    });
    double original = 0.0;
    double image = 0.0;
    for (const auto& t : terms) {
        original += t.original;
        image += t.image;
    }
    return {image / original, std::pow(lambda, homogeneous_dimension(flow, s.horizontal_rank()))};
}

ConstancyReport verify_constancy(const VRStructure& s, const Hypersurface& surf, const std::vector<Point>& grid,
                                 double tol)
{
    struct Item {
        bool characteristic;
        double h;
    };
    const auto items = parallel_map(grid.size(), [&](std::size_t i) {
        if (level_set_frame(s, surf, grid[i]).characteristic) {
            return Item{true, 0.0};
        }
        return Item{false, mean_curvature(s, surf, grid[i])};
    });
    ConstancyReport report;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (items[i].characteristic) {
            report.characteristic.push_back(grid[i]);
        } else {
            report.points.push_back(grid[i]);
            report.h.push_back(items[i].h);
        }
    }
    if (report.h.empty()) {
        throw EmptyGrid("every grid point is characteristic");
    }
    double sum = 0.0;
    for (double h : report.h) {
        sum += h;
        report.max_abs = std::max(report.max_abs, std::abs(h));
    }
    report.mean = sum / static_cast<double>(report.h.size());
    for (double h : report.h) {
        report.max_deviation = std::max(report.max_deviation, std::abs(h - report.mean));
    }
    report.minimal = report.max_abs < tol;
    report.cmc = report.max_deviation < tol;
    return report;
}

} // namespace subrig

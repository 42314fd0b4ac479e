#include <cmath>
#include <numbers>
#include <random>

#include "subrig/flows.hpp"
#include "subrig/parallel.hpp"

namespace subrig {

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::OneSidedPositive: return "OneSidedPositive";
    case Verdict::OneSidedNegative: return "OneSidedNegative";
    case Verdict::Flat: return "Flat";
    case Verdict::TwoSided: return "TwoSided";
    }
    return "Flat";
}

namespace {

// Unit directions in the basis e_1..e_k.
std::vector<Eigen::VectorXd> probe_directions(Eigen::Index k, int count, std::uint64_t seed)
{
    std::vector<Eigen::VectorXd> out;
    if (k == 1) {
        out.push_back(Eigen::VectorXd::Constant(1, 1.0));
        out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    } else if (k == 2) {
        for (int i = 0; i < count; ++i) {
            const double angle = 2.0 * std::numbers::pi * i / count;
            out.push_back(Eigen::Vector2d(std::cos(angle), std::sin(angle)));
        }
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd d(k);
            for (auto& x : d) {
                x = normal(rng);
            }
            out.push_back(d.normalized());
        }
    }
    return out;
}

// Newton along the Riemannian normal direction.
Point project_along_normal(const VRStructure& s, const Hypersurface& surf, const Point& p)
{
    Point q = p;
    for (int it = 0; it < 50; ++it) {
        const Jet1 j = eval_jet1(surf.phi, q);
        if (std::abs(j.value) < 1e-13) {
            return q;
        }
        const Eigen::VectorXd direction = frame_matrix(s, q).vector(frame_matrix(s, q).matrix * j.gradient);
        const double slope = j.gradient.dot(direction);
        if (!(std::abs(slope) > 0.0)) {
            break;
        }
        q -= (j.value / slope) * direction;
    }
    const double r = std::abs(evaluate(surf.phi, q));
    if (r < 1e-11) {
        return q;
    }
    throw ProjectionFailure("could not return the probe curve to the surface (|phi| = " + std::to_string(r) + ")");
}

} // namespace

ConvexityReport hg_convexity_test(const VRStructure& s, const Hypersurface& surf, const Point& x,
                                  const ConvexityOptions& options)
{
    if (!s.carnot) {
        throw NotCarnot("hg-convexity is defined for Carnot groups; '" + s.name + "' has no Carnot data");
    }
    const SurfacePointFrame base = horizontal_frame_at(s, surf, x);
    if (base.characteristic) {
        throw CharacteristicPoint("base point of the convexity test is characteristic");
    }
    if (options.directions < 1 || !(options.length > 0.0) || !(options.step > 0.0)) {
        throw ConfigError("convexity probes need positive length, step and direction count");
    }
    ConvexityReport report;
    report.side_tol = options.side_tol.value_or(1e-7 * options.length * options.length);
    // v0 is left-invariant, so its frame components are nu(x) everywhere.
    const Eigen::VectorXd v0 = base.nu;
    const auto directions = probe_directions(base.tangent_frame.cols(), options.directions, options.seed);
    const auto count = static_cast<std::size_t>(std::ceil(options.length / options.step - 1e-9));
    const double h = options.length / static_cast<double>(count);

    report.traces = parallel_map(directions.size(), [&](std::size_t i) {
        DirectionTrace trace;
        trace.direction = base.tangent_frame * directions[i];
        CurveState state{x, trace.direction, 0.0, 0.0, 0.0};
        trace.curve.push_back(state);
        for (std::size_t step = 0; step < count; ++step) {
            const FrameMatrix fm = frame_matrix(s, state.p);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(fm.matrix.rows());
            w.head(state.u.size()) = state.u;
            const Point advanced = state.p + h * fm.vector(w);
            const Point p = project_along_normal(s, surf, advanced);
            const SurfacePointFrame f = level_set_frame(s, surf, p);
            if (f.characteristic) {
                trace.truncated = true;
                break;
            }
            Eigen::VectorXd u = state.u - state.u.dot(f.nu) * f.nu;
            const double c0 = state.c0 + h * state.u.dot(v0);
            state = CurveState{p, u / u.norm(), state.arclength + h, 0.0, c0};
            trace.curve.push_back(state);
            trace.min_c0 = std::min(trace.min_c0, c0);
            trace.max_c0 = std::max(trace.max_c0, c0);
        }
        return trace;
    });

    for (const auto& t : report.traces) {
        report.min_c0 = std::min(report.min_c0, t.min_c0);
        report.max_c0 = std::max(report.max_c0, t.max_c0);
    }
    const bool above = report.max_c0 > report.side_tol;
    const bool below = report.min_c0 < -report.side_tol;
    if (above && below) {
        report.verdict = Verdict::TwoSided;
    } else if (above) {
        report.verdict = Verdict::OneSidedPositive;
    } else if (below) {
        report.verdict = Verdict::OneSidedNegative;
    } else {
        report.verdict = Verdict::Flat;
    }
    return report;
}

} // namespace subrig

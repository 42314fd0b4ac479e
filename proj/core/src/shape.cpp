#include "subrig/shape.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "subrig/connection.hpp"
#include "subrig/errors.hpp"

namespace subrig {

std::string_view to_string(Classification c) noexcept
{
    switch (c) {
    case Classification::PositiveDefinite: return "PositiveDefinite";
    case Classification::PositiveSemidefinite: return "PositiveSemidefinite";
    case Classification::NegativeDefinite: return "NegativeDefinite";
    case Classification::NegativeSemidefinite: return "NegativeSemidefinite";
    case Classification::MixedSign: return "MixedSign";
    case Classification::Flat: return "Flat";
    case Classification::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

namespace {

ConnectionCoefficients koszul_connection(const VRStructure& s, const Point& p)
{
    const std::size_t h = s.horizontal_rank();
    ConnectionCoefficients out{p, h, Tensor3(s.dim())};
    for (std::size_t a = 0; a < h; ++a) {
        for (std::size_t b = 0; b < h; ++b) {
            for (std::size_t c = 0; c < h; ++c) {
                out.gammas(a, b, c) = horizontal_koszul(s, p, a, b, c);
            }
        }
    }
    return out;
}

bool by_real_then_imag(const std::complex<double>& x, const std::complex<double>& y)
{
    if (x.real() != y.real()) {
        return x.real() > y.real();
    }
    return x.imag() > y.imag();
}

} // namespace

std::vector<std::complex<double>> small_eigenvalues(const Eigen::MatrixXd& a)
{
    const Eigen::Index k = a.rows();
    std::vector<std::complex<double>> out;
    if (k == 1) {
        out.emplace_back(a(0, 0), 0.0);
    } else if (k == 2) {
        const double half_trace = 0.5 * (a(0, 0) + a(1, 1));
        const double half_gap = 0.5 * (a(0, 0) - a(1, 1));
        const double disc = half_gap * half_gap + a(0, 1) * a(1, 0);
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            out.emplace_back(half_trace + r, 0.0);
            out.emplace_back(half_trace - r, 0.0);
        } else {
            const double r = std::sqrt(-disc);
            out.emplace_back(half_trace, r);
            out.emplace_back(half_trace, -r);
        }
    } else if (k > 2) {
        if (static_cast<std::size_t>(k) > kMaxShapeRank) {
            throw UnsupportedDimension("eigenvalues are computed for k <= 6, got k = " + std::to_string(k));
        }
        Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
        if (solver.info() != Eigen::Success) {
            throw EigenSolverFailure("QR iteration did not converge");
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            out.push_back(solver.eigenvalues()[i]);
        }
    }
    std::sort(out.begin(), out.end(), by_real_then_imag);
    return out;
}

Classification classify(const Eigen::MatrixXd& ii0, const std::vector<double>& kappas, double tol)
{
    if (ii0.rows() == 0) {
        return Classification::Flat;
    }
    const Eigen::MatrixXd sym = 0.5 * (ii0 + ii0.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (lo > tol) {
        return Classification::PositiveDefinite;
    }
    if (hi < -tol) {
        return Classification::NegativeDefinite;
    }
    if (std::all_of(kappas.begin(), kappas.end(), [&](double k) { return std::abs(k) <= tol; })) {
        return Classification::Flat;
    }
    if (lo >= -tol) {
        return Classification::PositiveSemidefinite;
    }
    if (hi <= tol) {
        return Classification::NegativeSemidefinite;
    }
    const bool positive = std::any_of(kappas.begin(), kappas.end(), [&](double k) { return k > tol; });
    const bool negative = std::any_of(kappas.begin(), kappas.end(), [&](double k) { return k < -tol; });
    return positive && negative ? Classification::MixedSign : Classification::Indeterminate;
}

HorizontalShape second_fundamental_form(const VRStructure& s, const Hypersurface& surf, const Point& p,
                                        const ShapeOptions& options)
{
    const auto k1 = static_cast<Eigen::Index>(s.horizontal_rank());
    if (static_cast<std::size_t>(k1) > kMaxShapeRank + 1) {
        throw UnsupportedDimension("second fundamental forms are supported for k <= 6");
    }
    const LevelSetJet jet = level_set_jet(s, surf, p);
    const double residual = std::abs(jet.phi.value);
    if (!(residual < kOnSurfaceTolerance)) {
        throw OffSurface(p, residual);
    }
    const NormalJet nj = normal_jet(jet, s.horizontal_rank(), surf);

    HorizontalShape shape;
    shape.point = p;
    shape.nu = nj.nu;
    SectionJet section{nj.nu, nj.gradient};
    if (options.extension_factor) {
        const Jet1 f = eval_jet1(*options.extension_factor, p);
        section.gradient = f.value * section.gradient + section.values * f.gradient.transpose();
        section.values *= f.value;
    }

    if (options.tangent_frame) {
        if (options.tangent_frame->rows() != k1 || options.tangent_frame->cols() != k1 - 1) {
            throw Error("tangent frame override has the wrong shape");
        }
        shape.tangent_frame = *options.tangent_frame;
    } else {
        shape.tangent_frame = complement_frame(shape.nu);
    }

    const ConnectionCoefficients gamma = options.route == ConnectionRoute::HorizontalKoszul
                                             ? koszul_connection(s, p)
                                             : adapted_connection(s, p);
    Eigen::MatrixXd derivative(k1, k1); // column a = nabla_{X_a} nu
    for (Eigen::Index a = 0; a < k1; ++a) {
        derivative.col(a) = covariant_derivative_of_section(gamma, jet.frame, section, static_cast<std::size_t>(a));
    }
    const Eigen::MatrixXd& e = shape.tangent_frame;
    shape.ii0 = (derivative * e).transpose() * e;
    shape.h = shape.ii0.trace();
    shape.eigen = small_eigenvalues(shape.ii0);
    for (const auto& mu : shape.eigen) {
        shape.kappas.push_back(mu.real());
    }
    std::sort(shape.kappas.begin(), shape.kappas.end(), std::greater<>());
    shape.classification = classify(shape.ii0, shape.kappas, options.tol);
    return shape;
}

double mean_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p, const ShapeOptions& options)
{
    return second_fundamental_form(s, surf, p, options).h;
}

double divergence_oracle(const VRStructure& s, const Hypersurface& surf, const Point& p, double step)
{
    const SurfacePointFrame at = horizontal_frame_at(s, surf, p);
    if (at.characteristic) {
        throw CharacteristicPoint("divergence is undefined at a characteristic point");
    }
    const auto k1 = static_cast<Eigen::Index>(s.horizontal_rank());
    const Eigen::Index n = p.size();
    auto density_field = [&](const Point& q, double* density) -> Eigen::VectorXd {
        const FrameMatrix fm = frame_matrix(s, q);
        const Eigen::VectorXd h = fm.matrix * eval_jet1(surf.phi, q).gradient;
        const Eigen::VectorXd h0 = h.head(k1);
        const double norm0 = h0.norm();
        if (!(norm0 > 0.0)) {
            throw CharacteristicPoint("divergence stencil touches a characteristic point");
        }
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        w.head(k1) = surf.orientation * h0 / norm0;
        const double rho = 1.0 / std::abs(fm.determinant);
        if (density != nullptr) {
            *density = rho;
        }
        return rho * fm.vector(w);
    };
    double rho = 0.0;
    (void)density_field(p, &rho);
    double sum = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        Point plus = p;
        Point minus = p;
        plus[m] += step;
        minus[m] -= step;
        sum += (density_field(plus, nullptr)[m] - density_field(minus, nullptr)[m]) / (2.0 * step);
    }
    return sum / rho;
}

double curve_horizontal_curvature(const VRStructure& s, const Hypersurface& surf, const Point& p,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& acc)
{
    const SurfacePointFrame at = horizontal_frame_at(s, surf, p);
    if (at.characteristic) {
        throw CharacteristicPoint("horizontal curvature is undefined at a characteristic point");
    }
    const auto k1 = at.nu.size();
    if (u.size() < k1 || acc.size() < k1) {
        throw Error("curve tangent and acceleration need horizontal components");
    }
    if (!(std::abs(u.head(k1).dot(at.nu)) < 1e-8)) {
        throw NonTangentDirection("curve direction is not tangent to the surface");
    }
    return acc.head(k1).dot(at.nu);
}

std::vector<PrincipalDirection> principal_directions(const Eigen::MatrixXd& a)
{
    const Eigen::Index k = a.rows();
    std::vector<PrincipalDirection> out;
    if (k == 0) {
        return out;
    }
    const auto mus = small_eigenvalues(a);
    const double scale = std::max(1.0, a.norm());
    const double cluster_tol = 1e-6 * scale;

    std::vector<bool> used(mus.size(), false);
    for (std::size_t i = 0; i < mus.size(); ++i) {
        if (used[i]) {
            continue;
        }
        std::complex<double> sum = 0.0;
        int count = 0;
        for (std::size_t j = i; j < mus.size(); ++j) {
            if (!used[j] && std::abs(mus[j] - mus[i]) < cluster_tol) {
                used[j] = true;
                sum += mus[j];
                ++count;
            }
        }
        const std::complex<double> mu = sum / static_cast<double>(count);
        if (mu.imag() < -cluster_tol) {
            continue; // conjugate of a pair already reported
        }
        PrincipalDirection d;
        d.kappa = mu.real();
        d.multiplicity = count;
        if (std::abs(mu.imag()) <= cluster_tol) {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a - d.kappa * Eigen::MatrixXd::Identity(k, k));
            lu.setThreshold(1e-8);
            const Eigen::MatrixXd kernel = lu.kernel();
            if (lu.rank() < k) {
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
                const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, kernel.cols());
                for (Eigen::Index c = 0; c < q.cols(); ++c) {
                    d.vectors.emplace_back(q.col(c));
                }
            }
            d.deficient = static_cast<int>(d.vectors.size()) < count;
        } else {
            d.imaginary = mu.imag();
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a.cast<std::complex<double>>());
            if (solver.info() != Eigen::Success) {
                throw EigenSolverFailure("complex eigenvector iteration did not converge");
            }
            Eigen::Index best = 0;
            for (Eigen::Index j = 1; j < k; ++j) {
                if (std::abs(solver.eigenvalues()[j] - mu) < std::abs(solver.eigenvalues()[best] - mu)) {
                    best = j;
                }
            }
            const Eigen::VectorXcd v = solver.eigenvectors().col(best);
            d.vectors.emplace_back(v.real());
            d.vectors.emplace_back(v.imag());
            d.deficient = count > 1;
        }
        out.push_back(std::move(d));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const PrincipalDirection& x, const PrincipalDirection& y) { return x.kappa > y.kappa; });
    return out;
}

std::vector<PrincipalDirection> principal_directions(const HorizontalShape& shape)
{
    return principal_directions(shape.ii0);
}

} // namespace subrig

#include "subrig/connection.hpp"

#include <Eigen/LU>

#include "subrig/errors.hpp"

namespace subrig {

Tensor3 structure_coefficients(const VRStructure& s, const Point& p)
{
    const std::size_t n = s.dim();
    const FrameMatrix fm = frame_matrix(s, p);
    const FrameJets fj = frame_jets(s, p);
    Tensor3 c(n);
    for (std::size_t a = 0; a < n; ++a) {
        const Eigen::VectorXd fa = fj.values.row(static_cast<Eigen::Index>(a)).transpose();
        for (std::size_t b = a + 1; b < n; ++b) {
            const Eigen::VectorXd fb = fj.values.row(static_cast<Eigen::Index>(b)).transpose();
            const Eigen::VectorXd w = fm.components(fj.jacobians[b] * fa - fj.jacobians[a] * fb);
            for (std::size_t e = 0; e < n; ++e) {
                c(a, b, e) = w[static_cast<Eigen::Index>(e)];
                c(b, a, e) = -w[static_cast<Eigen::Index>(e)];
            }
        }
    }
    return c;
}

Tensor3 levi_civita(const Tensor3& c)
{
    const std::size_t n = c.size();
    Tensor3 g(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t e = 0; e < n; ++e) {
                g(a, b, e) = 0.5 * (c(a, b, e) - c(b, e, a) + c(e, a, b));
            }
        }
    }
    return g;
}

Tensor3 levi_civita(const VRStructure& s, const Point& p)
{
    return levi_civita(structure_coefficients(s, p));
}

ConnectionCoefficients adapted_connection(const VRStructure& s, const Point& p, const Tensor3& structure)
{
    const std::size_t n = s.dim();
    const std::size_t h = s.horizontal_rank();
    const Tensor3 lc = levi_civita(structure);
    ConnectionCoefficients out{p, h, Tensor3(n)};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < h; ++b) {
            for (std::size_t c = 0; c < h; ++c) {
                out.gammas(a, b, c) = lc(a, b, c);
            }
        }
    }
    return out;
}

ConnectionCoefficients adapted_connection(const VRStructure& s, const Point& p)
{
    return adapted_connection(s, p, structure_coefficients(s, p));
}

double horizontal_koszul(const VRStructure& s, const Point& p, std::size_t a, std::size_t b, std::size_t c)
{
    const std::size_t h = s.horizontal_rank();
    if (a >= h || b >= h || c >= h) {
        throw Error("horizontal_koszul takes horizontal frame indices");
    }
    const FrameMatrix fm = frame_matrix(s, p);
    const Eigen::MatrixXd metric = (fm.matrix.transpose() * fm.matrix).inverse();
    auto coordinate_vector = [&](std::size_t i) -> Eigen::VectorXd {
        return fm.matrix.row(static_cast<Eigen::Index>(i)).transpose();
    };
    auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u.dot(metric * v); };
    const auto& X = s.horizontal[a];
    const auto& Y = s.horizontal[b];
    const auto& Z = s.horizontal[c];
    return 0.5 * (inner(lie_bracket(X, Y, p), coordinate_vector(c)) +
                  inner(lie_bracket(Z, X, p), coordinate_vector(b)) +
                  inner(lie_bracket(Z, Y, p), coordinate_vector(a)));
}

Eigen::VectorXd covariant_derivative_of_section(const ConnectionCoefficients& gamma, const FrameMatrix& frame,
                                                const SectionJet& w, std::size_t a)
{
    const std::size_t h = gamma.horizontal_rank;
    const Eigen::VectorXd direction = frame.matrix.row(static_cast<Eigen::Index>(a)).transpose();
    Eigen::VectorXd out = w.gradient * direction;
    for (std::size_t c = 0; c < h; ++c) {
        double sum = 0.0;
        for (std::size_t b = 0; b < h; ++b) {
            sum += w.values[static_cast<Eigen::Index>(b)] * gamma(a, b, c);
        }
        out[static_cast<Eigen::Index>(c)] += sum;
    }
    return out;
}

Eigen::VectorXd covariant_derivative_of_section(const VRStructure& s, const std::vector<Expression>& components,
                                                std::size_t a, const Point& p)
{
    const std::size_t h = s.horizontal_rank();
    if (components.size() != h) {
        throw Error("a horizontal section needs " + std::to_string(h) + " components");
    }
    SectionJet w{Eigen::VectorXd(static_cast<Eigen::Index>(h)),
                 Eigen::MatrixXd(static_cast<Eigen::Index>(h), p.size())};
    for (std::size_t b = 0; b < h; ++b) {
        Jet1 j = eval_jet1(components[b], p);
        w.values[static_cast<Eigen::Index>(b)] = j.value;
        w.gradient.row(static_cast<Eigen::Index>(b)) = j.gradient.transpose();
    }
    return covariant_derivative_of_section(adapted_connection(s, p), frame_matrix(s, p), w, a);
}

Eigen::VectorXd torsion(const ConnectionCoefficients& gamma, const Tensor3& structure, std::size_t a, std::size_t b)
{
    const std::size_t n = structure.size();
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c) {
        out[static_cast<Eigen::Index>(c)] = gamma(a, b, c) - gamma(b, a, c) - structure(a, b, c);
    }
    return out;
}

Eigen::VectorXd torsion(const VRStructure& s, std::size_t a, std::size_t b, const Point& p)
{
    const Tensor3 c = structure_coefficients(s, p);
    return torsion(adapted_connection(s, p, c), c, a, b);
}

} // namespace subrig

#include "subrig/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/LU>

#include "subrig/errors.hpp"

namespace subrig {

CarnotData::CarnotData(std::vector<int> layer_dims) : grading(std::move(layer_dims))
{
    const std::size_t n = dimension();
    constants.assign(n * n * n, 0.0);
}

std::size_t CarnotData::dimension() const noexcept
{
    return static_cast<std::size_t>(std::accumulate(grading.begin(), grading.end(), 0));
}

int CarnotData::layer(std::size_t basis) const
{
    std::size_t end = 0;
    for (std::size_t j = 0; j < grading.size(); ++j) {
        end += static_cast<std::size_t>(grading[j]);
        if (basis < end) {
            return static_cast<int>(j);
        }
    }
    throw InvalidCarnotData("basis index " + std::to_string(basis) + " outside the graded algebra");
}

double CarnotData::c(std::size_t a, std::size_t b, std::size_t c) const
{
    const std::size_t n = dimension();
    return constants[(a * n + b) * n + c];
}

void CarnotData::set_bracket(std::size_t a, std::size_t b, std::size_t c, double value)
{
    const std::size_t n = dimension();
    constants[(a * n + b) * n + c] = value;
    constants[(b * n + a) * n + c] = -value;
}

void validate_carnot(const CarnotData& data, double tol)
{
    if (data.grading.size() < 2) {
        throw InvalidCarnotData("a Carnot grading needs at least two layers");
    }
    if (std::any_of(data.grading.begin(), data.grading.end(), [](int d) { return d <= 0; })) {
        throw InvalidCarnotData("layer dimensions must be positive");
    }
    const std::size_t n = data.dimension();
    if (data.constants.size() != n * n * n) {
        throw InvalidCarnotData("expected " + std::to_string(n * n * n) + " structure constants, got " +
                                std::to_string(data.constants.size()));
    }
    const int r = data.step();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                const double v = data.c(a, b, c);
                if (std::abs(v + data.c(b, a, c)) > tol) {
                    throw InvalidCarnotData("structure constants are not antisymmetric");
                }
                const int target = data.layer(a) + data.layer(b) + 1;
                if (std::abs(v) > tol && (target > r || data.layer(c) != target)) {
                    throw InvalidCarnotData("bracket of layers " + std::to_string(data.layer(a)) + " and " +
                                            std::to_string(data.layer(b)) + " leaves layer " +
                                            std::to_string(target));
                }
            }
        }
    }
    // Jacobi: [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                for (std::size_t e = 0; e < n; ++e) {
                    double sum = 0.0;
                    for (std::size_t d = 0; d < n; ++d) {
                        sum += data.c(a, b, d) * data.c(d, c, e) + data.c(b, c, d) * data.c(d, a, e) +
                               data.c(c, a, d) * data.c(d, b, e);
                    }
                    if (std::abs(sum) > tol) {
                        throw InvalidCarnotData("structure constants violate the Jacobi identity");
                    }
                }
            }
        }
    }
}

const VectorFieldSpec& VRStructure::field(std::size_t a) const
{
    return a < horizontal.size() ? horizontal[a] : vertical.at(a - horizontal.size());
}

void validate_structure(const VRStructure& s, std::span<const Point> samples)
{
    const std::size_t n = s.dim();
    if (n < 2) {
        throw ConfigError("a structure needs at least two coordinates");
    }
    if (s.horizontal.empty() || s.horizontal.size() >= n) {
        throw ConfigError("horizontal rank must lie between 1 and dim - 1");
    }
    if (s.horizontal.size() + s.vertical.size() != n) {
        throw ConfigError("horizontal and vertical fields must together form a frame of " + std::to_string(n) +
                          " fields");
    }
    for (std::size_t a = 0; a < n; ++a) {
        const auto& f = s.field(a);
        if (f.coefficients.size() != n) {
            throw ConfigError("field " + std::to_string(a) + " has " + std::to_string(f.coefficients.size()) +
                              " components, expected " + std::to_string(n));
        }
        for (const auto& e : f.coefficients) {
            if (e.dimension() != 0 && e.coordinates() != s.coords) {
                throw ConfigError("field " + std::to_string(a) + " uses a different coordinate list");
            }
        }
    }
    if (s.partition.size() != s.vertical.size()) {
        throw PartitionError("partition labels " + std::to_string(s.partition.size()) +
                             " vertical fields but there are " + std::to_string(s.vertical.size()));
    }
    if (s.carnot) {
        validate_carnot(*s.carnot);
        if (s.carnot->dimension() != n || static_cast<std::size_t>(s.carnot->grading[0]) != s.horizontal.size()) {
            throw InvalidCarnotData("Carnot grading does not match the frame");
        }
    }
    if (s.flow) {
        if (s.flow->gammas.size() != s.vertical.size()) {
            throw ConfigError("dilation needs one weight per vertical field");
        }
        if (s.flow->map.size() != n) {
            throw ConfigError("dilation map needs one expression per coordinate");
        }
        if (s.flow->origin.size() != static_cast<Eigen::Index>(n)) {
            throw ConfigError("dilation origin has the wrong dimension");
        }
    }
    for (const auto& p : samples) {
        if (p.size() != static_cast<Eigen::Index>(n)) {
            throw ConfigError("sample point has the wrong dimension");
        }
        (void)frame_matrix(s, p);
    }
}

FrameMatrix frame_matrix(const VRStructure& s, const Point& p)
{
    const auto n = static_cast<Eigen::Index>(s.dim());
    FrameMatrix fm;
    fm.matrix.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto& f = s.field(static_cast<std::size_t>(a));
        for (Eigen::Index m = 0; m < n; ++m) {
            fm.matrix(a, m) = evaluate(f.coefficients[static_cast<std::size_t>(m)], p);
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(fm.matrix);
    fm.determinant = lu.determinant();
    if (!(std::abs(fm.determinant) >= kFrameDeterminantFloor)) {
        throw FrameDegenerate(p, fm.determinant);
    }
    fm.inverse = lu.inverse();
    return fm;
}

FrameJets frame_jets(const VRStructure& s, const Point& p)
{
    const auto n = static_cast<Eigen::Index>(s.dim());
    FrameJets fj;
    fj.values.resize(n, n);
    fj.jacobians.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto& f = s.field(static_cast<std::size_t>(a));
        auto& jac = fj.jacobians[static_cast<std::size_t>(a)];
        for (Eigen::Index m = 0; m < n; ++m) {
            Jet1 j = eval_jet1(f.coefficients[static_cast<std::size_t>(m)], p);
            fj.values(a, m) = j.value;
            jac.row(m) = j.gradient.transpose();
        }
    }
    return fj;
}

Eigen::VectorXd lie_bracket(const VectorFieldSpec& a, const VectorFieldSpec& b, const Point& p)
{
    const auto n = p.size();
    if (a.coefficients.size() != static_cast<std::size_t>(n) || b.coefficients.size() != static_cast<std::size_t>(n)) {
        throw Error("vector field dimension does not match the point");
    }
    Eigen::VectorXd va(n), vb(n);
    Eigen::MatrixXd ja(n, n), jb(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        Jet1 x = eval_jet1(a.coefficients[static_cast<std::size_t>(m)], p);
        Jet1 y = eval_jet1(b.coefficients[static_cast<std::size_t>(m)], p);
        va[m] = x.value;
        vb[m] = y.value;
        ja.row(m) = x.gradient.transpose();
        jb.row(m) = y.gradient.transpose();
    }
    return jb * va - ja * vb;
}

RigidityReport check_vertical_rigidity(const VRStructure& s, std::span<const Point> samples, double tol)
{
    if (samples.empty()) {
        throw Error("rigidity check needs at least one sample point");
    }
    const std::size_t h = s.horizontal_rank();
    const std::size_t v = s.vertical_rank();
    RigidityReport report;
    report.samples = samples.size();
    report.worst_point = samples.front();
    for (const auto& p : samples) {
        const FrameMatrix fm = frame_matrix(s, p);
        const FrameJets fj = frame_jets(s, p);
        for (std::size_t a = 0; a < h; ++a) {
            for (std::size_t j = 0; j < v; ++j) {
                const auto& ja = fj.jacobians[a];
                const auto& jt = fj.jacobians[h + j];
                const Eigen::VectorXd xa = fj.values.row(static_cast<Eigen::Index>(a)).transpose();
                const Eigen::VectorXd tj = fj.values.row(static_cast<Eigen::Index>(h + j)).transpose();
                const Eigen::VectorXd comps = fm.components(jt * xa - ja * tj);
                for (std::size_t i = 0; i < v; ++i) {
                    if (s.partition[i] != s.partition[j]) {
                        continue;
                    }
                    const double r = std::abs(comps[static_cast<Eigen::Index>(h + i)]);
                    if (r > report.max_residual) {
                        report.max_residual = r;
                        report.worst_point = p;
                        report.worst_horizontal = a;
                        report.worst_j = j;
                        report.worst_i = i;
                    }
                }
            }
        }
    }
    report.pass = report.max_residual < tol;
    return report;
}

std::vector<Point> sample_box(std::size_t dim, std::size_t count, double lo, double hi, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(lo, hi);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p(static_cast<Eigen::Index>(dim));
        for (auto& x : p) {
            x = uniform(rng);
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace subrig

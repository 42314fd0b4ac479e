#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "oracles.hpp"
#include "subrig/catalog.hpp"
#include "subrig/errors.hpp"
#include "subrig/flows.hpp"
#include "subrig/shape.hpp"

using namespace subrig;

namespace {

Hypersurface surface(const std::string& phi, const Coordinates& c, int orientation = 1)
{
    return {parse(phi, c), orientation, 1e-8};
}

struct Case {
    VRStructure s;
    std::string phi;
};

std::vector<Case> curved_cases()
{
    return {{heisenberg(1), "x*y/2 - t"},
            {heisenberg(1), "x^2 + y^2 - 1"},
            {heisenberg(1), "x^2 + y^2 + t^2 - 4"},
            {heisenberg(2), "x1*y2 - t + x2^2 + y1^3/3"},
            {heisenberg_times_r(), "x*y/2 - t - s"},
            {heisenberg_times_r(), "x^2 + y^2 + s^2 + t - 1"},
            {martinet("0", "x^2"), "z - x*y + y^3"},
            {carnot(engel_algebra()), "x4 + x1*x2 - x3^2 + x2^2"}};
}

Point random_surface_point(std::mt19937_64& rng, const VRStructure& s, const Hypersurface& surf)
{
    for (;;) {
        const Point p = project_to_surface(surf, oracle::random_point(rng, static_cast<Eigen::Index>(s.dim()), -1.5, 1.5));
        if (level_set_frame(s, surf, p).hnorm > 1e-3) {
            return p;
        }
    }
}

} // namespace

TEST_CASE("H x R example is minimal and nilpotent")
{
    const VRStructure r = heisenberg_times_r();
    const Hypersurface sheet = surface("x*y/2 - t - s", r.coords);
    for (double y : {0.1, 0.5, 1.0, 2.0}) {
        const Point p = Eigen::Vector4d(1, y, 0, y / 2);
        const HorizontalShape shape = second_fundamental_form(r, sheet, p);
        CHECK(std::abs(shape.h) < 1e-12);
        CHECK((shape.ii0 * shape.ii0).norm() < 1e-12);
        CHECK(shape.ii0.norm() == doctest::Approx(1.0 / (1.0 + y * y)).epsilon(1e-12));
        for (const auto& mu : shape.eigen) CHECK(std::abs(mu) < 1e-7);
        const auto dirs = principal_directions(shape);
        REQUIRE(dirs.size() == 1);
        CHECK(dirs[0].deficient);
        CHECK(dirs[0].vectors.size() == 1);
        CHECK(dirs[0].multiplicity == 2);
    }
}

TEST_CASE("planes and minimal families in the Heisenberg group")
{
    const VRStructure h = heisenberg(1);
    const HorizontalShape plane = second_fundamental_form(h, surface("x", h.coords), Eigen::Vector3d(0, 2, -1));
    CHECK(plane.ii0.rows() == 1);
    CHECK(plane.ii0(0, 0) == 0.0);
    CHECK(plane.classification == Classification::Flat);

    std::mt19937_64 rng(6);
    for (const char* phi : {"x*y/2 - t", "t - x*y/2", "x*y/2 + x^3/3 - t", "x*y/2 + sin(x) - t"}) {
        const Hypersurface surf = surface(phi, h.coords);
        for (int i = 0; i < 20; ++i) {
            const Point p = random_surface_point(rng, h, surf);
            CHECK(std::abs(mean_curvature(h, surf, p)) < 1e-9);
        }
    }
}

TEST_CASE("cylinder has mean curvature 1/r")
{
    const VRStructure h = heisenberg(1);
    const Hypersurface out = surface("x^2 + y^2 - 4", h.coords);
    const Hypersurface in = surface("x^2 + y^2 - 4", h.coords, -1);
    const Point p = Eigen::Vector3d(2, 0, 0.7);
    CHECK(mean_curvature(h, out, p) == doctest::Approx(0.5));
    CHECK(mean_curvature(h, in, p) == doctest::Approx(-0.5));
    CHECK(divergence_oracle(h, out, p) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(second_fundamental_form(h, out, p).classification == Classification::PositiveDefinite);
    CHECK(second_fundamental_form(h, in, p).classification == Classification::NegativeDefinite);
}

TEST_CASE("mean curvature equals the divergence oracle")
{
    std::mt19937_64 rng(10);
    for (const auto& c : curved_cases()) {
        const Hypersurface surf = surface(c.phi, c.s.coords);
        for (int i = 0; i < 10; ++i) {
            const Point p = random_surface_point(rng, c.s, surf);
            CHECK_MESSAGE(std::abs(mean_curvature(c.s, surf, p) - divergence_oracle(c.s, surf, p)) < 1e-6, c.phi);
        }
    }
}

TEST_CASE("connection routes agree")
{
    std::mt19937_64 rng(13);
    for (const auto& c : curved_cases()) {
        const Hypersurface surf = surface(c.phi, c.s.coords);
        for (int i = 0; i < 5; ++i) {
            const Point p = random_surface_point(rng, c.s, surf);
            const HorizontalShape a = second_fundamental_form(c.s, surf, p);
            const HorizontalShape b =
                second_fundamental_form(c.s, surf, p, {.route = ConnectionRoute::HorizontalKoszul});
            CHECK((a.ii0 - b.ii0).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(std::abs(a.h - b.h) < 1e-10);
        }
    }
}

TEST_CASE("extension independence")
{
    std::mt19937_64 rng(14);
    for (const auto& c : curved_cases()) {
        const Hypersurface surf = surface(c.phi, c.s.coords);
        const Expression factor = parse("1", c.s.coords) + pow(surf.phi, 2.0);
        const Point p = random_surface_point(rng, c.s, surf);
        const HorizontalShape a = second_fundamental_form(c.s, surf, p);
        const HorizontalShape b = second_fundamental_form(c.s, surf, p, {.extension_factor = factor});
        CHECK((a.ii0 - b.ii0).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rotating the tangent frame conjugates II0")
{
    std::mt19937_64 rng(15);
    for (const auto& c : curved_cases()) {
        const Hypersurface surf = surface(c.phi, c.s.coords);
        const Point p = random_surface_point(rng, c.s, surf);
        const HorizontalShape a = second_fundamental_form(c.s, surf, p);
        const auto k = a.tangent_frame.cols();
        Eigen::MatrixXd random(k, k);
        for (auto& x : random.reshaped()) x = std::normal_distribution<double>()(rng);
        const Eigen::MatrixXd rotation = Eigen::HouseholderQR<Eigen::MatrixXd>(random).householderQ();
        const HorizontalShape b =
            second_fundamental_form(c.s, surf, p, {.tangent_frame = Eigen::MatrixXd(a.tangent_frame * rotation)});
        CHECK((b.ii0 - rotation.transpose() * a.ii0 * rotation).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(a.h - b.h) < 1e-9);
        CHECK(std::abs(a.ii0.norm() - b.ii0.norm()) < 1e-9);
        CHECK(a.classification == b.classification);
        for (std::size_t i = 0; i < a.kappas.size(); ++i) CHECK(std::abs(a.kappas[i] - b.kappas[i]) < 1e-6);
    }
}

TEST_CASE("characteristic and off-surface points")
{
    const VRStructure h = heisenberg(1);
    CHECK_THROWS_AS(second_fundamental_form(h, surface("t", h.coords), Eigen::Vector3d::Zero()), CharacteristicPoint);
    CHECK_THROWS_AS(divergence_oracle(h, surface("t", h.coords), Eigen::Vector3d::Zero()), CharacteristicPoint);
    CHECK_THROWS_AS(second_fundamental_form(h, surface("x", h.coords), Eigen::Vector3d(1, 0, 0)), OffSurface);
}

TEST_CASE("eigenvalues and classification")
{
    Eigen::Matrix2d d;
    d << 2, 0, 0, 3;
    auto mus = small_eigenvalues(d);
    CHECK(mus[0] == std::complex<double>(3, 0));
    CHECK(mus[1] == std::complex<double>(2, 0));
    Eigen::Matrix2d rot;
    rot << 0, 1, -1, 0;
    mus = small_eigenvalues(rot);
    CHECK(mus[0] == std::complex<double>(0, 1));
    CHECK(mus[1] == std::complex<double>(0, -1));

    Eigen::Matrix3d m;
    m << 1, 2, 0, -2, 1, 0, 0, 0, -3;
    mus = small_eigenvalues(m);
    CHECK(std::abs(mus[0] - std::complex<double>(1, 2)) < 1e-12);
    CHECK(std::abs(mus[2] - std::complex<double>(-3, 0)) < 1e-12);
    CHECK_THROWS_AS(small_eigenvalues(Eigen::MatrixXd::Identity(7, 7)), UnsupportedDimension);

    auto kappas = [](const Eigen::MatrixXd& a) {
        std::vector<double> k;
        for (const auto& mu : small_eigenvalues(a)) k.push_back(mu.real());
        return k;
    };
    auto classify_matrix = [&](const Eigen::MatrixXd& a) { return classify(a, kappas(a), 1e-7); };
    CHECK(classify_matrix(d) == Classification::PositiveDefinite);
    CHECK(classify_matrix(-d) == Classification::NegativeDefinite);
    CHECK(classify_matrix(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()) == Classification::PositiveSemidefinite);
    CHECK(classify_matrix(Eigen::Vector2d(-1, 0).asDiagonal().toDenseMatrix()) == Classification::NegativeSemidefinite);
    CHECK(classify_matrix(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()) == Classification::MixedSign);
    CHECK(classify_matrix(Eigen::Matrix2d::Zero()) == Classification::Flat);
    Eigen::Matrix2d jordan;
    jordan << 0, 1, 0, 0;
    CHECK(classify_matrix(jordan) == Classification::Flat);
    CHECK(classify_matrix(rot) == Classification::Flat);
    Eigen::Matrix2d skewed;
    skewed << 1, 4, 0, 1; // kappas both positive, symmetric part indefinite
    CHECK(classify_matrix(skewed) == Classification::Indeterminate);
}

TEST_CASE("principal directions")
{
    Eigen::Matrix2d d;
    d << 2, 0, 0, 3;
    auto dirs = principal_directions(d);
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[0].kappa == 3.0);
    CHECK(std::abs(std::abs(dirs[0].vectors[0][1]) - 1.0) < 1e-12);
    CHECK(dirs[1].kappa == 2.0);
    CHECK_FALSE(dirs[0].deficient);

    Eigen::Matrix2d rot;
    rot << 0, 1, -1, 0;
    dirs = principal_directions(rot);
    REQUIRE(dirs.size() == 1);
    CHECK(dirs[0].kappa == 0.0);
    CHECK(dirs[0].imaginary == doctest::Approx(1.0));
    CHECK(dirs[0].vectors.size() == 2);

    Eigen::Matrix2d jordan;
    jordan << 0, 0.35, 0, 0;
    dirs = principal_directions(jordan);
    REQUIRE(dirs.size() == 1);
    CHECK(dirs[0].deficient);
    REQUIRE(dirs[0].vectors.size() == 1);
    CHECK(std::abs(std::abs(dirs[0].vectors[0][0]) - 1.0) < 1e-12);

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    dirs = principal_directions(id);
    REQUIRE(dirs.size() == 1);
    CHECK(dirs[0].vectors.size() == 3);
    CHECK_FALSE(dirs[0].deficient);
}

TEST_CASE("Meusnier identity")
{
    std::mt19937_64 rng(16);
    for (const auto& c : curved_cases()) {
        const Hypersurface surf = surface(c.phi, c.s.coords);
        for (int i = 0; i < 5; ++i) {
            const Point p = random_surface_point(rng, c.s, surf);
            const HorizontalShape shape = second_fundamental_form(c.s, surf, p);
            const auto k = shape.tangent_frame.cols();
            const Eigen::VectorXd d = oracle::random_point(rng, k, -1, 1).normalized();
            const Eigen::VectorXd u = shape.tangent_frame * d;
            const double frame = probe_curve_curvature(c.s, surf, p, u, ProbeField::FrameConstant);
            const double coordinate = probe_curve_curvature(c.s, surf, p, u, ProbeField::CoordinateConstant);
            const double expected = -d.dot(shape.ii0 * d);
            CHECK_MESSAGE(std::abs(frame - expected) < 1e-6, c.phi);
            CHECK_MESSAGE(std::abs(coordinate - frame) < 1e-6, c.phi);
        }
    }
    const VRStructure h = heisenberg(1);
    const Hypersurface x = surface("x", h.coords);
    CHECK_THROWS_AS(curve_horizontal_curvature(h, x, Eigen::Vector3d(0, 1, 1), Eigen::Vector2d(1, 0),
                                               Eigen::Vector2d(0, 0)),
                    NonTangentDirection);
}

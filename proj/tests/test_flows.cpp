#include <doctest.h>

#include <cmath>
#include <random>

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

// Largest distance of the xy-projection from the chord between its ends.
double chord_deviation(const Polyline& curve)
{
    const Eigen::Vector2d a = curve.front().p.head(2);
    const Eigen::Vector2d b = curve.back().p.head(2);
    const Eigen::Vector2d dir = (b - a).normalized();
    double worst = 0.0;
    for (const auto& s : curve) {
        const Eigen::Vector2d v = s.p.head<2>() - a;
        worst = std::max(worst, std::abs(v.x() * dir.y() - v.y() * dir.x()));
    }
    return worst;
}

} // namespace

TEST_CASE("Heisenberg geodesics along constant directions")
{
    const VRStructure h = heisenberg(1);
    const Polyline line = integrate_horizontal_geodesic(h, Eigen::Vector3d::Zero(), Eigen::Vector2d(1, 0), 1.0, 1e-3);
    REQUIRE(line.size() == 1001);
    CHECK((line.back().p - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
    CHECK(line.back().arclength == doctest::Approx(1.0));

    const Eigen::Vector2d diag = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
    const Polyline lift = integrate_horizontal_geodesic(h, Eigen::Vector3d::Zero(), diag, 2.0, 1e-2);
    CHECK(chord_deviation(lift) < 1e-12);
    for (const auto& s : lift) CHECK(std::abs(s.p[2]) < 1e-12);

    const Polyline single = integrate_horizontal_geodesic(h, Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(0, 1), 0.0, 1e-3);
    REQUIRE(single.size() == 1);
    CHECK(single[0].p == Eigen::Vector3d(1, 2, 3));
}

TEST_CASE("geodesics keep unit speed")
{
    VRStructure twisted = martinet("x*y", "sin(x) + y^2");
    twisted.horizontal[1].coefficients[0] = parse("x*y/3", twisted.coords);
    const Polyline c =
        integrate_horizontal_geodesic(twisted, Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector2d(0.6, 0.8), 1.0, 1e-3);
    for (const auto& s : c) CHECK(std::abs(s.u.norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(
        integrate_horizontal_geodesic(twisted, Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector2d(0.6, 0.8), 1.0, 2.0),
        StepTooLarge);
}

TEST_CASE("rulings of minimal surfaces")
{
    const VRStructure h = heisenberg(1);
    const Hypersurface saddle = surface("x*y/2 - t", h.coords);
    const RulingResult r = integrate_ruling(h, saddle, Eigen::Vector3d(1, 1, 0.5), 1.0, 1e-3);
    CHECK(r.max_phi < 1e-5);
    CHECK(r.max_curvature_error < 1e-5);
    CHECK(chord_deviation(r.polyline) < 1e-5);

    const Hypersurface g = surface("x*y/2 + x^3/3 - t", h.coords);
    const Point p0 = project_to_surface(g, Eigen::Vector3d(0.5, 1.0, 0.0));
    const RulingResult rg = integrate_ruling(h, g, p0, 1.0, 1e-3);
    CHECK(rg.max_phi < 10 * 1e-6);
    CHECK(rg.max_curvature_error < 1e-5);
}

TEST_CASE("CMC rulings are lifted circles")
{
    const VRStructure h = heisenberg(1);
    const Hypersurface cylinder = surface("x^2 + y^2 - 1", h.coords, -1);
    CHECK(mean_curvature(h, cylinder, Eigen::Vector3d(1, 0, 0)) == doctest::Approx(-1.0));
    const RulingResult r = integrate_ruling(h, cylinder, Eigen::Vector3d(1, 0, 0), 2.0, 1e-3, 1.0);
    CHECK(r.max_phi < 1e-9);
    CHECK(r.max_curvature_error < 1e-9);
    for (const auto& s : r.polyline) CHECK(std::abs(s.p.head<2>().norm() - 1.0) < 1e-9);
    // The vertical coordinate climbs at rate 1/2.
    CHECK(std::abs(r.polyline.back().p[2]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rulings need a rank-two distribution and a noncharacteristic seed")
{
    const VRStructure r = heisenberg_times_r();
    CHECK_THROWS_AS(integrate_ruling(r, surface("x*y/2 - t - s", r.coords), Eigen::Vector4d(0, 0, 0, 0), 1, 1e-3),
                    UnsupportedDimension);
    const VRStructure h = heisenberg(1);
    try {
        integrate_ruling(h, surface("t", h.coords), Eigen::Vector3d::Zero(), 1, 1e-3);
        FAIL("expected CharacteristicEncountered");
    } catch (const CharacteristicEncountered& e) {
        CHECK(e.partial().empty());
    }
}

TEST_CASE("dilations")
{
    const VRStructure m = martinet("0", "x", 1);
    CHECK(homogeneous_dimension(m) == 4.0);
    CHECK((dilate(*m.flow, Eigen::Vector3d(1, 1, 1), 2.0) - Eigen::Vector3d(2, 2, 4)).norm() == 0.0);
    CHECK(homogeneous_dimension(heisenberg(1)) == 4.0);
    CHECK(homogeneous_dimension(heisenberg_times_r()) == 5.0);
    CHECK(homogeneous_dimension(martinet("0", "x^2", 2)) == 5.0);
    CHECK(homogeneous_dimension(carnot(engel_algebra())) == 7.0);
    CHECK_THROWS_AS(homogeneous_dimension(martinet("0", "x^2")), ConfigError);
    CHECK_THROWS_AS(dilate(*m.flow, Eigen::Vector3d(1, 1, 1), 0.0), Error);

    const VRStructure h = heisenberg(1);
    const Point p(Eigen::Vector3d(0.3, -2, 5));
    CHECK((dilate(*h.flow, p, 3.0) - Eigen::Vector3d(0.9, -6, 45)).norm() < 1e-14);
    CHECK((dilation_generator(*h.flow, p) - Eigen::Vector3d(0.3, -2, 10)).norm() < 1e-14);

    for (const auto& s : {heisenberg(1), heisenberg(2), heisenberg_times_r(), martinet("x*y", "x^2 - y^2", 2),
                          carnot(engel_algebra())}) {
        const DilationCheck c = check_dilation(s, *s.flow, sample_box(s.dim(), 50, -2, 2, 5), {0.5, 1.3, 2.0});
        CHECK(c.identity_error < 1e-12);
        CHECK(c.group_error < 1e-9);
        CHECK_MESSAGE(c.pushforward_error < 1e-9, s.name);
    }
}

TEST_CASE("cone volumes")
{
    const VRStructure h = heisenberg(1);
    const Coordinates uv{"u", "v"};
    const Patch plane{uv, {parse("u", uv), parse("v", uv), parse("1", uv)}, {{0.2, 0.8}, {0.2, 0.8}}};
    const ConeVolume c = cone_volume(h, *h.flow, surface("t - 1", h.coords), plane, 12);
    CHECK(c.q == 4.0);
    CHECK(c.via_mu == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(c.via_solid == doctest::Approx(0.18).epsilon(1e-12));

    const Patch cone{uv, {parse("u", uv), parse("v", uv), parse("0.7*u^2", uv)}, {{0.2, 0.8}, {0.2, 0.8}}};
    const ConeVolume z = cone_volume(h, *h.flow, surface("t - 0.7*x^2", h.coords), cone, 12);
    CHECK(std::abs(z.via_mu) < 1e-12);

    const Patch thin{uv, {parse("u", uv), parse("0.5", uv), parse("1", uv)}, {{0.2, 0.2}, {0.2, 0.8}}};
    const ConeVolume e = cone_volume(h, *h.flow, surface("t - 1", h.coords), thin, 6);
    CHECK(e.via_mu == 0.0);
    CHECK(e.via_solid == 0.0);

    // A wavy graph still agrees with the solid volume.
    const Patch wavy{uv, {parse("u", uv), parse("v", uv), parse("1 + 0.2*sin(3*u)*v", uv)}, {{0.2, 0.8}, {0.2, 0.8}}};
    const ConeVolume w = cone_volume(h, *h.flow, surface("t - 1 - 0.2*sin(3*x)*y", h.coords), wavy, 16);
    CHECK(w.via_mu == doctest::Approx(w.via_solid).epsilon(1e-6));

    // Rays to the outer cylinder cross the inner one first.
    const Patch far{uv, {parse("2*cos(u)", uv), parse("2*sin(u)", uv), parse("v", uv)}, {{0, 1}, {0.0, 0.1}}};
    CHECK_THROWS_AS(cone_volume(h, *h.flow, surface("(x^2 + y^2 - 1)*(x^2 + y^2 - 4)", h.coords), far, 4),
                    RayRecrossing);
}

TEST_CASE("volume scaling")
{
    const Box unit{{1, 2}, {1, 2}, {1, 2}};
    for (double lambda : {0.5, 2.0}) {
        const VRStructure h = heisenberg(1);
        const VolumeScaling s = volume_scaling_check(h, *h.flow, unit, lambda);
        CHECK(s.ratio == doctest::Approx(s.expected).epsilon(1e-12));
        CHECK(s.expected == doctest::Approx(std::pow(lambda, 4)));
        const VRStructure m = martinet("0", "x", 1);
        CHECK(volume_scaling_check(m, *m.flow, unit, lambda).ratio == doctest::Approx(std::pow(lambda, 4)));
        const VRStructure r = heisenberg_times_r();
        const Box box4{{1, 2}, {1, 2}, {1, 2}, {-1, 0}};
        CHECK(volume_scaling_check(r, *r.flow, box4, lambda).ratio == doctest::Approx(std::pow(lambda, 5)));
    }
    const VRStructure h = heisenberg(1);
    CHECK(volume_scaling_check(h, *h.flow, unit, 1.0).ratio == 1.0);
}

TEST_CASE("constancy")
{
    const VRStructure r = heisenberg_times_r();
    const Hypersurface sheet = surface("x*y/2 - t - s", r.coords);
    std::vector<Point> grid;
    for (double y : {0.2, 0.7, 1.5})
        for (double x : {-1.0, 0.5}) grid.push_back(project_to_surface(sheet, Eigen::Vector4d(x, y, 0.1, 0.2)));
    ConstancyReport rep = verify_constancy(r, sheet, grid, 1e-8);
    CHECK(rep.minimal);
    CHECK(rep.cmc);

    const VRStructure h = heisenberg(1);
    const Hypersurface g = surface("x*y/2 + sin(x) - t", h.coords);
    std::vector<Point> hg;
    for (double x : {-1.0, 0.3, 1.2})
        for (double y : {-0.5, 0.8}) hg.push_back(project_to_surface(g, Eigen::Vector3d(x, y, 0)));
    CHECK(verify_constancy(h, g, hg, 1e-8).minimal);

    const Hypersurface cyl = surface("x^2 + y^2 - 1", h.coords);
    std::vector<Point> cg;
    for (int i = 0; i < 12; ++i)
        cg.emplace_back(Eigen::Vector3d(std::cos(0.5 * i), std::sin(0.5 * i), 0.1 * i));
    rep = verify_constancy(h, cyl, cg, 1e-8);
    CHECK(rep.cmc);
    CHECK_FALSE(rep.minimal);
    CHECK(rep.mean == doctest::Approx(1.0));

    const Hypersurface t = surface("t", h.coords);
    CHECK_THROWS_AS(verify_constancy(h, t, {Eigen::Vector3d::Zero()}, 1e-8), EmptyGrid);
    rep = verify_constancy(h, t, {Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0)}, 1e-8);
    CHECK(rep.characteristic.size() == 1);
    CHECK(rep.points.size() == 1);
}

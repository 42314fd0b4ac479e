#pragma once

#include <optional>
#include <string>

#include "subrig/structure.hpp"

namespace subrig {

/// Heisenberg group H^n in coordinates (x1..xn, y1..yn, t).
/// For n = 1 the coordinates are (x, y, t).
VRStructure heisenberg(int n = 1);

/// H x R in coordinates (x, y, t, s) with V0 = span{X1, X2, X3}, V = span{d_t}.
VRStructure heisenberg_times_r();

/// Martinet-type space on R^3: X = d_x + f d_z, Y = d_y + g d_z, T = d_z.
///
/// `f` and `g` are expressions in (x, y, z). When `degree` is given the
/// structure carries the dilation (lambda x, lambda y, lambda^(m+1) z).
VRStructure martinet(const std::string& f, const std::string& g, std::optional<int> degree = std::nullopt);

/// Left-invariant frame of a Carnot group in exponential coordinates.
///
/// Each layer forms one vertical class. Throws UnsupportedDimension for
/// step greater than 3.
VRStructure carnot(const CarnotData& data, std::string name = "carnot");

/// The Engel algebra: grading (2, 1, 1), [e1, e2] = e3, [e1, e3] = e4.
CarnotData engel_algebra();

/// The three-dimensional Heisenberg algebra: [e1, e2] = e3.
CarnotData heisenberg_algebra(int n = 1);

struct CatalogParams {
    int n = 1;
    std::string f = "0";
    std::string g = "x^2";
    std::optional<int> degree;
    std::optional<CarnotData> carnot;
};

/// Looks a structure up by name: heisenberg1, heisenbergN, hxr, martinet,
/// carnot, engel. Throws UnknownCatalogName.
VRStructure catalog(const std::string& name, const CatalogParams& params = {});

} // namespace subrig

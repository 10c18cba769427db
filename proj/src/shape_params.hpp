#pragma once

// Parametric shape families that realize into PlanarDomain. The optimizer
// works on the flat coordinate vector exposed by to_vector/from_vector;
// infeasible parameter points realize into a rejection report instead of a
// domain.

#include <array>
#include <optional>

#include "geometry.hpp"

namespace rshapes {

struct ShapeParams {
    enum class Kind { RadialFourier, Polygon, Multi, SlitFamily };
    Kind kind = Kind::RadialFourier;

    // RadialFourier: r(theta) = a0 + sum_j a[j] cos(j theta) + b[j] sin(j theta),
    // sampled at `vertex_count` equispaced angles.
    Vec2 center{0.0, 0.0};
    double a0 = 1.0;
    std::vector<double> cos_coeffs;  // a_1..a_m
    std::vector<double> sin_coeffs;  // b_1..b_m
    int vertex_count = 96;

    // Polygon: explicit ccw vertex list.
    std::vector<Vec2> points;

    // Multi: disjoint parts placed at offsets (same length as parts).
    std::vector<ShapeParams> parts;
    std::vector<Vec2> offsets;

    // SlitFamily: host shape (exactly one entry) plus straight slits given
    // by endpoint pairs.
    std::vector<ShapeParams> host;
    std::vector<std::array<Vec2, 2>> slits;
};

struct RealizeResult {
    std::optional<PlanarDomain> domain;  // set iff report.ok()
    ValidationReport report;
    bool ok() const { return domain.has_value(); }
};

RealizeResult realize(const ShapeParams& p);

// Flat parameter view for derivative-free search.
std::vector<double> to_vector(const ShapeParams& p);
ShapeParams from_vector(const ShapeParams& shape_like, const std::vector<double>& v);
// Characteristic per-coordinate ranges used to size initial simplexes.
std::vector<double> param_ranges(const ShapeParams& p);

ShapeParams make_radial_fourier(Vec2 center, double a0, std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs, int vertex_count = 96);
ShapeParams make_polygon(std::vector<Vec2> points);

}  // namespace rshapes

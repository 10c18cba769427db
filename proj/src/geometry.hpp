#pragma once

// Planar polygonal domains with interior cracks: the geometric side of the
// pair (domain, crack set). Coordinates are doubles; predicates use an
// epsilon of 1e-12 on coordinates normalized to the bounding box, which is
// adequate for desk-scale inputs.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rshapes {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double xx, double yy) : x(xx), y(yy) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double norm(const Vec2& a);
double dist(const Vec2& a, const Vec2& b);

using Loop = std::vector<Vec2>;      // closed polyline, last->first edge implied
using Polyline = std::vector<Vec2>;  // open polyline

struct PolygonComponent {
    Loop outer;                      // counterclockwise
    std::vector<Loop> holes;         // clockwise, strictly inside outer
};

struct Crack {
    int component = 0;               // owning component index
    Polyline points;                 // >= 2 points, strictly interior
};

struct PlanarDomain {
    std::vector<PolygonComponent> components;
    std::vector<Crack> cracks;
    // Minimum distance required from any crack point to the component
    // boundary and to other cracks. Non-positive means "default":
    // 0.02 * bounding-box diameter.
    double clearance = 0.0;
};

struct Violation {
    std::string code;     // stable identifier, e.g. "loop_not_simple"
    std::string message;  // human-readable, includes offending indices
    int component = -1;
    int index = -1;       // loop / crack index within the component list
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

// -- predicates ---------------------------------------------------------

// Sign of the area of triangle (a,b,c): +1 ccw, -1 cw, 0 within tolerance.
// `scale` is the coordinate magnitude the epsilon is relative to.
int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c, double scale);
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double scale);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);
// Even-odd test; points within eps of the boundary count as inside.
bool point_in_loop(const Vec2& p, const Loop& loop);

// -- loop helpers -------------------------------------------------------

double loop_length(const Loop& loop);
double loop_signed_area(const Loop& loop);  // + for ccw
double polyline_length(const Polyline& pts);
bool loop_is_simple(const Loop& loop, double scale);

struct BoundingBox {
    Vec2 lo, hi;
    double diagonal() const;
};
BoundingBox bounding_box(const PlanarDomain& d);

// Bounding-box diagonal; the artifact's working definition of diameter.
double diameter(const PlanarDomain& d);
double effective_clearance(const PlanarDomain& d);

// -- operations ---------------------------------------------------------

ValidationReport validate(const PlanarDomain& d);

// Per(domain) + 2 * total crack length. Accumulated per component, loops
// before cracks, components in index order; this order is part of the
// contract (disjoint unions add exactly).
double generalized_perimeter(const PlanarDomain& d);

double area(const PlanarDomain& d);

PlanarDomain scale(const PlanarDomain& d, double t);
PlanarDomain translate(const PlanarDomain& d, const Vec2& offset);

// Components of both domains, d2 translated by `offset`; requires strictly
// positive distance between the two (throws GeometryError otherwise).
PlanarDomain disjoint_union(const PlanarDomain& d1, const PlanarDomain& d2, const Vec2& offset);

struct PolygonDisk {
    PlanarDomain domain;
    double polygon_perimeter;  // 2 m r sin(pi/m)
    double circle_perimeter;   // 2 pi r, the constraint-bookkeeping target
};
PolygonDisk regular_polygon_disk(const Vec2& center, double radius, int sides);

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rshapes

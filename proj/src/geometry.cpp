#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rshapes {

namespace {
constexpr double kEps = 1e-12;

bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }
}  // namespace

double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c, double scale) {
    double v = cross(b - a, c - a);
    double tol = kEps * scale * scale;
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double scale) {
    int o1 = orient_sign(a, b, c, scale);
    int o2 = orient_sign(a, b, d, scale);
    int o3 = orient_sign(c, d, a, scale);
    int o4 = orient_sign(c, d, b, scale);
    if (o1 != o2 && o3 != o4) return true;
    double tol = kEps * scale;
    if (o1 == 0 && point_segment_distance(c, a, b) <= tol) return true;
    if (o2 == 0 && point_segment_distance(d, a, b) <= tol) return true;
    if (o3 == 0 && point_segment_distance(a, c, d) <= tol) return true;
    if (o4 == 0 && point_segment_distance(b, c, d) <= tol) return true;
    return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = clamp01(dot(p - a, ab) / len2);
    return dist(p, a + ab * t);
}

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    double scale = std::max({norm(a), norm(b), norm(c), norm(d), 1.0});
    if (segments_intersect(a, b, c, d, scale)) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

bool point_in_loop(const Vec2& p, const Loop& loop) {
    const size_t n = loop.size();
    double scale = 1.0;
    for (const Vec2& v : loop) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    double tol = kEps * scale;
    // On-boundary counts as inside.
    for (size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, loop[i], loop[(i + 1) % n]) <= tol) return true;
    }
    bool in = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& vi = loop[i];
        const Vec2& vj = loop[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            double xcross = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
            if (p.x < xcross) in = !in;
        }
    }
    return in;
}

double loop_length(const Loop& loop) {
    double s = 0.0;
    for (size_t i = 0; i < loop.size(); ++i) s += dist(loop[i], loop[(i + 1) % loop.size()]);
    return s;
}

double loop_signed_area(const Loop& loop) {
    double s = 0.0;
    for (size_t i = 0; i < loop.size(); ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % loop.size()];
        s += cross(a, b);
    }
    return 0.5 * s;
}

double polyline_length(const Polyline& pts) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) s += dist(pts[i], pts[i + 1]);
    return s;
}

bool loop_is_simple(const Loop& loop, double scale) {
    const size_t n = loop.size();
    if (n < 3) return false;
    double tol = kEps * scale;
    for (size_t i = 0; i < n; ++i) {
        if (dist(loop[i], loop[(i + 1) % n]) <= tol) return false;  // degenerate edge
    }
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = loop[i], b = loop[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing an endpoint.
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(a, b, loop[j], loop[(j + 1) % n], scale)) return false;
        }
    }
    return true;
}

double BoundingBox::diagonal() const { return dist(lo, hi); }

BoundingBox bounding_box(const PlanarDomain& d) {
    const double inf = std::numeric_limits<double>::infinity();
    BoundingBox bb{{inf, inf}, {-inf, -inf}};
    auto take = [&bb](const Vec2& v) {
        bb.lo.x = std::min(bb.lo.x, v.x);
        bb.lo.y = std::min(bb.lo.y, v.y);
        bb.hi.x = std::max(bb.hi.x, v.x);
        bb.hi.y = std::max(bb.hi.y, v.y);
    };
    for (const auto& c : d.components) {
        for (const Vec2& v : c.outer) take(v);
        for (const auto& h : c.holes)
            for (const Vec2& v : h) take(v);
    }
    for (const auto& cr : d.cracks)
        for (const Vec2& v : cr.points) take(v);
    if (bb.lo.x > bb.hi.x) bb = BoundingBox{{0, 0}, {0, 0}};
    return bb;
}

double diameter(const PlanarDomain& d) { return bounding_box(d).diagonal(); }

double effective_clearance(const PlanarDomain& d) {
    if (d.clearance > 0.0) return d.clearance;
    return 0.02 * diameter(d);
}

std::string ValidationReport::summary() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].code << ": " << violations[i].message;
    }
    return os.str();
}

namespace {

void check_loop(const Loop& loop, bool want_ccw, double scale, int comp, int idx,
                const char* what, ValidationReport& rep) {
    for (const Vec2& v : loop) {
        if (!finite(v)) {
            rep.violations.push_back({"nonfinite_coordinate",
                                      std::string(what) + " has a nonfinite coordinate", comp, idx});
            return;
        }
    }
    if (loop.size() < 3) {
        rep.violations.push_back({"loop_too_short", std::string(what) + " has fewer than 3 vertices", comp, idx});
        return;
    }
    if (!loop_is_simple(loop, scale)) {
        rep.violations.push_back({"loop_not_simple", std::string(what) + " is not simple", comp, idx});
        return;
    }
    double a = loop_signed_area(loop);
    if (want_ccw && a <= 0.0)
        rep.violations.push_back({"bad_orientation", std::string(what) + " must be counterclockwise", comp, idx});
    if (!want_ccw && a >= 0.0)
        rep.violations.push_back({"bad_orientation", std::string(what) + " must be clockwise", comp, idx});
}

bool loops_disjoint(const Loop& a, const Loop& b, double scale) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()], scale))
                return false;
    return true;
}

double crack_loop_distance(const Polyline& crack, const Loop& loop) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < crack.size(); ++i)
        for (size_t j = 0; j < loop.size(); ++j)
            best = std::min(best, segment_segment_distance(crack[i], crack[i + 1], loop[j],
                                                           loop[(j + 1) % loop.size()]));
    return best;
}

bool point_in_component(const Vec2& p, const PolygonComponent& c) {
    if (!point_in_loop(p, c.outer)) return false;
    for (const auto& h : c.holes) {
        // Interior points of holes are excluded; hole boundary handled by clearance checks.
        if (point_in_loop(p, h)) return false;
    }
    return true;
}

}  // namespace

ValidationReport validate(const PlanarDomain& d) {
    ValidationReport rep;
    if (d.components.empty()) {
        rep.violations.push_back({"empty_domain", "domain has no components", -1, -1});
        return rep;
    }
    double scale = std::max(1e-300, diameter(d));

    for (size_t ci = 0; ci < d.components.size(); ++ci) {
        const auto& c = d.components[ci];
        check_loop(c.outer, true, scale, int(ci), -1, "outer loop", rep);
        for (size_t hi = 0; hi < c.holes.size(); ++hi)
            check_loop(c.holes[hi], false, scale, int(ci), int(hi), "hole loop", rep);
    }
    if (!rep.ok()) return rep;  // later checks assume simple loops

    for (size_t ci = 0; ci < d.components.size(); ++ci) {
        const auto& c = d.components[ci];
        for (size_t hi = 0; hi < c.holes.size(); ++hi) {
            const Loop& h = c.holes[hi];
            if (!loops_disjoint(h, c.outer, scale) || !point_in_loop(h[0], c.outer))
                rep.violations.push_back(
                    {"hole_outside", "hole is not strictly inside its outer loop", int(ci), int(hi)});
            for (size_t hj = hi + 1; hj < c.holes.size(); ++hj) {
                if (!loops_disjoint(h, c.holes[hj], scale) || point_in_loop(c.holes[hj][0], h) ||
                    point_in_loop(h[0], c.holes[hj]))
                    rep.violations.push_back({"holes_overlap", "holes intersect or nest", int(ci), int(hj)});
            }
        }
        for (size_t cj = ci + 1; cj < d.components.size(); ++cj) {
            const auto& c2 = d.components[cj];
            if (!loops_disjoint(c.outer, c2.outer, scale) || point_in_loop(c2.outer[0], c.outer) ||
                point_in_loop(c.outer[0], c2.outer))
                rep.violations.push_back(
                    {"components_overlap", "component outer loops intersect or nest", int(cj), -1});
        }
    }

    double clear = effective_clearance(d);
    for (size_t ki = 0; ki < d.cracks.size(); ++ki) {
        const Crack& cr = d.cracks[ki];
        if (cr.component < 0 || size_t(cr.component) >= d.components.size()) {
            rep.violations.push_back({"bad_component_index", "crack references a missing component",
                                      cr.component, int(ki)});
            continue;
        }
        if (cr.points.size() < 2) {
            rep.violations.push_back({"crack_too_short", "crack needs at least 2 points", cr.component, int(ki)});
            continue;
        }
        bool fin = true;
        for (const Vec2& v : cr.points) fin = fin && finite(v);
        if (!fin) {
            rep.violations.push_back({"nonfinite_coordinate", "crack has a nonfinite coordinate",
                                      cr.component, int(ki)});
            continue;
        }
        for (size_t i = 0; i + 1 < cr.points.size(); ++i) {
            if (dist(cr.points[i], cr.points[i + 1]) <= kEps * scale) {
                rep.violations.push_back({"crack_degenerate_segment", "crack has a zero-length segment",
                                          cr.component, int(ki)});
                break;
            }
        }
        // Self-intersection: non-adjacent segment pairs must not touch.
        for (size_t i = 0; i + 1 < cr.points.size(); ++i) {
            for (size_t j = i + 2; j + 1 < cr.points.size(); ++j) {
                if (segments_intersect(cr.points[i], cr.points[i + 1], cr.points[j], cr.points[j + 1],
                                       scale)) {
                    rep.violations.push_back(
                        {"crack_self_intersects", "crack polyline self-intersects", cr.component, int(ki)});
                    i = cr.points.size();
                    break;
                }
            }
        }
        const auto& comp = d.components[size_t(cr.component)];
        bool inside = true;
        for (const Vec2& p : cr.points) inside = inside && point_in_component(p, comp);
        double dist_to_boundary = crack_loop_distance(cr.points, comp.outer);
        for (const auto& h : comp.holes)
            dist_to_boundary = std::min(dist_to_boundary, crack_loop_distance(cr.points, h));
        if (!inside || dist_to_boundary < clear) {
            std::ostringstream os;
            os << "crack not strictly interior (distance " << dist_to_boundary << " < clearance " << clear
               << ")";
            rep.violations.push_back({"crack_not_interior", os.str(), cr.component, int(ki)});
        }
        for (size_t kj = ki + 1; kj < d.cracks.size(); ++kj) {
            const Crack& other = d.cracks[kj];
            if (other.points.size() < 2) continue;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i + 1 < cr.points.size(); ++i)
                for (size_t j = 0; j + 1 < other.points.size(); ++j)
                    best = std::min(best, segment_segment_distance(cr.points[i], cr.points[i + 1],
                                                                   other.points[j], other.points[j + 1]));
            if (best < clear)
                rep.violations.push_back({"cracks_too_close", "cracks closer than the clearance",
                                          cr.component, int(kj)});
        }
    }
    return rep;
}

double generalized_perimeter(const PlanarDomain& d) {
    // Fixed accumulation order: per component, loops then owned cracks.
    // A disjoint union's value is then the exact floating-point sum of the
    // parts' values.
    double total = 0.0;
    for (size_t ci = 0; ci < d.components.size(); ++ci) {
        double sub = loop_length(d.components[ci].outer);
        for (const auto& h : d.components[ci].holes) sub += loop_length(h);
        for (const auto& cr : d.cracks)
            if (size_t(cr.component) == ci) sub += 2.0 * polyline_length(cr.points);
        total += sub;
    }
    return total;
}

double area(const PlanarDomain& d) {
    double total = 0.0;
    for (const auto& c : d.components) {
        double sub = loop_signed_area(c.outer);
        for (const auto& h : c.holes) sub += loop_signed_area(h);  // holes are cw: negative
        total += sub;
    }
    return total;
}

PlanarDomain scale(const PlanarDomain& d, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw GeometryError("scale factor must be positive and finite");
    PlanarDomain out = d;
    auto sc = [t](Vec2& v) { v = v * t; };
    for (auto& c : out.components) {
        for (auto& v : c.outer) sc(v);
        for (auto& h : c.holes)
            for (auto& v : h) sc(v);
    }
    for (auto& cr : out.cracks)
        for (auto& v : cr.points) sc(v);
    if (out.clearance > 0.0) out.clearance *= t;
    return out;
}

PlanarDomain translate(const PlanarDomain& d, const Vec2& offset) {
    PlanarDomain out = d;
    for (auto& c : out.components) {
        for (auto& v : c.outer) v = v + offset;
        for (auto& h : c.holes)
            for (auto& v : h) v = v + offset;
    }
    for (auto& cr : out.cracks)
        for (auto& v : cr.points) v = v + offset;
    return out;
}

PlanarDomain disjoint_union(const PlanarDomain& d1, const PlanarDomain& d2, const Vec2& offset) {
    PlanarDomain moved = translate(d2, offset);
    double scale = std::max(diameter(d1), diameter(moved));
    scale = std::max(scale, 1e-300);
    // Strict separation between every pair of outer loops across the two parts.
    for (const auto& c1 : d1.components) {
        for (const auto& c2 : moved.components) {
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < c1.outer.size(); ++i)
                for (size_t j = 0; j < c2.outer.size(); ++j)
                    best = std::min(best,
                                    segment_segment_distance(
                                        c1.outer[i], c1.outer[(i + 1) % c1.outer.size()], c2.outer[j],
                                        c2.outer[(j + 1) % c2.outer.size()]));
            bool nested = point_in_loop(c2.outer[0], c1.outer) || point_in_loop(c1.outer[0], c2.outer);
            if (best <= kEps * scale || nested)
                throw GeometryError("disjoint_union: components are not strictly separated");
        }
    }
    PlanarDomain out = d1;
    int base = int(out.components.size());
    for (const auto& c : moved.components) out.components.push_back(c);
    for (const auto& cr : moved.cracks) {
        Crack shifted = cr;
        shifted.component += base;
        out.cracks.push_back(shifted);
    }
    out.clearance = std::min(effective_clearance(d1), effective_clearance(d2));
    return out;
}

PolygonDisk regular_polygon_disk(const Vec2& center, double radius, int sides) {
    if (sides < 8) throw GeometryError("regular_polygon_disk needs at least 8 sides");
    if (!(radius > 0.0)) throw GeometryError("regular_polygon_disk needs a positive radius");
    PolygonDisk out;
    Loop loop;
    loop.reserve(size_t(sides));
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < sides; ++j) {
        double th = 2.0 * pi * double(j) / double(sides);
        loop.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
    }
    out.domain.components.push_back({std::move(loop), {}});
    out.polygon_perimeter = 2.0 * double(sides) * radius * std::sin(pi / double(sides));
    out.circle_perimeter = 2.0 * pi * radius;
    return out;
}

}  // namespace rshapes

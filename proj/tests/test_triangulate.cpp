#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "assembly.hpp"
#include "mesh.hpp"
#include "oracles.hpp"
#include "spectrum.hpp"

using namespace rshapes;

namespace {

PlanarDomain unit_square() {
    PlanarDomain d;
    d.components.push_back({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}});
    return d;
}

PlanarDomain slit_square() {
    PlanarDomain d = unit_square();
    d.cracks.push_back({0, {{0.25, 0.5}, {0.75, 0.5}}});
    return d;
}

int nodes_at(const TriangleMesh& m, const Vec2& p) {
    int n = 0;
    for (const Vec2& q : m.nodes)
        if (q == p) ++n;
    return n;
}

void check_invariants(const TriangleMesh& m, const PlanarDomain& d) {
    auto problems = mesh_soundness(m);
    for (const auto& s : problems) MESSAGE(s);
    CHECK(problems.empty());
    CHECK(mesh_area(m) == doctest::Approx(area(d)).epsilon(1e-10));
    double outer_len = 0.0, left_len = 0.0, right_len = 0.0;
    for (const auto& be : m.boundary_edges) {
        double len = dist(m.nodes[size_t(be.a)], m.nodes[size_t(be.b)]);
        if (be.kind == EdgeKind::Outer) outer_len += len;
        if (be.kind == EdgeKind::CrackLeft) left_len += len;
        if (be.kind == EdgeKind::CrackRight) right_len += len;
    }
    double per = 0.0;
    for (const auto& c : d.components) {
        per += loop_length(c.outer);
        for (const auto& h : c.holes) per += loop_length(h);
    }
    double crack_len = 0.0;
    for (const auto& c : d.cracks) crack_len += polyline_length(c.points);
    CHECK(outer_len == doctest::Approx(per).epsilon(1e-10));
    CHECK(left_len == doctest::Approx(crack_len).epsilon(1e-10));
    CHECK(right_len == doctest::Approx(crack_len).epsilon(1e-10));
    CHECK(mesh_boundary_length(m) ==
          doctest::Approx(generalized_perimeter(d)).epsilon(1e-10));
    for (const auto& pr : m.crack_node_pairs) {
        CHECK(m.nodes[size_t(pr[0])].x == m.nodes[size_t(pr[1])].x);
        CHECK(m.nodes[size_t(pr[0])].y == m.nodes[size_t(pr[1])].y);
    }
}

}  // namespace

TEST_CASE("coarse unit square: structure and tags") {
    MeshingOptions o;
    o.target_h = 0.5;
    TriangleMesh m = triangulate(unit_square(), o);
    CHECK(m.triangles.size() >= 8);
    CHECK(m.crack_node_pairs.empty());
    for (const auto& be : m.boundary_edges) CHECK(be.kind == EdgeKind::Outer);
    check_invariants(m, unit_square());
    MeshQuality q = mesh_quality(m);
    CHECK(q.max_edge <= 0.5 * (1 + 1e-9));
    CHECK(q.min_angle_deg >= 20.0 - 1e-9);
    // the size clamp to diameter/4 applies even to moderate requests
    CHECK(m.target_h == doctest::Approx(std::sqrt(2.0) / 4.0));
}

TEST_CASE("huge target edge length clamps to diameter/4") {
    PlanarDomain d = unit_square();
    MeshingOptions o;
    o.target_h = 10.0 * diameter(d);
    TriangleMesh m = triangulate(d, o);
    check_invariants(m, d);
    CHECK(mesh_quality(m).max_edge <= diameter(d) / 4.0 * (1 + 1e-9));
}

TEST_CASE("slit square: duplicated interiors, single tips") {
    MeshingOptions o;
    o.target_h = 0.1;
    PlanarDomain d = slit_square();
    TriangleMesh m = triangulate(d, o);
    check_invariants(m, d);
    CHECK(!m.crack_node_pairs.empty());
    CHECK(nodes_at(m, {0.25, 0.5}) == 1);
    CHECK(nodes_at(m, {0.75, 0.5}) == 1);
    // every interior crack node appears exactly twice
    for (const auto& pr : m.crack_node_pairs)
        CHECK(nodes_at(m, m.nodes[size_t(pr[0])]) == 2);
    // equal numbers of left and right face edges
    int nl = 0, nr = 0;
    for (const auto& be : m.boundary_edges) {
        nl += be.kind == EdgeKind::CrackLeft;
        nr += be.kind == EdgeKind::CrackRight;
    }
    CHECK(nl == nr);
    CHECK(nl >= 2);
    MeshQuality q = mesh_quality(m);
    CHECK(q.max_edge <= 0.1 * (1 + 1e-9));
    CHECK(q.min_angle_deg >= 15.0 - 1e-9);  // relaxed floor only near tips
}

TEST_CASE("coarse slit still has a duplicable interior node") {
    MeshingOptions o;
    o.target_h = 0.49;  // a single crack segment would need no subdivision
    TriangleMesh m = triangulate(slit_square(), o);
    CHECK(!m.crack_node_pairs.empty());
    check_invariants(m, slit_square());
}

TEST_CASE("bent multi-segment crack meshes conformingly") {
    PlanarDomain d = unit_square();
    d.cracks.push_back({0, {{0.25, 0.35}, {0.5, 0.55}, {0.75, 0.35}}});
    MeshingOptions o;
    o.target_h = 0.08;
    TriangleMesh m = triangulate(d, o);
    check_invariants(m, d);
    CHECK(nodes_at(m, {0.5, 0.55}) == 2);  // the bend is an interior crack node
    CHECK(nodes_at(m, {0.25, 0.35}) == 1);
    CHECK(nodes_at(m, {0.75, 0.35}) == 1);
}

TEST_CASE("square with a square hole") {
    PlanarDomain d;
    d.components.push_back({{{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                            {{{0.4, 0.4}, {0.4, 0.6}, {0.6, 0.6}, {0.6, 0.4}}}});
    MeshingOptions o;
    o.target_h = 0.08;
    TriangleMesh m = triangulate(d, o);
    check_invariants(m, d);
    CHECK(mesh_area(m) == doctest::Approx(1.0 - 0.04).epsilon(1e-10));
    // hole loop edges carry a distinct loop id
    std::set<int> loop_ids;
    for (const auto& be : m.boundary_edges)
        if (be.kind == EdgeKind::Outer) loop_ids.insert(be.id);
    CHECK(loop_ids == std::set<int>{0, 1});
}

TEST_CASE("polygonal disk mesh") {
    PolygonDisk pd = regular_polygon_disk({0, 0}, 1.0, 64);
    MeshingOptions o;
    o.target_h = 0.25;
    TriangleMesh m = triangulate(pd.domain, o);
    check_invariants(m, pd.domain);
    CHECK(mesh_quality(m).min_angle_deg >= 20.0 - 1e-9);
}

TEST_CASE("two components mesh as one disconnected triangulation") {
    PlanarDomain d = unit_square();
    PlanarDomain shifted = unit_square();
    d = disjoint_union(d, shifted, {1.6, 0.2});
    MeshingOptions o;
    o.target_h = 0.3;
    TriangleMesh m = triangulate(d, o);
    check_invariants(m, d);
    CHECK(mesh_area(m) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("meshing is deterministic") {
    MeshingOptions o;
    o.target_h = 0.11;
    TriangleMesh a = triangulate(slit_square(), o);
    TriangleMesh b = triangulate(slit_square(), o);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].x == b.nodes[i].x);
        CHECK(a.nodes[i].y == b.nodes[i].y);
    }
    REQUIRE(a.triangles.size() == b.triangles.size());
    for (size_t i = 0; i < a.triangles.size(); ++i) CHECK(a.triangles[i] == b.triangles[i]);
}

TEST_CASE("bad inputs are rejected") {
    MeshingOptions o;
    o.target_h = 0.0;
    CHECK_THROWS_AS((void)triangulate(unit_square(), o), MeshingError);
    o.target_h = 0.1;
    o.max_nodes = 20;  // impossible budget
    CHECK_THROWS_AS((void)triangulate(unit_square(), o), MeshingError);
    PlanarDomain bad;  // no components
    MeshingOptions o2;
    o2.target_h = 0.1;
    CHECK_THROWS_AS((void)triangulate(bad, o2), GeometryError);
}

TEST_CASE("refine keeps triangulated crack meshes conforming") {
    MeshingOptions o;
    o.target_h = 0.2;
    PlanarDomain d = slit_square();
    TriangleMesh m = refine(triangulate(d, o));
    check_invariants(m, d);
    CHECK(mesh_quality(m).max_edge <= 0.1 * (1 + 1e-9));
}

TEST_CASE("triangulated square reproduces the boundary-coupled spectrum") {
    MeshingOptions o;
    o.target_h = 0.15;
    TriangleMesh m = refine(triangulate(unit_square(), o));
    DiscreteSystem sys = assemble(m);
    SolveOptions so;
    so.count = 4;
    so.beta = 1.0;
    Spectrum s = smallest_eigenpairs(sys, so);
    std::vector<double> exact = rectangle_robin_eigenvalues(1.0, 1.0, 1.0, 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(s.eigenvalues[size_t(k)] >= exact[size_t(k)] * (1 - 1e-9));  // conforming bound
        CHECK(s.eigenvalues[size_t(k)] <= exact[size_t(k)] * 1.03);
    }
}

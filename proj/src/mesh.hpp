#pragma once

// Conforming triangle meshes of cracked polygonal domains. Cracks are
// resolved as duplicated node chains: every interior node of a crack exists
// twice (a left and a right copy with identical coordinates), so the two
// crack faces carry independent traces. Crack tips stay single.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace rshapes {

enum class EdgeKind : std::uint8_t {
    Outer = 0,      // outer or hole boundary
    CrackLeft = 1,  // crack face on the left of the crack direction
    CrackRight = 2,
};

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    EdgeKind kind = EdgeKind::Outer;
    int id = 0;  // Outer: loop index (outer loops then holes, domain order); cracks: crack index
};

struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // ccw
    std::vector<BoundaryEdge> boundary_edges;
    // Duplicated crack nodes: {left copy, right copy}. Coordinates of the two
    // copies are bit-identical. Tips are not listed (not duplicated).
    std::vector<std::array<int, 2>> crack_node_pairs;
    double target_h = 0.0;  // requested max edge length (0 = hand-built)
};

struct MeshingOptions {
    double target_h = 0.1;        // desired max edge length; clamped to diameter/4
    double min_angle_deg = 20.0;  // refinement quality floor
    // Angle floor actually enforced near crack tips and non-Lipschitz
    // corners, where the global floor is unattainable.
    double tip_angle_deg = 15.0;
    std::int64_t max_nodes = 2'000'000;
};

struct MeshQuality {
    double min_angle_deg = 0.0;       // over all triangles
    double max_edge = 0.0;
    double min_edge = 0.0;
    int below_floor = 0;              // triangles under min_angle_deg (allowed near tips)
    double total_area = 0.0;
};

struct MeshingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic constrained Delaunay triangulation + quality refinement +
// crack duplication. The domain must validate().
TriangleMesh triangulate(const PlanarDomain& domain, const MeshingOptions& opts);

// Uniform 4-way split by edge midpoints. Crack-face midpoints are duplicated
// in matching pairs, so nested refinements stay crack-conforming.
TriangleMesh refine(const TriangleMesh& mesh);

// Structural invariants: ccw triangles, interior edges shared by exactly two
// triangles, boundary edges by exactly one, crack pairs coordinate-identical.
// Returns a list of problems (empty = sound).
std::vector<std::string> mesh_soundness(const TriangleMesh& mesh);

MeshQuality mesh_quality(const TriangleMesh& mesh);

// Sum of boundary-edge lengths, counting both crack faces; the discrete
// version of the generalized perimeter.
double mesh_boundary_length(const TriangleMesh& mesh);
double mesh_area(const TriangleMesh& mesh);

TriangleMesh scale_mesh(const TriangleMesh& mesh, double t);
// Block concatenation; node/triangle indices of `b` shift by a.nodes.size().
TriangleMesh mesh_disjoint_union(const TriangleMesh& a, const TriangleMesh& b);

}  // namespace rshapes

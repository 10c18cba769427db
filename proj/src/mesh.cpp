#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace rshapes {

namespace {

double tri_area(const TriangleMesh& m, const std::array<int, 3>& t) {
    const Vec2& a = m.nodes[size_t(t[0])];
    const Vec2& b = m.nodes[size_t(t[1])];
    const Vec2& c = m.nodes[size_t(t[2])];
    return 0.5 * cross(b - a, c - a);
}

double angle_at(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 u = b - a, v = c - a;
    double d = dot(u, v) / (norm(u) * norm(v));
    d = std::min(1.0, std::max(-1.0, d));
    return std::acos(d);
}

}  // namespace

std::vector<std::string> mesh_soundness(const TriangleMesh& m) {
    std::vector<std::string> problems;
    auto complain = [&problems](const std::string& s) {
        if (problems.size() < 32) problems.push_back(s);
    };
    const int n = int(m.nodes.size());
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        const auto& t = m.triangles[ti];
        for (int v : t)
            if (v < 0 || v >= n) complain("triangle " + std::to_string(ti) + " node out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            complain("triangle " + std::to_string(ti) + " has repeated nodes");
        if (tri_area(m, t) <= 0.0) complain("triangle " + std::to_string(ti) + " is not ccw");
    }
    // Undirected edge -> incident triangle count.
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& t : m.triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[size_t(e)], b = t[size_t((e + 1) % 3)];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [edge, count] : edge_use) {
        if (count > 2)
            complain("edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second) +
                     " used by " + std::to_string(count) + " triangles");
    }
    std::map<std::pair<int, int>, int> bedge_count;
    for (const auto& be : m.boundary_edges) {
        if (be.a < 0 || be.a >= n || be.b < 0 || be.b >= n) {
            complain("boundary edge node out of range");
            continue;
        }
        auto key = std::make_pair(std::min(be.a, be.b), std::max(be.a, be.b));
        bedge_count[key]++;
        auto it = edge_use.find(key);
        if (it == edge_use.end())
            complain("boundary edge " + std::to_string(be.a) + "-" + std::to_string(be.b) +
                     " is not a triangle edge");
        else if (it->second != 1)
            complain("boundary edge " + std::to_string(be.a) + "-" + std::to_string(be.b) +
                     " is shared by " + std::to_string(it->second) + " triangles");
    }
    for (const auto& [key, cnt] : bedge_count)
        if (cnt > 1)
            complain("duplicate boundary edge " + std::to_string(key.first) + "-" +
                     std::to_string(key.second));
    for (const auto& [edge, count] : edge_use) {
        if (count == 1 && !bedge_count.count(edge))
            complain("border edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second) +
                     " is not tagged as boundary");
    }
    for (const auto& pr : m.crack_node_pairs) {
        if (pr[0] < 0 || pr[0] >= n || pr[1] < 0 || pr[1] >= n) {
            complain("crack pair node out of range");
            continue;
        }
        if (!(m.nodes[size_t(pr[0])] == m.nodes[size_t(pr[1])]))
            complain("crack pair " + std::to_string(pr[0]) + "/" + std::to_string(pr[1]) +
                     " coordinates differ");
        if (pr[0] == pr[1]) complain("crack pair maps a node to itself");
    }
    return problems;
}

MeshQuality mesh_quality(const TriangleMesh& m) {
    MeshQuality q;
    q.min_angle_deg = 180.0;
    q.min_edge = std::numeric_limits<double>::infinity();
    const double rad2deg = 180.0 / 3.14159265358979323846;
    for (const auto& t : m.triangles) {
        const Vec2& a = m.nodes[size_t(t[0])];
        const Vec2& b = m.nodes[size_t(t[1])];
        const Vec2& c = m.nodes[size_t(t[2])];
        double worst = std::min({angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)}) * rad2deg;
        q.min_angle_deg = std::min(q.min_angle_deg, worst);
        for (double e : {dist(a, b), dist(b, c), dist(c, a)}) {
            q.max_edge = std::max(q.max_edge, e);
            q.min_edge = std::min(q.min_edge, e);
        }
        q.total_area += tri_area(m, t);
    }
    if (m.triangles.empty()) {
        q.min_angle_deg = 0.0;
        q.min_edge = 0.0;
    }
    return q;
}

double mesh_boundary_length(const TriangleMesh& m) {
    double s = 0.0;
    for (const auto& be : m.boundary_edges) s += dist(m.nodes[size_t(be.a)], m.nodes[size_t(be.b)]);
    return s;
}

double mesh_area(const TriangleMesh& m) {
    double s = 0.0;
    for (const auto& t : m.triangles) s += tri_area(m, t);
    return s;
}

TriangleMesh scale_mesh(const TriangleMesh& m, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw MeshingError("scale_mesh: factor must be positive");
    TriangleMesh out = m;
    for (auto& v : out.nodes) v = v * t;
    out.target_h *= t;
    return out;
}

TriangleMesh mesh_disjoint_union(const TriangleMesh& a, const TriangleMesh& b) {
    TriangleMesh out = a;
    const int shift = int(a.nodes.size());
    out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
    for (const auto& t : b.triangles)
        out.triangles.push_back({t[0] + shift, t[1] + shift, t[2] + shift});
    for (const auto& be : b.boundary_edges)
        out.boundary_edges.push_back({be.a + shift, be.b + shift, be.kind, be.id});
    for (const auto& pr : b.crack_node_pairs)
        out.crack_node_pairs.push_back({pr[0] + shift, pr[1] + shift});
    out.target_h = std::max(a.target_h, b.target_h);
    return out;
}

TriangleMesh refine(const TriangleMesh& m) {
    TriangleMesh out;
    out.nodes = m.nodes;
    out.target_h = m.target_h / 2.0;
    // Midpoint per undirected node pair. The two faces of a crack use
    // different node copies, so each face gets its own midpoint; the copies'
    // coordinates being bit-identical makes the midpoints bit-identical too.
    std::map<std::pair<int, int>, int> midpoint;
    auto mid_of = [&](int a, int b) {
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Vec2& pa = m.nodes[size_t(a)];
        const Vec2& pb = m.nodes[size_t(b)];
        int idx = int(out.nodes.size());
        out.nodes.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
        midpoint.emplace(key, idx);
        return idx;
    };
    for (const auto& t : m.triangles) {
        int m01 = mid_of(t[0], t[1]);
        int m12 = mid_of(t[1], t[2]);
        int m20 = mid_of(t[2], t[0]);
        out.triangles.push_back({t[0], m01, m20});
        out.triangles.push_back({t[1], m12, m01});
        out.triangles.push_back({t[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
    }
    for (const auto& be : m.boundary_edges) {
        auto key = std::make_pair(std::min(be.a, be.b), std::max(be.a, be.b));
        auto it = midpoint.find(key);
        if (it == midpoint.end()) throw MeshingError("refine: boundary edge is not a triangle edge");
        out.boundary_edges.push_back({be.a, it->second, be.kind, be.id});
        out.boundary_edges.push_back({it->second, be.b, be.kind, be.id});
    }
    out.crack_node_pairs = m.crack_node_pairs;
    // Pair up the new crack-face midpoints: map a left-face edge through the
    // node pairing (tips map to themselves) to find its right-face twin.
    std::map<int, int> left_to_right;
    for (const auto& pr : m.crack_node_pairs) left_to_right.emplace(pr[0], pr[1]);
    auto image = [&left_to_right](int v) {
        auto it = left_to_right.find(v);
        return it == left_to_right.end() ? v : it->second;
    };
    for (const auto& be : m.boundary_edges) {
        if (be.kind != EdgeKind::CrackLeft) continue;
        int ra = image(be.a), rb = image(be.b);
        auto lkey = std::make_pair(std::min(be.a, be.b), std::max(be.a, be.b));
        auto rkey = std::make_pair(std::min(ra, rb), std::max(ra, rb));
        auto lit = midpoint.find(lkey);
        auto rit = midpoint.find(rkey);
        if (lit == midpoint.end() || rit == midpoint.end())
            throw MeshingError("refine: crack face edge lost its midpoint");
        out.crack_node_pairs.push_back({lit->second, rit->second});
    }
    return out;
}

}  // namespace rshapes

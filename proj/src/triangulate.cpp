// Deterministic triangulation of cracked polygonal domains.
//
// Pipeline: subdivide boundary/crack segments to the target length ->
// incremental Delaunay of the points -> recover constraint segments by edge
// flips -> legalize -> Ruppert-style quality refinement (segment walls
// honored) -> discard exterior triangles -> duplicate crack-interior nodes.
//
// All loops run in index order and every container is deterministically
// ordered, so a (domain, options) pair always produces the same mesh.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "mesh.hpp"

namespace rshapes {

namespace {

constexpr int kNone = -1;

enum class SegKind : std::uint8_t { Loop, Crack };

struct SegmentRec {
    int u = 0, v = 0;  // oriented: domain on the left (loops), chain direction (cracks)
    SegKind kind = SegKind::Loop;
    int id = 0;  // loop index or crack index
};

using EdgeKey = std::pair<int, int>;
EdgeKey key_of(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct Tri {
    std::array<int, 3> v{};       // ccw
    std::array<int, 3> adj{};     // adj[i] is across the edge opposite v[i]
    bool alive = true;
};

std::string near_msg(const char* what, const Vec2& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s near (%.6g, %.6g)", what, p.x, p.y);
    return buf;
}

struct Kernel {
    std::vector<Vec2> pts;  // [0..2] are the enclosing super-triangle corners
    std::vector<Tri> tris;
    std::vector<int> vert2tri;
    std::map<EdgeKey, SegmentRec> constraints;
    double scale = 1.0;
    std::int64_t max_nodes = 2'000'000;

    double eps2() const { return 1e-13 * scale * scale; }

    static double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
        return cross(b - a, c - a);
    }

    // p strictly inside the circumcircle of ccw (a, b, c).
    bool in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) const {
        const double ax = a.x - p.x, ay = a.y - p.y;
        const double bx = b.x - p.x, by = b.y - p.y;
        const double cx = c.x - p.x, cy = c.y - p.y;
        const double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                           (bx * bx + by * by) * (ax * cy - ay * cx) +
                           (cx * cx + cy * cy) * (ax * by - ay * bx);
        return det > 1e-13 * scale * scale * scale * scale;
    }

    int add_point(const Vec2& p) {
        if (std::int64_t(pts.size()) - 3 >= max_nodes)
            throw MeshingError("node budget exceeded: target size too small for the budget");
        pts.push_back(p);
        vert2tri.push_back(kNone);
        return int(pts.size()) - 1;
    }

    int make_tri(int a, int b, int c, int na, int nb, int nc) {
        tris.push_back({{a, b, c}, {na, nb, nc}, true});
        int id = int(tris.size()) - 1;
        vert2tri[size_t(a)] = vert2tri[size_t(b)] = vert2tri[size_t(c)] = id;
        return id;
    }

    int local_index(int t, int v) const {
        for (int i = 0; i < 3; ++i)
            if (tris[size_t(t)].v[size_t(i)] == v) return i;
        return kNone;
    }

    void init_super(const Vec2& lo, const Vec2& hi) {
        const Vec2 c{(lo.x + hi.x) / 2, (lo.y + hi.y) / 2};
        const double R = std::max({hi.x - lo.x, hi.y - lo.y, scale * 1e-3});
        pts.assign({Vec2{c.x - 16 * R, c.y - 10 * R}, Vec2{c.x + 16 * R, c.y - 10 * R},
                    Vec2{c.x, c.y + 16 * R}});
        vert2tri.assign(3, 0);
        tris.clear();
        tris.push_back({{0, 1, 2}, {kNone, kNone, kNone}, true});
    }

    bool contains(int t, const Vec2& p) const {
        const Tri& T = tris[size_t(t)];
        for (int i = 0; i < 3; ++i)
            if (orient(pts[size_t(T.v[size_t(i)])], pts[size_t(T.v[size_t((i + 1) % 3)])], p) <
                -eps2())
                return false;
        return true;
    }

    // Blind orientation walk; used before any constraints exist.
    int locate(const Vec2& p, int hint) const {
        int t = (hint >= 0 && hint < int(tris.size()) && tris[size_t(hint)].alive) ? hint : kNone;
        if (t == kNone)
            for (int i = int(tris.size()) - 1; i >= 0; --i)
                if (tris[size_t(i)].alive) {
                    t = i;
                    break;
                }
        std::int64_t steps = 4 * std::int64_t(tris.size()) + 64;
        while (t != kNone && steps-- > 0) {
            const Tri& T = tris[size_t(t)];
            int move = kNone;
            for (int i = 0; i < 3; ++i) {
                const Vec2& a = pts[size_t(T.v[size_t(i)])];
                const Vec2& b = pts[size_t(T.v[size_t((i + 1) % 3)])];
                if (orient(a, b, p) < -eps2()) {
                    move = T.adj[size_t((i + 2) % 3)];
                    break;
                }
            }
            if (move == kNone) return t;
            t = move;
        }
        for (int i = 0; i < int(tris.size()); ++i)  // robust fallback
            if (tris[size_t(i)].alive && contains(i, p)) return i;
        throw MeshingError(near_msg("point location failed", p));
    }

    // Bowyer-Watson insertion of pts[ip] into the triangle t0 that contains
    // it. Constrained edges act as cavity walls when honor_walls is set.
    // Returns the new triangle ids, or empty (nothing changed) when the point
    // sits too close to an existing vertex or the cavity degenerates.
    std::vector<int> insert_point(int ip, int t0, bool honor_walls) {
        const Vec2 p = pts[size_t(ip)];
        std::vector<int> cav;
        std::set<int> in_cav{t0};
        std::deque<int> q{t0};
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            cav.push_back(t);
            for (int i = 0; i < 3; ++i) {
                int n = tris[size_t(t)].adj[size_t(i)];
                if (n == kNone || in_cav.count(n)) continue;
                int ea = tris[size_t(t)].v[size_t((i + 1) % 3)];
                int eb = tris[size_t(t)].v[size_t((i + 2) % 3)];
                if (honor_walls && constraints.count(key_of(ea, eb))) continue;
                const Tri& N = tris[size_t(n)];
                if (in_circle(pts[size_t(N.v[0])], pts[size_t(N.v[1])], pts[size_t(N.v[2])], p)) {
                    in_cav.insert(n);
                    q.push_back(n);
                }
            }
        }
        struct BEdge {
            int a, b, outer, from;
        };
        std::vector<BEdge> ring;
        for (int t : cav)
            for (int i = 0; i < 3; ++i) {
                int n = tris[size_t(t)].adj[size_t(i)];
                if (n != kNone && in_cav.count(n)) continue;
                ring.push_back({tris[size_t(t)].v[size_t((i + 1) % 3)],
                                tris[size_t(t)].v[size_t((i + 2) % 3)], n, t});
            }
        for (const BEdge& e : ring) {
            if (dist(p, pts[size_t(e.a)]) < 1e-10 * scale) return {};
            if (orient(p, pts[size_t(e.a)], pts[size_t(e.b)]) <= eps2()) return {};
        }
        std::map<int, int> fan_by_start, fan_by_end;
        std::vector<int> created;
        for (const BEdge& e : ring) {
            int id = make_tri(ip, e.a, e.b, e.outer, kNone, kNone);
            fan_by_start[e.a] = id;
            fan_by_end[e.b] = id;
            created.push_back(id);
            if (e.outer != kNone) {  // point the outside neighbor back at the fan
                for (int j = 0; j < 3; ++j)
                    if (tris[size_t(e.outer)].adj[size_t(j)] == e.from)
                        tris[size_t(e.outer)].adj[size_t(j)] = id;
            }
        }
        for (size_t k = 0; k < ring.size(); ++k) {
            Tri& T = tris[size_t(created[k])];
            T.adj[1] = fan_by_start.at(ring[k].b);  // across (ip, b)
            T.adj[2] = fan_by_end.at(ring[k].a);    // across (a, ip)
        }
        for (int t : cav) tris[size_t(t)].alive = false;
        return created;
    }

    // Visits every alive triangle incident to v (closed star; everything is
    // inside the super-triangle hull).
    template <class F>
    void walk_star(int v, F&& fn) const {
        int t0 = vert2tri[size_t(v)];
        if (t0 == kNone || !tris[size_t(t0)].alive || local_index(t0, v) == kNone) {
            t0 = kNone;
            for (int i = int(tris.size()) - 1; i >= 0 && t0 == kNone; --i)
                if (tris[size_t(i)].alive && local_index(i, v) != kNone) t0 = i;
            if (t0 == kNone) throw MeshingError("mesh connectivity lost at a vertex");
        }
        int t = t0;
        std::int64_t guard = std::int64_t(tris.size()) + 8;
        do {
            fn(t);
            int i = local_index(t, v);
            t = tris[size_t(t)].adj[size_t((i + 2) % 3)];
            if (t == kNone) throw MeshingError("open vertex star");
        } while (t != t0 && guard-- > 0);
        if (guard <= 0) throw MeshingError("vertex star walk did not close");
    }

    // The two alive triangles sharing undirected edge (a, b); second = kNone
    // when only one side exists.
    std::pair<int, int> edge_tris(int a, int b) const {
        std::pair<int, int> out{kNone, kNone};
        walk_star(a, [&](int t) {
            if (local_index(t, b) == kNone) return;
            if (out.first == kNone)
                out.first = t;
            else if (t != out.first && out.second == kNone)
                out.second = t;
        });
        return out;
    }

    bool edge_exists(int a, int b) const { return edge_tris(a, b).first != kNone; }

    // Flips the shared edge (u, w); returns the new edge (x, y) or kNone pair
    // when the surrounding quad is not strictly convex.
    std::pair<int, int> flip(int t1, int t2) {
        int i1 = kNone;
        for (int i = 0; i < 3; ++i)
            if (tris[size_t(t1)].adj[size_t(i)] == t2) i1 = i;
        int i2 = kNone;
        for (int i = 0; i < 3; ++i)
            if (tris[size_t(t2)].adj[size_t(i)] == t1) i2 = i;
        if (i1 == kNone || i2 == kNone) return {kNone, kNone};
        int x = tris[size_t(t1)].v[size_t(i1)];
        int u = tris[size_t(t1)].v[size_t((i1 + 1) % 3)];
        int w = tris[size_t(t1)].v[size_t((i1 + 2) % 3)];
        int y = tris[size_t(t2)].v[size_t(i2)];
        if (orient(pts[size_t(x)], pts[size_t(u)], pts[size_t(y)]) <= eps2()) return {kNone, kNone};
        if (orient(pts[size_t(y)], pts[size_t(w)], pts[size_t(x)]) <= eps2()) return {kNone, kNone};
        int A = tris[size_t(t1)].adj[size_t((i1 + 1) % 3)];  // across (w, x)
        int B = tris[size_t(t1)].adj[size_t((i1 + 2) % 3)];  // across (x, u)
        int C = tris[size_t(t2)].adj[size_t((i2 + 1) % 3)];  // across (u, y)
        int D = tris[size_t(t2)].adj[size_t((i2 + 2) % 3)];  // across (y, w)
        tris[size_t(t1)] = {{x, u, y}, {C, t2, B}, true};
        tris[size_t(t2)] = {{y, w, x}, {A, t1, D}, true};
        auto relink = [&](int n, int old_t, int new_t) {
            if (n == kNone) return;
            for (int j = 0; j < 3; ++j)
                if (tris[size_t(n)].adj[size_t(j)] == old_t) tris[size_t(n)].adj[size_t(j)] = new_t;
        };
        relink(A, t1, t2);
        relink(B, t1, t1);
        relink(C, t2, t1);
        relink(D, t2, t2);
        vert2tri[size_t(x)] = vert2tri[size_t(u)] = vert2tri[size_t(y)] = t1;
        vert2tri[size_t(w)] = t2;
        return {x, y};
    }

    bool crosses(int a, int b, int p, int q) const {
        const Vec2 &A = pts[size_t(a)], &B = pts[size_t(b)];
        const Vec2 &P = pts[size_t(p)], &Q = pts[size_t(q)];
        if (orient(A, B, P) * orient(A, B, Q) >= 0) return false;
        return orient(P, Q, A) * orient(P, Q, B) < 0;
    }

    void recover_segment(int a, int b) {
        std::int64_t guard = 2000 + 8 * std::int64_t(tris.size());
        while (!edge_exists(a, b)) {
            if (guard-- <= 0)
                throw MeshingError(near_msg("constraint recovery failed", pts[size_t(a)]));
            // first edge crossed by a->b, found in a's star
            int cu = kNone, cw = kNone;
            walk_star(a, [&](int t) {
                if (cu != kNone) return;
                int i = local_index(t, a);
                int p = tris[size_t(t)].v[size_t((i + 1) % 3)];
                int q = tris[size_t(t)].v[size_t((i + 2) % 3)];
                if (crosses(a, b, p, q)) {
                    cu = p;
                    cw = q;
                }
            });
            if (cu == kNone)
                throw MeshingError(near_msg("constraint recovery failed", pts[size_t(a)]));
            std::deque<EdgeKey> xing{key_of(cu, cw)};
            while (!xing.empty() && !edge_exists(a, b)) {
                if (guard-- <= 0)
                    throw MeshingError(near_msg("constraint recovery failed", pts[size_t(a)]));
                auto [u, w] = xing.front();
                xing.pop_front();
                auto [t1, t2] = edge_tris(u, w);
                if (t1 == kNone || t2 == kNone) continue;
                if (!crosses(a, b, u, w)) continue;
                if (constraints.count(key_of(u, w)))
                    throw MeshingError(near_msg("constraints cross", pts[size_t(u)]));
                auto [x, y] = flip(t1, t2);
                if (x == kNone) {
                    xing.push_back(key_of(u, w));  // not convex yet; retry later
                    continue;
                }
                if (crosses(a, b, x, y)) xing.push_back(key_of(x, y));
            }
        }
    }

    // Lawson pass restoring the (constrained) Delaunay property.
    void legalize_all() {
        std::deque<EdgeKey> q;
        std::set<EdgeKey> seen;
        for (const Tri& t : tris) {
            if (!t.alive) continue;
            for (int i = 0; i < 3; ++i) {
                EdgeKey k = key_of(t.v[size_t(i)], t.v[size_t((i + 1) % 3)]);
                if (seen.insert(k).second) q.push_back(k);
            }
        }
        std::int64_t guard = 80 * std::int64_t(tris.size()) + 4000;
        while (!q.empty() && guard-- > 0) {
            auto [u, w] = q.front();
            q.pop_front();
            if (constraints.count(key_of(u, w))) continue;
            auto [t1, t2] = edge_tris_safe(u, w);
            if (t1 == kNone || t2 == kNone) continue;
            int i1 = kNone;
            for (int i = 0; i < 3; ++i)
                if (tris[size_t(t1)].adj[size_t(i)] == t2) i1 = i;
            if (i1 == kNone) continue;
            int y = kNone;
            for (int i = 0; i < 3; ++i)
                if (tris[size_t(t2)].adj[size_t(i)] == t1) y = tris[size_t(t2)].v[size_t(i)];
            const Tri& T1 = tris[size_t(t1)];
            if (!in_circle(pts[size_t(T1.v[0])], pts[size_t(T1.v[1])], pts[size_t(T1.v[2])],
                           pts[size_t(y)]))
                continue;
            auto [x2, y2] = flip(t1, t2);
            if (x2 == kNone) continue;
            int quad[4] = {u, w, x2, y2};
            for (int s = 0; s < 4; ++s)
                for (int e = s + 1; e < 4; ++e) {
                    EdgeKey k = key_of(quad[s], quad[e]);
                    if (k != key_of(x2, y2)) q.push_back(k);
                }
        }
    }

    // edge_tris but returns {kNone, kNone} instead of throwing when the edge
    // is gone (legalization queues hold stale keys).
    std::pair<int, int> edge_tris_safe(int a, int b) const {
        std::pair<int, int> out{kNone, kNone};
        if (a >= int(pts.size()) || b >= int(pts.size())) return out;
        try {
            out = edge_tris(a, b);
        } catch (const MeshingError&) {
            return {kNone, kNone};
        }
        if (out.first != kNone && local_index(out.first, b) == kNone) return {kNone, kNone};
        return out;
    }
};

// -- region classification -------------------------------------------------

int classify_point(const PlanarDomain& dom, const Vec2& c) {
    for (int i = 0; i < int(dom.components.size()); ++i) {
        const PolygonComponent& comp = dom.components[size_t(i)];
        if (!point_in_loop(c, comp.outer)) continue;
        bool in_hole = false;
        for (const Loop& h : comp.holes)
            if (point_in_loop(c, h)) {
                in_hole = true;
                break;
            }
        if (!in_hole) return i;
    }
    return -1;
}

struct RegionCache {
    const PlanarDomain* dom = nullptr;
    const Kernel* K = nullptr;
    std::vector<int> cache;  // -2 unknown, -1 outside, >=0 component

    int of(int t) {
        if (int(cache.size()) < int(K->tris.size())) cache.resize(K->tris.size(), -2);
        int& r = cache[size_t(t)];
        if (r != -2) return r;
        const Tri& T = K->tris[size_t(t)];
        if (T.v[0] < 3 || T.v[1] < 3 || T.v[2] < 3) return r = -1;  // touches super corner
        Vec2 c = (K->pts[size_t(T.v[0])] + K->pts[size_t(T.v[1])] + K->pts[size_t(T.v[2])]) *
                 (1.0 / 3.0);
        return r = classify_point(*dom, c);
    }
};

// -- Ruppert-style refinement ------------------------------------------------

struct Refiner {
    Kernel& K;
    RegionCache& region;
    double h;
    double min_angle_deg;
    double tip_angle_deg;
    const std::set<int>& tip_nodes;

    std::deque<std::pair<EdgeKey, bool>> seg_q;  // bool = forced split
    std::deque<int> tri_q;
    std::set<int> skip;

    bool encroached_by(const SegmentRec& s, const Vec2& p) const {
        const Vec2& a = K.pts[size_t(s.u)];
        const Vec2& b = K.pts[size_t(s.v)];
        return dot(a - p, b - p) < -K.eps2();
    }

    bool apex_encroached(const SegmentRec& s) const {
        auto [t1, t2] = K.edge_tris_safe(s.u, s.v);
        for (int t : {t1, t2}) {
            if (t == kNone) continue;
            for (int i = 0; i < 3; ++i) {
                int v = K.tris[size_t(t)].v[size_t(i)];
                if (v != s.u && v != s.v && encroached_by(s, K.pts[size_t(v)])) return true;
            }
        }
        return false;
    }

    struct TriShape {
        double min_angle_deg = 180.0;
        double max_edge = 0.0;
    };

    TriShape shape_of(int t) const {
        const Tri& T = K.tris[size_t(t)];
        double l[3];
        for (int i = 0; i < 3; ++i)
            l[i] = dist(K.pts[size_t(T.v[size_t((i + 1) % 3)])],
                        K.pts[size_t(T.v[size_t((i + 2) % 3)])]);
        TriShape s;
        s.max_edge = std::max({l[0], l[1], l[2]});
        for (int i = 0; i < 3; ++i) {
            double a = l[(i + 1) % 3], b = l[(i + 2) % 3], c = l[i];
            double cosv = std::clamp((a * a + b * b - c * c) / (2 * a * b), -1.0, 1.0);
            s.min_angle_deg = std::min(s.min_angle_deg, std::acos(cosv) * 180.0 / M_PI);
        }
        return s;
    }

    bool tip_adjacent(int t) const {
        for (int i = 0; i < 3; ++i)
            if (tip_nodes.count(K.tris[size_t(t)].v[size_t(i)])) return true;
        return false;
    }

    bool is_bad(int t) const {
        if (skip.count(t)) return false;
        TriShape s = shape_of(t);
        if (s.max_edge > h * (1 + 1e-9)) return true;
        double floor_deg = tip_adjacent(t) ? tip_angle_deg : min_angle_deg;
        return s.min_angle_deg < floor_deg - 1e-12;
    }

    void enqueue_new(const std::vector<int>& created) {
        for (int t : created)
            if (region.of(t) >= 0 && is_bad(t)) tri_q.push_back(t);
    }

    void vertex_encroach_scan(const Vec2& p, const EdgeKey& skip_a, const EdgeKey& skip_b) {
        for (const auto& [k, rec] : K.constraints)
            if (k != skip_a && k != skip_b && encroached_by(rec, p)) seg_q.push_back({k, false});
    }

    void split_segment(const EdgeKey& key) {
        auto it = K.constraints.find(key);
        if (it == K.constraints.end()) return;  // already split
        SegmentRec rec = it->second;
        const Vec2 m = (K.pts[size_t(rec.u)] + K.pts[size_t(rec.v)]) * 0.5;
        auto [t1, t2] = K.edge_tris_safe(rec.u, rec.v);
        if (t1 == kNone) throw MeshingError(near_msg("lost constraint edge", m));
        K.constraints.erase(it);
        int ip = K.add_point(m);
        std::vector<int> created = K.insert_point(ip, t1, true);
        if (created.empty()) throw MeshingError(near_msg("meshing failure", m));
        K.constraints[key_of(rec.u, ip)] = {rec.u, ip, rec.kind, rec.id};
        K.constraints[key_of(ip, rec.v)] = {ip, rec.v, rec.kind, rec.id};
        for (const EdgeKey& hk : {key_of(rec.u, ip), key_of(ip, rec.v)})
            if (apex_encroached(K.constraints.at(hk))) seg_q.push_back({hk, false});
        vertex_encroach_scan(m, key_of(rec.u, ip), key_of(ip, rec.v));
        enqueue_new(created);
    }

    // Walk from triangle t toward c; returns the containing triangle or sets
    // `blocked` to the constrained edge in the way.
    int walk_to(int t, const Vec2& c, EdgeKey* blocked) {
        std::int64_t steps = 4 * std::int64_t(K.tris.size()) + 64;
        while (steps-- > 0) {
            if (K.contains(t, c)) return t;
            const Tri& T = K.tris[size_t(t)];
            int move = kNone, ea = kNone, eb = kNone;
            for (int i = 0; i < 3; ++i) {
                const Vec2& a = K.pts[size_t(T.v[size_t(i)])];
                const Vec2& b = K.pts[size_t(T.v[size_t((i + 1) % 3)])];
                if (Kernel::orient(a, b, c) < -K.eps2()) {
                    move = T.adj[size_t((i + 2) % 3)];
                    ea = T.v[size_t(i)];
                    eb = T.v[size_t((i + 1) % 3)];
                    break;
                }
            }
            if (move == kNone) return t;
            if (K.constraints.count(key_of(ea, eb))) {
                *blocked = key_of(ea, eb);
                return kNone;
            }
            t = move;
        }
        return kNone;  // walk failed; caller skips the triangle
    }

    void process_triangle(int t) {
        if (!K.tris[size_t(t)].alive || region.of(t) < 0 || !is_bad(t)) return;
        const Tri& T = K.tris[size_t(t)];
        const Vec2 &a = K.pts[size_t(T.v[0])], &b = K.pts[size_t(T.v[1])],
                   &c = K.pts[size_t(T.v[2])];
        const double d = 2.0 * cross(b - a, c - a);
        if (std::abs(d) < K.eps2()) {
            skip.insert(t);
            return;
        }
        const double la = dot(a, a), lb = dot(b, b), lc = dot(c, c);
        Vec2 cc{(la * (b.y - c.y) + lb * (c.y - a.y) + lc * (a.y - b.y)) / d,
                (la * (c.x - b.x) + lb * (a.x - c.x) + lc * (b.x - a.x)) / d};

        bool any_split = false;
        for (const auto& [k, rec] : K.constraints)
            if (encroached_by(rec, cc)) {
                seg_q.push_back({k, true});
                any_split = true;
            }
        if (any_split) {
            tri_q.push_back(t);  // revisit once the segments are split
            return;
        }
        EdgeKey blocked{kNone, kNone};
        int tc = walk_to(t, cc, &blocked);
        if (tc == kNone) {
            if (blocked.first != kNone) {
                seg_q.push_back({blocked, true});
                tri_q.push_back(t);
            } else {
                skip.insert(t);
            }
            return;
        }
        int ip = K.add_point(cc);
        std::vector<int> created = K.insert_point(ip, tc, true);
        if (created.empty()) {
            K.pts.pop_back();  // too close to an existing vertex; give up on t
            K.vert2tri.pop_back();
            skip.insert(t);
            return;
        }
        vertex_encroach_scan(cc, {kNone, kNone}, {kNone, kNone});
        enqueue_new(created);
        // the cavity almost always swallows t; requeue it if it survived
        if (K.tris[size_t(t)].alive && region.of(t) >= 0 && is_bad(t)) tri_q.push_back(t);
    }

    void run() {
        for (const auto& [k, rec] : K.constraints)
            if (apex_encroached(rec)) seg_q.push_back({k, false});
        for (int t = 0; t < int(K.tris.size()); ++t)
            if (K.tris[size_t(t)].alive && region.of(t) >= 0 && is_bad(t)) tri_q.push_back(t);

        while (!seg_q.empty() || !tri_q.empty()) {
            if (!seg_q.empty()) {
                auto [key, force] = seg_q.front();
                seg_q.pop_front();
                auto it = K.constraints.find(key);
                if (it == K.constraints.end()) continue;
                if (!force && !apex_encroached(it->second)) continue;
                split_segment(key);
            } else {
                int t = tri_q.front();
                tri_q.pop_front();
                process_triangle(t);
            }
        }
    }
};

// -- PSLG construction -------------------------------------------------------

struct Pslg {
    std::vector<Vec2> points;
    std::vector<SegmentRec> segments;  // indices into `points`
    std::vector<std::array<int, 2>> crack_tips;  // per crack: {front, back} point index
};

int subdivide_count(double len, double h) {
    return std::max(1, int(std::ceil(len / h - 1e-12)));
}

Pslg build_pslg(const PlanarDomain& dom, double h) {
    Pslg out;
    auto add_pt = [&](const Vec2& p) {
        out.points.push_back(p);
        return int(out.points.size()) - 1;
    };
    int loop_id = 0;
    for (const PolygonComponent& comp : dom.components) {
        std::vector<const Loop*> loops{&comp.outer};
        for (const Loop& hole : comp.holes) loops.push_back(&hole);
        for (const Loop* lp : loops) {
            const Loop& loop = *lp;
            std::vector<int> corner(loop.size());
            for (size_t i = 0; i < loop.size(); ++i) corner[i] = add_pt(loop[i]);
            for (size_t i = 0; i < loop.size(); ++i) {
                const Vec2& a = loop[i];
                const Vec2& b = loop[(i + 1) % loop.size()];
                const int n = subdivide_count(dist(a, b), h);
                int prev = corner[i];
                for (int j = 1; j < n; ++j) {
                    int pj = add_pt(a + (b - a) * (double(j) / n));
                    out.segments.push_back({prev, pj, SegKind::Loop, loop_id});
                    prev = pj;
                }
                out.segments.push_back({prev, corner[(i + 1) % loop.size()], SegKind::Loop, loop_id});
            }
            ++loop_id;
        }
    }
    for (int ci = 0; ci < int(dom.cracks.size()); ++ci) {
        const Polyline& pl = dom.cracks[size_t(ci)].points;
        int front = add_pt(pl.front());
        int prev = front;
        for (size_t i = 0; i + 1 < pl.size(); ++i) {
            const Vec2& a = pl[i];
            const Vec2& b = pl[i + 1];
            int n = subdivide_count(dist(a, b), h);
            // a crack needs at least one interior (duplicable) node
            if (pl.size() == 2 && n == 1) n = 2;
            for (int j = 1; j < n; ++j) {
                int pj = add_pt(a + (b - a) * (double(j) / n));
                out.segments.push_back({prev, pj, SegKind::Crack, ci});
                prev = pj;
            }
            int end = add_pt(b);
            out.segments.push_back({prev, end, SegKind::Crack, ci});
            prev = end;
        }
        out.crack_tips.push_back({front, prev});
    }
    return out;
}

// -- crack duplication --------------------------------------------------------

// Splits the node-triangle incidence along each crack polyline: every
// interior chain node gets a bit-identical twin, and the triangle fan on the
// right of the chain direction is rewired to the twin.
void duplicate_cracks(TriangleMesh& mesh, int crack_count,
                      const std::vector<std::vector<std::array<int, 2>>>& chains_by_crack) {
    for (int ci = 0; ci < crack_count; ++ci) {
        const auto& edges = chains_by_crack[size_t(ci)];
        if (edges.empty()) throw MeshingError("crack lost during meshing");
        // order the sub-edges into a chain (they are oriented tip -> tip)
        std::map<int, std::array<int, 2>> by_start;
        std::set<int> starts, ends;
        for (const auto& e : edges) {
            by_start[e[0]] = e;
            starts.insert(e[0]);
            ends.insert(e[1]);
        }
        int head = kNone;
        for (int s : starts)
            if (!ends.count(s)) head = s;
        if (head == kNone) throw MeshingError("crack chain is not a simple path");
        std::vector<int> chain{head};
        while (by_start.count(chain.back())) chain.push_back(by_start.at(chain.back())[1]);
        if (chain.size() != edges.size() + 1)
            throw MeshingError("crack chain is not a simple path");

        std::map<int, int> twin;  // original (left) -> right copy
        for (size_t k = 1; k + 1 < chain.size(); ++k) {
            const int p = chain[k];
            const int prev = chain[k - 1], next = chain[k + 1];
            std::set<int> chain_neighbors{prev, next};
            if (twin.count(prev)) chain_neighbors.insert(twin.at(prev));

            std::vector<int> incident;
            for (int t = 0; t < int(mesh.triangles.size()); ++t)
                for (int i = 0; i < 3; ++i)
                    if (mesh.triangles[size_t(t)][size_t(i)] == p) incident.push_back(t);
            // partition the star into the two fans separated by the crack
            std::map<EdgeKey, std::vector<int>> tris_by_edge;
            for (int t : incident)
                for (int i = 0; i < 3; ++i) {
                    int v = mesh.triangles[size_t(t)][size_t(i)];
                    if (v != p && !chain_neighbors.count(v))
                        tris_by_edge[key_of(p, v)].push_back(t);
                }
            std::map<int, int> comp;
            int ncomp = 0;
            for (int t : incident)
                if (!comp.count(t)) {
                    std::deque<int> q{t};
                    comp[t] = ncomp;
                    while (!q.empty()) {
                        int cur = q.front();
                        q.pop_front();
                        for (int i = 0; i < 3; ++i) {
                            int v = mesh.triangles[size_t(cur)][size_t(i)];
                            if (v == p || chain_neighbors.count(v)) continue;
                            for (int other : tris_by_edge[key_of(p, v)])
                                if (!comp.count(other)) {
                                    comp[other] = ncomp;
                                    q.push_back(other);
                                }
                        }
                    }
                    ++ncomp;
                }
            if (ncomp != 2) throw MeshingError("crack star does not split into two fans");

            // A ccw triangle lies left of every directed edge in its vertex
            // cycle, so fan side = whether the chain edge appears forward
            // (prev->p, p->next) or reversed in the triangle's cycle.
            std::array<int, 2> side{0, 0};  // +1 left, -1 right
            const int prev_r = twin.count(prev) ? twin.at(prev) : prev;
            for (int t : incident) {
                const auto& tv = mesh.triangles[size_t(t)];
                for (int i = 0; i < 3; ++i) {
                    int va = tv[size_t(i)], vb = tv[size_t((i + 1) % 3)];
                    int s = 0;
                    if ((va == prev || va == prev_r) && vb == p) s = +1;  // prev->p forward
                    if (va == p && vb == next) s = +1;                    // p->next forward
                    if (va == p && (vb == prev || vb == prev_r)) s = -1;
                    if (va == next && vb == p) s = -1;
                    if (s != 0) side[size_t(comp.at(t))] = s;
                }
            }
            if (side[0] == 0 || side[1] == 0 || side[0] == side[1])
                throw MeshingError("could not orient crack fans");

            const int right_comp = side[0] < 0 ? 0 : 1;
            const int p_right = int(mesh.nodes.size());
            mesh.nodes.push_back(mesh.nodes[size_t(p)]);  // bit-identical copy
            for (int t : incident)
                if (comp.at(t) == right_comp)
                    for (int i = 0; i < 3; ++i)
                        if (mesh.triangles[size_t(t)][size_t(i)] == p)
                            mesh.triangles[size_t(t)][size_t(i)] = p_right;
            twin[p] = p_right;
            mesh.crack_node_pairs.push_back({p, p_right});
        }
        for (size_t k = 0; k + 1 < chain.size(); ++k) {
            int a = chain[k], b = chain[k + 1];
            int ra = twin.count(a) ? twin.at(a) : a;
            int rb = twin.count(b) ? twin.at(b) : b;
            mesh.boundary_edges.push_back({a, b, EdgeKind::CrackLeft, ci});
            mesh.boundary_edges.push_back({ra, rb, EdgeKind::CrackRight, ci});
        }
    }
}

}  // namespace

TriangleMesh triangulate(const PlanarDomain& domain, const MeshingOptions& opts) {
    ValidationReport rep = validate(domain);
    if (!rep.ok()) throw GeometryError("triangulate: invalid domain: " + rep.summary());
    if (!(opts.target_h > 0.0) || !std::isfinite(opts.target_h))
        throw MeshingError("triangulate: target size must be positive");
    const double diam = diameter(domain);
    const double h = std::min(opts.target_h, diam / 4.0);

    Pslg pslg = build_pslg(domain, h);

    Kernel K;
    K.scale = diam;
    K.max_nodes = opts.max_nodes;
    BoundingBox bb = bounding_box(domain);
    K.init_super(bb.lo, bb.hi);

    std::vector<int> kidx(pslg.points.size());
    int hint = 0;
    for (size_t i = 0; i < pslg.points.size(); ++i) {
        int ip = K.add_point(pslg.points[i]);
        std::vector<int> created = K.insert_point(ip, K.locate(pslg.points[i], hint), false);
        if (created.empty())
            throw MeshingError(near_msg("duplicate or near-duplicate input point",
                                        pslg.points[i]));
        hint = created.front();
        kidx[i] = ip;
    }
    for (const SegmentRec& s : pslg.segments) {
        int a = kidx[size_t(s.u)], b = kidx[size_t(s.v)];
        K.recover_segment(a, b);
        K.constraints[key_of(a, b)] = {a, b, s.kind, s.id};
    }
    K.legalize_all();

    RegionCache region;
    region.dom = &domain;
    region.K = &K;

    std::set<int> tip_nodes;
    for (const auto& tp : pslg.crack_tips) {
        tip_nodes.insert(kidx[size_t(tp[0])]);
        tip_nodes.insert(kidx[size_t(tp[1])]);
    }
    Refiner refiner{K, region, h, opts.min_angle_deg, opts.tip_angle_deg, tip_nodes,
                    {},  {},     {}};
    refiner.run();

    // -- extraction: interior triangles only, nodes renumbered in point order
    std::vector<char> used(K.pts.size(), 0);
    std::vector<int> keep;
    for (int t = 0; t < int(K.tris.size()); ++t) {
        if (!K.tris[size_t(t)].alive || region.of(t) < 0) continue;
        keep.push_back(t);
        for (int i = 0; i < 3; ++i) used[size_t(K.tris[size_t(t)].v[size_t(i)])] = 1;
    }
    if (keep.empty()) throw MeshingError("triangulate: empty mesh (degenerate domain)");
    std::vector<int> remap(K.pts.size(), kNone);
    TriangleMesh out;
    out.target_h = h;
    for (size_t i = 3; i < K.pts.size(); ++i)
        if (used[i]) {
            remap[i] = int(out.nodes.size());
            out.nodes.push_back(K.pts[i]);
        }
    for (int t : keep) {
        const Tri& T = K.tris[size_t(t)];
        out.triangles.push_back({remap[size_t(T.v[0])], remap[size_t(T.v[1])],
                                 remap[size_t(T.v[2])]});
    }
    std::vector<std::vector<std::array<int, 2>>> chains(domain.cracks.size());
    for (const auto& [key, rec] : K.constraints) {
        int a = remap[size_t(rec.u)], b = remap[size_t(rec.v)];
        if (a == kNone || b == kNone)
            throw MeshingError("constraint endpoint fell outside the mesh");
        if (rec.kind == SegKind::Loop)
            out.boundary_edges.push_back({a, b, EdgeKind::Outer, rec.id});
        else
            chains[size_t(rec.id)].push_back({a, b});
    }
    duplicate_cracks(out, int(domain.cracks.size()), chains);
    return out;
}

}  // namespace rshapes

#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "assembly.hpp"
#include "mesh.hpp"
#include "oracles.hpp"
#include "spectrum.hpp"

namespace rshapes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_objective(const Objective& obj) {
    if (obj.indices.empty()) throw std::invalid_argument("objective needs at least one eigenvalue index");
    int prev = 0;
    for (int idx : obj.indices) {
        if (idx < 1) throw std::invalid_argument("eigenvalue indices are 1-based");
        if (idx < prev) throw std::invalid_argument("eigenvalue indices must be nondecreasing");
        prev = idx;
    }
    if (obj.combiner == Combiner::Single && obj.indices.size() != 1)
        throw std::invalid_argument("single-eigenvalue objective takes exactly one index");
    if (obj.combiner == Combiner::PNorm && obj.p_norm_q < 1.0)
        throw std::invalid_argument("p-norm exponent must be >= 1");
    if (obj.beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
    if (obj.mode == ObjectiveMode::Constraint && obj.perimeter <= 0.0)
        throw std::invalid_argument("perimeter target must be positive");
    if (obj.mode == ObjectiveMode::Penalty && obj.penalty_weight <= 0.0)
        throw std::invalid_argument("penalty weight must be positive");
}

double combine(const Objective& obj, const std::vector<double>& lambdas) {
    switch (obj.combiner) {
        case Combiner::Single:
            return lambdas.front();
        case Combiner::Sum:
            return std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
        case Combiner::PNorm: {
            double s = 0.0;
            for (double l : lambdas) s += std::pow(std::max(l, 0.0), obj.p_norm_q);
            return std::pow(s, 1.0 / obj.p_norm_q);
        }
    }
    return kInf;
}

std::vector<double> domain_eigenvalues(const PlanarDomain& domain, double beta, int count, double h,
                                       int* dofs_out = nullptr) {
    MeshingOptions mopts;
    mopts.target_h = h;
    TriangleMesh mesh = triangulate(domain, mopts);
    DiscreteSystem sys = assemble(mesh);
    if (dofs_out) *dofs_out = sys.dofs;
    SolveOptions sopts;
    sopts.count = count;
    sopts.beta = beta;
    sopts.want_vectors = false;
    return smallest_eigenpairs(sys, sopts).eigenvalues;
}

double default_h(const PlanarDomain& domain) { return 0.03 * std::sqrt(area(domain)); }

}  // namespace

PlanarDomain project_to_perimeter(const PlanarDomain& domain, double p) {
    if (p <= 0.0) throw std::invalid_argument("perimeter target must be positive");
    const double prob = generalized_perimeter(domain);
    if (!(prob > 0.0)) throw GeometryError("cannot project a domain with zero boundary length");
    PlanarDomain out = scale(domain, p / prob);
    // One multiplicative correction absorbs the last rounding error so the
    // result is exact to machine precision even after the first division.
    const double prob2 = generalized_perimeter(out);
    if (prob2 > 0.0 && prob2 != p) out = scale(out, p / prob2);
    return out;
}

Evaluation evaluate(const Objective& obj, const ShapeParams& params, double h) {
    validate_objective(obj);
    Evaluation ev;
    RealizeResult real = realize(params);
    if (!real.ok()) {
        ev.failure = real.report.violations.empty() ? "shape realization failed"
                                                    : real.report.violations.front().message;
        return ev;
    }
    PlanarDomain domain = *real.domain;
    try {
        if (obj.mode == ObjectiveMode::Constraint) domain = project_to_perimeter(domain, obj.perimeter);
        ev.mesh_h = h > 0.0 ? h : default_h(domain);
        const int count = obj.indices.back();
        std::vector<double> all = domain_eigenvalues(domain, obj.beta, count, ev.mesh_h, &ev.dofs);
        ev.lambdas.reserve(obj.indices.size());
        for (int idx : obj.indices) ev.lambdas.push_back(all[static_cast<size_t>(idx) - 1]);
        ev.prob = generalized_perimeter(domain);
        ev.value = combine(obj, ev.lambdas);
        if (obj.mode == ObjectiveMode::Penalty) ev.value += obj.penalty_weight * ev.prob;
        ev.domain = std::move(domain);
        ev.feasible = std::isfinite(ev.value);
        if (!ev.feasible) ev.failure = "objective value is not finite";
    } catch (const std::exception& e) {
        ev.value = kInf;
        ev.feasible = false;
        ev.failure = e.what();
    }
    return ev;
}

namespace {

struct Vertex {
    std::vector<double> x;
    double f = kInf;
    int order = 0;  // evaluation index, breaks ties toward the earlier point
};

bool better(const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.order < b.order;
}

}  // namespace

OptimizationRun nelder_mead(const Objective& obj, const ShapeParams& init, int budget,
                            std::uint64_t seed, double h) {
    validate_objective(obj);
    if (budget < 0) throw std::invalid_argument("evaluation budget must be nonnegative");

    OptimizationRun run;
    run.seed = seed;
    run.mesh_h = h;
    run.best_params = init;

    const std::vector<double> x0 = to_vector(init);
    const std::vector<double> ranges = param_ranges(init);
    const size_t n = x0.size();

    // Accept strictly better values only; within 1e-12 relative the earlier
    // point stands, which keeps reruns deterministic across platforms.
    auto improves = [&](double value) {
        if (!std::isfinite(run.best_value)) return value < run.best_value;
        return value < run.best_value - 1e-12 * std::max(1.0, std::abs(run.best_value));
    };

    auto spend = [&](const std::vector<double>& x) -> double {
        ShapeParams cand = from_vector(init, x);
        Evaluation ev = evaluate(obj, cand, h);
        EvalRecord rec;
        rec.iter = run.evaluations;
        rec.params = x;
        rec.prob = ev.prob;
        rec.lambdas = ev.lambdas;
        rec.objective = ev.value;
        rec.feasible = ev.feasible;
        rec.failure = ev.failure;
        run.log.push_back(std::move(rec));
        ++run.evaluations;
        if (improves(ev.value)) {
            run.best_value = ev.value;
            run.best_params = std::move(cand);
            run.best_domain = std::move(ev.domain);
            run.params_trajectory.push_back(x);
            run.objective_trajectory.push_back(ev.value);
        }
        return ev.value;
    };

    // The initial point is always evaluated, even on a zero budget.
    std::vector<Vertex> simplex;
    simplex.push_back({x0, spend(x0), 0});

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (size_t i = 0; i < n && run.evaluations < budget; ++i) {
        std::vector<double> xi = x0;
        double step = 0.05 * ranges[i] * unit(rng);
        if (step == 0.0) step = 0.05 * ranges[i];
        xi[i] += step;
        simplex.push_back({xi, 0.0, run.evaluations});
        simplex.back().f = spend(xi);
    }

    if (n > 0 && simplex.size() == n + 1) {
        while (run.evaluations < budget) {
            std::sort(simplex.begin(), simplex.end(), better);
            Vertex& worst = simplex.back();
            const Vertex& second = simplex[simplex.size() - 2];
            const Vertex& best = simplex.front();

            std::vector<double> centroid(n, 0.0);
            for (size_t i = 0; i + 1 < simplex.size(); ++i)
                for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
            for (size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

            auto blend = [&](double coeff) {
                std::vector<double> x(n);
                for (size_t j = 0; j < n; ++j) x[j] = centroid[j] + coeff * (worst.x[j] - centroid[j]);
                return x;
            };

            std::vector<double> xr = blend(-1.0);
            int order_r = run.evaluations;
            double fr = spend(xr);
            if (fr < best.f) {
                if (run.evaluations >= budget) {
                    worst = {std::move(xr), fr, order_r};
                    break;
                }
                std::vector<double> xe = blend(-2.0);
                int order_e = run.evaluations;
                double fe = spend(xe);
                if (fe < fr)
                    worst = {std::move(xe), fe, order_e};
                else
                    worst = {std::move(xr), fr, order_r};
            } else if (fr < second.f) {
                worst = {std::move(xr), fr, order_r};
            } else {
                if (run.evaluations >= budget) break;
                const bool outside = fr < worst.f;
                std::vector<double> xc = blend(outside ? -0.5 : 0.5);
                int order_c = run.evaluations;
                double fc = spend(xc);
                if (fc <= (outside ? fr : worst.f)) {
                    worst = {std::move(xc), fc, order_c};
                } else {
                    // Shrink every vertex toward the best one.
                    for (size_t i = 1; i < simplex.size() && run.evaluations < budget; ++i) {
                        for (size_t j = 0; j < n; ++j)
                            simplex[i].x[j] = best.x[j] + 0.5 * (simplex[i].x[j] - best.x[j]);
                        simplex[i].order = run.evaluations;
                        simplex[i].f = spend(simplex[i].x);
                    }
                }
            }
        }
    }

    // Accuracy polish: rerun the winner at half the mesh size. Recorded apart
    // from the trajectory so the accepted sequence stays nonincreasing.
    if (run.best_domain) {
        run.polish_h = (h > 0.0 ? h : default_h(*run.best_domain)) / 2.0;
        Evaluation fine = evaluate(obj, run.best_params, run.polish_h);
        if (fine.feasible) {
            run.polished_value = fine.value;
            run.best_domain = std::move(fine.domain);
        }
    }
    return run;
}

namespace {

// lambda_j of a ball of perimeter q (lambda_0 := 0 handles the empty piece).
double ball_lambda(int j, double beta, double q) {
    if (j == 0) return 0.0;
    const double radius = q / (2.0 * std::numbers::pi);
    return disk_robin_eigenvalues(radius, beta, j).back();
}

}  // namespace

TwoBallResult two_ball_candidate(int k, double beta, double p) {
    if (k < 1) throw std::invalid_argument("eigenvalue index must be >= 1");
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (p <= 0.0) throw std::invalid_argument("perimeter must be positive");

    TwoBallResult best;
    for (int i = 0; i <= k; ++i) {
        double value, p1;
        if (i == 0 || i == k) {
            // Single ball carrying the whole perimeter; the other piece is empty.
            const int j = std::max(i, k - i);
            value = ball_lambda(j, beta, p);
            p1 = (i == 0) ? 0.0 : p;
        } else {
            // g(p1) = max(lambda_i(ball p1), lambda_{k-i}(ball p - p1)) is the
            // max of a decreasing and an increasing function, hence unimodal;
            // golden-section search is valid.
            auto g = [&](double q1) {
                return std::max(ball_lambda(i, beta, q1), ball_lambda(k - i, beta, p - q1));
            };
            const double margin = 1e-6 * p;
            double lo = margin, hi = p - margin;
            const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
            double c = hi - invphi * (hi - lo);
            double d = lo + invphi * (hi - lo);
            double gc = g(c), gd = g(d);
            while (hi - lo > 1e-8) {
                if (gc < gd) {
                    hi = d;
                    d = c;
                    gd = gc;
                    c = hi - invphi * (hi - lo);
                    gc = g(c);
                } else {
                    lo = c;
                    c = d;
                    gc = gd;
                    d = lo + invphi * (hi - lo);
                    gd = g(d);
                }
            }
            p1 = 0.5 * (lo + hi);
            value = g(p1);
        }
        if (value < best.value) {
            best.value = value;
            best.split_index = i;
            best.p1 = p1;
            best.p2 = p - p1;
            best.lambda1 = ball_lambda(i, beta, p1);
            best.lambda2 = ball_lambda(k - i, beta, p - p1);
        }
    }
    return best;
}

namespace {

Vec2 unit_of(Vec2 v) {
    const double len = std::sqrt(v.x * v.x + v.y * v.y);
    if (!(len > 0.0)) throw GeometryError("channel polyline has a zero-length segment");
    return {v.x / len, v.y / len};
}

// Closed polygon tracing the boundary of the width-w neighborhood of the
// polyline (flat caps, miter joints). Returned counterclockwise.
Loop channel_polygon(const Polyline& pl, double w) {
    if (pl.size() < 2) throw std::invalid_argument("channel polyline needs at least two points");
    const size_t m = pl.size() - 1;  // segment count
    std::vector<Vec2> normals(m);
    for (size_t i = 0; i < m; ++i) {
        Vec2 d = unit_of({pl[i + 1].x - pl[i].x, pl[i + 1].y - pl[i].y});
        normals[i] = {-d.y, d.x};  // left normal
    }
    auto offset_point = [&](size_t i, double sign) -> Vec2 {
        Vec2 n;
        if (i == 0)
            n = normals.front();
        else if (i == pl.size() - 1)
            n = normals.back();
        else {
            Vec2 sum = {normals[i - 1].x + normals[i].x, normals[i - 1].y + normals[i].y};
            Vec2 miter = unit_of(sum);
            const double cosine = miter.x * normals[i].x + miter.y * normals[i].y;
            if (cosine < 0.05) throw GeometryError("channel polyline bends too sharply for a miter joint");
            n = {miter.x / cosine, miter.y / cosine};
        }
        return {pl[i].x + sign * 0.5 * w * n.x, pl[i].y + sign * 0.5 * w * n.y};
    };
    Loop loop;
    loop.reserve(2 * pl.size());
    for (size_t i = 0; i < pl.size(); ++i) loop.push_back(offset_point(i, +1.0));
    for (size_t i = pl.size(); i-- > 0;) loop.push_back(offset_point(i, -1.0));
    if (loop_signed_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());
    return loop;
}

}  // namespace

WideningTable slit_widening_experiment(const PlanarDomain& host, const Polyline& crack,
                                       const std::vector<double>& widths, double beta, int k,
                                       double h) {
    if (k < 1) throw std::invalid_argument("eigenvalue count must be >= 1");
    if (widths.empty()) throw std::invalid_argument("at least one width is required");
    for (size_t i = 0; i < widths.size(); ++i) {
        if (!(widths[i] > 0.0)) throw std::invalid_argument("widths must be positive");
        if (i > 0 && !(widths[i] < widths[i - 1]))
            throw std::invalid_argument("widths must be strictly decreasing");
    }
    if (crack.size() < 2) throw std::invalid_argument("crack polyline needs at least two points");

    // Locate the component holding the crack (midpoint of its first segment).
    const Vec2 mid = {0.5 * (crack[0].x + crack[1].x), 0.5 * (crack[0].y + crack[1].y)};
    int comp = -1;
    for (size_t c = 0; c < host.components.size(); ++c) {
        if (!point_in_loop(mid, host.components[c].outer)) continue;
        bool in_hole = false;
        for (const Loop& hole : host.components[c].holes)
            if (point_in_loop(mid, hole)) in_hole = true;
        if (!in_hole) {
            comp = static_cast<int>(c);
            break;
        }
    }
    if (comp < 0) throw GeometryError("crack polyline lies outside the host domain");

    WideningTable table;

    PlanarDomain cracked = host;
    cracked.cracks.push_back({comp, crack});
    ValidationReport rep = validate(cracked);
    if (!rep.ok()) throw GeometryError("cracked reference domain is invalid: " + rep.violations.front().message);
    table.reference_prob = generalized_perimeter(cracked);
    table.reference_h = h > 0.0 ? h : default_h(cracked);
    table.reference_lambdas = domain_eigenvalues(cracked, beta, k, table.reference_h);

    for (double w : widths) {
        Loop channel = channel_polygon(crack, w);
        PlanarDomain widened = host;
        Loop hole = channel;
        std::reverse(hole.begin(), hole.end());  // holes are clockwise
        widened.components[static_cast<size_t>(comp)].holes.push_back(std::move(hole));
        ValidationReport wrep = validate(widened);
        if (!wrep.ok())
            throw GeometryError("channel of width " + std::to_string(w) +
                                " intersects the boundary: " + wrep.violations.front().message);
        WideningRow row;
        row.width = w;
        row.perimeter = generalized_perimeter(widened);
        // The channel walls must be resolved by the mesh.
        row.lambdas = domain_eigenvalues(widened, beta, k, std::min(table.reference_h, 0.75 * w));
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

// Sutherland-Hodgman against the half-plane x < t.
Loop clip_loop(const Loop& in, double t, double eps) {
    Loop out;
    const size_t n = in.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = in[i];
        const Vec2& b = in[(i + 1) % n];
        const bool ia = a.x < t, ib = b.x < t;
        if (ia) out.push_back(a);
        if (ia != ib) {
            const double s = (t - a.x) / (b.x - a.x);
            out.push_back({t, a.y + s * (b.y - a.y)});
        }
    }
    // Drop collapsed consecutive points.
    Loop clean;
    for (const Vec2& p : out) {
        if (!clean.empty() && std::abs(p.x - clean.back().x) < eps && std::abs(p.y - clean.back().y) < eps)
            continue;
        clean.push_back(p);
    }
    while (clean.size() > 1 && std::abs(clean.front().x - clean.back().x) < eps &&
           std::abs(clean.front().y - clean.back().y) < eps)
        clean.pop_back();
    return clean;
}

void collect_crossings(const Loop& loop, double t, std::vector<double>& ys) {
    const size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % n];
        if ((a.x < t) == (b.x < t)) continue;
        ys.push_back(a.y + (t - a.x) / (b.x - a.x) * (b.y - a.y));
    }
}

}  // namespace

std::vector<CutProbeRow> cut_probe(const PlanarDomain& domain, const std::vector<double>& t_values,
                                   double beta, int k, double h) {
    if (k < 1) throw std::invalid_argument("eigenvalue count must be >= 1");
    ValidationReport rep = validate(domain);
    if (!rep.ok()) throw GeometryError("cut probe needs a valid base domain: " + rep.violations.front().message);

    const double diam = diameter(domain);
    const double eps = 1e-12 * std::max(1.0, diam);
    const double clear = effective_clearance(domain);
    const double hh = h > 0.0 ? h : default_h(domain);
    const std::vector<double> base = domain_eigenvalues(domain, beta, k, hh);

    std::vector<CutProbeRow> rows;
    rows.reserve(t_values.size());
    for (double t : t_values) {
        CutProbeRow row;
        row.t = t;
        row.base_lambdas = base;

        // Section length |Omega intersect {x1 = t}| by even-odd crossing.
        std::vector<double> ys;
        for (const PolygonComponent& pc : domain.components) {
            collect_crossings(pc.outer, t, ys);
            for (const Loop& hole : pc.holes) collect_crossings(hole, t, ys);
        }
        std::sort(ys.begin(), ys.end());
        for (size_t i = 0; i + 1 < ys.size(); i += 2) row.section_length += ys[i + 1] - ys[i];

        if (ys.empty() && t > bounding_box(domain).hi.x) {
            // Cut beyond the domain: Omega_t = Omega.
            row.cut_lambdas = base;
            rows.push_back(std::move(row));
            continue;
        }

        // Clip every component; remap crack component indices as pieces drop.
        PlanarDomain cut;
        cut.clearance = domain.clearance;
        std::vector<int> comp_map(domain.components.size(), -1);
        for (size_t c = 0; c < domain.components.size(); ++c) {
            const PolygonComponent& pc = domain.components[c];
            Loop outer = clip_loop(pc.outer, t, eps);
            if (outer.size() < 3 || std::abs(loop_signed_area(outer)) < eps * diam) continue;
            PolygonComponent piece;
            piece.outer = std::move(outer);
            for (const Loop& hole : pc.holes) {
                double lo = kInf, hi = -kInf;
                for (const Vec2& p : hole) {
                    lo = std::min(lo, p.x);
                    hi = std::max(hi, p.x);
                }
                if (hi < t - eps) {
                    piece.holes.push_back(hole);
                } else if (lo < t + eps) {
                    throw GeometryError("degenerate cut geometry: a hole crosses the cut line");
                }
            }
            comp_map[c] = static_cast<int>(cut.components.size());
            cut.components.push_back(std::move(piece));
        }
        if (cut.components.empty()) throw GeometryError("degenerate cut geometry: empty cut domain");

        for (const Crack& cr : domain.cracks) {
            if (comp_map[static_cast<size_t>(cr.component)] < 0) continue;
            // Keep the prefix strictly left of the cut, stopping short of it
            // by a bit more than the clearance margin so the truncated tip
            // stays strictly separated from the new boundary edge at x = t.
            const double limit = t - 1.25 * clear;
            Polyline kept;
            for (size_t i = 0; i < cr.points.size(); ++i) {
                if (cr.points[i].x < limit) {
                    kept.push_back(cr.points[i]);
                    continue;
                }
                if (!kept.empty()) {
                    const Vec2& a = cr.points[i - 1];
                    const Vec2& b = cr.points[i];
                    const double s = (limit - a.x) / (b.x - a.x);
                    Vec2 end = {limit, a.y + s * (b.y - a.y)};
                    if (std::abs(end.x - kept.back().x) > eps || std::abs(end.y - kept.back().y) > eps)
                        kept.push_back(end);
                }
                break;
            }
            if (kept.size() < 2 || polyline_length(kept) < 2.0 * clear) continue;
            cut.cracks.push_back({comp_map[static_cast<size_t>(cr.component)], std::move(kept)});
        }

        ValidationReport crep = validate(cut);
        if (!crep.ok())
            throw GeometryError("degenerate cut geometry: " + crep.violations.front().message);

        row.cut_lambdas = domain_eigenvalues(cut, beta, k, hh);
        row.lambda_diff = row.cut_lambdas.back() - row.base_lambdas.back();
        row.ratio = row.section_length > eps ? row.lambda_diff / row.section_length : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rshapes

#include "shape_params.hpp"

#include <cmath>
#include <sstream>

namespace rshapes {

namespace {

double radial_value(const ShapeParams& p, double theta) {
    double r = p.a0;
    for (size_t j = 0; j < p.cos_coeffs.size(); ++j) r += p.cos_coeffs[j] * std::cos(double(j + 1) * theta);
    for (size_t j = 0; j < p.sin_coeffs.size(); ++j) r += p.sin_coeffs[j] * std::sin(double(j + 1) * theta);
    return r;
}

RealizeResult reject(std::string code, std::string message) {
    RealizeResult out;
    out.report.violations.push_back({std::move(code), std::move(message), -1, -1});
    return out;
}

double characteristic_scale(const ShapeParams& p) {
    switch (p.kind) {
        case ShapeParams::Kind::RadialFourier:
            return std::max(std::abs(p.a0), 1e-3);
        case ShapeParams::Kind::Polygon: {
            if (p.points.empty()) return 1.0;
            Vec2 lo = p.points[0], hi = p.points[0];
            for (const Vec2& v : p.points) {
                lo.x = std::min(lo.x, v.x);
                lo.y = std::min(lo.y, v.y);
                hi.x = std::max(hi.x, v.x);
                hi.y = std::max(hi.y, v.y);
            }
            return std::max(dist(lo, hi), 1e-3);
        }
        case ShapeParams::Kind::Multi: {
            double s = 1e-3;
            for (const auto& part : p.parts) s = std::max(s, characteristic_scale(part));
            return s;
        }
        case ShapeParams::Kind::SlitFamily:
            return p.host.empty() ? 1.0 : characteristic_scale(p.host[0]);
    }
    return 1.0;
}

}  // namespace

RealizeResult realize(const ShapeParams& p) {
    RealizeResult out;
    switch (p.kind) {
        case ShapeParams::Kind::RadialFourier: {
            if (p.vertex_count < 8) return reject("bad_vertex_count", "radial shape needs >= 8 vertices");
            const double pi = 3.14159265358979323846;
            Loop loop;
            loop.reserve(size_t(p.vertex_count));
            for (int j = 0; j < p.vertex_count; ++j) {
                double th = 2.0 * pi * double(j) / double(p.vertex_count);
                double r = radial_value(p, th);
                if (!(r > 0.0) || !std::isfinite(r)) {
                    std::ostringstream os;
                    os << "radius nonpositive at angle " << th;
                    return reject("radius_nonpositive", os.str());
                }
                loop.push_back({p.center.x + r * std::cos(th), p.center.y + r * std::sin(th)});
            }
            PlanarDomain d;
            d.components.push_back({std::move(loop), {}});
            out.report = validate(d);
            if (out.report.ok()) out.domain = std::move(d);
            return out;
        }
        case ShapeParams::Kind::Polygon: {
            PlanarDomain d;
            d.components.push_back({p.points, {}});
            out.report = validate(d);
            if (out.report.ok()) out.domain = std::move(d);
            return out;
        }
        case ShapeParams::Kind::Multi: {
            if (p.parts.empty()) return reject("empty_domain", "multi shape has no parts");
            if (p.offsets.size() != p.parts.size())
                return reject("bad_offsets", "multi shape needs one offset per part");
            PlanarDomain acc;
            for (size_t i = 0; i < p.parts.size(); ++i) {
                RealizeResult part = realize(p.parts[i]);
                if (!part.ok()) return part;
                try {
                    if (i == 0)
                        acc = translate(*part.domain, p.offsets[0]);
                    else
                        acc = disjoint_union(acc, *part.domain, p.offsets[i]);
                } catch (const GeometryError& e) {
                    return reject("components_overlap", e.what());
                }
            }
            out.report = validate(acc);
            if (out.report.ok()) out.domain = std::move(acc);
            return out;
        }
        case ShapeParams::Kind::SlitFamily: {
            if (p.host.size() != 1) return reject("bad_host", "slit family needs exactly one host shape");
            RealizeResult host = realize(p.host[0]);
            if (!host.ok()) return host;
            PlanarDomain d = *host.domain;
            for (const auto& s : p.slits) {
                Crack cr;
                cr.points = {s[0], s[1]};
                cr.component = 0;
                Vec2 mid = (s[0] + s[1]) * 0.5;
                for (size_t ci = 0; ci < d.components.size(); ++ci) {
                    if (point_in_loop(mid, d.components[ci].outer)) {
                        cr.component = int(ci);
                        break;
                    }
                }
                d.cracks.push_back(std::move(cr));
            }
            out.report = validate(d);
            if (out.report.ok()) out.domain = std::move(d);
            return out;
        }
    }
    return reject("bad_kind", "unknown shape kind");
}

std::vector<double> to_vector(const ShapeParams& p) {
    std::vector<double> v;
    switch (p.kind) {
        case ShapeParams::Kind::RadialFourier:
            v.push_back(p.a0);
            v.insert(v.end(), p.cos_coeffs.begin(), p.cos_coeffs.end());
            v.insert(v.end(), p.sin_coeffs.begin(), p.sin_coeffs.end());
            break;
        case ShapeParams::Kind::Polygon:
            for (const Vec2& q : p.points) {
                v.push_back(q.x);
                v.push_back(q.y);
            }
            break;
        case ShapeParams::Kind::Multi:
            for (const auto& part : p.parts) {
                std::vector<double> pv = to_vector(part);
                v.insert(v.end(), pv.begin(), pv.end());
            }
            for (const Vec2& q : p.offsets) {
                v.push_back(q.x);
                v.push_back(q.y);
            }
            break;
        case ShapeParams::Kind::SlitFamily: {
            std::vector<double> hv = to_vector(p.host.at(0));
            v.insert(v.end(), hv.begin(), hv.end());
            for (const auto& s : p.slits) {
                v.push_back(s[0].x);
                v.push_back(s[0].y);
                v.push_back(s[1].x);
                v.push_back(s[1].y);
            }
            break;
        }
    }
    return v;
}

namespace {

ShapeParams from_span(const ShapeParams& like, const std::vector<double>& v, size_t& pos) {
    ShapeParams out = like;
    auto take = [&v, &pos]() {
        if (pos >= v.size()) throw GeometryError("from_vector: parameter vector too short");
        return v[pos++];
    };
    switch (like.kind) {
        case ShapeParams::Kind::RadialFourier:
            out.a0 = take();
            for (auto& c : out.cos_coeffs) c = take();
            for (auto& s : out.sin_coeffs) s = take();
            break;
        case ShapeParams::Kind::Polygon:
            for (auto& q : out.points) {
                q.x = take();
                q.y = take();
            }
            break;
        case ShapeParams::Kind::Multi:
            for (size_t i = 0; i < out.parts.size(); ++i) out.parts[i] = from_span(like.parts[i], v, pos);
            for (auto& q : out.offsets) {
                q.x = take();
                q.y = take();
            }
            break;
        case ShapeParams::Kind::SlitFamily:
            out.host.at(0) = from_span(like.host.at(0), v, pos);
            for (auto& s : out.slits) {
                s[0].x = take();
                s[0].y = take();
                s[1].x = take();
                s[1].y = take();
            }
            break;
    }
    return out;
}

}  // namespace

ShapeParams from_vector(const ShapeParams& shape_like, const std::vector<double>& v) {
    size_t pos = 0;
    ShapeParams out = from_span(shape_like, v, pos);
    if (pos != v.size()) throw GeometryError("from_vector: parameter vector too long");
    return out;
}

std::vector<double> param_ranges(const ShapeParams& p) {
    std::vector<double> r;
    double s = characteristic_scale(p);
    switch (p.kind) {
        case ShapeParams::Kind::RadialFourier:
            r.push_back(s);
            r.insert(r.end(), p.cos_coeffs.size() + p.sin_coeffs.size(), 0.5 * s);
            break;
        case ShapeParams::Kind::Polygon:
            r.insert(r.end(), 2 * p.points.size(), 0.1 * s);
            break;
        case ShapeParams::Kind::Multi:
            for (const auto& part : p.parts) {
                std::vector<double> pr = param_ranges(part);
                r.insert(r.end(), pr.begin(), pr.end());
            }
            r.insert(r.end(), 2 * p.offsets.size(), 0.5 * s);
            break;
        case ShapeParams::Kind::SlitFamily: {
            std::vector<double> hr = param_ranges(p.host.at(0));
            r.insert(r.end(), hr.begin(), hr.end());
            r.insert(r.end(), 4 * p.slits.size(), 0.25 * s);
            break;
        }
    }
    return r;
}

ShapeParams make_radial_fourier(Vec2 center, double a0, std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs, int vertex_count) {
    ShapeParams p;
    p.kind = ShapeParams::Kind::RadialFourier;
    p.center = center;
    p.a0 = a0;
    p.cos_coeffs = std::move(cos_coeffs);
    p.sin_coeffs = std::move(sin_coeffs);
    p.vertex_count = vertex_count;
    return p;
}

ShapeParams make_polygon(std::vector<Vec2> points) {
    ShapeParams p;
    p.kind = ShapeParams::Kind::Polygon;
    p.points = std::move(points);
    return p;
}

}  // namespace rshapes

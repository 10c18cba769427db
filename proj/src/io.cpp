#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rshapes {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

nlohmann::json point_json(const Vec2& p) { return nlohmann::json::array({p.x, p.y}); }

Vec2 point_from(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw GeometryError(std::string(what) + ": a point must be a [x, y] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Loop loop_from(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw GeometryError(std::string(what) + ": expected an array of points");
    Loop loop;
    loop.reserve(j.size());
    for (const auto& p : j) loop.push_back(point_from(p, what));
    return loop;
}

nlohmann::json loop_json(const Loop& loop) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vec2& p : loop) arr.push_back(point_json(p));
    return arr;
}

}  // namespace

nlohmann::json domain_to_json(const PlanarDomain& d) {
    nlohmann::json j;
    j["components"] = nlohmann::json::array();
    for (const PolygonComponent& pc : d.components) {
        nlohmann::json c;
        c["outer"] = loop_json(pc.outer);
        c["holes"] = nlohmann::json::array();
        for (const Loop& h : pc.holes) c["holes"].push_back(loop_json(h));
        j["components"].push_back(std::move(c));
    }
    j["cracks"] = nlohmann::json::array();
    for (const Crack& cr : d.cracks) {
        nlohmann::json c;
        c["component"] = cr.component;
        c["points"] = loop_json(cr.points);
        j["cracks"].push_back(std::move(c));
    }
    if (d.clearance > 0.0) j["clearance"] = d.clearance;
    return j;
}

PlanarDomain domain_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw GeometryError("geometry: expected a JSON object");
    if (!j.contains("components") || !j["components"].is_array())
        throw GeometryError("geometry: missing \"components\" array");
    PlanarDomain d;
    for (const auto& c : j["components"]) {
        if (!c.is_object() || !c.contains("outer"))
            throw GeometryError("geometry: each component needs an \"outer\" loop");
        PolygonComponent pc;
        pc.outer = loop_from(c["outer"], "outer");
        if (c.contains("holes")) {
            if (!c["holes"].is_array()) throw GeometryError("geometry: \"holes\" must be an array");
            for (const auto& h : c["holes"]) pc.holes.push_back(loop_from(h, "hole"));
        }
        d.components.push_back(std::move(pc));
    }
    if (j.contains("cracks")) {
        if (!j["cracks"].is_array()) throw GeometryError("geometry: \"cracks\" must be an array");
        for (const auto& c : j["cracks"]) {
            if (!c.is_object() || !c.contains("component") || !c.contains("points") ||
                !c["component"].is_number_integer())
                throw GeometryError("geometry: each crack needs \"component\" and \"points\"");
            Crack cr;
            cr.component = c["component"].get<int>();
            cr.points = loop_from(c["points"], "crack");
            d.cracks.push_back(std::move(cr));
        }
    }
    if (j.contains("clearance")) {
        if (!j["clearance"].is_number()) throw GeometryError("geometry: \"clearance\" must be a number");
        d.clearance = j["clearance"].get<double>();
    }
    return d;
}

nlohmann::json shape_params_to_json(const ShapeParams& p) {
    nlohmann::json j;
    switch (p.kind) {
        case ShapeParams::Kind::RadialFourier:
            j["kind"] = "radial_fourier";
            j["center"] = point_json(p.center);
            j["a0"] = p.a0;
            j["cos"] = p.cos_coeffs;
            j["sin"] = p.sin_coeffs;
            j["vertices"] = p.vertex_count;
            break;
        case ShapeParams::Kind::Polygon: {
            j["kind"] = "polygon";
            j["points"] = loop_json(p.points);
            break;
        }
        case ShapeParams::Kind::Multi: {
            j["kind"] = "multi";
            j["parts"] = nlohmann::json::array();
            for (const auto& part : p.parts) j["parts"].push_back(shape_params_to_json(part));
            j["offsets"] = nlohmann::json::array();
            for (const Vec2& o : p.offsets) j["offsets"].push_back(point_json(o));
            break;
        }
        case ShapeParams::Kind::SlitFamily: {
            j["kind"] = "slit";
            j["host"] = shape_params_to_json(p.host.at(0));
            j["slits"] = nlohmann::json::array();
            for (const auto& s : p.slits)
                j["slits"].push_back(nlohmann::json::array({point_json(s[0]), point_json(s[1])}));
            break;
        }
    }
    return j;
}

ShapeParams shape_params_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw GeometryError("params: expected an object with a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    ShapeParams p;
    if (kind == "radial_fourier") {
        p.kind = ShapeParams::Kind::RadialFourier;
        if (j.contains("center")) p.center = point_from(j["center"], "center");
        if (j.contains("a0")) p.a0 = j["a0"].get<double>();
        if (j.contains("cos")) p.cos_coeffs = j["cos"].get<std::vector<double>>();
        if (j.contains("sin")) p.sin_coeffs = j["sin"].get<std::vector<double>>();
        if (j.contains("vertices")) p.vertex_count = j["vertices"].get<int>();
    } else if (kind == "polygon") {
        p.kind = ShapeParams::Kind::Polygon;
        if (!j.contains("points")) throw GeometryError("params: polygon needs \"points\"");
        p.points = loop_from(j["points"], "points");
    } else if (kind == "multi") {
        p.kind = ShapeParams::Kind::Multi;
        if (!j.contains("parts") || !j["parts"].is_array())
            throw GeometryError("params: multi needs a \"parts\" array");
        for (const auto& part : j["parts"]) p.parts.push_back(shape_params_from_json(part));
        if (j.contains("offsets"))
            for (const auto& o : j["offsets"]) p.offsets.push_back(point_from(o, "offset"));
        if (p.offsets.size() != p.parts.size())
            throw GeometryError("params: multi needs one offset per part");
    } else if (kind == "slit") {
        p.kind = ShapeParams::Kind::SlitFamily;
        if (!j.contains("host")) throw GeometryError("params: slit family needs a \"host\"");
        p.host.push_back(shape_params_from_json(j["host"]));
        if (j.contains("slits")) {
            if (!j["slits"].is_array()) throw GeometryError("params: \"slits\" must be an array");
            for (const auto& s : j["slits"]) {
                if (!s.is_array() || s.size() != 2)
                    throw GeometryError("params: each slit is an endpoint pair");
                p.slits.push_back({point_from(s[0], "slit"), point_from(s[1], "slit")});
            }
        }
    } else {
        throw GeometryError("params: unknown kind \"" + kind + "\"");
    }
    return p;
}

namespace {

const char* tag_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::Outer: return "outer";
        case EdgeKind::CrackLeft: return "crack_left";
        case EdgeKind::CrackRight: return "crack_right";
    }
    return "outer";
}

}  // namespace

std::string mesh_to_text(const TriangleMesh& mesh,
                         const std::vector<std::vector<double>>& nodal_fields) {
    std::ostringstream os;
    os << "nodes " << mesh.nodes.size() << " triangles " << mesh.triangles.size() << " bedges "
       << mesh.boundary_edges.size() << "\n";
    for (const Vec2& p : mesh.nodes) os << format_double(p.x) << " " << format_double(p.y) << "\n";
    for (const auto& t : mesh.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (const BoundaryEdge& e : mesh.boundary_edges)
        os << e.a << " " << e.b << " " << tag_name(e.kind) << " " << e.id << "\n";
    for (size_t f = 0; f < nodal_fields.size(); ++f) {
        os << "function " << f + 1 << "\n";
        for (double v : nodal_fields[f]) os << format_double(v) << "\n";
    }
    return os.str();
}

std::string spectrum_to_csv(const Spectrum& sp) {
    std::ostringstream os;
    os << "k,lambda,residual\n";
    for (size_t i = 0; i < sp.eigenvalues.size(); ++i) {
        os << i + 1 << "," << format_double(sp.eigenvalues[i]) << ","
           << format_double(i < sp.residuals.size() ? sp.residuals[i] : 0.0) << "\n";
    }
    return os.str();
}

std::string values_to_csv(const std::vector<double>& lambdas) {
    std::ostringstream os;
    os << "k,lambda\n";
    for (size_t i = 0; i < lambdas.size(); ++i)
        os << i + 1 << "," << format_double(lambdas[i]) << "\n";
    return os.str();
}

namespace {

struct SvgFrame {
    double minx = 0, maxy = 0, scale = 1, width = 0, height = 0;
    double tx(double x) const { return (x - minx) * scale + 10.0; }
    double ty(double y) const { return (maxy - y) * scale + 10.0; }
};

SvgFrame frame_for(const TriangleMesh& mesh) {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const Vec2& p : mesh.nodes) {
        minx = std::min(minx, p.x);
        miny = std::min(miny, p.y);
        maxx = std::max(maxx, p.x);
        maxy = std::max(maxy, p.y);
    }
    if (mesh.nodes.empty()) minx = miny = maxx = maxy = 0.0;
    SvgFrame f;
    const double w = std::max(maxx - minx, 1e-12), h = std::max(maxy - miny, 1e-12);
    f.scale = 780.0 / std::max(w, h);
    f.minx = minx;
    f.maxy = maxy;
    f.width = w * f.scale + 20.0;
    f.height = h * f.scale + 20.0;
    return f;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

const char* edge_color(EdgeKind k) {
    switch (k) {
        case EdgeKind::Outer: return "#000000";
        case EdgeKind::CrackLeft: return "#d62728";
        case EdgeKind::CrackRight: return "#1f77b4";
    }
    return "#000000";
}

void svg_header(std::ostringstream& os, const SvgFrame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(f.width) << "\" height=\""
       << coord(f.height) << "\" viewBox=\"0 0 " << coord(f.width) << " " << coord(f.height)
       << "\">\n";
}

void svg_boundary(std::ostringstream& os, const TriangleMesh& mesh, const SvgFrame& f) {
    for (const BoundaryEdge& e : mesh.boundary_edges) {
        const Vec2& a = mesh.nodes[static_cast<size_t>(e.a)];
        const Vec2& b = mesh.nodes[static_cast<size_t>(e.b)];
        os << "<line x1=\"" << coord(f.tx(a.x)) << "\" y1=\"" << coord(f.ty(a.y)) << "\" x2=\""
           << coord(f.tx(b.x)) << "\" y2=\"" << coord(f.ty(b.y)) << "\" stroke=\""
           << edge_color(e.kind) << "\" stroke-width=\"1.6\"/>\n";
    }
}

// Five-stop perceptual colormap, linearly interpolated.
void colormap(double t, int rgb[3]) {
    static const double stops[5][3] = {{0.267, 0.005, 0.329},
                                       {0.229, 0.322, 0.545},
                                       {0.128, 0.567, 0.551},
                                       {0.369, 0.789, 0.383},
                                       {0.993, 0.906, 0.144}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(t), 3);
    const double s = t - i;
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(255.0 * (stops[i][c] + s * (stops[i + 1][c] - stops[i][c]))));
}

}  // namespace

std::string mesh_to_svg(const TriangleMesh& mesh) {
    const SvgFrame f = frame_for(mesh);
    std::ostringstream os;
    svg_header(os, f);
    os << "<g fill=\"none\" stroke=\"#b0b0b0\" stroke-width=\"0.5\">\n";
    for (const auto& t : mesh.triangles) {
        os << "<polygon points=\"";
        for (int v : t) {
            const Vec2& p = mesh.nodes[static_cast<size_t>(v)];
            os << coord(f.tx(p.x)) << "," << coord(f.ty(p.y)) << " ";
        }
        os << "\"/>\n";
    }
    os << "</g>\n";
    svg_boundary(os, mesh, f);
    os << "</svg>\n";
    return os.str();
}

std::string heatmap_svg(const TriangleMesh& mesh, const std::vector<double>& nodal) {
    if (nodal.size() != mesh.nodes.size())
        throw std::invalid_argument("heatmap needs one value per mesh node");
    const SvgFrame f = frame_for(mesh);
    double lo = 1e300, hi = -1e300;
    for (double v : nodal) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo > 1e-300 ? hi - lo : 1.0;
    std::ostringstream os;
    svg_header(os, f);
    for (const auto& t : mesh.triangles) {
        double mean = 0.0;
        for (int v : t) mean += nodal[static_cast<size_t>(v)];
        mean /= 3.0;
        int rgb[3];
        colormap((mean - lo) / span, rgb);
        char color[8];
        std::snprintf(color, sizeof(color), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
        os << "<polygon fill=\"" << color << "\" stroke=\"" << color
           << "\" stroke-width=\"0.4\" points=\"";
        for (int v : t) {
            const Vec2& p = mesh.nodes[static_cast<size_t>(v)];
            os << coord(f.tx(p.x)) << "," << coord(f.ty(p.y)) << " ";
        }
        os << "\"/>\n";
    }
    svg_boundary(os, mesh, f);
    os << "</svg>\n";
    return os.str();
}

}  // namespace rshapes

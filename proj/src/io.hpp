#pragma once

// Serialization: geometry JSON, shape-parameter JSON, plain-text mesh
// export, spectrum CSV, and SVG renderings. All numeric output is
// deterministic (full-precision round-trip formatting), so identical inputs
// produce byte-identical files.

#include <string>
#include <vector>

#include "json.hpp"

#include "geometry.hpp"
#include "mesh.hpp"
#include "shape_params.hpp"
#include "spectrum.hpp"

namespace rshapes {

// Full-precision decimal form that parses back to the same double.
std::string format_double(double v);

// {"components":[{"outer":[[x,y],...],"holes":[[[x,y],...],...]},...],
//  "cracks":[{"component":i,"points":[[x,y],...]},...]}
nlohmann::json domain_to_json(const PlanarDomain& d);
PlanarDomain domain_from_json(const nlohmann::json& j);  // throws GeometryError

nlohmann::json shape_params_to_json(const ShapeParams& p);
ShapeParams shape_params_from_json(const nlohmann::json& j);  // throws GeometryError

// Header "nodes N triangles T bedges B", node lines "x y", triangle lines
// "i j k", boundary-edge lines "a b tagname tagid". Each entry of
// `nodal_fields` appends a section "function f" followed by one value per
// node line.
std::string mesh_to_text(const TriangleMesh& mesh,
                         const std::vector<std::vector<double>>& nodal_fields = {});

// CSV "k,lambda,residual", one row per computed eigenvalue.
std::string spectrum_to_csv(const Spectrum& sp);

// CSV "k,lambda" for semi-analytic reference values.
std::string values_to_csv(const std::vector<double>& lambdas);

// Wireframe rendering with boundary edges colored by tag.
std::string mesh_to_svg(const TriangleMesh& mesh);

// Flat-shaded per-triangle heatmap of a nodal field (one value per node).
std::string heatmap_svg(const TriangleMesh& mesh, const std::vector<double>& nodal);

}  // namespace rshapes

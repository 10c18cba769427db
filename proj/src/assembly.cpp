#include "assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace rshapes {

DiscreteSystem assemble(const TriangleMesh& mesh) {
    const int n = int(mesh.nodes.size());
    std::vector<Triplet> k_trips, m_trips, b_trips;
    k_trips.reserve(mesh.triangles.size() * 6);
    m_trips.reserve(mesh.triangles.size() * 6);
    b_trips.reserve(mesh.boundary_edges.size() * 3);

    for (const auto& t : mesh.triangles) {
        const Vec2& p0 = mesh.nodes[size_t(t[0])];
        const Vec2& p1 = mesh.nodes[size_t(t[1])];
        const Vec2& p2 = mesh.nodes[size_t(t[2])];
        double area2 = cross(p1 - p0, p2 - p0);  // 2 * area, positive for ccw
        if (!(area2 > 0.0)) throw std::runtime_error("assemble: degenerate or flipped triangle");
        double area = 0.5 * area2;
        // Barycentric gradients: grad l_i = (b_i, c_i) / (2A).
        double b[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
        double c[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                double kij = (b[i] * b[j] + c[i] * c[j]) / (2.0 * area2);
                k_trips.push_back({t[size_t(i)], t[size_t(j)], kij});
                double mij = area / 12.0 * (i == j ? 2.0 : 1.0);
                m_trips.push_back({t[size_t(i)], t[size_t(j)], mij});
            }
        }
    }
    for (const auto& be : mesh.boundary_edges) {
        double len = dist(mesh.nodes[size_t(be.a)], mesh.nodes[size_t(be.b)]);
        b_trips.push_back({be.a, be.a, len / 3.0});
        b_trips.push_back({be.b, be.b, len / 3.0});
        b_trips.push_back({be.a, be.b, len / 6.0});
    }

    DiscreteSystem sys;
    sys.dofs = n;
    sys.stiffness = SymmetricSparseMatrix::from_triplets(n, std::move(k_trips));
    sys.mass = SymmetricSparseMatrix::from_triplets(n, std::move(m_trips));
    sys.boundary = SymmetricSparseMatrix::from_triplets(n, std::move(b_trips));
    return sys;
}

SymmetricSparseMatrix robin_operator(const DiscreteSystem& sys, double beta) {
    return sys.stiffness.add_scaled(sys.boundary, beta);
}

double rayleigh_quotient(const DiscreteSystem& sys, double beta, const std::vector<double>& u) {
    if (int(u.size()) != sys.dofs) throw std::runtime_error("rayleigh_quotient: size mismatch");
    std::vector<double> ku = sys.stiffness.multiply(u);
    std::vector<double> bu = sys.boundary.multiply(u);
    std::vector<double> mu = sys.mass.multiply(u);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        num += u[i] * (ku[i] + beta * bu[i]);
        den += u[i] * mu[i];
    }
    if (den <= 0.0) throw std::runtime_error("rayleigh_quotient: zero function");
    return num / den;
}

}  // namespace rshapes

#include <doctest.h>

#include <cmath>

#include "assembly.hpp"
#include "dense_eig.hpp"
#include "hand_meshes.hpp"
#include "oracles.hpp"

using namespace rshapes;
using namespace rshapes::testing;

TEST_CASE("unit triangle: pinned element matrices") {
    auto sys = assemble(unit_triangle_mesh());
    CHECK(sys.dofs == 3);

    // K = [[1,-1/2,-1/2],[-1/2,1/2,0],[-1/2,0,1/2]]; the exact zero K(1,2)
    // is dropped from storage.
    CHECK(sys.stiffness.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sys.stiffness.at(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(sys.stiffness.at(0, 2) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(sys.stiffness.at(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sys.stiffness.at(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sys.stiffness.at(1, 2) == 0.0);
    CHECK(sys.stiffness.nonzeros() == 5);
    CHECK(sys.stiffness.to_coordinate_text() == "1 1 1\n1 2 -0.5\n1 3 -0.5\n2 2 0.5\n3 3 0.5\n");

    // M = area/12 * [[2,1,1],[1,2,1],[1,1,2]] with area 1/2.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(sys.mass.at(i, j) == doctest::Approx((i == j ? 2.0 : 1.0) / 24.0).epsilon(1e-15));

    // B sums to the boundary length 2 + sqrt(2).
    CHECK(sys.boundary.entry_sum() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("partition of unity: K 1 = 0, 1^T M 1 = area, 1^T B 1 = boundary length") {
    for (const TriangleMesh& m : {unit_triangle_mesh(), unit_square_mesh(), cracked_square_mesh(),
                                  refine(cracked_square_mesh())}) {
        auto sys = assemble(m);
        std::vector<double> ones(size_t(sys.dofs), 1.0);
        auto k1 = sys.stiffness.multiply(ones);
        for (double v : k1) CHECK(std::abs(v) <= 1e-13);
        CHECK(sys.mass.entry_sum() == doctest::Approx(mesh_area(m)).epsilon(1e-13));
        CHECK(sys.boundary.entry_sum() == doctest::Approx(mesh_boundary_length(m)).epsilon(1e-13));
    }
}

TEST_CASE("cracked square: both crack faces enter the boundary mass") {
    auto m = cracked_square_mesh();
    REQUIRE(mesh_soundness(m).empty());
    auto sys = assemble(m);
    // 4 (outer) + 2 * 0.5 (the crack counted through both traces).
    CHECK(sys.boundary.entry_sum() == doctest::Approx(5.0).epsilon(1e-14));
    // The two copies of the crack midpoint are distinct dofs.
    CHECK(sys.dofs == 8);

    // A constant has zero Dirichlet energy, so the Rayleigh quotient is
    // beta * (generalized perimeter) / area = 5 beta.
    std::vector<double> ones(8, 1.0);
    for (double beta : {0.0, 0.5, 2.0}) {
        CHECK(rayleigh_quotient(sys, beta, ones) == doctest::Approx(5.0 * beta).epsilon(1e-13));
    }
}

TEST_CASE("robin_operator is K + beta B") {
    auto sys = assemble(unit_square_mesh());
    auto a = robin_operator(sys, 2.5);
    for (int i = 0; i < sys.dofs; ++i)
        for (int j = 0; j < sys.dofs; ++j)
            CHECK(a.at(i, j) ==
                  doctest::Approx(sys.stiffness.at(i, j) + 2.5 * sys.boundary.at(i, j)).epsilon(1e-14));
    // beta = 0 keeps pure stiffness (dropping its exact zeros either way).
    auto k = robin_operator(sys, 0.0);
    for (int i = 0; i < sys.dofs; ++i)
        for (int j = 0; j < sys.dofs; ++j) CHECK(k.at(i, j) == sys.stiffness.at(i, j));
}

TEST_CASE("assembly rejects flipped triangles") {
    TriangleMesh bad = unit_triangle_mesh();
    std::swap(bad.triangles[0][1], bad.triangles[0][2]);
    CHECK_THROWS(assemble(bad));
}

TEST_CASE("assembled square spectrum approaches the tensor oracle") {
    // Four nested refinements of the two-triangle square, solved with the
    // independent dense route: the chain geometry -> assembly -> eigenvalues
    // must land on the analytic rectangle values.
    TriangleMesh m = unit_square_mesh();
    for (int r = 0; r < 4; ++r) m = refine(m);
    REQUIRE(mesh_soundness(m).empty());
    auto sys = assemble(m);
    const double beta = 1.0;
    auto A = robin_operator(sys, beta);
    auto r = dense_generalized_eig(A.to_dense(), sys.mass.to_dense(), sys.dofs, false);
    auto oracle = rectangle_robin_eigenvalues(1.0, 1.0, beta, 4);
    for (int k = 0; k < 4; ++k) {
        CAPTURE(k);
        // Conforming elements overestimate; h = sqrt(2)/16 keeps them within ~2%.
        CHECK(r.values[size_t(k)] >= oracle[size_t(k)] * (1.0 - 1e-9));
        CHECK(std::abs(r.values[size_t(k)] - oracle[size_t(k)]) <= 0.03 * oracle[size_t(k)]);
    }
}

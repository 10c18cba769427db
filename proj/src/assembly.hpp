#pragma once

// P1 finite-element assembly on a crack-resolved mesh. The three matrices
// are kept separate so the boundary coupling strength can vary without
// reassembly: the operator for strength beta is K + beta * B against mass M.

#include "mesh.hpp"
#include "sparse.hpp"

namespace rshapes {

struct DiscreteSystem {
    SymmetricSparseMatrix stiffness;  // K: integral of grad u . grad v
    SymmetricSparseMatrix mass;       // M: integral of u v
    // B: boundary mass over ALL tagged edges -- the outer boundary and both
    // crack faces, so each crack contributes twice through its two traces.
    SymmetricSparseMatrix boundary;
    int dofs = 0;
};

DiscreteSystem assemble(const TriangleMesh& mesh);

// K + beta * B.
SymmetricSparseMatrix robin_operator(const DiscreteSystem& sys, double beta);

// (u^T (K + beta B) u) / (u^T M u).
double rayleigh_quotient(const DiscreteSystem& sys, double beta, const std::vector<double>& u);

}  // namespace rshapes

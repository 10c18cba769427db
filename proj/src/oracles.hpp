#pragma once

// Independent reference solutions used to pin down the finite-element path:
// transcendental roots for the interval, tensor sums for rectangles, Bessel
// roots for disks. Nothing here touches meshes or assembled matrices.

#include <vector>

namespace rshapes {

// Eigenvalues of -u'' = nu * u on (0, L) with du/dn + beta u = 0 at both
// ends, ascending, first `count`. beta >= 0; beta == 0 gives (j pi / L)^2.
std::vector<double> interval_robin_eigenvalues(double L, double beta, int count);

// Rectangle (0,lx) x (0,ly) with the same Robin condition on all sides:
// tensor sums of the interval values, ascending with multiplicity.
std::vector<double> rectangle_robin_eigenvalues(double lx, double ly, double beta, int count);

// Disk of the given radius: lambda = (x/R)^2 over roots x of
// x J_n'(x) + beta R J_n(x) = 0; order n = 0 simple, n >= 1 double.
std::vector<double> disk_robin_eigenvalues(double radius, double beta, int count);

// Bessel function of the first kind, integer order. Validated for
// 0 <= n <= 20, |x| <= 200 (absolute error ~1e-13).
double bessel_j(int n, double x);

}  // namespace rshapes

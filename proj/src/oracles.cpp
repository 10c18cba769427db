#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rshapes {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::runtime_error("oracle root bracket does not change sign");
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a <= 1e-15 * std::max(1.0, std::abs(b))) break;
    }
    (void)fb;
    return 0.5 * (a + b);
}

// Ascending-series evaluation; safe from cancellation only for small x.
double bessel_j_series(int n, double x) {
    double half = 0.5 * x;
    double term = 1.0;
    for (int m = 1; m <= n; ++m) term *= half / double(m);  // (x/2)^n / n!
    double sum = term;
    double x2 = -half * half;
    for (int m = 1; m < 80; ++m) {
        term *= x2 / (double(m) * double(m + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Miller's downward recurrence with the even-order normalization
// J_0 + 2 (J_2 + J_4 + ...) = 1.
double bessel_j_miller(int n, double x) {
    int start = int(std::max(x + 14.0 * std::cbrt(x), double(n) + 20.0)) + 20;
    if (start % 2) ++start;  // even start keeps the parity bookkeeping simple
    double jp = 0.0;   // J_{m+1} (unnormalized)
    double j = 1e-30;  // J_m
    double sum = 2.0 * j;  // start index is even
    double res = (n == start) ? j : 0.0;
    for (int m = start; m >= 1; --m) {
        double jm1 = (2.0 * double(m) / x) * j - jp;
        jp = j;
        j = jm1;
        int idx = m - 1;
        if (idx == n) res = j;
        if (idx % 2 == 0) sum += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            sum *= 1e-250;
            res *= 1e-250;
        }
    }
    sum -= j;  // j is now the unnormalized J_0, which the loop counted twice
    return res / sum;
}

}  // namespace

double bessel_j(int n, double x) {
    // Validated envelope; outside it accuracy is not established.
    if (n < 0 || n > 20 || x < 0.0 || x > 200.0)
        throw std::out_of_range("bessel_j: validated for 0 <= n <= 20, 0 <= x <= 200");
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    // The series is free of cancellation only while terms stay <= O(1);
    // beyond x ~ 2 the normalized downward recurrence holds 1e-13 absolute,
    // which the series cannot once its largest term dwarfs the result.
    if (x <= 2.0) return bessel_j_series(n, x);
    return bessel_j_miller(n, x);
}

std::vector<double> interval_robin_eigenvalues(double L, double beta, int count) {
    if (!(L > 0.0)) throw std::runtime_error("interval oracle: length must be positive");
    if (beta < 0.0) throw std::runtime_error("interval oracle: beta must be nonnegative");
    if (count <= 0) return {};
    std::vector<double> out;
    out.reserve(size_t(count));
    if (beta == 0.0) {
        for (int j = 0; j < count; ++j) {
            double mu = double(j) * kPi / L;
            out.push_back(mu * mu);
        }
        return out;
    }
    // Split by symmetry about the midpoint; with s = mu L / 2:
    //   even modes: s tan s = beta L / 2, one root per (j pi, j pi + pi/2)
    //   odd modes:  s cot s = -beta L / 2, one root per (j pi + pi/2, (j+1) pi)
    // The merged mu's interlace: mu_i in (i pi / L, (i+1) pi / L).
    for (int i = 0; i < count; ++i) {
        int j = i / 2;
        double s;
        double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        if (i % 2 == 0) {
            // g(j pi) = -beta + O(eps), g(j pi + pi/2) = 2s/L + O(eps): a
            // valid bracket for any beta that dominates rounding noise.
            auto g = [&](double t) { return sgn * ((2.0 * t / L) * std::sin(t) - beta * std::cos(t)); };
            s = bisect(g, double(j) * kPi, double(j) * kPi + kPi / 2);
        } else {
            auto g = [&](double t) { return sgn * ((2.0 * t / L) * std::cos(t) + beta * std::sin(t)); };
            s = bisect(g, double(j) * kPi + kPi / 2, double(j + 1) * kPi);
        }
        double mu = 2.0 * s / L;
        out.push_back(mu * mu);
    }
    return out;
}

std::vector<double> rectangle_robin_eigenvalues(double lx, double ly, double beta, int count) {
    if (count <= 0) return {};
    std::vector<double> vx = interval_robin_eigenvalues(lx, beta, count);
    std::vector<double> vy = interval_robin_eigenvalues(ly, beta, count);
    std::vector<double> sums;
    sums.reserve(size_t(count) * size_t(count));
    for (double a : vx)
        for (double b : vy) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());
    sums.resize(size_t(count));
    return sums;
}

std::vector<double> disk_robin_eigenvalues(double radius, double beta, int count) {
    if (!(radius > 0.0)) throw std::runtime_error("disk oracle: radius must be positive");
    if (beta < 0.0) throw std::runtime_error("disk oracle: beta must be nonnegative");
    if (count <= 0) return {};
    const double br = beta * radius;

    // Characteristic function whose positive roots give lambda = (x/R)^2:
    //   n == 0: -x J_1(x) + br J_0(x)
    //   n >= 1:  x J_{n-1}(x) + (br - n) J_n(x)     [= x J_n'(x) + br J_n(x)]
    auto charfn = [&](int n, double x) {
        if (n == 0) return -x * bessel_j(1, x) + br * bessel_j(0, x);
        return x * bessel_j(n - 1, x) + (br - double(n)) * bessel_j(n, x);
    };

    // Sweep [0, X] for every order (roots of order n all exceed n, so orders
    // beyond X contribute nothing); widen X until `count` values are in hand.
    double X = std::max(8.0, 2.0 * std::sqrt(double(count)));
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<double> values;
        for (int n = 0; double(n) <= X; ++n) {
            auto f = [&](double x) { return charfn(n, x); };
            double lo = std::max(1e-6, 0.9 * double(n));
            if (beta == 0.0 && n == 0) values.push_back(0.0);  // Neumann constant mode
            double step = 0.2;
            double prev = lo;
            double fprev = f(lo);
            for (double x = lo + step; x <= X; x += step) {
                double fx = f(x);
                if (fprev == 0.0) {  // grid hit a root exactly
                    double lam = (prev / radius) * (prev / radius);
                    values.push_back(lam);
                    if (n >= 1) values.push_back(lam);
                } else if (fprev * fx < 0.0) {
                    double root = bisect(f, prev, x);
                    double lam = (root / radius) * (root / radius);
                    values.push_back(lam);
                    if (n >= 1) values.push_back(lam);  // e^{+-i n theta} pair
                }
                prev = x;
                fprev = fx;
            }
        }
        std::sort(values.begin(), values.end());
        if (int(values.size()) >= count) {
            // Make sure nothing above X could undercut the current count-th
            // value: all missed roots give lambda > (X/R)^2.
            double lamX = (X / radius) * (X / radius);
            if (values[size_t(count) - 1] <= lamX) {
                values.resize(size_t(count));
                return values;
            }
        }
        X *= 1.6;
    }
    throw std::runtime_error("disk oracle: failed to collect enough eigenvalues");
}

}  // namespace rshapes

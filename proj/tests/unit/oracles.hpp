#pragma once

// Reference values computed independently of the library: closed forms,
// series and special functions only.

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Torsional rigidity of the unit square, double sine series over odd modes.
inline double square_torsion(int modes = 401) {
    double s = 0.0;
    for (int m = 1; m <= modes; m += 2)
        for (int n = 1; n <= modes; n += 2) s += 1.0 / (double(m) * m * double(n) * n * (double(m) * m + double(n) * n));
    return 64.0 / std::pow(pi, 6) * s;
}

// First zero of J0 by bisection on std::cyl_bessel_j.
inline double bessel_j01() {
    double a = 2.0, b = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double c = 0.5 * (a + b);
        if (std::cyl_bessel_j(0.0, a) * std::cyl_bessel_j(0.0, c) <= 0.0) b = c;
        else a = c;
    }
    return 0.5 * (a + b);
}

// lambda1 of the 5-point Laplacian on the unit square with spacing h = 1/n:
// 2 (4/h^2) sin^2(pi h / 2).
inline double square_discrete_eigen(double h) {
    const double s = std::sin(pi * h / 2.0);
    return 8.0 * s * s / (h * h);
}

// pi_{2,q}^2 = (2/q) B1^2 (B2/B1)^{1-2/q}, B1 = B(1/q,1/2), B2 = B(1+1/q,1/2),
// from the first integral g'^2 = (2 lambda/q)(M^q - g^q) of -g'' = lambda g^{q-1}.
inline double pi2q(double q) {
    const double b1 = std::beta(1.0 / q, 0.5);
    const double b2 = std::beta(1.0 + 1.0 / q, 0.5);
    return std::sqrt(2.0 / q * b1 * b1 * std::pow(b2 / b1, 1.0 - 2.0 / q));
}

// Disk torsion function (R^2 - r^2)/4 and T = pi R^4 / 8.
inline double disk_torsion_function(double r2, double R = 1.0) { return (R * R - r2) / 4.0; }
inline double disk_torsion(double R = 1.0) { return pi * std::pow(R, 4) / 8.0; }

// Known Cheeger constants: disk 2/r; unit square 2 + sqrt(pi) (classical).
inline double square_cheeger() { return 2.0 + std::sqrt(pi); }

}  // namespace oracle

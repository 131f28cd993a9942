#pragma once

#include <vector>

namespace pfreq {

// Nodes tau_i = -1 + i*h, i = 1..n-1, h = 2/n; g(-1) = g(1) = 0 implied.
struct Profile1D {
    int n = 0;
    double h = 0.0;
    double q = 0.0;
    std::vector<double> values;
    // lambda1((-1,1);q) of the same grid, E^{-(2-q)/q} with E = int g'^2.
    double lambda = 0.0;

    double tau(int i) const { return -1.0 + i * h; }
    // Piecewise linear interpolation, 0 outside [-1,1].
    double value(double tau) const;
    // Face slopes interpolated between face midpoints, held constant past the
    // outermost midpoints.
    double derivative(double tau) const;
    // sum of squared face slopes times h, restricted to faces inside [a,b].
    double dirichlet_integral(double a = -1.0, double b = 1.0) const;
    // trapezoid sum of |g|^q.
    double lq_integral() const;
};

// lambda1((0,length);q) on a uniform grid with n intervals, no extrapolation.
double lambda1_segment(double length, double q, int n);
// sqrt of the Richardson-extrapolated lambda1((0,1);q) over n and 2n intervals.
double pi_2q(double q, int n = 512);
// (pi_2q)^2 2^{-(2+q)/q}
double lambda1_interval(double q, int n = 512);
// Direct Richardson-extrapolated solve on (-1,1), for cross-checking the identity.
double lambda1_interval_direct(double q, int n = 512);
// Positive even solution of -g'' = g^{q-1} on (-1,1), q in [1,2); q = 1 gives
// the torsion profile (1 - tau^2)/2.
Profile1D solve_g(double q, int n = 2048);

}  // namespace pfreq

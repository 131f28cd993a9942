#pragma once

#include <string>

#include "pfreq/convex.hpp"
#include "pfreq/fields.hpp"

namespace pfreq {

struct FrequencySolution {
    double q;
    ScalarField w;        // torsion function, Lane-Emden solution, or L2-normalised eigenfunction
    double lambda1;
    double lambda1_alt;   // independent formula (Rayleigh quotient / inverse-iteration estimate)
    double primal_max;    // value of the unconstrained maximisation; NaN at q = 2
    int iterations;
    double residual;
    double h;
};

FrequencySolution solve_torsion(const DomainPtr& dom, double tol = 1e-10);
FrequencySolution solve_eigen(const DomainPtr& dom, double tol = 1e-9);
FrequencySolution solve_sublinear(const DomainPtr& dom, double q, double tol = 1e-9);
// Dispatches on q: 1 -> torsion, 2 -> eigen, otherwise sublinear.
FrequencySolution solve_frequency(const DomainPtr& dom, double q, double tol = 0.0);

// sum_e |Du|^2 h^2 / (sum_k |u|^q h^2)^{2/q}
double rayleigh(const ScalarField& u, double q);

// (2/q) sum psi h^2 - (1/q^2) sum_e F_q(M_e, (D psi)_e) h^2 over faces, where
// M_e is the power mean [(b-a) / (q(b^{1/q} - a^{1/q}))]^{q/(q-1)} of the
// endpoint values a, b (exterior = 0).
ExtReal hidden_functional(const ScalarField& psi, double q);
double face_power_mean(double a, double b, double q);

// {q, lambda1, lambda1_alt, primal_max, iterations, residual, h}; NaN -> null.
std::string to_json(const FrequencySolution& s);

}  // namespace pfreq

#pragma once

#include <iosfwd>

#include "pfreq/fields.hpp"

namespace pfreq {

// -Delta with zero Dirichlet data: 5-point stencil, exterior nodes read as 0.
ScalarField apply_laplacian(const ScalarField& u);

// Forward differences onto faces: (Du)_e = (u_hi - u_lo)/h with exterior = 0.
VectorField gradient(const ScalarField& u);
// div = -D^T exactly, so sum_e <Du, v>_e h^2 = -sum_k u_k (div v)_k h^2 for
// every u and v, and -div(grad u) = apply_laplacian(u).
ScalarField divergence(const VectorField& v);

// sum_k u_k v_k h^2
double inner(const ScalarField& u, const ScalarField& v);
// Dirichlet energy sum_e |(Du)_e|^2 h^2.
double dirichlet_energy(const ScalarField& u);

struct CgOptions {
    double tol = 1e-10;                 // relative residual ||b - Ax|| / ||b||
    int max_iter = 0;                   // 0 picks a cap from the grid size
    const ScalarField* guess = nullptr; // warm start
};

struct CgResult {
    ScalarField x;
    int iterations;
    double residual;
};

// Conjugate gradients on the SPD 5-point matrix. Throws ConvergenceError
// (carrying the last relative residual) when the cap is hit.
CgResult conjugate_gradient(const ScalarField& rhs, const CgOptions& opts = {});
ScalarField solve_poisson(const ScalarField& rhs, double tol = 1e-10);

// CSV: index,x,y,value  /  index,x,y,vx,vy (nodal reconstruction).
void write_csv(std::ostream& out, const ScalarField& u);
void write_csv(std::ostream& out, const VectorField& v);

}  // namespace pfreq

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfreq/fields.hpp"
#include "pfreq/primal.hpp"

namespace pfreq {

// Candidate (f, phi) for -div phi + f >= 1. phi is staggered (faces).
struct DualPair {
    ScalarField f;
    VectorField phi;
    double q;
    double feasibility_residual;  // min normalised weak-constraint margin over hats and bumps
    int trim;                      // nodes with boundary_layer() <= trim are outside the trusted region
};

struct FeasibilityReport {
    double hat_min;    // min over single-node hats of (-div phi + f - 1)
    double bump_min;   // min over random bumps of the normalised weak margin
    bool feasible;
};

// Torsion pair: phi = Dw, f = 0.
DualPair build_pair_torsion(const ScalarField& w, int trim = 2);
// phi_e = (Dw)_e / m_e^{q-1} with m_e the mean of the two endpoint values
// (exterior = 0); f = 1 + div phi nodewise, which makes the pair feasible by
// construction. q in (1,2).
DualPair build_pair_sub(const ScalarField& w, double q, int trim = 2);
// phi_e = (1/lambda1)(DU)_e / m_e, f = 1 + div phi.
DualPair build_pair_eigen(const ScalarField& U, double lambda1, int trim = 2);
// phi = alpha (x0 - x) sampled on faces, f = 1 - 2 alpha, alpha = q/2.
DualPair build_pair_constant(const DomainPtr& dom, double q, Vec2 x0);

// The closed-form f of the optimal pair, -(q-1)|grad w|^2 / w^q, nodewise
// (|grad w|^2 from the staggered gradient). Reference for the constructed f.
ScalarField closed_form_f(const ScalarField& w, double q);

// Nodewise G_q(f, |phi|) with |phi|^2 = nodal_sqnorm; +inf where f >= 0 and phi != 0.
std::vector<double> nodal_G(const DualPair& pair);

struct DualObjective {
    double value;       // the objective (full domain for q < 2, trusted max for q = 2)
    double trusted;     // contribution of trusted nodes only
    double remainder;   // value - trusted for q < 2; max over the layer for q = 2
    std::vector<std::size_t> infinite_nodes;
};

DualObjective evaluate_dual(const DualPair& pair);
double dual_objective(const DualPair& pair);

FeasibilityReport check_feasibility(const DualPair& pair, std::uint64_t seed = 1, int bumps = 100,
                                    double tol = 1e-6);

struct DualityReport {
    double q;
    double primal_value;   // 1/lambda1
    double dual_value;
    double gap;            // dual - primal
    double gap_relative;   // gap / primal
    double h;
    double tol_budget;     // absolute slack allowed in primal <= dual + tol_budget
    bool certified;
    double feasibility_residual;
    double remainder;
};

// Discretisation slack for weak duality: 4h relative to the primal value.
double tol_budget(double primal_value, double h);
// Acceptance budget on |gap_relative|: 1% (q = 1), 2% (q = 2), 3% otherwise at
// h <= 1/128, scaled linearly in h above that.
double gap_budget(double q, double h);

DualityReport weak_duality_certificate(const FrequencySolution& primal, const DualPair& pair);
DualityReport weak_duality_certificate(const DomainPtr& dom, double q, const DualPair& pair);
// The pair matching the solver's q: torsion, eigen or sub-homogeneous.
DualPair optimal_pair(const FrequencySolution& s);
// Solve, build the matching optimal pair, check feasibility, report.
DualityReport certify(const DomainPtr& dom, double q, double tol = 0.0, std::uint64_t seed = 1);

// phi = -(DU)_e / m_e.
VectorField protter_hersch_field(const ScalarField& U);
// min over nodes with boundary_layer() > trim of div phi - |phi|^2.
double protter_hersch_lower_bound(const VectorField& phi, int trim = 8);

std::string to_json(const DualityReport& r);

}  // namespace pfreq

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfreq/geometry.hpp"

namespace pfreq {

enum class BoundType { Lower, Upper };

struct BoundRow {
    std::string name;
    BoundType type = BoundType::Lower;
    double value = 0.0;
    bool applicable = true;
    bool certified = true;   // false for rows fed by estimated inputs (Cheeger estimate mode)
    bool satisfied = true;
    double slack = 0.0;      // lambda/bound for lower rows, bound/lambda for upper rows
    std::string note;
};

struct BoundReport {
    std::string domain_id;
    double q = 0.0;
    double h = 0.0;
    double lambda1_computed = 0.0;
    std::vector<BoundRow> rows;
    bool hm_ordering_ok = true;
    std::string error;  // solver failure for this q; rows are empty then

    const BoundRow* find(const std::string& name) const;
    // Every applicable, certified row satisfied and no solver error.
    bool ok() const;
};

// Individual bounds, N = 2. Inputs are the quantities named in each formula.
double faber_krahn_lower(double area, double q, double lambda1_ball_ref, double ball_area);
double hersch_makai_lower(double area, double inradius, double q, double pi2q);
double polya_upper(double area, double perimeter, double q, double pi2q);
// (2/q)^2 I_p^{-(2-q)/q}, p = 2q/(2-q), q in [1,2).
double diaz_weinstein_lower(double min_moment_value, double q);
double cheeger_lower(double area, double h1, double q);
double hersch_makai_perimeter_lower(double perimeter, double inradius, double q, double pi2q);
// 1/lambda <= R^2 (sum_k |g'(d_k/R - 1)|^2 h^2)^{(2-q)/q}; q in [1,2).
double transplant_lower(const GridDomain& dom, double inradius, double q, int profile_n = 2048);

// Known Cheeger constants: disk 2/r, rectangle (4-pi)/(a+b-sqrt((a-b)^2+pi ab)).
std::optional<double> known_cheeger_constant(const GridDomain& dom);

struct BoundOptions {
    double tol = 0.02;
    double solver_tol = 0.0;     // 0 = solver defaults
    int pi_n = 512;
    int profile_n = 2048;
};

std::vector<BoundReport> bound_report(const DomainPtr& dom, const std::vector<double>& qs,
                                      const BoundOptions& opts = {});

std::string to_json(const BoundReport& r);
const char* to_string(BoundType t);

}  // namespace pfreq

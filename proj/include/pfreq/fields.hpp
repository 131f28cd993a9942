#pragma once

#include <vector>

#include "pfreq/geometry.hpp"

namespace pfreq {

// One real per interior node of a domain.
class ScalarField {
public:
    explicit ScalarField(DomainPtr dom, double value = 0.0);
    ScalarField(DomainPtr dom, std::vector<double> values);

    const DomainPtr& domain() const { return dom_; }
    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t k) { return v_[k]; }
    double operator[](std::size_t k) const { return v_[k]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double sum() const;      // sum of values times h^2
    double max() const;
    double min() const;

private:
    DomainPtr dom_;
    std::vector<double> v_;
};

// Staggered vector field: the x-component lives on x-faces, the y-component
// on y-faces (see GridDomain). Nodal values are reconstructed on demand.
class VectorField {
public:
    explicit VectorField(DomainPtr dom);
    VectorField(DomainPtr dom, std::vector<double> fx, std::vector<double> fy);

    const DomainPtr& domain() const { return dom_; }
    std::vector<double>& fx() { return fx_; }
    std::vector<double>& fy() { return fy_; }
    const std::vector<double>& fx() const { return fx_; }
    const std::vector<double>& fy() const { return fy_; }

    // Average of the two opposite faces.
    Vec2 nodal(std::size_t k) const;
    // |phi|^2 at node k from products of opposite faces, each clamped at 0.
    // Exact for fields that are affine across the node, and it does not
    // inflate at the last interior row where one face points outside.
    double nodal_sqnorm(std::size_t k) const;
    // Sum over faces of the squared face values times h^2.
    double face_energy() const;

private:
    DomainPtr dom_;
    std::vector<double> fx_, fy_;
};

void require_same_domain(const DomainPtr& a, const DomainPtr& b, const char* what);

}  // namespace pfreq

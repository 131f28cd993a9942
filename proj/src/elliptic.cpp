#include "pfreq/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pfreq/errors.hpp"

namespace pfreq {

void require_same_domain(const DomainPtr& a, const DomainPtr& b, const char* what) {
    if (!a || !b || a.get() != b.get()) throw DomainError(std::string(what) + ": fields live on different domains");
}

ScalarField::ScalarField(DomainPtr dom, double value) : dom_(std::move(dom)) {
    if (!dom_) throw DomainError("ScalarField: null domain");
    v_.assign(dom_->size(), value);
}

ScalarField::ScalarField(DomainPtr dom, std::vector<double> values) : dom_(std::move(dom)), v_(std::move(values)) {
    if (!dom_) throw DomainError("ScalarField: null domain");
    if (v_.size() != dom_->size()) throw DomainError("ScalarField: length differs from interior-node count");
    for (double x : v_)
        if (!std::isfinite(x)) throw DomainError("ScalarField: non-finite value");
}

double ScalarField::sum() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s * dom_->h() * dom_->h();
}

double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }
double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }

VectorField::VectorField(DomainPtr dom) : dom_(std::move(dom)) {
    if (!dom_) throw DomainError("VectorField: null domain");
    fx_.assign(dom_->x_face_count(), 0.0);
    fy_.assign(dom_->y_face_count(), 0.0);
}

VectorField::VectorField(DomainPtr dom, std::vector<double> fx, std::vector<double> fy)
    : dom_(std::move(dom)), fx_(std::move(fx)), fy_(std::move(fy)) {
    if (!dom_) throw DomainError("VectorField: null domain");
    if (fx_.size() != dom_->x_face_count() || fy_.size() != dom_->y_face_count())
        throw DomainError("VectorField: face counts do not match the domain");
    for (double x : fx_)
        if (!std::isfinite(x)) throw DomainError("VectorField: non-finite value");
    for (double x : fy_)
        if (!std::isfinite(x)) throw DomainError("VectorField: non-finite value");
}

Vec2 VectorField::nodal(std::size_t k) const {
    const GridDomain& d = *dom_;
    return {0.5 * (fx_[d.face_w(k)] + fx_[d.face_e(k)]), 0.5 * (fy_[d.face_s(k)] + fy_[d.face_n(k)])};
}

double VectorField::nodal_sqnorm(std::size_t k) const {
    const GridDomain& d = *dom_;
    return std::max(fx_[d.face_w(k)] * fx_[d.face_e(k)], 0.0) + std::max(fy_[d.face_s(k)] * fy_[d.face_n(k)], 0.0);
}

double VectorField::face_energy() const {
    double s = 0.0;
    for (double x : fx_) s += x * x;
    for (double x : fy_) s += x * x;
    return s * dom_->h() * dom_->h();
}

namespace {

void laplacian_into(const GridDomain& d, const std::vector<double>& u, std::vector<double>& out) {
    const double s = 1.0 / (d.h() * d.h());
    const std::size_t n = d.size();
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 4.0 * u[k];
        const int w = d.west(k), e = d.east(k), so = d.south(k), no = d.north(k);
        if (w >= 0) acc -= u[w];
        if (e >= 0) acc -= u[e];
        if (so >= 0) acc -= u[so];
        if (no >= 0) acc -= u[no];
        out[k] = s * acc;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

ScalarField apply_laplacian(const ScalarField& u) {
    ScalarField out(u.domain());
    laplacian_into(*u.domain(), u.values(), out.values());
    return out;
}

VectorField gradient(const ScalarField& u) {
    const GridDomain& d = *u.domain();
    VectorField g(u.domain());
    const double inv = 1.0 / d.h();
    auto val = [&](int k) { return k >= 0 ? u[std::size_t(k)] : 0.0; };
    for (std::size_t e = 0; e < d.x_face_count(); ++e) g.fx()[e] = (val(d.x_face_hi(e)) - val(d.x_face_lo(e))) * inv;
    for (std::size_t e = 0; e < d.y_face_count(); ++e) g.fy()[e] = (val(d.y_face_hi(e)) - val(d.y_face_lo(e))) * inv;
    return g;
}

ScalarField divergence(const VectorField& v) {
    const GridDomain& d = *v.domain();
    ScalarField out(v.domain());
    const double inv = 1.0 / d.h();
    for (std::size_t k = 0; k < d.size(); ++k)
        out[k] = (v.fx()[d.face_e(k)] - v.fx()[d.face_w(k)] + v.fy()[d.face_n(k)] - v.fy()[d.face_s(k)]) * inv;
    return out;
}

double inner(const ScalarField& u, const ScalarField& v) {
    require_same_domain(u.domain(), v.domain(), "inner");
    const double h = u.domain()->h();
    return dot(u.values(), v.values()) * h * h;
}

double dirichlet_energy(const ScalarField& u) { return gradient(u).face_energy(); }

CgResult conjugate_gradient(const ScalarField& rhs, const CgOptions& opts) {
    if (!(opts.tol > 0)) throw DomainError("conjugate_gradient: tol must be positive");
    const GridDomain& d = *rhs.domain();
    const std::size_t n = d.size();
    const int cap = opts.max_iter > 0 ? opts.max_iter : 50 * (d.nx() + d.ny()) + 1000;

    ScalarField x(rhs.domain());
    if (opts.guess) {
        require_same_domain(rhs.domain(), opts.guess->domain(), "conjugate_gradient");
        x.values() = opts.guess->values();
    }
    const double bnorm = std::sqrt(dot(rhs.values(), rhs.values()));
    if (bnorm == 0.0) return {ScalarField(rhs.domain()), 0, 0.0};

    std::vector<double> r(n), p(n), ap(n);
    laplacian_into(d, x.values(), ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
    // The diagonal is the constant 4/h^2, so Jacobi scaling only rescales
    // the residual and is left out.
    p = r;
    double rr = dot(r, r);
    double res = std::sqrt(rr) / bnorm;
    int it = 0;
    while (res > opts.tol) {
        if (it >= cap)
            throw ConvergenceError("conjugate_gradient: iteration cap " + std::to_string(cap) +
                                       " reached, relative residual " + std::to_string(res),
                                   res);
        laplacian_into(d, p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
        ++it;
        res = std::sqrt(rr) / bnorm;
    }
    return {std::move(x), it, res};
}

ScalarField solve_poisson(const ScalarField& rhs, double tol) {
    CgOptions o;
    o.tol = tol;
    return conjugate_gradient(rhs, o).x;
}

void write_csv(std::ostream& out, const ScalarField& u) {
    const GridDomain& d = *u.domain();
    char buf[128];
    out << "index,x,y,value\n";
    for (std::size_t k = 0; k < d.size(); ++k) {
        const Vec2 p = d.position(k);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, p.x, p.y, u[k]);
        out << buf;
    }
}

void write_csv(std::ostream& out, const VectorField& v) {
    const GridDomain& d = *v.domain();
    char buf[160];
    out << "index,x,y,vx,vy\n";
    for (std::size_t k = 0; k < d.size(); ++k) {
        const Vec2 p = d.position(k);
        const Vec2 a = v.nodal(k);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", k, p.x, p.y, a.x, a.y);
        out << buf;
    }
}

}  // namespace pfreq

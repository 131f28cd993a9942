#include "pfreq/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "pfreq/convex.hpp"
#include "pfreq/elliptic.hpp"
#include "pfreq/errors.hpp"

namespace pfreq {

namespace {

// phi_e = scale * (Du)_e / m_e^expo, m_e the arithmetic mean of the endpoints.
VectorField quotient_field(const ScalarField& u, double expo, double scale) {
    const GridDomain& d = *u.domain();
    for (double x : u.values())
        if (!(x > 0.0)) throw DomainError("dual pair: extremal must be strictly positive on every node");
    VectorField phi(u.domain());
    const double inv = 1.0 / d.h();
    auto val = [&](int k) { return k >= 0 ? u[std::size_t(k)] : 0.0; };
    auto face = [&](int lo, int hi) {
        const double a = val(lo), b = val(hi);
        const double m = 0.5 * (a + b);
        const double dm = expo == 1.0 ? m : std::pow(m, expo);
        return scale * (b - a) * inv / dm;
    };
    for (std::size_t e = 0; e < d.x_face_count(); ++e) phi.fx()[e] = face(d.x_face_lo(e), d.x_face_hi(e));
    for (std::size_t e = 0; e < d.y_face_count(); ++e) phi.fy()[e] = face(d.y_face_lo(e), d.y_face_hi(e));
    return phi;
}

ScalarField closing_f(const VectorField& phi) {
    ScalarField f = divergence(phi);
    for (auto& x : f.values()) x += 1.0;
    return f;
}

DualPair finish(ScalarField f, VectorField phi, double q, int trim) {
    DualPair p{std::move(f), std::move(phi), q, 0.0, trim};
    const auto rep = check_feasibility(p);
    p.feasibility_residual = std::min(rep.hat_min, rep.bump_min);
    return p;
}

}  // namespace

DualPair build_pair_torsion(const ScalarField& w, int trim) {
    VectorField phi = gradient(w);
    return finish(ScalarField(w.domain()), std::move(phi), 1.0, trim);
}

DualPair build_pair_sub(const ScalarField& w, double q, int trim) {
    if (!(q > 1.0 && q < 2.0)) throw DomainError("build_pair_sub: q must lie in (1,2)");
    VectorField phi = quotient_field(w, q - 1.0, 1.0);
    ScalarField f = closing_f(phi);
    return finish(std::move(f), std::move(phi), q, trim);
}

DualPair build_pair_eigen(const ScalarField& U, double lambda1, int trim) {
    if (!(lambda1 > 0.0)) throw DomainError("build_pair_eigen: lambda1 must be positive");
    VectorField phi = quotient_field(U, 1.0, 1.0 / lambda1);
    ScalarField f = closing_f(phi);
    return finish(std::move(f), std::move(phi), 2.0, trim);
}

DualPair build_pair_constant(const DomainPtr& dom, double q, Vec2 x0) {
    if (!(q >= 1.0 && q <= 2.0)) throw DomainError("build_pair_constant: q must lie in [1,2]");
    const double alpha = q / 2.0;
    const GridDomain& d = *dom;
    VectorField phi(dom);
    const double h = d.h();
    for (std::size_t e = 0; e < d.x_face_count(); ++e) {
        const int k = d.x_face_lo(e) >= 0 ? d.x_face_lo(e) : d.x_face_hi(e);
        const double xm = d.origin().x + (d.node_i(k) + (d.x_face_lo(e) >= 0 ? 0.5 : -0.5)) * h;
        phi.fx()[e] = alpha * (x0.x - xm);
    }
    for (std::size_t e = 0; e < d.y_face_count(); ++e) {
        const int k = d.y_face_lo(e) >= 0 ? d.y_face_lo(e) : d.y_face_hi(e);
        const double ym = d.origin().y + (d.node_j(k) + (d.y_face_lo(e) >= 0 ? 0.5 : -0.5)) * h;
        phi.fy()[e] = alpha * (x0.y - ym);
    }
    // q = 1 keeps f = 0 exactly (alpha N = 1).
    ScalarField f(dom, 1.0 - 2.0 * alpha);
    return finish(std::move(f), std::move(phi), q, 0);
}

ScalarField closed_form_f(const ScalarField& w, double q) {
    const VectorField g = gradient(w);
    ScalarField f(w.domain());
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = -(q - 1.0) * g.nodal_sqnorm(k) / std::pow(w[k], q);
    return f;
}

std::vector<double> nodal_G(const DualPair& p) {
    const std::size_t n = p.f.size();
    std::vector<double> G(n);
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double s = p.f[k];
        const double m2 = p.phi.nodal_sqnorm(k);
        if (s < 0.0) G[k] = p.q == 2.0 ? m2 / -s : std::pow(m2, 0.5 * p.q) / std::pow(-s, p.q - 1.0);
        else G[k] = m2 == 0.0 && s == 0.0 ? 0.0 : inf;
    }
    return G;
}

DualObjective evaluate_dual(const DualPair& p) {
    const GridDomain& d = *p.f.domain();
    const double h2 = d.h() * d.h();
    const auto& layer = d.boundary_layer();
    DualObjective out{0.0, 0.0, 0.0, {}};

    if (p.q == 1.0) {
        // sum |phi|^2 over faces; trusted faces join two trusted nodes.
        auto trusted = [&](int k) { return k >= 0 && layer[k] > p.trim; };
        double all = 0.0, inner = 0.0;
        for (std::size_t e = 0; e < d.x_face_count(); ++e) {
            const double v = p.phi.fx()[e] * p.phi.fx()[e];
            all += v;
            if (trusted(d.x_face_lo(e)) && trusted(d.x_face_hi(e))) inner += v;
        }
        for (std::size_t e = 0; e < d.y_face_count(); ++e) {
            const double v = p.phi.fy()[e] * p.phi.fy()[e];
            all += v;
            if (trusted(d.y_face_lo(e)) && trusted(d.y_face_hi(e))) inner += v;
        }
        out.value = all * h2;
        out.trusted = inner * h2;
        out.remainder = out.value - out.trusted;
        return out;
    }

    const auto G = nodal_G(p);
    for (std::size_t k = 0; k < G.size(); ++k)
        if (std::isinf(G[k])) out.infinite_nodes.push_back(k);

    if (p.q == 2.0) {
        double inner = 0.0, rim = 0.0;
        for (std::size_t k = 0; k < G.size(); ++k) {
            if (layer[k] > p.trim) inner = std::max(inner, G[k]);
            else rim = std::max(rim, G[k]);
        }
        out.value = inner;
        out.trusted = inner;
        out.remainder = rim;
        return out;
    }

    const double r = 2.0 / (2.0 - p.q);
    const double c = std::pow(p.q - 1.0, (p.q - 1.0) * 2.0 / p.q);
    double all = 0.0, inner = 0.0;
    for (std::size_t k = 0; k < G.size(); ++k) {
        const double v = std::pow(G[k], r);
        all += v;
        if (layer[k] > p.trim) inner += v;
    }
    const double e = (2.0 - p.q) / p.q;
    out.value = c * std::pow(all * h2, e);
    out.trusted = c * std::pow(inner * h2, e);
    out.remainder = out.value - out.trusted;
    return out;
}

double dual_objective(const DualPair& p) { return evaluate_dual(p).value; }

FeasibilityReport check_feasibility(const DualPair& p, std::uint64_t seed, int bumps, double tol) {
    require_same_domain(p.f.domain(), p.phi.domain(), "check_feasibility");
    const GridDomain& d = *p.f.domain();
    const std::size_t n = d.size();
    // Hats: the weak margin of e_k, divided by its mass h^2, is -div phi + f - 1.
    const ScalarField div = divergence(p.phi);
    double hat_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) hat_min = std::min(hat_min, -div[k] + p.f[k] - 1.0);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 x = d.position(k);
        xmin = std::min(xmin, x.x);
        xmax = std::max(xmax, x.x);
        ymin = std::min(ymin, x.y);
        ymax = std::max(ymax, x.y);
    }
    const double extent = std::max(xmax - xmin, ymax - ymin) + d.h();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double bump_min = std::numeric_limits<double>::infinity();
    ScalarField psi(p.f.domain());
    for (int b = 0; b < bumps; ++b) {
        const Vec2 c = d.position(pick(rng)) + Vec2{(unit(rng) - 0.5) * d.h(), (unit(rng) - 0.5) * d.h()};
        const double r = 3.0 * d.h() + unit(rng) * (0.5 * extent - 3.0 * d.h());
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 v = d.position(k) - c;
            const double t = 1.0 - (v.x * v.x + v.y * v.y) / (r * r);
            psi[k] = t > 0.0 ? t * t : 0.0;
        }
        const VectorField g = gradient(psi);
        double flux = 0.0;
        for (std::size_t e = 0; e < d.x_face_count(); ++e) flux += p.phi.fx()[e] * g.fx()[e];
        for (std::size_t e = 0; e < d.y_face_count(); ++e) flux += p.phi.fy()[e] * g.fy()[e];
        double fpsi = 0.0, mass = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            fpsi += p.f[k] * psi[k];
            mass += psi[k];
        }
        if (mass <= 0.0) continue;
        bump_min = std::min(bump_min, (flux + fpsi - mass) / mass);
    }
    if (bumps <= 0) bump_min = 0.0;
    return {hat_min, bump_min, hat_min >= -tol && bump_min >= -tol};
}

double tol_budget(double primal_value, double h) { return 4.0 * h * std::abs(primal_value); }

double gap_budget(double q, double h) {
    const double base = q == 1.0 ? 0.01 : q == 2.0 ? 0.02 : 0.03;
    return base * std::max(1.0, 128.0 * h);
}

DualityReport weak_duality_certificate(const FrequencySolution& primal, const DualPair& pair) {
    require_same_domain(primal.w.domain(), pair.f.domain(), "weak_duality_certificate");
    const auto obj = evaluate_dual(pair);
    DualityReport r;
    r.q = pair.q;
    r.primal_value = 1.0 / primal.lambda1;
    r.dual_value = obj.value;
    r.gap = r.dual_value - r.primal_value;
    r.gap_relative = r.gap / r.primal_value;
    r.h = primal.h;
    r.tol_budget = tol_budget(r.primal_value, r.h);
    r.feasibility_residual = pair.feasibility_residual;
    r.certified = r.primal_value <= r.dual_value + r.tol_budget && pair.feasibility_residual >= -1e-6;
    r.remainder = obj.remainder;
    return r;
}

DualityReport weak_duality_certificate(const DomainPtr& dom, double q, const DualPair& pair) {
    if (pair.q != q) throw DomainError("weak_duality_certificate: pair built for a different q");
    return weak_duality_certificate(solve_frequency(dom, q), pair);
}

DualPair optimal_pair(const FrequencySolution& s) {
    if (s.q == 1.0) return build_pair_torsion(s.w);
    if (s.q == 2.0) return build_pair_eigen(s.w, s.lambda1);
    return build_pair_sub(s.w, s.q);
}

DualityReport certify(const DomainPtr& dom, double q, double tol, std::uint64_t seed) {
    const FrequencySolution s = solve_frequency(dom, q, tol);
    DualPair p = optimal_pair(s);
    if (seed != 1) {
        const auto feas = check_feasibility(p, seed);
        p.feasibility_residual = std::min(feas.hat_min, feas.bump_min);
    }
    return weak_duality_certificate(s, p);
}

VectorField protter_hersch_field(const ScalarField& U) { return quotient_field(U, 1.0, -1.0); }

double protter_hersch_lower_bound(const VectorField& phi, int trim) {
    const GridDomain& d = *phi.domain();
    const ScalarField div = divergence(phi);
    const auto& layer = d.boundary_layer();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d.size(); ++k)
        if (layer[k] > trim) best = std::min(best, div[k] - phi.nodal_sqnorm(k));
    if (!std::isfinite(best)) throw DomainError("protter_hersch_lower_bound: trim leaves no trusted node");
    return best;
}

std::string to_json(const DualityReport& r) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["h"] = r.h;
    j["primal_value"] = r.primal_value;
    j["dual_value"] = std::isfinite(r.dual_value) ? nlohmann::json(r.dual_value) : nlohmann::json(nullptr);
    j["gap"] = std::isfinite(r.gap) ? nlohmann::json(r.gap) : nlohmann::json(nullptr);
    j["gap_relative"] = std::isfinite(r.gap_relative) ? nlohmann::json(r.gap_relative) : nlohmann::json(nullptr);
    j["tol_budget"] = r.tol_budget;
    j["certified"] = r.certified;
    j["feasibility_residual"] = r.feasibility_residual;
    j["remainder"] = r.remainder;
    return j.dump();
}

}  // namespace pfreq

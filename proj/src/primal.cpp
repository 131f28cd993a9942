#include "pfreq/primal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include "json.hpp"

#include "pfreq/elliptic.hpp"
#include "pfreq/errors.hpp"

namespace pfreq {

namespace {

double lq_sum(const ScalarField& u, double q) {
    double s = 0.0;
    for (double x : u.values()) s += q == 1.0 ? std::abs(x) : q == 2.0 ? x * x : std::pow(std::abs(x), q);
    const double h = u.domain()->h();
    return s * h * h;
}

// Inner solves only need to beat the current outer error by a margin; the
// outer convergence tests recompute residuals directly, so this cannot fake
// convergence.
double adaptive_tol(double floor_tol, double outer_error) {
    return std::clamp(1e-3 * outer_error, floor_tol, 1e-6);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double rayleigh(const ScalarField& u, double q) {
    if (!(q >= 1.0 && q <= 2.0)) throw DomainError("rayleigh: q must lie in [1,2]");
    const double denom = lq_sum(u, q);
    if (!(denom > 0.0)) throw DomainError("rayleigh: zero field");
    return dirichlet_energy(u) / std::pow(denom, 2.0 / q);
}

FrequencySolution solve_torsion(const DomainPtr& dom, double tol) {
    CgOptions o;
    o.tol = tol;
    auto cg = conjugate_gradient(ScalarField(dom, 1.0), o);
    const double T = cg.x.sum();
    const double E = dirichlet_energy(cg.x);
    FrequencySolution s{1.0, cg.x, 1.0 / T, rayleigh(cg.x, 1.0), 2.0 * T - E, cg.iterations, cg.residual, dom->h()};
    return s;
}

FrequencySolution solve_eigen(const DomainPtr& dom, double tol) {
    if (!(tol > 0)) throw DomainError("solve_eigen: tol must be positive");
    const double inner_tol = std::min(1e-11, 1e-2 * tol);
    // Block-size-one LOBPCG with the CG inverse as preconditioner: Rayleigh-Ritz
    // on span{u, A^{-1}u, p}, p the previous update. Plain inverse iteration
    // crawls on elongated domains where lambda1/lambda2 is close to 1.
    ScalarField u = solve_torsion(dom, inner_tol).w;
    auto normalize = [](ScalarField& f) {
        const double n = std::sqrt(inner(f, f));
        for (auto& x : f.values()) x /= n;
        return n;
    };
    normalize(u);
    const std::size_t n = u.size();
    ScalarField guess(dom);
    std::optional<ScalarField> p;
    double lam = rayleigh(u, 2.0), lam_alt = lam, res = 1.0;
    const int cap = 2000;
    for (int it = 1; it <= cap; ++it) {
        CgOptions o;
        o.tol = adaptive_tol(inner_tol, res);
        for (std::size_t k = 0; k < n; ++k) guess[k] = u[k] / lam;
        o.guess = &guess;
        auto cg = conjugate_gradient(u, o);
        lam_alt = 1.0 / inner(u, cg.x);  // <u,u>/<u, A^{-1}u> with |u| = 1

        std::vector<ScalarField> basis{u};
        auto add = [&](ScalarField v) {
            if (normalize(v) == 0.0) return;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : basis) {
                    const double c = inner(v, b);
                    for (std::size_t k = 0; k < n; ++k) v[k] -= c * b[k];
                }
            // Near convergence A^{-1}u is almost parallel to u; keep anything
            // above roundoff, noise directions cannot raise the Ritz value.
            if (normalize(v) < 1e-14) return;
            basis.push_back(std::move(v));
        };
        add(std::move(cg.x));
        if (p) add(*p);

        const int m = int(basis.size());
        std::vector<ScalarField> abasis;
        for (const auto& b : basis) abasis.push_back(apply_laplacian(b));
        Eigen::MatrixXd K(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) K(i, j) = K(j, i) = inner(basis[i], abasis[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        const Eigen::VectorXd y = es.eigenvectors().col(0);

        ScalarField next(dom), dir(dom);
        for (int i = 0; i < m; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                next[k] += y(i) * basis[i][k];
                if (i > 0) dir[k] += y(i) * basis[i][k];
            }
        u = std::move(next);
        normalize(u);
        if (u.sum() < 0)
            for (auto& x : u.values()) x = -x;
        p = std::move(dir);
        lam = rayleigh(u, 2.0);
        const ScalarField au = apply_laplacian(u);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            num += (au[k] - lam * u[k]) * (au[k] - lam * u[k]);
            den += lam * lam * u[k] * u[k];
        }
        res = std::sqrt(num / den);
        if (res <= tol)
            return {2.0, u, lam, lam_alt, std::numeric_limits<double>::quiet_NaN(), it, res, dom->h()};
    }
    throw ConvergenceError("solve_eigen: eigen iteration did not converge", res);
}

FrequencySolution solve_sublinear(const DomainPtr& dom, double q, double tol) {
    if (!(q > 1.0 && q < 2.0)) throw DomainError("solve_sublinear: q must lie strictly inside (1,2)");
    if (!(tol > 0)) throw DomainError("solve_sublinear: tol must be positive");
    const double inner_tol = std::min(1e-11, 1e-2 * tol);
    ScalarField v = solve_torsion(dom, inner_tol).w;
    double mu = 1.0 / v.max();
    for (auto& x : v.values()) x *= mu;

    const std::size_t n = v.size();
    ScalarField rhs(dom), guess(dom), gv(dom);
    ScalarField w(dom);
    double diff = 1.0, res = 1.0, prev_diff = std::numeric_limits<double>::infinity();
    // Anderson mixing over the last few steps of the normalized map; the plain
    // step gv is what the convergence test looks at.
    const int depth = 5;
    std::deque<std::vector<double>> hist_g, hist_f;
    const int cap = 5000;
    for (int it = 1; it <= cap; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            rhs[k] = std::pow(v[k], q - 1.0);
            guess[k] = v[k] / mu;
        }
        CgOptions o;
        o.tol = adaptive_tol(inner_tol, std::max(diff, res));
        o.guess = &guess;
        auto cg = conjugate_gradient(rhs, o);
        mu = 1.0 / cg.x.max();
        diff = 0.0;
        std::vector<double> f(n);
        for (std::size_t k = 0; k < n; ++k) {
            gv[k] = mu * cg.x[k];
            f[k] = gv[k] - v[k];
            diff = std::max(diff, std::abs(f[k]));
        }
        if (diff <= tol) {
            // -Delta v = mu v^{q-1} at the fixed point, so w = mu^{-1/(2-q)} v
            // solves -Delta w = w^{q-1}.
            const double c = std::pow(mu, -1.0 / (2.0 - q));
            for (std::size_t k = 0; k < n; ++k) w[k] = c * gv[k];
            const ScalarField aw = apply_laplacian(w);
            std::vector<double> r(n), wq(n);
            for (std::size_t k = 0; k < n; ++k) {
                wq[k] = std::pow(w[k], q - 1.0);
                r[k] = aw[k] - wq[k];
            }
            res = max_abs(r) / max_abs(wq);
            if (res <= tol) {
                if (w.min() <= 0.0)
                    throw ConvergenceError("solve_sublinear: non-positive node in the extremal", res);
                const double E = dirichlet_energy(w);
                const double L = lq_sum(w, q);
                return {q, w, std::pow(E, -(2.0 - q) / q), rayleigh(w, q), (2.0 / q) * L - E, it,
                        std::max(diff, res), dom->h()};
            }
        }
        if (diff > prev_diff) {
            hist_g.clear();
            hist_f.clear();
        }
        prev_diff = diff;
        hist_g.push_back(gv.values());
        hist_f.push_back(f);
        if (int(hist_g.size()) > depth + 1) {
            hist_g.pop_front();
            hist_f.pop_front();
        }
        const int m = int(hist_g.size()) - 1;
        if (m == 0) {
            v = gv;
            continue;
        }
        Eigen::MatrixXd dF(n, m);
        Eigen::VectorXd fk = Eigen::Map<const Eigen::VectorXd>(f.data(), Eigen::Index(n));
        for (int j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k) dF(Eigen::Index(k), j) = hist_f[j + 1][k] - hist_f[j][k];
        const Eigen::VectorXd gamma = dF.colPivHouseholderQr().solve(fk);
        double vmax = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double x = gv[k];
            for (int j = 0; j < m; ++j) x -= gamma(j) * (hist_g[j + 1][k] - hist_g[j][k]);
            v[k] = std::max(x, 0.0);
            vmax = std::max(vmax, v[k]);
        }
        if (!(vmax > 0.0)) {
            v = gv;
            hist_g.clear();
            hist_f.clear();
            continue;
        }
        for (auto& x : v.values()) x /= vmax;
    }
    throw ConvergenceError("solve_sublinear: fixed point did not converge (sup step " + std::to_string(diff) +
                               ", residual " + std::to_string(res) + ")",
                           std::max(diff, res));
}

FrequencySolution solve_frequency(const DomainPtr& dom, double q, double tol) {
    if (q == 1.0) return solve_torsion(dom, tol > 0 ? tol : 1e-10);
    if (q == 2.0) return solve_eigen(dom, tol > 0 ? tol : 1e-9);
    return solve_sublinear(dom, q, tol > 0 ? tol : 1e-9);
}

double face_power_mean(double a, double b, double q) {
    if (a < 0.0 || b < 0.0) throw DomainError("face_power_mean: negative argument");
    if (a == b) return a;
    const double hi = std::max(a, b);
    if (std::abs(b - a) <= 1e-3 * hi) {
        // Expansion around the midpoint m with half-difference d; avoids the
        // cancellation in the closed form. The next term is O(d^4 / m^3).
        const double m = 0.5 * (a + b), d = 0.5 * (b - a);
        return m - (2.0 - 1.0 / q) * d * d / (6.0 * m);
    }
    const double r = (b - a) / (q * (std::pow(b, 1.0 / q) - std::pow(a, 1.0 / q)));
    return std::pow(r, q / (q - 1.0));
}

ExtReal hidden_functional(const ScalarField& psi, double q) {
    if (!(q > 1.0 && q < 2.0)) throw DomainError("hidden_functional: q must lie in (1,2)");
    for (double x : psi.values())
        if (x < 0.0) throw DomainError("hidden_functional: psi must be non-negative");
    const GridDomain& d = *psi.domain();
    const double h = d.h();
    auto val = [&](int k) { return k >= 0 ? psi[std::size_t(k)] : 0.0; };
    double F = 0.0;
    auto add = [&](double a, double b) {
        const double x = (b - a) / h;
        const ExtReal f = F_q_sq(q, face_power_mean(a, b, q), x * x);
        if (f.is_infinite()) return false;
        F += f.value();
        return true;
    };
    for (std::size_t e = 0; e < d.x_face_count(); ++e)
        if (!add(val(d.x_face_lo(e)), val(d.x_face_hi(e)))) return ExtReal::infinity();
    for (std::size_t e = 0; e < d.y_face_count(); ++e)
        if (!add(val(d.y_face_lo(e)), val(d.y_face_hi(e)))) return ExtReal::infinity();
    return ExtReal((2.0 / q) * psi.sum() - F * h * h / (q * q));
}

std::string to_json(const FrequencySolution& s) {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    nlohmann::ordered_json j;
    j["q"] = s.q;
    j["lambda1"] = num(s.lambda1);
    j["lambda1_alt"] = num(s.lambda1_alt);
    j["primal_max"] = num(s.primal_max);
    j["iterations"] = s.iterations;
    j["residual"] = num(s.residual);
    j["h"] = s.h;
    return j.dump();
}

}  // namespace pfreq

#include "pfreq/bounds.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "json.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/onedim.hpp"
#include "pfreq/primal.hpp"

namespace pfreq {

const char* to_string(BoundType t) { return t == BoundType::Lower ? "lower" : "upper"; }

const BoundRow* BoundReport::find(const std::string& name) const {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

bool BoundReport::ok() const {
    if (!error.empty()) return false;
    for (const auto& r : rows)
        if (r.applicable && r.certified && !r.satisfied) return false;
    return hm_ordering_ok;
}

double faber_krahn_lower(double area, double q, double lambda1_ball_ref, double ball_area) {
    return lambda1_ball_ref * std::pow(ball_area / area, 2.0 / q);
}

double hersch_makai_lower(double area, double inradius, double q, double pi2q) {
    const double c = 0.5 * pi2q;
    return c * c * std::pow(area, (q - 2.0) / q) / (inradius * inradius);
}

double polya_upper(double area, double perimeter, double q, double pi2q) {
    const double c = 0.5 * pi2q;
    const double r = perimeter / std::pow(area, 0.5 + 1.0 / q);
    return c * c * r * r;
}

double diaz_weinstein_lower(double min_moment_value, double q) {
    if (!(q >= 1.0 && q < 2.0)) throw DomainError("diaz_weinstein_lower: q must lie in [1,2)");
    return (2.0 / q) * (2.0 / q) * std::pow(min_moment_value, -(2.0 - q) / q);
}

double cheeger_lower(double area, double h1, double q) {
    return (h1 / q) * (h1 / q) * std::pow(area, -(2.0 - q) / q);
}

double hersch_makai_perimeter_lower(double perimeter, double inradius, double q, double pi2q) {
    const double c = 0.5 * pi2q;
    return c * c * std::pow(perimeter, (q - 2.0) / q) / std::pow(inradius, (q + 2.0) / q);
}

double transplant_lower(const GridDomain& dom, double inradius, double q, int profile_n) {
    if (!(q >= 1.0 && q < 2.0)) throw DomainError("transplant_lower: q must lie in [1,2)");
    const Profile1D g = solve_g(q, profile_n);
    const auto& d = dom.boundary_distance();
    double s = 0.0;
    for (double dk : d) {
        const double gp = g.derivative(dk / inradius - 1.0);
        s += gp * gp;
    }
    s *= dom.h() * dom.h();
    const double inv = inradius * inradius * std::pow(s, (2.0 - q) / q);
    return 1.0 / inv;
}

std::optional<double> known_cheeger_constant(const GridDomain& dom) {
    const ShapeInfo& s = dom.shape();
    if (s.kind == ShapeKind::Disk) return 2.0 / s.radius;
    if (s.kind == ShapeKind::Rectangle) {
        const double a = s.width, b = s.height, pi = std::numbers::pi;
        return (4.0 - pi) / (a + b - std::sqrt((a - b) * (a - b) + pi * a * b));
    }
    return std::nullopt;
}

namespace {

BoundRow make_row(const std::string& name, BoundType type, double value, double lambda, double tol) {
    BoundRow r;
    r.name = name;
    r.type = type;
    r.value = value;
    if (type == BoundType::Lower) {
        r.slack = lambda / value;
        r.satisfied = value <= lambda * (1.0 + tol);
    } else {
        r.slack = value / lambda;
        r.satisfied = value >= lambda * (1.0 - tol);
    }
    return r;
}

BoundRow skipped(const std::string& name, BoundType type, const std::string& note) {
    BoundRow r;
    r.name = name;
    r.type = type;
    r.applicable = false;
    r.satisfied = true;
    r.value = std::nan("");
    r.slack = std::nan("");
    r.note = note;
    return r;
}

// lambda1 of the unit disk on the lattice of spacing h, shared across calls
// (every domain in a sweep compares against the same reference).
double reference_ball_lambda(double h, double q, double solver_tol) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, double>, double> cache;
    const auto key = std::make_tuple(h, q, solver_tol);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double lam = solve_frequency(build_disk(1.0, h), q, solver_tol).lambda1;
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, lam);
    return lam;
}

}  // namespace

std::vector<BoundReport> bound_report(const DomainPtr& dom, const std::vector<double>& qs, const BoundOptions& opts) {
    const GeometricSummary geo = summarize(*dom);
    const DomainPtr ball = build_disk(1.0, dom->h());
    const double ball_area = double(ball->size()) * dom->h() * dom->h();
    const auto h1 = known_cheeger_constant(*dom);
    std::vector<BoundReport> out;
    for (double q : qs) {
        BoundReport rep;
        rep.domain_id = dom->shape().label;
        rep.q = q;
        rep.h = dom->h();
        try {
            if (!(q >= 1.0 && q <= 2.0)) throw DomainError("q must lie in [1,2]");
            const double lam = solve_frequency(dom, q, opts.solver_tol).lambda1;
            rep.lambda1_computed = lam;
            const double pi2q = pi_2q(q, opts.pi_n);
            const double lam_ball = reference_ball_lambda(dom->h(), q, opts.solver_tol);
            const bool convex = dom->convex();
            const std::string gate = "domain not flagged convex";

            rep.rows.push_back(make_row("faber_krahn", BoundType::Lower,
                                        faber_krahn_lower(geo.area, q, lam_ball, ball_area), lam, opts.tol));

            if (convex)
                rep.rows.push_back(make_row("hersch_makai", BoundType::Lower,
                                            hersch_makai_lower(geo.area, geo.inradius, q, pi2q), lam, opts.tol));
            else rep.rows.push_back(skipped("hersch_makai", BoundType::Lower, gate));

            if (convex)
                rep.rows.push_back(make_row("polya", BoundType::Upper, polya_upper(geo.area, geo.perimeter, q, pi2q),
                                            lam, opts.tol));
            else rep.rows.push_back(skipped("polya", BoundType::Upper, gate));

            if (q < 2.0) {
                const double I = min_moment(*dom, 2.0 * q / (2.0 - q)).first;
                rep.rows.push_back(make_row("diaz_weinstein", BoundType::Lower, diaz_weinstein_lower(I, q), lam, opts.tol));
            } else {
                rep.rows.push_back(skipped("diaz_weinstein", BoundType::Lower, "moment exponent 2q/(2-q) is infinite at q = 2"));
            }

            if (h1) {
                auto r = make_row("cheeger", BoundType::Lower, cheeger_lower(geo.area, *h1, q), lam, opts.tol);
                r.note = "known h1";
                rep.rows.push_back(r);
            } else {
                auto r = make_row("cheeger", BoundType::Lower, cheeger_lower(geo.area, geo.perimeter / geo.area, q), lam,
                                  opts.tol);
                r.certified = false;
                r.note = "estimate: h1 replaced by P/|A|, not a certificate";
                rep.rows.push_back(r);
            }

            if (convex)
                rep.rows.push_back(make_row("hersch_makai_perimeter", BoundType::Lower,
                                            hersch_makai_perimeter_lower(geo.perimeter, geo.inradius, q, pi2q), lam,
                                            opts.tol));
            else rep.rows.push_back(skipped("hersch_makai_perimeter", BoundType::Lower, gate));

            if (convex && q < 2.0)
                rep.rows.push_back(make_row("transplant", BoundType::Lower,
                                            transplant_lower(*dom, geo.inradius, q, opts.profile_n), lam, opts.tol));
            else
                rep.rows.push_back(skipped("transplant", BoundType::Lower,
                                           convex ? "profile exponent (2-q)/q vanishes at q = 2" : gate));

            if (convex) {
                const double eps = 1e-12;
                const BoundRow* hmp = rep.find("hersch_makai_perimeter");
                const BoundRow* hm = rep.find("hersch_makai");
                const BoundRow* tr = rep.find("transplant");
                rep.hm_ordering_ok = hmp->value <= hm->value * (1.0 + eps);
                if (tr->applicable) rep.hm_ordering_ok = rep.hm_ordering_ok && hmp->value <= tr->value * (1.0 + eps);
            }
        } catch (const std::exception& e) {
            rep.rows.clear();
            rep.error = e.what();
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::string to_json(const BoundReport& r) {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    nlohmann::ordered_json j;
    j["domain"] = r.domain_id;
    j["q"] = r.q;
    j["h"] = r.h;
    j["lambda1"] = num(r.lambda1_computed);
    j["hm_ordering_ok"] = r.hm_ordering_ok;
    j["ok"] = r.ok();
    if (!r.error.empty()) j["error"] = r.error;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json x;
        x["name"] = row.name;
        x["type"] = to_string(row.type);
        x["value"] = num(row.value);
        x["applicable"] = row.applicable;
        x["certified"] = row.certified;
        x["satisfied"] = row.satisfied;
        x["slack"] = num(row.slack);
        if (!row.note.empty()) x["note"] = row.note;
        rows.push_back(x);
    }
    j["rows"] = rows;
    return j.dump();
}

}  // namespace pfreq

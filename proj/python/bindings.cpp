#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfreq/bounds.hpp"
#include "pfreq/convex.hpp"
#include "pfreq/dual.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/onedim.hpp"
#include "pfreq/primal.hpp"

namespace py = pybind11;
using namespace pfreq;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> a(py::ssize_t(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict solution_dict(const FrequencySolution& s) {
    py::dict d;
    d["q"] = s.q;
    d["lambda1"] = s.lambda1;
    d["lambda1_alt"] = s.lambda1_alt;
    d["primal_max"] = s.primal_max;
    d["iterations"] = s.iterations;
    d["residual"] = s.residual;
    d["h"] = s.h;
    d["w"] = to_numpy(s.w.values());
    return d;
}

py::dict duality_dict(const DualityReport& r) {
    py::dict d;
    d["q"] = r.q;
    d["h"] = r.h;
    d["primal_value"] = r.primal_value;
    d["dual_value"] = r.dual_value;
    d["gap"] = r.gap;
    d["gap_relative"] = r.gap_relative;
    d["gap_budget"] = gap_budget(r.q, r.h);
    d["tol_budget"] = r.tol_budget;
    d["certified"] = r.certified;
    d["feasibility_residual"] = r.feasibility_residual;
    d["remainder"] = r.remainder;
    return d;
}

py::dict bound_dict(const BoundReport& r) {
    py::dict d;
    d["domain"] = r.domain_id;
    d["q"] = r.q;
    d["h"] = r.h;
    d["lambda1"] = r.lambda1_computed;
    d["hm_ordering_ok"] = r.hm_ordering_ok;
    d["ok"] = r.ok();
    d["error"] = r.error;
    py::list rows;
    for (const auto& row : r.rows) {
        py::dict x;
        x["name"] = row.name;
        x["type"] = to_string(row.type);
        x["value"] = row.value;
        x["applicable"] = row.applicable;
        x["certified"] = row.certified;
        x["satisfied"] = row.satisfied;
        x["slack"] = row.slack;
        x["note"] = row.note;
        rows.append(x);
    }
    d["rows"] = rows;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pfreq, m) {
    m.doc() = "Generalized principal frequencies lambda1(Omega; q), 1 <= q <= 2, on grid domains";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<GridDomain, std::shared_ptr<GridDomain>>(m, "Domain")
        .def_property_readonly("h", &GridDomain::h)
        .def_property_readonly("nx", &GridDomain::nx)
        .def_property_readonly("ny", &GridDomain::ny)
        .def_property_readonly("size", &GridDomain::size)
        .def_property_readonly("convex", &GridDomain::convex)
        .def_property_readonly("label", [](const GridDomain& d) { return d.shape().label; })
        .def("mask", [](const GridDomain& d) {
            py::array_t<std::uint8_t> a({d.ny(), d.nx()});
            std::copy(d.mask().begin(), d.mask().end(), a.mutable_data());
            return a;
        }, "Row j holds y = origin.y + j*h.")
        .def("positions", [](const GridDomain& d) {
            py::array_t<double> a({py::ssize_t(d.size()), py::ssize_t(2)});
            auto r = a.mutable_unchecked<2>();
            for (std::size_t k = 0; k < d.size(); ++k) {
                const Vec2 p = d.position(k);
                r(py::ssize_t(k), 0) = p.x;
                r(py::ssize_t(k), 1) = p.y;
            }
            return a;
        })
        .def("boundary_distance", [](const GridDomain& d) { return to_numpy(d.boundary_distance()); })
        .def("summary", [](const GridDomain& d) {
            const GeometricSummary g = summarize(d);
            py::dict out;
            out["area"] = g.area;
            out["perimeter"] = g.perimeter;
            out["inradius"] = g.inradius;
            out["centroid"] = py::make_tuple(g.centroid.x, g.centroid.y);
            out["circumradius"] = g.circumradius;
            return out;
        })
        .def("__repr__", [](const GridDomain& d) {
            return "<Domain " + d.shape().label + " nodes=" + std::to_string(d.size()) + ">";
        });

    // Builders hand back const domains; pybind11 needs a non-const holder.
    auto unconst = [](DomainPtr p) { return std::const_pointer_cast<GridDomain>(p); };
    m.def("disk", [unconst](double r, double h) { return unconst(build_disk(r, h)); }, py::arg("r"), py::arg("h"));
    m.def("rectangle", [unconst](double w, double H, double h) { return unconst(build_rectangle(w, H, h)); },
          py::arg("width"), py::arg("height"), py::arg("h"));
    m.def("polygon", [unconst](const std::vector<std::pair<double, double>>& pts, double h) {
        std::vector<Vec2> v;
        for (auto [x, y] : pts) v.push_back({x, y});
        return unconst(build_polygon(v, h));
    }, py::arg("vertices"), py::arg("h"));
    m.def("domain", [unconst](const std::string& spec, double h) { return unconst(parse_domain_spec(spec, h)); },
          py::arg("spec"), py::arg("h"), "Shape literal (disk:r=1, rect:w=1,h=1, poly:...) or domain file path.");

    m.def("solve", [](std::shared_ptr<GridDomain> d, double q, double tol) {
        std::optional<FrequencySolution> s;
        {
            py::gil_scoped_release nogil;
            s = solve_frequency(d, q, tol);
        }
        return solution_dict(*s);
    }, py::arg("domain"), py::arg("q"), py::arg("tol") = 0.0);

    m.def("certify", [](std::shared_ptr<GridDomain> d, double q, double tol, std::uint64_t seed) {
        DualityReport r;
        {
            py::gil_scoped_release nogil;
            r = certify(d, q, tol, seed);
        }
        return duality_dict(r);
    }, py::arg("domain"), py::arg("q"), py::arg("tol") = 0.0, py::arg("seed") = 1);

    m.def("bounds", [](std::shared_ptr<GridDomain> d, const std::vector<double>& qs, double tol) {
        BoundOptions o;
        o.tol = tol;
        std::vector<BoundReport> reps;
        {
            py::gil_scoped_release nogil;
            reps = bound_report(d, qs, o);
        }
        py::list out;
        for (const auto& r : reps) out.append(bound_dict(r));
        return out;
    }, py::arg("domain"), py::arg("qs"), py::arg("tol") = 0.02);

    m.def("protter_hersch", [](std::shared_ptr<GridDomain> d, int trim) {
        py::gil_scoped_release nogil;
        const FrequencySolution s = solve_eigen(d);
        return std::make_pair(protter_hersch_lower_bound(protter_hersch_field(s.w), trim), s.lambda1);
    }, py::arg("domain"), py::arg("trim") = 8, "Returns (lower bound, lambda1).");

    m.def("hidden_functional", [](std::shared_ptr<GridDomain> d, py::array_t<double, py::array::c_style> psi,
                                  double q) {
        if (psi.ndim() != 1 || std::size_t(psi.shape(0)) != d->size())
            throw DomainError("hidden_functional: psi must have one value per interior node");
        const ScalarField f(d, std::vector<double>(psi.data(), psi.data() + psi.shape(0)));
        return hidden_functional(f, q).value();
    }, py::arg("domain"), py::arg("psi"), py::arg("q"));

    m.def("pi_2q", &pi_2q, py::arg("q"), py::arg("n") = 512);
    m.def("lambda1_interval", &lambda1_interval, py::arg("q"), py::arg("n") = 512);
    m.def("alpha_q", &alpha_q, py::arg("q"));
    m.def("conjugate_closed", [](double q, double s, double xi1, double xi2) {
        return F_q_star_closed(q, s, {xi1, xi2}).value();
    }, py::arg("q"), py::arg("s"), py::arg("xi1"), py::arg("xi2"));
    m.def("conjugate_bruteforce", [](double q, double s, double xi1, double xi2, int n) {
        const ConvexIntegrand f = [q](double t, Vec2 x) { return F_q(q, t, x); };
        return lf_conjugate_search(f, s, {xi1, xi2}, n).value;
    }, py::arg("q"), py::arg("s"), py::arg("xi1"), py::arg("xi2"), py::arg("n") = 64);
    m.def("conjugate_check", [](double q, int samples, std::uint64_t seed) {
        const ConjugateCheck c = conjugate_check(q, samples, seed);
        return std::make_pair(c.max_rel_closed, c.max_rel_identity);
    }, py::arg("q"), py::arg("samples") = 100, py::arg("seed") = 1,
       "Max relative errors (closed form, rescaling identity).");
}

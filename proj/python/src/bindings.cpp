#include "toricnef/arith.hpp"
#include "toricnef/circuits.hpp"
#include "toricnef/fan.hpp"
#include "toricnef/instances.hpp"
#include "toricnef/io.hpp"
#include "toricnef/lattice_quotient.hpp"
#include "toricnef/polytope.hpp"
#include "toricnef/verifier.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace toric;

// Everything crosses the boundary as JSON text; the Python package parses it.
namespace {

json parse(const std::string& s, const char* what) {
    try {
        return json::parse(s);
    } catch (const json::exception& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

LatticePolytope hull_of(const std::string& vertices) {
    json j = parse(vertices, "vertices");
    if (!j.is_array()) throw InputError("vertices: expected a list of points");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point_from_json(j[i], "vertices[" + std::to_string(i) + "]"));
    return LatticePolytope::hull(pts);
}

std::string verify(const std::string& instance, const std::string& custom, const std::string& graph_cache,
                   std::size_t budget, unsigned jobs, bool timing) {
    PipelineConfig cfg;
    cfg.instance = instance;
    if (!custom.empty()) cfg.custom = instance_from_json(parse(custom, "instance"));
    cfg.graph_cache = graph_cache;
    cfg.budget = budget;
    cfg.jobs = jobs;
    Report r;
    {
        py::gil_scoped_release release;
        r = verify_pipeline(cfg);
    }
    json out = r.to_json(timing);
    out["passed"] = r.passed();
    return out.dump();
}

std::string check_certificate(const std::string& cert) {
    auto c = parse(cert, "certificate");
    CertificateOutcome out;
    {
        py::gil_scoped_release release;
        out = verify_certificate(c);
    }
    return json{{"pass", out.pass}, {"failure", out.failure}}.dump();
}

std::string singularities(const std::string& fan) {
    Fan f = fan_from_json(parse(fan, "fan"));
    json a = json::array();
    for (const auto& cs : classify_singularities(f).cones) {
        json q = json::array();
        for (const auto& w : cs.quotient_type) q.push_back(to_json(w));
        a.push_back({{"cone", cs.cone},
                     {"dim", cs.dim},
                     {"multiplicity", to_json(cs.multiplicity)},
                     {"smooth", cs.smooth},
                     {"gorenstein", cs.gorenstein},
                     {"simplicial", cs.simplicial},
                     {"quotient_type", q}});
    }
    return a.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<Error>(m, "ToricError", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<BudgetExhausted>(m, "BudgetExhausted", base.ptr());

    m.def("instance_names", &instance_names);
    m.def("verify", &verify, py::arg("instance"), py::arg("custom"), py::arg("graph_cache"), py::arg("budget"),
          py::arg("jobs"), py::arg("timing"));
    m.def("check_certificate", &check_certificate, py::arg("certificate"));

    m.def("polar_dual", [](const std::string& v) { return to_json(polar_dual(hull_of(v))).dump(); });
    m.def("lattice_points", [](const std::string& v) {
        json a = json::array();
        for (const auto& p : hull_of(v).lattice_points()) a.push_back(to_json(p));
        return a.dump();
    });
    m.def("census", [](const std::string& v) { return json(classify_lattice_points(hull_of(v)).count_by_dim).dump(); });
    m.def("face_fan", [](const std::string& v) { return to_json(face_fan(hull_of(v))).dump(); });
    m.def("singularities", &singularities);

    m.def("invariant_lattice", [](const std::string& order, const std::string& weights) {
        json w = parse(weights, "weights");
        if (!w.is_array() || w.empty()) throw InputError("weights: expected a nonempty list");
        std::vector<Point> gens;
        for (std::size_t i = 0; i < w.size(); ++i) gens.push_back(point_from_json(w[i], "weights[" + std::to_string(i) + "]"));
        auto action = DiagonalAction::from_projective(int_from_json(parse(order, "order"), "order"), gens);
        auto L = invariant_sublattice(action, gens[0].size() - 1);
        return json{{"index", to_json(L.index)}, {"basis", to_json(L.basis)}}.dump();
    });
    m.def("hnf", [](const std::string& a) {
        auto r = hnf(matrix_from_json(parse(a, "matrix"), "matrix"));
        return json{{"H", to_json(r.H)}, {"U", to_json(r.U)}}.dump();
    });
    m.def("snf", [](const std::string& a) {
        auto r = snf(matrix_from_json(parse(a, "matrix"), "matrix"));
        return json{{"D", to_json(r.D)}, {"U", to_json(r.U)}, {"V", to_json(r.V)}}.dump();
    });
    m.def("circuit", [](const std::string& rays, const std::vector<int>& subset) {
        json j = parse(rays, "rays");
        if (!j.is_array()) throw InputError("rays: expected a list of points");
        std::vector<Point> pts;
        for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point_from_json(j[i], "rays[" + std::to_string(i) + "]"));
        for (int s : subset)
            if (s < 0 || static_cast<std::size_t>(s) >= pts.size()) throw InputError("subset index out of range");
        auto c = circuit_of(pts, subset);
        return c ? to_json(*c).dump() : std::string("null");
    });
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfact/gce.hpp"
#include "qfact/problem.hpp"

namespace py = pybind11;
using namespace qfact;

namespace {

struct PySpace {
    SpacePtr space;
};

struct PyChannel {
    StochasticMap map;
};

PySpace py_make_space(Eigen::Index ambient_dim, const std::vector<CMatrix>& generators,
                      const CMatrix& density, const Tolerance& tol) {
    ProbabilitySpace p;
    p.algebra = generate(ambient_dim, generators, tol);
    p.density = density;
    return PySpace{gns_ptr(p, tol)};
}

PyChannel py_make_channel(const PySpace& src, const PySpace& tgt,
                          const std::vector<CMatrix>& images_of_basis, const Tolerance& tol) {
    return PyChannel{make_map_ambient(src.space, tgt.space, images_of_basis, tol)};
}

py::dict py_markov(const PyChannel& c, const Tolerance& tol) {
    auto mk = markov_check(c.map, tol);
    py::dict d;
    d["markov"] = mk.markov;
    d["agree"] = mk.agree;
    d["prop1_i"] = mk.cond_adjoint.residual;
    d["prop1_ii"] = mk.cond_modular.residual;
    d["prop1_iii"] = mk.cond_j.residual;
    return d;
}

py::dict py_dilate(const PyChannel& c, const Tolerance& tol) {
    auto dil = dilate(c.map, tol);
    auto rel = verify_relations(dil, tol);
    py::dict rows;
    for (const auto& [name, v] : rel.rows) rows[py::str(name)] = v;
    py::dict d;
    d["L_dim"] = dil.L_dim;
    d["relations"] = rows;
    d["max_residual"] = rel.max_residual();
    return d;
}

py::dict summarize(const FactorizationCertificate& cert) {
    py::dict d;
    d["valid"] = cert.valid;
    d["minimal"] = cert.minimal;
    d["dim_R"] = cert.R.dim();
    d["cond1_a"] = cert.cond1_a;
    d["cond1_b"] = cert.cond1_b;
    d["omega_separating"] = cert.omega_separating;
    d["reconstruction_residual"] = cert.reconstruction_residual;
    d["reconstruction_residual_sharp"] = cert.reconstruction_residual_sharp;
    return d;
}

py::dict py_factorize_deterministic(const PyChannel& c, const Tolerance& tol) {
    return summarize(deterministic_factorize(c.map, tol));
}

py::dict py_factorize_abelian(const PyChannel& c, const Tolerance& tol) {
    auto sd = make_sharp_dilation(c.map, tol);
    auto jh = jhat_abelian(sd, tol);
    auto cert = certify(sd, jh, tol);
    py::dict d = summarize(cert);
    d["antiunij"] = jh.antiunij_residual;
    d["w_involution"] = jh.involution_residual;
    return d;
}

py::dict py_certify(const PyChannel& c, const CMatrix& jhat_mat, const Tolerance& tol) {
    auto sd = make_sharp_dilation(c.map, tol);
    auto jh = make_jhat(sd, jhat_mat, JhatProvenance::user_supplied, tol);
    py::dict d = summarize(certify(sd, jh, tol));
    d["antiunij"] = jh.antiunij_residual;
    return d;
}

py::dict py_gce(const PyChannel& c, const Tolerance& tol) {
    auto sd = make_sharp_dilation(c.map, tol);
    JHat jh;
    if (multiplicativity_residual(sd.phi) <= tol.residual_pass)
        jh = jhat_deterministic(sd, tol);
    else
        jh = jhat_abelian(sd, tol);
    auto rep = gce_factorization(sd, jh, tol);
    py::dict d;
    d["cce_1"] = rep.cce1;
    d["cce_2"] = rep.cce2;
    d["cce_pass"] = rep.cce_pass;
    d["prop5_grid1"] = rep.prop5_grid1;
    d["prop5_grid2"] = rep.prop5_grid2;
    d["corollary1"] = rep.corollary_sharp;
    d["remark1_biconditional"] = rep.remark1_biconditional;
    d["certificate"] = rep.certificate ? py::object(summarize(*rep.certificate)) : py::none();
    return d;
}

std::string py_run_problem(const std::string& text, const std::string& format) {
    ProblemFile p = parse_problem_text(text);
    Report rep = run(p);
    return emit(rep, format == "json" ? ReportFormat::json : ReportFormat::text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GNS standard forms, Stinespring dilations, and factorization "
              "certificates for stochastic maps between finite-dimensional "
              "noncommutative probability spaces";

    py::class_<Tolerance>(m, "Tolerance")
        .def(py::init<>())
        .def(py::init([](double rank_cut, double residual_pass) {
                 Tolerance t{rank_cut, residual_pass};
                 t.validate();
                 return t;
             }),
             py::arg("rank_cut") = 1e-9, py::arg("residual_pass") = 1e-8)
        .def_readwrite("rank_cut", &Tolerance::rank_cut)
        .def_readwrite("residual_pass", &Tolerance::residual_pass);

    py::class_<PySpace>(m, "Space")
        .def_property_readonly("gns_dim", [](const PySpace& s) { return s.space->dim; })
        .def_property_readonly("algebra_dim",
                               [](const PySpace& s) { return s.space->rep_algebra.dim(); })
        .def_property_readonly("delta", [](const PySpace& s) { return s.space->Delta; })
        .def_property_readonly("j_mat", [](const PySpace& s) { return s.space->J.mat; })
        .def_property_readonly("omega", [](const PySpace& s) { return s.space->omega; });

    py::class_<PyChannel>(m, "Channel")
        .def_property_readonly("unital", [](const PyChannel& c) { return c.map.unital.ok; })
        .def_property_readonly("cp", [](const PyChannel& c) { return c.map.cp.ok; })
        .def_property_readonly("state_preserving",
                               [](const PyChannel& c) { return c.map.state_preserving.ok; })
        .def_property_readonly("stochastic", [](const PyChannel& c) { return c.map.stochastic(); });

    m.def("make_space", &py_make_space, py::arg("ambient_dim"), py::arg("generators"),
          py::arg("density"), py::arg("tol") = Tolerance{},
          "GNS standard form of (algebra generated by the given matrices, density state)");
    m.def("make_channel", &py_make_channel, py::arg("source"), py::arg("target"),
          py::arg("images_of_basis"), py::arg("tol") = Tolerance{},
          "linear map given by images of the source algebra basis");
    m.def("markov_check", &py_markov, py::arg("channel"), py::arg("tol") = Tolerance{});
    m.def("dilate", &py_dilate, py::arg("channel"), py::arg("tol") = Tolerance{});
    m.def("factorize_deterministic", &py_factorize_deterministic, py::arg("channel"),
          py::arg("tol") = Tolerance{});
    m.def("factorize_abelian", &py_factorize_abelian, py::arg("channel"),
          py::arg("tol") = Tolerance{});
    m.def("certify_jhat", &py_certify, py::arg("channel"), py::arg("jhat"),
          py::arg("tol") = Tolerance{});
    m.def("gce_factorization", &py_gce, py::arg("channel"), py::arg("tol") = Tolerance{});
    m.def("run_problem", &py_run_problem, py::arg("problem_json"), py::arg("format") = "json",
          "run a problem file given as a JSON string and return the report");
}

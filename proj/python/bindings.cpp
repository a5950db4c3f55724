#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphkdv/airy_resolvent.hpp"
#include "graphkdv/config.hpp"
#include "graphkdv/extension.hpp"
#include "graphkdv/instability.hpp"
#include "graphkdv/profiles.hpp"
#include "graphkdv/runner.hpp"
#include "graphkdv/schrodinger.hpp"

namespace py = pybind11;
using namespace graphkdv;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

/// Elementwise f over any-shaped x, same shape out.
template <class F>
py::array_t<double> map_array(const py::array_t<double>& x, F f) {
    const auto in = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(x);
    py::array_t<double> out(std::vector<py::ssize_t>(in.shape(), in.shape() + in.ndim()));
    const double* src = in.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(src[i]);
    return out;
}

/// {"x": ..., "edges": [values per edge]} for a sampled graph function.
py::dict function_dict(const RealFunction& u) {
    py::list edges, xs;
    for (int e = 0; e < u.edges(); ++e) {
        std::vector<double> x(u.grid.N + 1);
        for (int k = 0; k <= u.grid.N; ++k) x[k] = u.grid.x(e, k);
        xs.append(to_array(x));
        edges.append(to_array(u[e]));
    }
    py::dict d;
    d["x"] = xs;
    d["values"] = edges;
    return d;
}

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RunConfig config_from(const std::string& text, const py::kwargs& overrides) {
    RunConfig c = parse_config(text);
    for (auto [k, v] : overrides) {
        const std::string key = py::str(k);
        if (key == "Z") c.Z = v.cast<double>();
        else if (key == "L") c.L = v.cast<double>();
        else if (key == "N") c.N = v.cast<int>();
        else if (key == "task") c.task = v.cast<std::string>();
        else if (key == "output_dir") c.output_dir = v.cast<std::string>();
        else if (key == "sweep") c.sweep = v.cast<std::vector<double>>();
        else throw ConfigError(key, "unknown override");
    }
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stationary KdV waves on star graphs: profiles, spectra, growing modes and reports";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::enum_<ProfileKind>(m, "ProfileKind")
        .value("tail", ProfileKind::tail)
        .value("bump", ProfileKind::bump)
        .value("half_soliton", ProfileKind::half_soliton);

    py::class_<Profile>(m, "Profile")
        .def(py::init(&make_profile), py::arg("Z"), py::arg("alpha") = 1.0, py::arg("omega") = 1.0)
        .def_readonly("Z", &Profile::Z)
        .def_readonly("alpha", &Profile::alpha)
        .def_readonly("beta", &Profile::beta)
        .def_readonly("omega", &Profile::omega)
        .def_readonly("kind", &Profile::kind)
        .def("__call__",
             [](const Profile& p, const py::array_t<double>& x, int deriv) {
                 return map_array(x, [&](double v) { return p(v, deriv); });
             },
             py::arg("x"), py::arg("deriv") = 0)
        .def("vertex_residuals", &check_vertex_conditions)
        .def("stationarity_residual", &stationarity_residual, py::arg("L") = 40.0, py::arg("N") = 2000)
        .def("omega_derivative",
             [](const Profile& p, const py::array_t<double>& x) {
                 const auto d = omega_derivative(p);
                 return map_array(x, [&](double v) { return d(v); });
             },
             py::arg("x"))
        .def("__repr__", [](const Profile& p) {
            return "Profile(Z=" + std::to_string(p.Z) + ", kind=" + to_string(p.kind) + ")";
        });

    m.def("mass_derivative_oracle", &mass_derivative_oracle, py::arg("Z"));
    m.def("theta_to_Z", &theta_to_Z, py::arg("theta"));
    m.def("deficiency_indices", [](int m_, int n_) {
        const DeficiencyIndices d = deficiency_indices(StarGraph::uniform(m_, n_));
        return py::make_tuple(d.n_plus, d.n_minus);
    }, py::arg("m"), py::arg("n"));
    m.def("characteristic_roots", [](cplx lambda, int beta_sign) {
        const RootTriple r = characteristic_roots(lambda, beta_sign);
        return py::make_tuple(r.gamma1, r.gamma2, r.gamma3);
    }, py::arg("lam"), py::arg("beta_sign") = 1);

    m.def("spectrum", [](double Z, double L, int N, int k) {
        const GraphGrid g = build_grid(StarGraph::uniform(1, 1), L, N);
        const RealFunction phi = sample_profile(g, make_profile(Z, 1.0, 1.0));
        const SchrodingerOperator E =
            assemble_schrodinger(g, Z, phi, Z == 0.0 ? VertexKind::kirchhoff : VertexKind::delta);
        const SpectralReport r = spectrum_below_edge(E, k);
        py::dict d;
        d["eigenvalues"] = r.eigenvalues;
        d["residuals"] = r.residuals;
        d["morse_index"] = r.morse_index;
        d["kernel_detected"] = r.kernel_detected;
        py::list vecs;
        for (const auto& v : r.eigenvectors) vecs.append(function_dict(v));
        d["eigenvectors"] = vecs;
        return d;
    }, "Eigenvalues below the essential edge of the Schrodinger operator on two half-lines (alpha = omega = 1)",
       py::arg("Z"), py::arg("L") = 40.0, py::arg("N") = 2000, py::arg("k") = 3);

    m.def("growing_mode", [](double Z, double L, int N) {
        const GraphGrid g = build_grid(StarGraph::uniform(1, 1), L, N);
        GrowingMode gm;
        {
            py::gil_scoped_release release;
            gm = growing_modes(assemble_linearized(g, make_profile(Z, 1.0, 1.0)));
        }
        py::dict d;
        d["found"] = gm.found;
        d["zeta"] = gm.zeta;
        d["residual"] = gm.residual;
        d["paired_negative"] = gm.paired_negative;
        d["symmetry_error"] = gm.symmetry_error;
        d["window"] = gm.window;
        d["note"] = gm.note;
        if (gm.found) d["eigenfunction"] = function_dict(gm.eigenfunction);
        return d;
    }, "Real eigenvalue pair of the linearized operator on two half-lines (alpha = omega = 1)",
       py::arg("Z"), py::arg("L") = 40.0, py::arg("N") = 2000);

    m.def("run", [](const std::string& config_text, bool write_files, const py::kwargs& overrides) {
        const RunConfig c = config_from(config_text, overrides);
        RunOutcome out;
        {
            py::gil_scoped_release release;
            out = run(c, write_files);
        }
        return py::make_tuple(out.exit_code, json_to_py(out.report));
    }, "Runs the task pipeline on INI text (keyword overrides: Z, L, N, task, output_dir, sweep). "
       "Returns (exit_code, report).",
       py::arg("config_text") = "", py::arg("write_files") = false);

    m.def("sweep", [](const std::string& config_text, const py::kwargs& overrides) {
        const RunConfig c = config_from(config_text, overrides);
        nlohmann::json rows;
        {
            py::gil_scoped_release release;
            rows = sweep(c);
        }
        return json_to_py(rows);
    }, py::arg("config_text") = "");
}

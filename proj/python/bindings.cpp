#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "page_entropy/dimensions.hpp"
#include "page_entropy/entropy.hpp"
#include "page_entropy/haar_sampler.hpp"
#include "page_entropy/saddle.hpp"
#include "page_entropy/spectra.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace page_entropy;

namespace {

py::int_ to_python(const BigDim& d) { return py::int_(py::str(d.to_string())); }

LocalModel resolve(const py::object& model) {
    if (py::isinstance<LocalModel>(model)) return model.cast<LocalModel>();
    return parse_model(model.cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_page_entropy, m) {
    m.doc() = "Average entanglement entropy of random states with fixed particle number";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_MemoryError);

    py::class_<LocalModel>(m, "LocalModel")
        .def_property_readonly("label", &LocalModel::label)
        .def_property_readonly("n_max", &LocalModel::n_max)
        .def_property_readonly("radius", &LocalModel::radius)
        .def("coefficients", [](const LocalModel& self, std::size_t count) {
            py::list out;
            for (const auto& a : self.coefficients(count)) out.append(to_python(a));
            return out;
        }, py::arg("count"))
        .def("to_json", [](const LocalModel& self) { return model_to_json(self); })
        .def("__repr__", [](const LocalModel& self) { return "LocalModel('" + self.label() + "')"; });

    m.def("catalog", &catalog, py::arg("name"), py::arg("param") = py::none());
    m.def("parse_model", &parse_model, py::arg("expression"));
    m.def("model_from_json", &model_from_json, py::arg("text"));
    m.def("product", [](const std::vector<LocalModel>& models) { return product(std::span<const LocalModel>(models)); },
          py::arg("models"));
    m.def("power", &power, py::arg("model"), py::arg("m"));

    py::class_<SaddleSolution>(m, "SaddleSolution")
        .def_readonly("n", &SaddleSolution::n)
        .def_readonly("z0", &SaddleSolution::z0)
        .def_readonly("beta", &SaddleSolution::beta)
        .def_readonly("beta1", &SaddleSolution::beta1)
        .def_readonly("beta2", &SaddleSolution::beta2)
        .def_readonly("alpha", &SaddleSolution::alpha)
        .def_readonly("at_boundary", &SaddleSolution::at_boundary);

    m.def("beta_family", [](const py::object& model, double n) { return beta_family(resolve(model), n); },
          py::arg("model"), py::arg("n"));
    m.def("n_star", [](const py::object& model) { return n_star(resolve(model)); }, py::arg("model"));
    m.def("dim_fixed_n", [](const py::object& model, std::size_t V, std::size_t N) {
        return to_python(dim_fixed_n(resolve(model), V, N));
    }, py::arg("model"), py::arg("V"), py::arg("N"));

    m.def("exact_average", [](const py::object& model, std::size_t V, std::size_t N, std::size_t V_A) {
        return exact_average(resolve(model), {V, N, V_A});
    }, py::arg("model"), py::arg("V"), py::arg("N"), py::arg("V_A"));
    m.def("exact_variance", [](const py::object& model, std::size_t V, std::size_t N, std::size_t V_A) {
        return exact_variance(resolve(model), {V, N, V_A}).value;
    }, py::arg("model"), py::arg("V"), py::arg("N"), py::arg("V_A"));
    m.def("asymptotic_average", [](const py::object& model, std::size_t V, double f, double n) {
        const auto t = asymptotic_average(resolve(model), V, f, n);
        return py::dict("a"_a = t.a, "b"_a = t.b, "c"_a = t.c, "f_half"_a = t.f_half, "n_star"_a = t.n_star,
                        "value"_a = t.value);
    }, py::arg("model"), py::arg("V"), py::arg("f"), py::arg("n"));
    m.def("resolved_average", [](const py::object& model, std::size_t V, double f, double n) {
        return resolved_average(resolve(model), V, f, n);
    }, py::arg("model"), py::arg("V"), py::arg("f"), py::arg("n"));
    m.def("page_curve", [](const py::object& model, std::size_t V, std::size_t N, unsigned threads) {
        py::list rows;
        for (const auto& r : page_curve(resolve(model), V, N, threads))
            rows.append(py::dict("V_A"_a = r.V_A, "f"_a = r.f, "exact"_a = r.exact_mean, "asymptotic"_a = r.asym.value,
                                 "resolved"_a = r.resolved_mean, "exact_var"_a = r.exact_variance.value,
                                 "asym_var"_a = r.asym_variance.value));
        return rows;
    }, py::arg("model"), py::arg("V"), py::arg("N"), py::arg("threads") = 1);

    m.def("mc_average", [](const py::object& model, std::size_t V, std::size_t N, std::size_t V_A, std::size_t samples,
                           std::uint64_t seed, unsigned threads) {
        const SectorBasis basis = build_sector_basis(resolve(model), {V, N, V_A});
        McSummary s;
        {
            py::gil_scoped_release release;
            s = mc_average(basis, samples, seed, threads);
        }
        return py::dict("samples"_a = s.samples, "mean"_a = s.mean, "sem"_a = s.sem, "variance"_a = s.variance,
                        "variance_sem"_a = s.variance_sem, "seed"_a = s.seed);
    }, py::arg("model"), py::arg("V"), py::arg("N"), py::arg("V_A"), py::arg("samples") = 2000, py::arg("seed") = 1,
       py::arg("threads") = 1);

    m.def("spin1_mid_spectrum", [](std::size_t V, long M, double lambda, double Delta, std::size_t window,
                                   const std::vector<std::size_t>& V_A) {
        const auto r = mid_spectrum_entropies(build_spin1_xxz(V, M, lambda, Delta), window, V_A);
        py::list rows;
        for (const auto& row : r.rows) rows.append(py::dict("V_A"_a = row.V_A, "mean"_a = row.mean, "std"_a = row.std));
        return rows;
    }, py::arg("V"), py::arg("M"), py::arg("lambda_"), py::arg("Delta"), py::arg("window"), py::arg("V_A"));
}

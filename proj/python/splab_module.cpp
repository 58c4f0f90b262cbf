#include "splab/features.hpp"
#include "splab/harness.hpp"
#include "splab/instance_io.hpp"
#include "splab/learn.hpp"
#include "splab/pace.hpp"
#include "splab/sbb.hpp"
#include "splab/trace_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace splab;

namespace {

RuleId rule_arg(const std::string& name)
{
    const auto r = parse_rule(name);
    if (!r)
        throw py::value_error("unknown rule '" + name + "'");
    return *r;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows)
{
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw py::value_error("ragged feature rows");
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Spatial branch-and-bound with RLT relaxations and learned rule selection";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

    py::class_<Problem>(m, "Problem")
        .def_property_readonly("num_vars", &Problem::num_vars)
        .def_property_readonly("num_constraints", &Problem::num_constraints)
        .def_property_readonly("degree", &Problem::degree)
        .def_property_readonly("family", &Problem::family)
        .def("evaluate_objective",
             [](const Problem& p, const std::vector<double>& x) { return p.evaluate_objective(x); })
        .def("render", &render_problem)
        .def("__repr__", [](const Problem& p) {
            return "<Problem n=" + std::to_string(p.num_vars()) + " constraints=" +
                   std::to_string(p.num_constraints()) + " degree=" + std::to_string(p.degree()) + ">";
        });

    m.def("parse_problem", [](const std::string& text) { return parse_problem(text); }, py::arg("text"));
    m.def("read_problem", [](const std::string& path) { return read_problem(path); }, py::arg("path"));

    m.def("rule_names", [] {
        std::vector<std::string> out;
        for (RuleId r : kAllRules)
            out.emplace_back(rule_name(r));
        return out;
    });

    m.def(
        "_solve_json",
        [](const Problem& p, const std::string& rule, double time_limit, std::size_t node_limit, double gap,
           const std::string& time_mode) {
            const auto mode = parse_time_mode(time_mode);
            if (!mode)
                throw py::value_error("time_mode must be 'wall' or 'nodes'");
            SolveTrace t;
            {
                py::gil_scoped_release release;
                t = solve(p, rule_arg(rule), {time_limit, node_limit, gap, *mode});
            }
            return trace_to_json({"", p.family()}, t).dump();
        },
        py::arg("problem"), py::arg("rule"), py::arg("time_limit"), py::arg("node_limit"), py::arg("gap"),
        py::arg("time_mode"));

    m.def("feature_names", [] {
        std::vector<std::string> out;
        for (auto n : feature_names())
            out.emplace_back(n);
        return out;
    });
    m.def("extract_features", [](const Problem& p) {
        const auto f = extract_features(p);
        return std::vector<double>(f.values.begin(), f.values.end());
    });

    m.def(
        "lb_pace",
        [](double time, double lb_init, double lb_fin, double eps) {
            SolveTrace t;
            t.time = time;
            t.lb_init = lb_init;
            t.lb_fin = lb_fin;
            return lb_pace(t, eps);
        },
        py::arg("time"), py::arg("lb_init"), py::arg("lb_fin"), py::arg("eps") = kPaceEpsilon);
    m.def(
        "normalize",
        [](const std::map<std::string, double>& paces) {
            PaceMap in;
            for (const auto& [k, v] : paces)
                in[rule_arg(k)] = v;
            std::map<std::string, double> out;
            for (const auto& [k, v] : normalize(in))
                out[std::string(rule_name(k))] = v;
            return out;
        },
        py::arg("paces"));
    m.def("pinball_loss", &pinball_loss, py::arg("y"), py::arg("prediction"), py::arg("tau"));

    py::class_<QuantileForest>(m, "QuantileForest")
        .def_static(
            "fit",
            [](const std::vector<std::vector<double>>& x, const std::vector<double>& y, std::size_t trees,
               std::size_t min_leaf, std::uint64_t seed, std::size_t workers) {
                ForestParams fp;
                fp.trees = trees;
                fp.min_leaf = min_leaf;
                fp.seed = seed;
                fp.workers = workers;
                const Matrix m = to_matrix(x);
                py::gil_scoped_release release;
                return QuantileForest::fit(m, y, fp);
            },
            py::arg("x"), py::arg("y"), py::arg("trees") = 500, py::arg("min_leaf") = 5, py::arg("seed") = 0,
            py::arg("workers") = 1)
        .def(
            "predict_quantile",
            [](const QuantileForest& f, const std::vector<double>& x, double tau) {
                if (x.size() != f.num_features())
                    throw py::value_error("feature count mismatch");
                return f.predict_quantile(x, tau);
            },
            py::arg("x"), py::arg("tau"))
        .def_property_readonly("num_trees", &QuantileForest::num_trees)
        .def("to_json", [](const QuantileForest& f) { return f.to_json().dump(); });

    py::class_<Selector>(m, "Selector")
        .def_static(
            "load",
            [](const std::string& path) {
                return Selector::from_json(nlohmann::json::parse(read_text(path)), feature_schema_hash());
            },
            py::arg("path"))
        .def("predict",
             [](const Selector& s, const Problem& p) {
                 const auto f = extract_features(p);
                 const auto scores = s.predict(f.values);
                 std::map<std::string, double> out;
                 for (std::size_t r = 0; r < kAllRules.size(); ++r)
                     out[std::string(rule_name(kAllRules[r]))] = scores[r];
                 return out;
             })
        .def("select", [](const Selector& s, const Problem& p) {
            return std::string(rule_name(s.select(extract_features(p).values)));
        });
}

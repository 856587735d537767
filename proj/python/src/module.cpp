#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jdef/cli.hpp"

namespace py = pybind11;

namespace {

jdef::RunConfig config_from_text(const std::string& text, const std::string& base_dir)
{
    std::istringstream in(text);
    return jdef::parse_config(in, base_dir);
}

jdef::ScalarJacobi scalar(double a, double b, double alpha, bool alternating)
{
    jdef::FamilyParams p;
    p.a = a;
    p.b = b;
    p.alpha = alpha;
    return jdef::scalar_view(
        jdef::make_family(alternating ? jdef::Family::alternating_power : jdef::Family::power, p));
}

} // namespace

PYBIND11_MODULE(_jdef, m)
{
    m.doc() = "Deficiency-index classification for Jacobi matrices";

    py::register_exception<jdef::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "classify_text",
        [](const std::string& text, const std::string& base_dir, bool with_timing) {
            const jdef::RunConfig config = config_from_text(text, base_dir);
            jdef::ClassificationReport report;
            {
                py::gil_scoped_release release;
                report = jdef::classify(config);
            }
            return jdef::to_json(report, with_timing).dump();
        },
        py::arg("text"), py::arg("base_dir") = ".", py::arg("with_timing") = true,
        "Classifies the operator described by INI text; returns the report as JSON text.");

    m.def(
        "probe_text",
        [](const std::string& text, const std::string& base_dir) {
            const jdef::RunConfig config = config_from_text(text, base_dir);
            config.validate();
            const auto seq = jdef::build_sequence(config);
            py::gil_scoped_release release;
            return jdef::to_json(jdef::run_oracle(seq, config)).dump();
        },
        py::arg("text"), py::arg("base_dir") = ".");

    m.def(
        "check_invariants",
        [](std::size_t samples, std::uint64_t seed) {
            jdef::RunConfig config;
            config.samples = samples;
            config.seed = seed;
            py::list out;
            for (const auto& s : jdef::check_invariants(config)) {
                py::dict d;
                d["name"] = s.name;
                d["passed"] = s.passed;
                d["samples"] = s.samples;
                d["max_residual"] = s.max_residual;
                d["failures"] = s.failures;
                out.append(d);
            }
            return out;
        },
        py::arg("samples") = 20, py::arg("seed") = 1);

    m.def(
        "power_band",
        [](double a, double b, double alpha, std::size_t k, std::size_t depth, bool alternating) {
            const jdef::PowerBand band(scalar(a, b, alpha, alternating), k, depth);
            std::vector<std::vector<double>> rows(depth + 1, std::vector<double>(k + 1));
            for (std::size_t n = 0; n <= depth; ++n) {
                for (std::size_t s = 0; s <= k; ++s) {
                    rows[n][s] = band.upper(n, s);
                }
            }
            return rows;
        },
        py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("k"), py::arg("depth"), py::arg("alternating") = false,
        "Rows c_{n,n+s}, s = 0..k, of J^k for a_n = a (n+1)^alpha (alternating sign optional), b_n = b (n+1)^alpha.");

    m.def(
        "k2_limsup",
        [](double a, double b, double alpha, std::size_t depth) {
            const auto v = jdef::k2_limsup(scalar(a, b, alpha, true), depth, jdef::TrendClassifier{});
            return py::make_tuple(v.partial_value, std::string(jdef::to_string(v.verdict)));
        },
        py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("depth") = 10000);
}

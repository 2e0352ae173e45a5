#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpa/cli.hpp"
#include "gpa/io.hpp"
#include "gpa/pipeline.hpp"

namespace py = pybind11;
using namespace gpa;

namespace {

gpa::Pipeline pipeline(const std::string& s, std::optional<int> depth) { return run_pipeline(parse_seq(s), depth); }

}  // namespace

PYBIND11_MODULE(_gpa, m) {
    m.doc() = "Generalized pseudo-Anosov maps from unimodal kneading sequences";
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    m.def("height", [](const std::string& s) { return height(parse_seq(s)).str(); });
    m.def("words", [](const std::string& q) { return words_json(height_words(parse_rational(q))).dump(); });
    m.def("classify", [](const std::string& s) {
        const BinarySeq b = parse_seq(s);
        return class_json(b, classify(b)).dump();
    });
    m.def("orbit", [](const std::string& s) {
        const CriticalOrbit o = critical_orbit(parse_seq(s));
        return orbit_json(o, strip_cover(o)).dump();
    });
    m.def("track", [](const std::string& s, std::optional<int> depth) { return track_json(pipeline(s, depth).track).dump(); },
          py::arg("s"), py::arg("depth") = py::none());
    m.def("spectrum",
          [](const std::string& s, std::optional<int> depth) { return spectrum_json(pipeline(s, depth).spectral).dump(); },
          py::arg("s"), py::arg("depth") = py::none());
    m.def("outside", [](const std::string& s) { return outside_json(outside_orbit(parse_seq(s))).dump(); });
    m.def("census", [](const std::string& s, std::optional<int> depth) {
        const Pipeline p = pipeline(s, depth);
        return census_json(singularity_census(complex_of(p), p.track)).dump();
    }, py::arg("s"), py::arg("depth") = py::none());
    m.def("render", [](const std::string& s, std::optional<int> depth) { return render_svg(complex_of(pipeline(s, depth))); },
          py::arg("s"), py::arg("depth") = py::none());
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}

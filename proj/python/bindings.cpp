#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qsobp/cli.hpp"
#include "qsobp/construction.hpp"
#include "qsobp/dynamics.hpp"
#include "qsobp/error.hpp"
#include "qsobp/four_types.hpp"
#include "qsobp/io.hpp"
#include "qsobp/two_types.hpp"

namespace py = pybind11;
using namespace qsobp;

namespace {

using Vec = std::vector<double>;
using StatePair = std::pair<Vec, Vec>;

StatePair to_pair(const PopulationState& s) {
  return {Vec(s.female.probs().begin(), s.female.probs().end()),
          Vec(s.male.probs().begin(), s.male.probs().end())};
}

four_types::FourTypeParams four_params(const std::vector<double>& p) {
  if (p.size() != 6) throw Error(ErrorCode::InvalidParameter, "expected (a, b, c, d, a0, c0)");
  return four_types::FourTypeParams::make(p[0], p[1], p[2], p[3], p[4], p[5]);
}

Tolerance make_tol(double iter_eps, std::size_t max_iters) {
  Tolerance tol;
  tol.iter_eps = iter_eps;
  tol.max_iters = max_iters;
  return tol;
}

}  // namespace

PYBIND11_MODULE(_qsobp, m) {
  m.doc() = "Evolution operators of bisexual populations";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<BisexualOperator>(m, "Operator")
      .def_property_readonly("n", &BisexualOperator::n)
      .def_property_readonly("nu", &BisexualOperator::nu)
      .def("to_json", [](const BisexualOperator& op) { return io::operator_to_json(op).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return io::operator_from_json(io::json::parse(text)); })
      .def("__eq__", [](const BisexualOperator& a, const BisexualOperator& b) { return a == b; });

  m.def(
      "construct",
      [](const std::string& text) {
        const io::ConstructionInput in = io::parse_construction(io::json::parse(text));
        return build_operator(in.space, in.weights);
      },
      py::arg("construction_json"), "Build the operator described by a construction JSON document.");

  m.def(
      "apply",
      [](const BisexualOperator& op, const Vec& x, const Vec& y) {
        return to_pair(apply(op, make_state(x, y)));
      },
      py::arg("op"), py::arg("x"), py::arg("y"));

  m.def(
      "iterate",
      [](const BisexualOperator& op, const Vec& x, const Vec& y, double iter_eps, std::size_t max_iters) {
        const Trajectory tr = iterate(op, make_state(x, y), make_tol(iter_eps, max_iters));
        py::dict out;
        out["converged"] = tr.converged;
        out["steps"] = tr.steps_taken;
        out["last"] = to_pair(tr.limit ? *tr.limit : tr.states.back());
        return out;
      },
      py::arg("op"), py::arg("x"), py::arg("y"), py::arg("iter_eps") = 1e-12,
      py::arg("max_iters") = 1'000'000);

  m.def(
      "jacobian",
      [](const BisexualOperator& op, const Vec& x, const Vec& y) {
        const Matrix j = jacobian(op, x, y);
        std::vector<Vec> rows(j.rows(), Vec(j.cols()));
        for (std::size_t r = 0; r < j.rows(); ++r) {
          for (std::size_t c = 0; c < j.cols(); ++c) rows[r][c] = j(r, c);
        }
        return rows;
      },
      py::arg("op"), py::arg("x"), py::arg("y"));

  m.def(
      "is_identity", [](const BisexualOperator& op, std::size_t trials) { return is_identity(op, trials); },
      py::arg("op"), py::arg("trials") = 16);

  m.def(
      "classify_quadratic",
      [](double B, double C) {
        const RootLocation r = classify_quadratic({B, C});
        return std::make_pair(std::string(to_string(r.kind)), std::string(to_string(r.other)));
      },
      py::arg("B"), py::arg("C"));

  m.def(
      "w_step",
      [](double a, double b, double x, double y) {
        const Point2 p = two_types::w_step(two_types::TwoTypeParams::make(a, b), {x, y});
        return std::make_pair(p.x, p.y);
      },
      py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"));
  m.def(
      "invariant_line_c",
      [](double a, double b, double x, double y) {
        return two_types::invariant_line_c(two_types::TwoTypeParams::make(a, b), {x, y});
      },
      py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"));
  m.def(
      "predict_limit_w",
      [](double a, double b, double x, double y) {
        const Point2 p = two_types::predict_limit_w(two_types::TwoTypeParams::make(a, b), {x, y});
        return std::make_pair(p.x, p.y);
      },
      py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"));
  m.def(
      "two_type_operator",
      [](double a, double b) { return two_types::lift_to_v(two_types::TwoTypeParams::make(a, b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "four_type_operator", [](const Vec& p) { return four_types::v4_operator(four_params(p)); },
      py::arg("params"), "params = (a, b, c, d, a0, c0)");
  m.def(
      "v4_step",
      [](const Vec& p, const Vec& x, const Vec& y) {
        return to_pair(four_types::v4_step(four_params(p), make_state(x, y)));
      },
      py::arg("params"), py::arg("x"), py::arg("y"));
  m.def(
      "predict_limit_v4",
      [](const Vec& p, const Vec& x, const Vec& y) {
        return to_pair(four_types::predict_limit_v4(four_params(p), make_state(x, y)));
      },
      py::arg("params"), py::arg("x"), py::arg("y"));

  m.def(
      "t_step",
      [](double a, double a0, double c0, double x) {
        return four_types::t_step(four_types::TMapParams::make(a, a0, c0), x);
      },
      py::arg("a"), py::arg("a0"), py::arg("c0"), py::arg("x"));
  m.def(
      "fixed_points_t",
      [](double a, double a0, double c0) {
        const auto fp = four_types::fixed_points_t(four_types::TMapParams::make(a, a0, c0));
        return std::make_tuple(fp.fixed, fp.spurious, fp.discriminant);
      },
      py::arg("a"), py::arg("a0"), py::arg("c0"), "Returns (fixed, spurious or None, discriminant).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"qsobp"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = cli::run(argv, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line in-process; returns (exit_code, stdout, stderr).");
}

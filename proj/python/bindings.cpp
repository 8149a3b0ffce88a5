#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "convpow/asymptotics.hpp"
#include "convpow/conditions.hpp"
#include "convpow/errors.hpp"
#include "convpow/laplace.hpp"
#include "convpow/oracle.hpp"
#include "convpow/renewal.hpp"
#include "convpow/saddle.hpp"
#include "convpow/spec_json.hpp"

namespace py = pybind11;
using namespace convpow;

namespace {

double log_of(const LogNumber& v) { return v.is_zero() ? -std::numeric_limits<double>::infinity() : v.log_abs(); }

MeasureSpec spec_from_dict(const py::dict& d) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return spec_from_json(nlohmann::json::parse(dumps(d).cast<std::string>()));
}

py::dict report_dict(const SaddleReport& r) {
  py::dict d;
  d["j"] = r.j;
  d["t"] = r.t;
  d["kappa"] = r.kappa;
  d["lambda"] = r.eval.lambda;
  d["lambda1"] = r.eval.lambda1;
  d["lambda2"] = r.eval.lambda2;
  d["lambda3"] = r.eval.lambda3;
  d["a_j"] = r.a_j;
  d["T_j"] = r.T_j;
  d["kappa_a"] = r.kappa_a;
  return d;
}

py::dict estimate_dict(const AsymptoticEstimate& e) {
  py::dict d;
  d["log_value"] = e.log_value;
  d["formula"] = to_string(e.formula);
  d["report"] = e.report ? py::object(report_dict(*e.report)) : py::none();
  d["warnings"] = e.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_convpow, m) {
  m.doc() = "Saddle-point asymptotics of convolution powers V^{*j}(t)";

  auto base = py::register_exception<Error>(m, "ConvpowError", PyExc_RuntimeError);
  py::register_exception<InvalidSpec>(m, "InvalidSpec", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<OutOfDomain>(m, "OutOfDomain", base.ptr());
  py::register_exception<RatioOutOfRange>(m, "RatioOutOfRange", base.ptr());
  py::register_exception<SolverStall>(m, "SolverStall", base.ptr());
  py::register_exception<NoRoot>(m, "NoRoot", base.ptr());
  py::register_exception<UnsupportedOrder>(m, "UnsupportedOrder", base.ptr());
  py::register_exception<HorizonTooSmall>(m, "HorizonTooSmall", base.ptr());
  py::register_exception<MissingMoment>(m, "MissingMoment", base.ptr());
  py::register_exception<InadmissibleMoments>(m, "InadmissibleMoments", base.ptr());
  py::register_exception<NotProbability>(m, "NotProbability", base.ptr());
  py::register_exception<ScanInconclusive>(m, "ScanInconclusive", base.ptr());

  py::class_<MeasureSpec>(m, "Spec")
      .def(py::init(&spec_from_dict), py::arg("spec"), "Build from a dict such as {'family': 'affine', 'a': 1, 'b': 1}.")
      .def_static(
          "density",
          [](std::function<double(double)> f, double atom_at_zero, double abscissa, bool abscissa_included,
             double support_start, double support_end) {
            return MeasureSpec(Density{std::move(f), atom_at_zero, abscissa, abscissa_included, support_start, support_end});
          },
          py::arg("f"), py::arg("atom_at_zero") = 0.0, py::arg("abscissa") = 0.0, py::arg("abscissa_included") = false,
          py::arg("support_start") = 0.0, py::arg("support_end") = std::numeric_limits<double>::infinity())
      .def_property_readonly("family", &MeasureSpec::family)
      .def_property_readonly("is_arithmetic", &MeasureSpec::is_arithmetic)
      .def("__repr__", [](const MeasureSpec& s) { return "<Spec " + s.family() + ">"; });

  m.def("eval_V", &eval_V, py::arg("spec"), py::arg("x"));
  m.def("domain_of", [](const MeasureSpec& s) {
    const Domain d = domain_of(s);
    return py::make_tuple(d.s0, d.boundary_included);
  });
  m.def("laplace_at", [](const MeasureSpec& s, double x) {
    const LaplaceEval e = laplace_at(s, x);
    py::dict d;
    d["s"] = e.s;
    d["lambda"] = e.lambda;
    d["lambda1"] = e.lambda1;
    d["lambda2"] = e.lambda2;
    d["lambda3"] = e.lambda3;
    return d;
  });
  m.def("modulus_ratio", &modulus_ratio, py::arg("spec"), py::arg("sigma"), py::arg("u"));
  m.def("range_bounds", [](const MeasureSpec& s) {
    const RangeBounds r = range_bounds(s);
    return py::make_tuple(r.s_minus, r.s_plus);
  });
  m.def("solve_kappa", [](const MeasureSpec& s, std::int64_t j, double t) { return report_dict(solve_kappa(s, j, t)); },
        py::arg("spec"), py::arg("j"), py::arg("t"));
  m.def("solve_theta_for_slope", &solve_theta_for_slope, py::arg("spec"), py::arg("alpha"));
  m.def("solve_theta_star", &solve_theta_star, py::arg("spec"));

  m.def("thm_a", [](const MeasureSpec& s, std::int64_t j, double t) { return estimate_dict(thm_a(s, j, t)); });
  m.def("thm_b", [](const MeasureSpec& s, std::int64_t j, double t) { return estimate_dict(thm_b(s, j, t)); });
  m.def(
      "cor_lin_growth",
      [](const MeasureSpec& s, double alpha, double y, std::int64_t j, const std::string& branch, double c) {
        LinGrowthBranch b;
        if (branch == "c_j23") b = {LinGrowthBranch::c_j23, c};
        else if (branch != "small_y") throw InvalidArgument("branch must be 'small_y' or 'c_j23'");
        return estimate_dict(cor_lin_growth(s, alpha, [y](std::int64_t) { return y; }, j, b));
      },
      py::arg("spec"), py::arg("alpha"), py::arg("y"), py::arg("j"), py::arg("branch") = "small_y", py::arg("c") = 0.0);
  m.def("cor_clt", [](const MeasureSpec& s, double y, std::int64_t j) {
    const CltResult r = cor_clt(s, y, j);
    py::dict d;
    d["t"] = r.t;
    d["limit"] = r.limit;
    d["estimate"] = estimate_dict(r.estimate);
    return d;
  });
  m.def("expansion_coeffs", [](double a, const std::vector<double>& beta, int p) {
    const ExpansionCoefficients c = expansion_coeffs(a, beta, p);
    py::dict d;
    d["p"] = c.p;
    d["beta"] = c.beta;
    d["delta"] = c.delta;
    d["iota"] = c.iota;
    return d;
  });
  m.def("linear_expansion_estimate", [](double a, const std::vector<double>& beta, int p, std::int64_t j, double t) {
    return estimate_dict(linear_expansion_estimate(a, expansion_coeffs(a, beta, p), j, t));
  });

  m.def("exact_power_law", [](double b, double alpha, std::int64_t j, double t) {
    return log_of(exact_power_law(b, alpha, j, t));
  });
  m.def("exact_shifted_exp", [](double a, std::int64_t j, double t) { return log_of(exact_shifted_exp(a, j, t)); });
  m.def("laguerre_eval", [](std::int64_t j, double t) { return log_of(laguerre_eval(j, t)); });
  m.def(
      "grid_oracle",
      [](const MeasureSpec& s, std::int64_t j, double t, double h) {
        const OracleValue o = grid_oracle(s, j, t, h);
        py::dict d;
        d["log_estimate"] = log_of(o.estimate);
        d["log_lower"] = log_of(o.lower);
        d["log_upper"] = log_of(o.upper);
        d["exact_on_grid"] = o.exact_on_grid;
        d["kappa"] = o.kappa;
        return d;
      },
      py::arg("spec"), py::arg("j"), py::arg("t"), py::arg("h"));
  m.def(
      "convolve_power",
      [](const MeasureSpec& s, std::int64_t j, double h, double x_max, double tilt) {
        const ConvolutionTable tab = convolve_power(discretize(s, h, x_max), j, tilt);
        std::vector<double> x;
        std::vector<double> logv;
        const auto cum = tab.cumulative();
        for (std::size_t k = 0; k < cum.size(); ++k) {
          x.push_back(static_cast<double>(k) * h);
          logv.push_back(log_of(cum[k]));
        }
        return py::make_tuple(x, logv);
      },
      py::arg("spec"), py::arg("j"), py::arg("h"), py::arg("x_max"), py::arg("tilt") = 0.0,
      "Grid points and log V_h^{*j} on [0, x_max].");
  m.def("tilt_moments", [](const MeasureSpec& s, std::int64_t j, double t, double h) {
    const TiltMoments tm = tilt_moments(s, j, t, h);
    py::dict d;
    d["mean"] = tm.mean;
    d["variance"] = tm.variance;
    d["kappa"] = tm.kappa;
    d["expected_variance"] = tm.expected_variance;
    return d;
  });

  m.def(
      "check_conditions",
      [](const MeasureSpec& s, std::int64_t j, double t, double gamma) {
        return py::module_::import("json").attr("loads")(to_json(check_conditions(s, j, t, gamma)).dump());
      },
      py::arg("spec"), py::arg("j"), py::arg("t"), py::arg("gamma") = 1.0);
  m.def("laguerre_case1_rates", [](std::int64_t j, double t) {
    const LaguerreRates r = laguerre_case1_rates(j, t);
    return py::make_tuple(r.a_j_ratio, r.kappa_a_ratio, r.Tj_ratio);
  });

  m.def("renewal_betas", [](const std::vector<double>& moments, int p) { return renewal_betas({moments, {}}, p); });
  m.def("renewal_b_coeffs", [](const std::vector<double>& moments) {
    const auto b = renewal_b_coeffs({moments, {}});
    return py::make_tuple(b[0], b[1], b[2]);
  });
  m.def("renewal_asymptotic", [](const std::vector<double>& moments, std::int64_t j, double t) {
    return estimate_dict(renewal_asymptotic({moments, {}}, j, t));
  });
}

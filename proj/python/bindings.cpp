#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "voljump/calibrator.hpp"
#include "voljump/config.hpp"
#include "voljump/detector.hpp"
#include "voljump/error.hpp"
#include "voljump/io.hpp"
#include "voljump/model.hpp"
#include "voljump/run.hpp"
#include "voljump/series.hpp"
#include "voljump/theory.hpp"

namespace py = pybind11;
using namespace voljump;

namespace {

py::dict path_dict(const PathSample& p) {
  py::dict d;
  d["t"] = p.grid;
  d["X"] = p.X;
  d["I"] = p.I;
  d["v"] = p.v;
  return d;
}

py::dict shock_dict(const DetectedShock& s) {
  py::dict d;
  d["index"] = s.index;
  d["date"] = s.date;
  d["count"] = s.count;
  d["class"] = std::string(to_string(s.klass));
  return d;
}

}  // namespace

PYBIND11_MODULE(_voljump, m) {
  m.doc() = "Volatility-jump model: simulation, theory curves, shock detection, calibration";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double D, double lambda, double sigma) {
             ModelParams p{D, lambda, sigma};
             p.validate();
             return p;
           }),
           py::arg("D"), py::arg("lam"), py::arg("sigma"))
      .def_readonly("D", &ModelParams::D)
      .def_readonly("lam", &ModelParams::lambda)
      .def_readonly("sigma", &ModelParams::sigma)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream o;
        o << "ModelParams(D=" << p.D << ", lam=" << p.lambda << ", sigma=" << p.sigma << ")";
        return o.str();
      });

  py::class_<CouplingParams>(m, "CouplingParams")
      .def(py::init([](double Dx, double sx, double Dy, double sy, double l1, double l2,
                       double l3, double rho) {
             CouplingParams cp{{Dx, sx}, {Dy, sy}, l1, l2, l3, rho};
             cp.validate();
             return cp;
           }),
           py::arg("D_x"), py::arg("sigma_x"), py::arg("D_y"), py::arg("sigma_y"),
           py::arg("lambda1"), py::arg("lambda2"), py::arg("lambda3"), py::arg("rho") = 0.0)
      .def_readonly("lambda1", &CouplingParams::lambda1)
      .def_readonly("lambda2", &CouplingParams::lambda2)
      .def_readonly("lambda3", &CouplingParams::lambda3)
      .def_readonly("rho", &CouplingParams::rho)
      .def_property_readonly("lambda_x", &CouplingParams::lambda_x)
      .def_property_readonly("lambda_y", &CouplingParams::lambda_y)
      .def_property_readonly("marginal_x", &CouplingParams::marginal_x)
      .def_property_readonly("marginal_y", &CouplingParams::marginal_y);

  m.def("q_star", &q_star, py::arg("D"));
  m.def("scaling_exponent", &scaling_exponent, py::arg("D"), py::arg("q"));
  m.def("moment_rate", &moment_rate, py::arg("p"));
  m.def("scaling_density",
        [](const ModelParams& p, double x) { return scaling_density(p, x); }, py::arg("p"),
        py::arg("x"));
  m.def("autocorr_limit", [](const ModelParams& p, double t) { return autocorr_limit(p, t); },
        py::arg("p"), py::arg("t"));
  m.def("cross_corr_limit",
        [](const CouplingParams& cp, double t) { return cross_corr_limit(cp, t); },
        py::arg("cp"), py::arg("t"));
  m.def("cross_cov_limit",
        [](const CouplingParams& cp, double t) { return cross_cov_limit(cp, t); },
        py::arg("cp"), py::arg("t"));
  m.def("time_change",
        [](const ModelParams& p, const std::vector<double>& epochs, double t) {
          return time_change(p, ShockTrain(epochs), t);
        },
        py::arg("p"), py::arg("epochs"), py::arg("t"));

  m.def("sample_shock_train",
        [](double lambda, double t_min, double t_max, std::uint64_t seed) {
          const auto train = sample_shock_train(lambda, t_min, t_max, {seed, 0});
          return std::vector<double>(train.epochs().begin(), train.epochs().end());
        },
        py::arg("lam"), py::arg("t_min"), py::arg("t_max"), py::arg("seed") = 0);
  m.def("simulate",
        [](const ModelParams& p, std::size_t days, double step, std::uint64_t seed) {
          const double horizon = static_cast<double>(days) * step;
          const auto train = sample_shock_train(p.lambda, -1.0, horizon, Seed{seed, 0}.child(0));
          py::dict d = path_dict(simulate_path(p, train, uniform_grid(days, step),
                                               Seed{seed, 0}.child(1)));
          d["epochs"] = std::vector<double>(train.epochs().begin(), train.epochs().end());
          return d;
        },
        "Log-price path on 0, step, ..., days*step.", py::arg("p"), py::arg("days"),
        py::arg("step") = 1.0, py::arg("seed") = 0);

  m.def("detrend",
        [](const std::vector<std::string>& dates, const std::vector<double>& prices,
           std::size_t window) {
          const auto x = detrend(PriceSeries{dates, prices}, window);
          return py::make_tuple(x.dates, x.x);
        },
        py::arg("dates"), py::arg("prices"), py::arg("window") = 250);
  m.def("empirical_autocorr",
        [](const std::vector<double>& x, std::size_t t, std::size_t h) {
          return empirical_autocorr(x, t, h);
        },
        py::arg("x"), py::arg("t"), py::arg("h") = 1);
  m.def("scaling_fit",
        [](const std::vector<double>& x, double q, const std::vector<std::size_t>& hs) {
          const auto f = fit_scaling_exponent(x, q, hs);
          return py::make_tuple(f.slope, f.std_error);
        },
        py::arg("x"), py::arg("q"), py::arg("h_range") = std::vector<std::size_t>{1, 2, 3, 4, 5});

  m.def("v_hat", [](const std::vector<double>& x, std::size_t N, std::size_t k) {
    return v_hat(x, N, k);
  }, py::arg("x"), py::arg("N"), py::arg("k"));
  m.def("detect",
        [](const std::vector<double>& x, std::size_t M, std::size_t drop, double threshold) {
          DetectorConfig cfg;
          cfg.M = M;
          cfg.drop = drop;
          cfg.threshold = threshold;
          const auto rep = scan_history(as_series(x), cfg);
          py::list out;
          for (const auto& s : rep.shocks) out.append(shock_dict(s));
          return out;
        },
        "Shock histogram scan over a detrended series.", py::arg("x"), py::arg("M") = 2000,
        py::arg("drop") = 20, py::arg("threshold") = 0.0);

  m.def("calibrate",
        [](const std::vector<double>& x) {
          const auto rep = calibrate_univariate(as_series(x));
          return py::make_tuple(rep.params, rep.objective, rep.boundary);
        },
        "Fits (D, lambda, sigma) to a detrended log-price series.", py::arg("x"));

  m.def("run",
        [](const std::string& command, const std::vector<std::string>& overrides,
           const std::string& out_dir, std::uint64_t seed) {
          const auto cmd = parse_command(command);
          require(cmd.has_value(), ErrorKind::ConfigError, "unknown command '" + command + "'");
          IniDocument doc;
          for (const auto& o : overrides) apply_override(doc, o);
          auto config = make_run_config(*cmd, doc);
          config.out_dir = out_dir;
          config.seed = seed;
          std::ostringstream err;
          const auto result = run(config, err);
          if (result.exit_code != 0) throw Error(ErrorKind::ConfigError, err.str());
          return result.outputs;
        },
        "Runs a CLI command; returns the names of the files written to out_dir.",
        py::arg("command"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("out_dir") = ".", py::arg("seed") = 0);
}

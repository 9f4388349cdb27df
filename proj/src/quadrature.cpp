#include "voljump/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <algorithm>
#include <sstream>
#include <vector>

#include "voljump/error.hpp"

namespace voljump {

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

}  // namespace

void QuadratureConfig::validate() const {
  require(abs_tol > 0.0 && rel_tol > 0.0, ErrorKind::InvalidParameter,
          "quadrature tolerances must be positive");
  require(max_subdivisions >= 1, ErrorKind::InvalidParameter,
          "max_subdivisions must be at least 1");
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (a == b) return {0.0, 0.0, 0};
  std::vector<Panel> panels{evaluate_panel(f, a, b)};
  double total = panels.front().value;
  double error = panels.front().error;
  std::size_t subdivisions = 0;
  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (subdivisions >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg << "tolerance not met on [" << a << ", " << b << "] after "
          << subdivisions << " subdivisions (estimate " << total
          << ", error " << error << ")";
      fail(ErrorKind::QuadratureFailure, msg.str());
    }
    std::pop_heap(panels.begin(), panels.end());
    const Panel worst = panels.back();
    panels.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      fail(ErrorKind::QuadratureFailure, "panel width below resolution");
    }
    for (const Panel& half :
         {evaluate_panel(f, worst.a, mid), evaluate_panel(f, mid, worst.b)}) {
      panels.push_back(half);
      std::push_heap(panels.begin(), panels.end());
    }
    ++subdivisions;
    total = 0.0;
    error = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      error += p.error;
    }
  }
  if (!std::isfinite(total)) {
    fail(ErrorKind::QuadratureFailure, "non-finite integral");
  }
  return {total, error, subdivisions};
}

double exponential_cutoff(const QuadratureConfig& cfg) {
  return std::log(100.0 / cfg.abs_tol);
}

double expect_exponential(const std::function<double(double)>& g,
                          double singular_exponent,
                          const QuadratureConfig& cfg) {
  require(singular_exponent > -1.0, ErrorKind::InvalidParameter,
          "singularity must be integrable");
  const double p = singular_exponent < 0.0 ? 1.0 / (1.0 + singular_exponent) : 1.0;
  const double s_max = exponential_cutoff(cfg);
  const double w_max = std::pow(s_max, 1.0 / p);
  auto integrand = [&](double w) {
    const double s = std::pow(w, p);
    return std::exp(-s) * g(s) * p * std::pow(w, p - 1.0);
  };
  return integrate(integrand, 0.0, w_max, cfg).value;
}

}  // namespace voljump

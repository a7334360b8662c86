#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace slbe {

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending. Computed by Newton
/// iteration on the Legendre recurrence; results are cached per n.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

/// Composite helper: appends the rule for [a, b] to (pts, wts).
void append_gl_panel(int n, double a, double b, std::vector<double>& pts,
                     std::vector<double>& wts);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Adaptive Gauss(7)/Kronrod(15) on [a, b]. Bisects until the local error
/// estimate meets abs_tol + rel_tol * |total|; throws QuadratureFailure when
/// the depth budget is exhausted unless allow_failure.
AdaptiveResult adaptive_gk15(const std::function<double(double)>& f, double a,
                             double b, double abs_tol = 1e-13,
                             double rel_tol = 1e-12, int max_depth = 48,
                             bool allow_failure = false);

/// Int_0^L f(delta) d(delta) where f behaves like delta^p * smooth at 0 with
/// p > -1 (p = 0 with a log factor is also fine). The caller expresses the
/// integrand directly in the offset delta from the singular endpoint, so no
/// precision is lost to cancellation. Substitutes delta = L t^m with integer
/// m chosen so the transformed integrand has several continuous derivatives
/// at t = 0, then integrates adaptively.
double integrate_power_endpoint(const std::function<double(double)>& f,
                                double length, double p,
                                double rel_tol = 1e-12);

}  // namespace slbe

#include "slbe/kernel.hpp"

#include "slbe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace slbe {

namespace detail {

double bessel_i0_scaled(double x) {
  if (x < 0.0) x = -x;
  if (x <= 30.0) {
    // e^{-x} sum (x/2)^{2k} / (k!)^2, all terms positive.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * sum;
  }
  // Asymptotic series I0(x) ~ e^x/sqrt(2 pi x) sum_k c_k / x^k.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 14; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double bessel_i1_scaled(double x) {
  if (x == 0.0) return 0.0;
  if (x <= 30.0) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * (k + 1.0));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * sum;
  }
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 14; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (odd * odd - 4.0) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace detail

void orthonormal_basis(const Vec3& u, Vec3& e2, Vec3& e3) {
  int axis = 0;
  double best = std::abs(u[0]);
  for (int i = 1; i < 3; ++i)
    if (std::abs(u[i]) < best) {
      best = std::abs(u[i]);
      axis = i;
    }
  Vec3 a = Vec3::Zero();
  a[axis] = 1.0;
  e2 = (a - a.dot(u) * u).normalized();
  e3 = u.cross(e2);
}

PairGeometry pair_geometry(const Vec3& v, const Vec3& v_star) {
  PairGeometry g;
  g.v = v;
  g.v_star = v_star;
  const Vec3 u = v - v_star;
  g.d = u.norm();
  if (g.d < 1e-12) throw CoincidentVelocities();
  const double d2 = g.d * g.d;
  g.V1 = 0.5 * (v.squaredNorm() - v_star.squaredNorm()) / d2 * u;
  g.V2 = u.cross(v_star.cross(v)) / d2;
  orthonormal_basis(u / g.d, g.e2, g.e3);
  return g;
}

double envelope_E_delta(const Vec3& v, const Vec3& v_star, double delta) {
  const Vec3 u = v - v_star;
  const double d2 = u.squaredNorm();
  if (d2 < 1e-24) throw CoincidentVelocities();
  const double v1sq =
      0.25 * std::pow(v.squaredNorm() - v_star.squaredNorm(), 2) / d2;
  return std::exp(-0.25 * (1.0 - delta) * (d2 + 4.0 * v1sq));
}

double weight_w_gamma(double d, double gamma) {
  if (!(d > 0.0)) throw std::invalid_argument("weight_w_gamma: d must be > 0");
  if (gamma > -1.0) return 1.0 / d;
  if (gamma == -1.0) return (std::abs(std::log(d)) + 1.0) / d;
  return std::pow(d, gamma);
}

EnvelopeConstants envelope_constants(double alpha) {
  const double a = alpha;
  const double delta = 0.5 - alpha;
  const double omd = 1.0 - delta;  // = 1/2 + alpha
  EnvelopeConstants c;
  c.a1 = (omd + 2.0 * a) * (omd - 2.0 * a) / (4.0 * omd);
  c.a2 = (omd - 2.0 * a) / (2.0 * omd);
  c.a3 = omd;
  return c;
}

// ---------------------------------------------------------------------------
// Collision frequency
// ---------------------------------------------------------------------------

namespace {

constexpr double kNuRadialMax = 8.5;

// Int_{R^3} |v - vt|^gamma e^{-|vt|^2} dvt as a function of s = |v|.
// The angular integral is exact; the remaining radial integrand has the
// factor |s - r|^{gamma + 2} (a log at gamma = -2), handled in offset form.
double nu_reduced_integral(double s, double gamma) {
  if (s < 1e-14)
    return 2.0 * M_PI * std::tgamma(0.5 * (gamma + 3.0));
  const double rmax = kNuRadialMax;
  const bool log_branch = (gamma == -2.0);
  const double gp2 = gamma + 2.0;

  auto f_plus = [&](double r) {
    const double base = r * std::exp(-r * r);
    return log_branch ? base * std::log(s + r) : base * std::pow(s + r, gp2);
  };
  const double tp = adaptive_gk15(f_plus, 0.0, rmax, 1e-14, 5e-13).value;

  double tm;
  auto smooth = [&](double r) { return r * std::exp(-r * r); };
  auto sing = [&](double delta) {
    return log_branch ? std::log(delta) : std::pow(delta, gp2);
  };
  if (s >= rmax) {
    auto f_minus = [&](double r) { return smooth(r) * sing(s - r); };
    tm = adaptive_gk15(f_minus, 0.0, rmax, 1e-14, 5e-13).value;
  } else {
    const double p = log_branch ? 0.0 : gp2;
    tm = integrate_power_endpoint(
             [&](double delta) { return smooth(s - delta) * sing(delta); }, s,
             p, 5e-13) +
         integrate_power_endpoint(
             [&](double delta) { return smooth(s + delta) * sing(delta); },
             rmax - s, p, 5e-13);
  }
  if (log_branch) return 2.0 * M_PI / s * (tp - tm);
  return 2.0 * M_PI / (s * gp2) * (tp - tm);
}

}  // namespace

double collision_frequency(double speed, const PhysParams& params) {
  if (speed < 0.0) throw std::invalid_argument("collision_frequency: speed < 0");
  return params.B0 * M_PI * nu_reduced_integral(speed, params.gamma);
}

double collision_frequency_at_zero(const PhysParams& params) {
  return 2.0 * params.B0 * M_PI * M_PI * std::tgamma(0.5 * (params.gamma + 3.0));
}

// ---------------------------------------------------------------------------
// Transverse-plane kernel k2 and its derivatives
// ---------------------------------------------------------------------------

namespace {

// Composite radial rule for Int_0^{rmax} f(r) dr resolving the layer of
// (d^2 + r^2)^{(gamma-1)/2}: a graded panel on [0, d], geometric panels up to
// radius 1 with a ratio that varies smoothly with d, unit panels to rmax.
void radial_rule(double d, double rmax, int n, std::vector<double>& pts,
                 std::vector<double>& wts) {
  pts.clear();
  wts.clear();
  const GaussLegendre& gl = gauss_legendre(n);
  const double b0 = std::min({d, 1.0, rmax});
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (gl.nodes[i] + 1.0);
    pts.push_back(b0 * t * t);
    wts.push_back(0.5 * gl.weights[i] * 2.0 * b0 * t);
  }
  double a = b0;
  const double layer_top = std::min(1.0, rmax);
  if (a < layer_top) {
    const int np = std::max(1, static_cast<int>(std::ceil(std::log2(layer_top / a))));
    const double ratio = std::pow(layer_top / a, 1.0 / np);
    for (int j = 0; j < np; ++j) {
      const double b = (j + 1 == np) ? layer_top : a * ratio;
      append_gl_panel(n, a, b, pts, wts);
      a = b;
    }
  }
  while (a < rmax) {
    const double b = std::min(a + 1.0, rmax);
    append_gl_panel(n, a, b, pts, wts);
    a = b;
  }
}

const std::vector<double>& cos_table(int n) {
  static std::map<int, std::vector<double>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[k] = std::cos(2.0 * M_PI * (k + 0.5) / n);
    it = cache.emplace(n, std::move(c)).first;
  }
  return it->second;
}

int trapezoid_count(double a, int n_min) {
  // Trapezoid error for e^{a cos t} falls like exp(-n^2/(2a)).
  const int need = static_cast<int>(std::ceil(std::sqrt(2.0 * a * 38.0))) + 8;
  int n = std::max(n_min, need);
  return (n + 7) & ~7;
}

struct PlaneIntegrals {
  double P = 0.0;    // Int_W e^{-|w+V2|^2} (d^2+|w|^2)^{(g-1)/2} dw
  double dPdd = 0.0;
  double dPdm = 0.0;
};

PlaneIntegrals plane_integrals(double d, double m, double gamma,
                               const KernelQuadSpec& spec, bool with_grad) {
  const double rmax = m + spec.radial_cutoff;
  std::vector<double> pts, wts;
  radial_rule(d, rmax, spec.n_radial, pts, wts);
  PlaneIntegrals out;
  const double expo = 0.5 * (gamma - 1.0);
  if (spec.exact_angular) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double r = pts[i];
      const double rad = std::pow(d * d + r * r, expo);
      const double gauss = std::exp(-(r - m) * (r - m));
      const double a = 2.0 * r * m;
      const double i0 = detail::bessel_i0_scaled(a);
      const double base = 2.0 * M_PI * wts[i] * r * gauss;
      out.P += base * rad * i0;
      if (with_grad) {
        const double i1 = detail::bessel_i1_scaled(a);
        out.dPdm += 2.0 * base * rad * (r * i1 - m * i0);
        out.dPdd += base * i0 * (gamma - 1.0) * d *
                    std::pow(d * d + r * r, expo - 1.0);
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i];
    const double rad = std::pow(d * d + r * r, expo);
    const int n = trapezoid_count(2.0 * r * m, spec.n_angular);
    const std::vector<double>& ct = cos_table(n);
    double s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double e = std::exp(-(r * r + 2.0 * r * m * ct[k] + m * m));
      s0 += e;
      if (with_grad) s1 += -(2.0 * r * ct[k] + 2.0 * m) * e;
    }
    const double base = 2.0 * M_PI / n * wts[i] * r;
    out.P += base * rad * s0;
    if (with_grad) {
      out.dPdm += base * rad * s1;
      out.dPdd +=
          base * s0 * (gamma - 1.0) * d * std::pow(d * d + r * r, expo - 1.0);
    }
  }
  return out;
}

struct PairScalars {
  double d;
  double v1sq;
  double m;
};

PairScalars pair_scalars(const Vec3& v, const Vec3& v_star) {
  const Vec3 u = v - v_star;
  const double d = u.norm();
  if (d < 1e-12) throw CoincidentVelocities();
  PairScalars s;
  s.d = d;
  s.v1sq = 0.25 * std::pow(v.squaredNorm() - v_star.squaredNorm(), 2) / (d * d);
  s.m = v_star.cross(v).norm() / d;
  return s;
}

}  // namespace

double kernel_k1(const Vec3& v, const Vec3& v_star, const PhysParams& params) {
  const double d = (v - v_star).norm();
  if (params.gamma < 0.0 && d < 1e-12) throw CoincidentVelocities();
  const double pow_d = (params.gamma == 0.0) ? 1.0 : std::pow(d, params.gamma);
  return params.B0 * M_PI * pow_d *
         std::exp(-0.5 * (v.squaredNorm() + v_star.squaredNorm()));
}

double kernel_k2(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                 const KernelQuadSpec& spec) {
  const PairScalars s = pair_scalars(v, v_star);
  const PlaneIntegrals pi = plane_integrals(s.d, s.m, params.gamma, spec, false);
  return 2.0 * params.B0 / s.d * std::exp(-0.25 * s.d * s.d - s.v1sq) * pi.P;
}

double kernel_k(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                const KernelQuadSpec& spec) {
  return kernel_k2(v, v_star, params, spec) - kernel_k1(v, v_star, params);
}

double kernel_k_alpha(const Vec3& v, const Vec3& v_star,
                      const PhysParams& params, const KernelQuadSpec& spec) {
  return std::exp(params.alpha * (v.squaredNorm() - v_star.squaredNorm())) *
         kernel_k(v, v_star, params, spec);
}

double kernel_k_star_alpha(const Vec3& v, const Vec3& v_star,
                           const PhysParams& params,
                           const KernelQuadSpec& spec) {
  return kernel_k_alpha(v_star, v, params, spec);
}

double kernel_k_star_alpha_gamma(const Vec3& v, const Vec3& v_star,
                                 const PhysParams& params,
                                 const KernelQuadSpec& spec) {
  return std::pow(1.0 + v.norm(), -params.gamma) *
         kernel_k_star_alpha(v, v_star, params, spec);
}

Vec3 grad_abs_V2(const Vec3& v, const Vec3& v_star) {
  const Vec3 u = v - v_star;
  const double d = u.norm();
  if (d < 1e-12) throw CoincidentVelocities();
  const Vec3 cross = v.cross(v_star);
  const double cn = cross.norm();
  if (cn < 1e-300) return Vec3::Zero();
  const double m = cn / d;
  return -u * m / (d * d) +
         (v_star.squaredNorm() * v - v.dot(v_star) * v_star) / (d * cn);
}

Vec3 grad_kernel_k(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                   const KernelQuadSpec& spec) {
  const PairScalars s = pair_scalars(v, v_star);
  const Vec3 u = v - v_star;
  const double d = s.d, d2 = d * d;
  const double diff_sq = v.squaredNorm() - v_star.squaredNorm();

  const PlaneIntegrals pi = plane_integrals(d, s.m, params.gamma, spec, true);
  const double front = 2.0 * params.B0 / d * std::exp(-0.25 * d2 - s.v1sq);
  const double k2 = front * pi.P;

  // |V1|^2 = (diff_sq)^2 / (4 d^2).
  const Vec3 grad_v1sq = diff_sq * v / d2 - 0.5 * diff_sq * diff_sq * u / (d2 * d2);
  Vec3 grad_k2 = k2 * (-u / d2 - 0.5 * u - grad_v1sq) +
                 front * (pi.dPdd * u / d + pi.dPdm * grad_abs_V2(v, v_star));

  const double g = params.gamma;
  const Vec3 grad_k1 =
      params.B0 * M_PI * std::exp(-0.5 * (v.squaredNorm() + v_star.squaredNorm())) *
      (g * std::pow(d, g - 2.0) * u - std::pow(d, g) * v);

  return grad_k2 - grad_k1;
}

}  // namespace slbe

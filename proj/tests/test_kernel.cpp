#include <doctest.h>

#include "slbe/kernel.hpp"
#include "slbe/quadrature.hpp"
#include "slbe/types.hpp"

#include <cmath>

using namespace slbe;

namespace {

PhysParams make_params(double gamma, double B0 = 1.0, double alpha = 0.25) {
  PhysParams p;
  p.B0 = B0;
  p.gamma = gamma;
  p.alpha = alpha;
  p.beta = 3.0;
  return p;
}

double sqrt_maxwellian(double speed) {
  return std::pow(M_PI, -0.75) * std::exp(-0.5 * speed * speed);
}

// Independent reduction of Int k(v, v*) sqrtM(v*) dv* using spherical
// coordinates centered at v: the radial variable is the gap d, the angular
// integrand is smooth, and the d -> 0 power d^{gamma+2} is graded exactly.
double K_on_sqrt_maxwellian(double speed, const PhysParams& params,
                            const KernelQuadSpec& spec) {
  const Vec3 v(0.0, 0.0, speed);
  const int n_ang = 24;
  const GaussLegendre& gl = gauss_legendre(n_ang);
  auto shell = [&](double d) {
    double sum = 0.0;
    for (int i = 0; i < n_ang; ++i) {
      const double c = gl.nodes[i];
      const Vec3 omega(std::sqrt(1.0 - c * c), 0.0, c);
      const Vec3 vs = v + d * omega;
      sum += gl.weights[i] * kernel_k(v, vs, params, spec) *
             sqrt_maxwellian(vs.norm());
    }
    return 2.0 * M_PI * sum * d * d;
  };
  const double d_cut = 1e-9;
  const double d_max = 2.0 * speed + 9.0;
  const double p = params.gamma + 2.0;
  // Analytic closure of the [0, d_cut] piece from the leading power.
  const double closure = shell(d_cut) * d_cut / (p + 1.0);
  const double main = integrate_power_endpoint(
      [&](double delta) { return shell(d_cut + delta); }, d_max - d_cut,
      std::min(p, 0.0), 1e-8);
  return main + closure;
}

}  // namespace

TEST_CASE("collision frequency closed forms") {
  // gamma = 0: nu = B0 pi^{5/2} independent of speed.
  const PhysParams p0 = make_params(0.0);
  for (double s : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    CHECK(collision_frequency(s, p0) ==
          doctest::Approx(std::pow(M_PI, 2.5)).epsilon(1e-10));
  }
  // gamma = 1 at rest: 2 pi^2.
  const PhysParams p1 = make_params(1.0);
  CHECK(collision_frequency(0.0, p1) ==
        doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-10));
  CHECK(collision_frequency_at_zero(p1) ==
        doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));

  // gamma = 1, s > 0 closed form:
  //   nu = B0 pi^2 [ (sqrt(pi)/2)(1 + 2 s^2) erf(s)/s + e^{-s^2} ].
  for (double s : {0.2, 1.0, 2.5, 7.0}) {
    const double ref =
        M_PI * M_PI *
        (0.5 * std::sqrt(M_PI) * (1.0 + 2.0 * s * s) * std::erf(s) / s +
         std::exp(-s * s));
    CHECK(collision_frequency(s, p1) == doctest::Approx(ref).epsilon(1e-10));
  }

  // nu(0) closed form across the gamma grid.
  for (double g : {0.5, -1.0, -1.5, -2.0, -2.5}) {
    const PhysParams pg = make_params(g);
    CHECK(collision_frequency(0.0, pg) ==
          doctest::Approx(collision_frequency_at_zero(pg)).epsilon(1e-10));
  }
}

TEST_CASE("nu is comparable to (1+s)^gamma") {
  for (double g : {1.0, -1.0, -2.5}) {
    const PhysParams p = make_params(g);
    double lo = 1e300, hi = 0.0;
    for (double s = 0.0; s <= 50.0; s += 2.5) {
      const double r = collision_frequency(s, p) / std::pow(1.0 + s, g);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0.0);
    CHECK(std::isfinite(hi));
    // Hard spheres: tight bracket; soft potentials widen towards gamma = -3.
    if (g == 1.0) CHECK(hi / lo < 3.0);
    CHECK(hi / lo < 10.0);
  }
}

TEST_CASE("pair geometry identities") {
  // Antiparallel equal speeds: both V1 and V2 vanish.
  auto g1 = pair_geometry({1, 0, 0}, {-1, 0, 0});
  CHECK(g1.V1.norm() < 1e-14);
  CHECK(g1.V2.norm() < 1e-14);

  // Orthogonal equal speeds: V1 = 0, |V2|^2 = 1/2.
  auto g2 = pair_geometry({1, 0, 0}, {0, 1, 0});
  CHECK(g2.V1.norm() < 1e-14);
  CHECK(g2.V2.squaredNorm() == doctest::Approx(0.5).epsilon(1e-13));

  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = rng.unit_vector() * rng.log_uniform(1e-2, 10.0);
    const Vec3 vs = rng.unit_vector() * rng.log_uniform(1e-2, 10.0);
    if ((v - vs).norm() < 1e-6) continue;
    auto g = pair_geometry(v, vs);
    const double scale = 0.5 * (v.squaredNorm() + vs.squaredNorm());
    CHECK(std::abs(g.V2.dot(v - vs)) <= 1e-12 * (1.0 + g.V2.norm() * g.d));
    CHECK(0.25 * g.d * g.d + g.V1.squaredNorm() + g.V2.squaredNorm() ==
          doctest::Approx(scale).epsilon(1e-12));
    CHECK(g.V1.squaredNorm() + g.V2.squaredNorm() ==
          doctest::Approx(0.25 * (v + vs).squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(g.e2.dot(g.e3)) < 1e-14);
    CHECK(std::abs(g.e2.dot(v - vs)) < 1e-12 * g.d);
  }
  CHECK_THROWS_AS(pair_geometry({1, 0, 0}, {1, 0, 0}), CoincidentVelocities);
}

TEST_CASE("k1 closed forms and symmetry") {
  const PhysParams p0 = make_params(0.0);
  CHECK(kernel_k1({0, 0, 0}, {0, 0, 0}, p0) == doctest::Approx(M_PI).epsilon(1e-14));
  const PhysParams p1 = make_params(1.0);
  CHECK(kernel_k1({1, 0, 0}, {0, 0, 0}, p1) ==
        doctest::Approx(M_PI * std::exp(-0.5)).epsilon(1e-14));
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vec3 v = rng.unit_vector() * rng.uniform(0.1, 4.0);
    const Vec3 vs = rng.unit_vector() * rng.uniform(0.1, 4.0);
    const PhysParams p = make_params(-1.5);
    CHECK(kernel_k1(v, vs, p) == doctest::Approx(kernel_k1(vs, v, p)).epsilon(1e-14));
  }
}

TEST_CASE("k2 closed form at gamma = 1") {
  const PhysParams p = make_params(1.0);
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const Vec3 v = rng.unit_vector() * rng.log_uniform(0.05, 6.0);
    const Vec3 vs = rng.unit_vector() * rng.log_uniform(0.05, 6.0);
    if ((v - vs).norm() < 1e-3) continue;
    auto g = pair_geometry(v, vs);
    const double ref = 2.0 * M_PI / g.d *
                       std::exp(-0.25 * g.d * g.d - g.V1.squaredNorm());
    CHECK(kernel_k2(v, vs, p) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("k2 closed form at gamma = 0 against a resting argument") {
  const PhysParams p = make_params(0.0);
  for (double rho : {0.3, 1.0, 2.0, 4.5}) {
    const Vec3 vs(0.0, rho, 0.0);
    const double ref = 2.0 * std::pow(M_PI, 1.5) / rho *
                       std::exp(0.5 * rho * rho) * std::erfc(rho);
    CHECK(kernel_k2(Vec3::Zero(), vs, p) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("k2 closed form at gamma = -1 on a collinear pair") {
  // V1 = V2 = 0 there, and the plane integral is pi e^{d^2} E_1(d^2).
  const PhysParams p = make_params(-1.0);
  for (double sigma : {0.35, 0.7, 1.4}) {
    const Vec3 v(sigma, 0, 0), vs(-sigma, 0, 0);
    const double d = 2.0 * sigma;
    const double e1 = -std::expint(-d * d);
    const double ref = 2.0 * M_PI / d * std::exp(0.75 * d * d) * e1;
    CHECK(kernel_k2(v, vs, p) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("k2 symmetry, self-convergence, and angular modes agree") {
  Rng rng(31);
  for (double g : {0.5, -1.0, -2.5}) {
    const PhysParams p = make_params(g);
    for (int i = 0; i < 25; ++i) {
      const Vec3 v = rng.unit_vector() * rng.log_uniform(0.05, 6.0);
      const Vec3 vs = rng.unit_vector() * rng.log_uniform(0.05, 6.0);
      if ((v - vs).norm() < 1e-4) continue;
      const double a = kernel_k2(v, vs, p);
      const double b = kernel_k2(vs, v, p);
      CHECK(a == doctest::Approx(b).epsilon(1e-8));

      KernelQuadSpec spec;
      const double a2 = kernel_k2(v, vs, p, spec.doubled());
      CHECK(std::abs(a - a2) <= 1e-8 * std::abs(a2) + 1e-300);

      KernelQuadSpec trap;
      trap.exact_angular = false;
      const double at = kernel_k2(v, vs, p, trap);
      CHECK(at == doctest::Approx(a).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernel envelope est:k is bounded on a sample") {
  Rng rng(207);
  for (double g : {1.0, -1.0, -2.5}) {
    PhysParams p = make_params(g);
    const double delta = p.delta_or_default();
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const Vec3 v = rng.unit_vector() * rng.log_uniform(1e-2, 8.0);
      const Vec3 vs = rng.unit_vector() * rng.log_uniform(1e-2, 8.0);
      const double d = (v - vs).norm();
      if (d < 1e-6) continue;
      const double env = weight_w_gamma(d, g) *
                         envelope_E_delta(v, vs, delta) /
                         std::pow(1.0 + v.norm() + vs.norm(), 1.0 - g);
      worst = std::max(worst, std::abs(kernel_k(v, vs, p)) / env);
    }
    CHECK(std::isfinite(worst));
    CHECK(worst > 0.0);
  }
}

TEST_CASE("weights and envelopes") {
  CHECK(weight_w_gamma(1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(weight_w_gamma(2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(weight_w_gamma(0.5, -2.5) == doctest::Approx(std::pow(0.5, -2.5)).epsilon(1e-14));
  // Equal speeds kill the V1 term.
  const Vec3 v(1.2, 0, 0), vs(0, 1.2, 0);
  const double d2 = (v - vs).squaredNorm();
  CHECK(envelope_E_delta(v, vs, 0.25) ==
        doctest::Approx(std::exp(-0.75 * d2 / 4.0)).epsilon(1e-13));
  const auto ec = envelope_constants(0.25);
  // a = 1/4, delta = 1/4: a1 = (3/4 + 1/2)(3/4 - 1/2) / 3 = 5/48.
  CHECK(ec.a1 == doctest::Approx(5.0 / 48.0).epsilon(1e-14));
  CHECK(ec.a2 == doctest::Approx((0.25) / 1.5).epsilon(1e-14));
  CHECK(ec.a3 == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("analytic kernel gradient matches central differences") {
  Rng rng(404);
  const double h = 1e-5;
  for (double g : {1.0, 0.0, -1.5, -2.5}) {
    const PhysParams p = make_params(g);
    for (int i = 0; i < 30; ++i) {
      const Vec3 v = rng.unit_vector() * rng.log_uniform(0.2, 5.0);
      Vec3 vs = rng.unit_vector() * rng.log_uniform(0.2, 5.0);
      if ((v - vs).norm() < 0.1) vs += Vec3(0.3, 0.0, 0.0);
      const Vec3 grad = grad_kernel_k(v, vs, p);
      Vec3 fd;
      for (int c = 0; c < 3; ++c) {
        Vec3 e = Vec3::Zero();
        e[c] = h;
        fd[c] = (kernel_k(v + e, vs, p) - kernel_k(v - e, vs, p)) / (2.0 * h);
      }
      const double denom = std::max(grad.norm(), 1e-10);
      CHECK((grad - fd).norm() / denom < 1e-5);
    }
  }
}

TEST_CASE("gradient of |V2| and its bound") {
  Rng rng(77);
  const double h = 1e-6;
  for (int i = 0; i < 60; ++i) {
    const Vec3 v = rng.unit_vector() * rng.uniform(0.3, 4.0);
    Vec3 vs = rng.unit_vector() * rng.uniform(0.3, 4.0);
    if ((v - vs).norm() < 0.1 || v.cross(vs).norm() < 1e-3) continue;
    const Vec3 grad = grad_abs_V2(v, vs);
    const double d = (v - vs).norm();
    CHECK(grad.norm() <= 2.0 * vs.norm() / d + 1e-9);
    Vec3 fd;
    for (int c = 0; c < 3; ++c) {
      Vec3 e = Vec3::Zero();
      e[c] = h;
      auto m = [&](const Vec3& w) { return pair_geometry(w, vs).V2.norm(); };
      fd[c] = (m(v + e) - m(v - e)) / (2.0 * h);
    }
    CHECK((grad - fd).norm() < 1e-6 * std::max(1.0, grad.norm()));
  }
}

TEST_CASE("null-space identity: K sqrtM = nu sqrtM") {
  KernelQuadSpec spec;
  spec.n_radial = 16;
  for (double g : {0.0, 1.0, -1.5}) {
    const PhysParams p = make_params(g);
    for (double s : {0.4, 1.1, 2.7}) {
      const double lhs = K_on_sqrt_maxwellian(s, p, spec);
      const double rhs = collision_frequency(s, p) * sqrt_maxwellian(s);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaled Bessel helpers match the trapezoid angular sums") {
  for (double x : {0.0, 0.5, 3.0, 12.0, 29.0, 31.0, 80.0, 400.0}) {
    const int n = 512;
    double s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double c = std::cos(2.0 * M_PI * (k + 0.5) / n);
      s0 += std::exp(x * (c - 1.0));
      s1 += c * std::exp(x * (c - 1.0));
    }
    s0 /= n;
    s1 /= n;
    CHECK(detail::bessel_i0_scaled(x) == doctest::Approx(s0).epsilon(1e-12));
    CHECK(detail::bessel_i1_scaled(x) == doctest::Approx(s1).epsilon(2e-12));
  }
}

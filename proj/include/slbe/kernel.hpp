#pragma once

#include "slbe/params.hpp"
#include "slbe/types.hpp"

#include <stdexcept>

namespace slbe {

struct CoincidentVelocities : std::invalid_argument {
  CoincidentVelocities()
      : std::invalid_argument("|v - v*| below the 1e-12 threshold") {}
};

/// Relative geometry of a velocity pair: the gap d = |v - v*|, the drift
/// vector V1 along v - v*, the transverse vector V2 and an orthonormal basis
/// (e2, e3) of the plane W orthogonal to v - v*.
///
/// Invariants: V2 . (v - v*) = 0, |V1|^2 + |V2|^2 = |v + v*|^2 / 4 and
/// d^2/4 + |V1|^2 + |V2|^2 = (|v|^2 + |v*|^2) / 2.
struct PairGeometry {
  Vec3 v;
  Vec3 v_star;
  double d;
  Vec3 V1;
  Vec3 V2;
  Vec3 e2;
  Vec3 e3;
};

PairGeometry pair_geometry(const Vec3& v, const Vec3& v_star);

/// Orthonormal completion of a unit vector u: deterministic Gram-Schmidt
/// against the coordinate axis with the smallest |u| component.
void orthonormal_basis(const Vec3& u, Vec3& e2, Vec3& e3);

/// Controls the polar rule on the transverse plane in kernel_k2: a graded
/// panel on [0, d], dyadic panels up to radius 1, unit panels beyond, with
/// n_radial Gauss nodes per panel. The angular factor is either summed by a
/// uniform trapezoid with at least n_angular nodes (spectrally convergent for
/// this integrand) or replaced by its exact closed form; both paths agree to
/// the trapezoid's resolution and the exact one is the default.
struct KernelQuadSpec {
  int n_radial = 12;
  int n_angular = 32;
  double radial_cutoff = 7.5;  ///< integrate to |w| = |V2| + cutoff
  bool exact_angular = true;

  KernelQuadSpec doubled() const {
    KernelQuadSpec s = *this;
    s.n_radial *= 2;
    s.n_angular *= 2;
    return s;
  }
};

/// Collision frequency nu(|v|) = B0 pi Int |v - vt|^gamma e^{-|vt|^2} dvt,
/// reduced to a 1D radial integral after exact angular integration.
/// Relative accuracy ~1e-12 (target 1e-10).
double collision_frequency(double speed, const PhysParams& params);

/// nu(0) in closed form, 2 B0 pi^2 Gamma((gamma + 3) / 2).
double collision_frequency_at_zero(const PhysParams& params);

/// Smooth product kernel B0 pi |v - v*|^gamma e^{-(|v|^2 + |v*|^2)/2}.
double kernel_k1(const Vec3& v, const Vec3& v_star, const PhysParams& params);

/// Transverse-plane kernel
///   2 B0 / |v - v*| e^{-|v - v*|^2/4 - |V1|^2}
///     Int_W e^{-|w + V2|^2} (|v - v*|^2 + |w|^2)^{(gamma - 1)/2} dw.
double kernel_k2(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                 const KernelQuadSpec& spec = {});

/// Full kernel k = k2 - k1 (gain minus loss; Int k(v, .) sqrtM = nu sqrtM).
double kernel_k(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                const KernelQuadSpec& spec = {});

/// k_alpha(v, v*) = e^{alpha |v|^2} k(v, v*) e^{-alpha |v*|^2}.
double kernel_k_alpha(const Vec3& v, const Vec3& v_star,
                      const PhysParams& params, const KernelQuadSpec& spec = {});

/// k*_alpha(v, v*) = k_alpha(v*, v).
double kernel_k_star_alpha(const Vec3& v, const Vec3& v_star,
                           const PhysParams& params,
                           const KernelQuadSpec& spec = {});

/// k*_{alpha,gamma}(v, v*) = (1 + |v|)^{-gamma} k*_alpha(v, v*).
double kernel_k_star_alpha_gamma(const Vec3& v, const Vec3& v_star,
                                 const PhysParams& params,
                                 const KernelQuadSpec& spec = {});

/// Analytic velocity gradient of k = k2 - k1.
Vec3 grad_kernel_k(const Vec3& v, const Vec3& v_star, const PhysParams& params,
                   const KernelQuadSpec& spec = {});

/// Gradient of |V2(v, v*)| (bounded by 2|v*| / |v - v*|).
Vec3 grad_abs_V2(const Vec3& v, const Vec3& v_star);

/// Envelope e^{-(1 - delta)/4 (|v - v*|^2 + 4 |V1|^2)}.
double envelope_E_delta(const Vec3& v, const Vec3& v_star, double delta);

/// Gap weight: 1/d for -1 < gamma <= 1, (|log d| + 1)/d at gamma = -1,
/// d^{-|gamma|} for -3 < gamma < -1.
double weight_w_gamma(double d, double gamma);

/// Exponents of the split Gaussian envelope of k_alpha obtained with
/// a = alpha, delta = 1/2 - alpha:
///   |k_alpha| <= C w_gamma(d) (1+|v|+|v*|)^{gamma-1}
///                e^{-a1 d^2} e^{-a3 ((v-v*).v/d - a2 d)^2}.
struct EnvelopeConstants {
  double a1;
  double a2;
  double a3;
};
EnvelopeConstants envelope_constants(double alpha);

namespace detail {
/// e^{-x} I0(x) and e^{-x} I1(x) for x >= 0, ~1e-13 accurate.
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);
}  // namespace detail

}  // namespace slbe

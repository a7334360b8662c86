#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace slbe {

/// Model constants of the cross section B(|v - vt|, theta) =
/// B0 |v - vt|^gamma sin(theta) cos(theta) and of the weighted spaces.
struct PhysParams {
  double B0 = 1.0;       ///< cross-section amplitude, > 0
  double gamma = 0.0;    ///< collision exponent, -3 < gamma <= 1
  double alpha = 0.25;   ///< Gaussian weight exponent, 0 <= alpha < 1/2
  double beta = 3.0;     ///< polynomial weight exponent, > (3 + gamma)/2
  double delta = -1.0;   ///< envelope slack in (0,1); < 0 means "use default"

  /// Default slack (1/2 - alpha)/2: half the proof's choice, leaving headroom.
  double delta_or_default() const {
    return delta < 0.0 ? 0.5 * (0.5 - alpha) : delta;
  }
};

enum class ParamViolation {
  GammaOutOfRange,
  AlphaOutOfRange,
  BetaOutOfRange,
  B0OutOfRange,
  DeltaOutOfRange,
  EpsilonOutOfRange,
};

struct ValidationError : std::invalid_argument {
  ValidationError(ParamViolation c, const std::string& what)
      : std::invalid_argument(what), code(c) {}
  ParamViolation code;
};

/// Returns params unchanged iff every model constraint holds; throws
/// ValidationError naming the first violated constraint otherwise.
inline PhysParams validate(const PhysParams& p) {
  if (!(p.gamma > -3.0 && p.gamma <= 1.0))
    throw ValidationError(ParamViolation::GammaOutOfRange,
                          "gamma must satisfy -3 < gamma <= 1");
  if (!(p.alpha >= 0.0 && p.alpha < 0.5))
    throw ValidationError(ParamViolation::AlphaOutOfRange,
                          "alpha must satisfy 0 <= alpha < 1/2");
  if (!(p.beta > 0.5 * (3.0 + p.gamma)))
    throw ValidationError(ParamViolation::BetaOutOfRange,
                          "beta must satisfy beta > (3 + gamma)/2");
  if (!(p.B0 > 0.0))
    throw ValidationError(ParamViolation::B0OutOfRange, "B0 must be positive");
  const double d = p.delta_or_default();
  if (!(d > 0.0 && d < 1.0))
    throw ValidationError(ParamViolation::DeltaOutOfRange,
                          "delta must lie in (0, 1)");
  return p;
}

/// Regularity exponents attached to a collision exponent gamma.
///
/// s_gamma is the spatial ceiling, s2_gamma the averaging gain in x and
/// s3_gamma the smoothing gain in v; epsilon enters only on the branches
/// where the gain degenerates (gamma = -2, respectively gamma <= -2).
struct RegularityThresholds {
  double s_gamma;
  double s2_gamma;
  double s3_gamma;
  double epsilon;
};

inline RegularityThresholds thresholds(double gamma, double epsilon = 0.05) {
  if (!(gamma > -3.0 && gamma <= 1.0))
    throw ValidationError(ParamViolation::GammaOutOfRange,
                          "gamma must satisfy -3 < gamma <= 1");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ValidationError(ParamViolation::EpsilonOutOfRange,
                          "epsilon must lie in (0, 1/2)");
  RegularityThresholds t{};
  t.epsilon = epsilon;
  t.s_gamma = (gamma >= -2.0) ? 1.0 : 0.5 * (4.0 + gamma);
  if (gamma > -2.0)
    t.s2_gamma = 0.5;
  else if (gamma == -2.0)
    t.s2_gamma = 0.5 - epsilon;
  else
    t.s2_gamma = 0.5 * (3.0 + gamma);
  t.s3_gamma = (gamma > -2.0) ? 1.0 : 0.5 * (3.0 + gamma) - epsilon;
  return t;
}

}  // namespace slbe

#pragma once

#include "slbe/types.hpp"

#include <stdexcept>
#include <string>

namespace slbe {

struct DegenerateRay : std::invalid_argument {
  DegenerateRay() : std::invalid_argument("velocity below machine-scale threshold") {}
};
struct OutsideDomain : std::invalid_argument {
  OutsideDomain() : std::invalid_argument("point outside the domain") {}
};

/// Point on the boundary together with the outward unit normal there.
struct BoundaryPoint {
  Vec3 z;
  Vec3 n;
};

/// Bounded strictly convex body containing the origin: a ball of radius R or
/// an axis-aligned ellipsoid with semi-axes (a, b, c). Ray intersections are
/// closed-form (quadratic solve), so exit data carry no root-finder noise.
class ConvexDomain {
 public:
  static ConvexDomain ball(double radius);
  static ConvexDomain ellipsoid(const Vec3& semi_axes);

  const Vec3& semi_axes() const { return semi_axes_; }
  bool is_ball() const { return is_ball_; }
  double diameter() const { return diameter_; }
  double volume() const;
  /// Exact only for balls; ellipsoid areas have no elementary closed form.
  double surface_area_ball() const;

  /// Level function: negative inside, zero on the boundary.
  double level(const Vec3& x) const;
  bool contains(const Vec3& x, double tol = 1e-10) const;

  Vec3 outward_normal(const Vec3& z) const;

  /// Backward exit time tau_-(x, v) = inf{t > 0 : x - t v leaves the domain},
  /// for x inside (or on) the boundary and v != 0.
  double exit_time(const Vec3& x, const Vec3& v) const;

  /// Forward exit time tau_+(z, v) = tau_-(z, -v).
  double forward_exit_time(const Vec3& x, const Vec3& v) const {
    return exit_time(x, -v);
  }

  /// q(x, v) = x - tau_-(x, v) v with its outward normal.
  BoundaryPoint exit_point(const Vec3& x, const Vec3& v) const;

  /// Transversality factor N(x, v) = |n(q(x, v)) . v| / |v| in [0, 1].
  double transversality(const Vec3& x, const Vec3& v) const;

  /// Pairwise min N(x, y, v) used by the exit-point Holder estimates.
  double transversality(const Vec3& x, const Vec3& y, const Vec3& v) const {
    return std::min(transversality(x, v), transversality(y, v));
  }

 private:
  ConvexDomain(const Vec3& axes, bool is_ball);

  Vec3 semi_axes_;
  Vec3 inv_axes_;
  bool is_ball_;
  double diameter_;
};

}  // namespace slbe

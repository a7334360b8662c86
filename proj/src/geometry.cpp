#include "slbe/geometry.hpp"

#include <cmath>

namespace slbe {

ConvexDomain::ConvexDomain(const Vec3& axes, bool is_ball)
    : semi_axes_(axes),
      inv_axes_(axes.cwiseInverse()),
      is_ball_(is_ball),
      diameter_(2.0 * axes.maxCoeff()) {
  if (!(axes.minCoeff() > 0.0))
    throw std::invalid_argument("domain semi-axes must be positive");
}

ConvexDomain ConvexDomain::ball(double radius) {
  return ConvexDomain(Vec3::Constant(radius), true);
}

ConvexDomain ConvexDomain::ellipsoid(const Vec3& semi_axes) {
  return ConvexDomain(semi_axes, false);
}

double ConvexDomain::volume() const {
  return 4.0 / 3.0 * M_PI * semi_axes_.prod();
}

double ConvexDomain::surface_area_ball() const {
  return 4.0 * M_PI * semi_axes_.x() * semi_axes_.x();
}

double ConvexDomain::level(const Vec3& x) const {
  return x.cwiseProduct(inv_axes_).squaredNorm() - 1.0;
}

bool ConvexDomain::contains(const Vec3& x, double tol) const {
  return level(x) <= tol;
}

Vec3 ConvexDomain::outward_normal(const Vec3& z) const {
  // grad of |D x|^2 with D = diag(1/a); normalizing drops the factor 2.
  const Vec3 g = z.cwiseProduct(inv_axes_).cwiseProduct(inv_axes_);
  return g.normalized();
}

double ConvexDomain::exit_time(const Vec3& x, const Vec3& v) const {
  if (v.norm() < 1e-14) throw DegenerateRay();
  if (level(x) > 1e-10) throw OutsideDomain();
  // Solve |D(x - t v)|^2 = 1 for the positive root.
  const Vec3 dx = x.cwiseProduct(inv_axes_);
  const Vec3 du = (-v).cwiseProduct(inv_axes_);
  const double a = du.squaredNorm();
  const double half_b = dx.dot(du);
  const double c = dx.squaredNorm() - 1.0;
  const double disc = half_b * half_b - a * c;
  // disc >= 0 always for c <= 0; guard against roundoff.
  const double sq = std::sqrt(std::max(disc, 0.0));
  // Stable positive-root formula (c <= 0 so the product of roots is <= 0).
  double t = (-half_b + sq) / a;
  return std::max(t, 0.0);
}

BoundaryPoint ConvexDomain::exit_point(const Vec3& x, const Vec3& v) const {
  const double tau = exit_time(x, v);
  Vec3 z = x - tau * v;
  // Snap exactly onto the surface; the ray solve leaves O(1e-15) residue.
  const double s = std::sqrt(z.cwiseProduct(inv_axes_).squaredNorm());
  if (s > 0.0) z /= s;
  return {z, outward_normal(z)};
}

double ConvexDomain::transversality(const Vec3& x, const Vec3& v) const {
  const BoundaryPoint bp = exit_point(x, v);
  return std::abs(bp.n.dot(v)) / v.norm();
}

}  // namespace slbe

#pragma once

#include "slbe/geometry.hpp"
#include "slbe/params.hpp"
#include "slbe/types.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace slbe {

struct GridTooCoarse : std::runtime_error {
  explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

inline double maxwellian(double speed) {
  return std::pow(M_PI, -1.5) * std::exp(-speed * speed);
}
inline double sqrt_maxwellian(double speed) {
  return std::pow(M_PI, -0.75) * std::exp(-0.5 * speed * speed);
}

/// Truncated spherical product grid on velocity space: Gauss-Legendre radii
/// on (0, v_max], Gauss-Legendre in cos(theta), uniform midpoints in phi.
/// Flattened node index = (ir * n_polar + jct) * n_azimuth + kphi.
struct VelocityGrid {
  double v_max;
  int n_radial, n_polar, n_azimuth;
  Eigen::ArrayXd r_nodes, r_weights;    // plain weights, no r^2 factor
  Eigen::ArrayXd ct_nodes, ct_weights;  // cos(theta)
  Eigen::ArrayXd phi_nodes;             // midpoints, weight 2 pi / n
  std::vector<Vec3> nodes;
  Eigen::ArrayXd weights;  // combined, includes the r^2 Jacobian
  Eigen::ArrayXd speeds;

  int size() const { return static_cast<int>(nodes.size()); }
  int flat_index(int ir, int jct, int kphi) const {
    return (ir * n_polar + jct) * n_azimuth + kphi;
  }
};

/// Truncation radius from the weighted-tail rule e^{-(1/2 - alpha) R^2} < 1e-10.
double velocity_truncation_radius(double alpha);

/// Builds the grid and verifies the Gaussian mass check
/// sum w e^{-|v|^2} = pi^{3/2} to 1e-6 relative; throws GridTooCoarse if the
/// grid cannot represent it.
VelocityGrid build_velocity_grid(const PhysParams& params, int n_radial,
                                 int n_polar, int n_azimuth);

/// Interior product grid (unit-ball coordinates scaled by the semi-axes) plus
/// a boundary grid carrying the surface measure. Interior node index layout
/// matches VelocityGrid.
struct SpatialGrid {
  ConvexDomain domain;
  int n_radial, n_polar, n_azimuth;
  Eigen::ArrayXd r_nodes;   // unit-ball radii in (0, 1)
  Eigen::ArrayXd ct_nodes;
  Eigen::ArrayXd phi_nodes;
  std::vector<Vec3> nodes;
  Eigen::ArrayXd weights;  // volume weights

  std::vector<BoundaryPoint> boundary;
  Eigen::ArrayXd boundary_weights;  // surface measure

  // Least-squares fit of {1, x, y, z} over interior nodes: 4 x n coefficients
  // mapping nodal values to an affine function (used by the interpolant).
  Eigen::MatrixXd affine_fit;

  int size() const { return static_cast<int>(nodes.size()); }
  int boundary_size() const { return static_cast<int>(boundary.size()); }
};

SpatialGrid build_spatial_grid(const ConvexDomain& domain, int n_radial,
                               int n_polar, int n_azimuth, int nb_polar = 0,
                               int nb_azimuth = 0);

/// Discrete function on SpatialGrid x VelocityGrid; values(i, j) is the value
/// at spatial node i and velocity node j.
struct PhaseField {
  std::shared_ptr<const SpatialGrid> xg;
  std::shared_ptr<const VelocityGrid> vg;
  Eigen::MatrixXd values;

  static PhaseField zeros(std::shared_ptr<const SpatialGrid> xg,
                          std::shared_ptr<const VelocityGrid> vg);
  template <typename F>  // F(x, v) -> double
  static PhaseField from_function(std::shared_ptr<const SpatialGrid> xg,
                                  std::shared_ptr<const VelocityGrid> vg,
                                  F&& f) {
    PhaseField out = zeros(xg, vg);
    for (int i = 0; i < xg->size(); ++i)
      for (int j = 0; j < vg->size(); ++j)
        out.values(i, j) = f(xg->nodes[i], vg->nodes[j]);
    return out;
  }

  bool same_grids(const PhaseField& other) const {
    return xg == other.xg && vg == other.vg;
  }
};

/// Spatial interpolation of one velocity column of a PhaseField: a global
/// affine fit (reproduces linear functions exactly) plus trilinear
/// interpolation of the nodal residual in spherical unit-ball coordinates.
/// Exact at the grid nodes.
class FieldInterpolant {
 public:
  FieldInterpolant(const PhaseField& field);

  /// Value at spatial point x (inside the domain) for velocity column j.
  double operator()(const Vec3& x, int j) const;

 private:
  const SpatialGrid* xg_;
  Eigen::MatrixXd lin_;       // 4 x n_v affine coefficients per column
  Eigen::MatrixXd residual_;  // n_x x n_v nodal residuals
};

/// Interpolation of a velocity profile h(v) given on a VelocityGrid.
/// Values are conjugated by e^{|v|^2/2} before interpolation (cubic in the
/// radius, linear in the angles) and damped back on evaluation, so Gaussian
/// profiles are represented nearly exactly; |v| > v_max reads as zero.
class VelocityProfileInterpolant {
 public:
  VelocityProfileInterpolant(const VelocityGrid& vg,
                             Eigen::Ref<const Eigen::VectorXd> column);

  double operator()(const Vec3& v) const;

 private:
  const VelocityGrid* vg_;
  Eigen::ArrayXd conj_;  // nodal values times e^{|v|^2/2}
};

}  // namespace slbe

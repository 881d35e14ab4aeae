#pragma once

#include <vector>

namespace ale {

// Coordinate carried by the uniform spacing: x = log r, or x = log t with
// t = r^2 (natural for Kahler potentials of the squared radius).
enum class GridCoordinate { LogRadius, LogSquaredRadius };

// Log-uniform radial grid. Power laws become straight lines in x, so the
// same stencils stay accurate from r ~ 1e-2 out to r ~ 1e6.
class RadialGrid {
 public:
  RadialGrid(GridCoordinate coord, double inner, double outer, int n_points);

  // inner/outer given in the native coordinate of each factory
  static RadialGrid log_t(double t_min, double t_max, int n_points);
  static RadialGrid log_r(double r_min, double r_max, int n_points);
  // validating constructor for externally supplied nodes (CSV import)
  static RadialGrid from_x_values(GridCoordinate coord,
                                  const std::vector<double>& x);

  int size() const { return static_cast<int>(x_.size()); }
  GridCoordinate coordinate() const { return coord_; }
  double dx() const { return dx_; }

  double x(int i) const { return x_[i]; }
  double r(int i) const { return r_[i]; }
  double t(int i) const { return t_[i]; }
  const std::vector<double>& x_values() const { return x_; }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& squared_radii() const { return t_; }

  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

  // spacing in log r and log t implied by the stored coordinate
  double log_r_step() const;
  double log_t_step() const;

  // index of the node closest to radius r, clamped to the range
  int nearest_index_r(double r) const;

  bool same_nodes(const RadialGrid& other) const;

 private:
  GridCoordinate coord_;
  double dx_ = 0.0;
  std::vector<double> x_, r_, t_;
};

}  // namespace ale

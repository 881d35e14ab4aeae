#include "ale/radial_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ale {

RadialGrid::RadialGrid(GridCoordinate coord, double inner, double outer,
                       int n_points)
    : coord_(coord) {
  if (!(inner > 0.0) || !(outer > inner))
    throw std::invalid_argument("RadialGrid: need 0 < inner < outer");
  if (n_points < 16)
    throw std::invalid_argument("RadialGrid: need at least 16 points");
  const double x0 = std::log(inner);
  const double x1 = std::log(outer);
  dx_ = (x1 - x0) / (n_points - 1);
  x_.resize(n_points);
  r_.resize(n_points);
  t_.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    x_[i] = x0 + i * dx_;
    const double v = std::exp(x_[i]);
    if (coord_ == GridCoordinate::LogRadius) {
      r_[i] = v;
      t_[i] = v * v;
    } else {
      t_[i] = v;
      r_[i] = std::sqrt(v);
    }
  }
}

RadialGrid RadialGrid::log_t(double t_min, double t_max, int n_points) {
  return RadialGrid(GridCoordinate::LogSquaredRadius, t_min, t_max, n_points);
}

RadialGrid RadialGrid::log_r(double r_min, double r_max, int n_points) {
  return RadialGrid(GridCoordinate::LogRadius, r_min, r_max, n_points);
}

RadialGrid RadialGrid::from_x_values(GridCoordinate coord,
                                     const std::vector<double>& x) {
  if (x.size() < 16)
    throw std::invalid_argument("RadialGrid: need at least 16 points");
  const double dx = (x.back() - x.front()) / (x.size() - 1);
  if (!(dx > 0.0)) throw std::invalid_argument("RadialGrid: not increasing");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - dx) > 1e-12 * std::max(1.0, std::abs(dx)))
      throw std::invalid_argument("RadialGrid: spacing not uniform in x");
  }
  RadialGrid g(coord, std::exp(x.front()), std::exp(x.back()),
               static_cast<int>(x.size()));
  return g;
}

double RadialGrid::log_r_step() const {
  return coord_ == GridCoordinate::LogRadius ? dx_ : dx_ / 2.0;
}

double RadialGrid::log_t_step() const {
  return coord_ == GridCoordinate::LogRadius ? 2.0 * dx_ : dx_;
}

int RadialGrid::nearest_index_r(double r) const {
  if (!(r > 0.0)) return 0;
  const double x = coord_ == GridCoordinate::LogRadius ? std::log(r)
                                                       : 2.0 * std::log(r);
  const double fi = (x - x_.front()) / dx_;
  int i = static_cast<int>(std::lround(fi));
  if (i < 0) i = 0;
  if (i >= size()) i = size() - 1;
  return i;
}

bool RadialGrid::same_nodes(const RadialGrid& other) const {
  if (size() != other.size() || coord_ != other.coord_) return false;
  for (int i = 0; i < size(); ++i)
    if (std::abs(x_[i] - other.x_[i]) > 1e-12 * (1.0 + std::abs(x_[i])))
      return false;
  return true;
}

}  // namespace ale

#include "kslab/torus.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

std::int64_t TorusGrid::size() const {
  std::int64_t s = 1;
  for (int d = 0; d < dim; ++d) s *= points;
  return s;
}

double TorusGrid::cell_measure() const {
  double m = 1.0;
  for (int d = 0; d < dim; ++d) m *= spacing();
  return m;
}

TorusGrid make_torus_grid(int dim, int points, double length) {
  if (dim < 1 || dim > 4) throw std::domain_error("torus grid: dim must be 1..4");
  if (points < 8 || (points & (points - 1)) != 0)
    throw std::domain_error("torus grid: points must be a power of two >= 8");
  if (!(length > 0.0)) throw std::domain_error("torus grid: length must be positive");
  return TorusGrid{dim, points, length};
}

TorusField::TorusField(const TorusGrid& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.size()), fill) {}

TorusField::TorusField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != grid.size())
    throw std::domain_error("torus field: value count does not match grid");
}

TorusField& TorusField::operator+=(const TorusField& rhs) {
  if (!(grid_ == rhs.grid_)) throw std::domain_error("torus field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

TorusField& TorusField::operator-=(const TorusField& rhs) {
  if (!(grid_ == rhs.grid_)) throw std::domain_error("torus field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

TorusField& TorusField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void TorusField::axpy(double s, const TorusField& rhs) {
  if (!(grid_ == rhs.grid_)) throw std::domain_error("torus field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * rhs.values_[i];
}

double TorusField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double TorusField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool TorusField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
TorusField operator*(double s, TorusField a) { return a *= s; }

TorusVectorField::TorusVectorField(const TorusGrid& grid) {
  component.reserve(grid.dim);
  for (int d = 0; d < grid.dim; ++d) component.emplace_back(grid);
}

}  // namespace kslab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kslab {

/// Uniform periodic grid on [-L/2, L/2)^n, N points per axis (power of two).
struct TorusGrid {
  int dim = 2;       // 1..4
  int points = 64;   // N per axis
  double length = 1.0;

  std::int64_t size() const;
  double spacing() const { return length / points; }
  double cell_measure() const;
  // coordinate of index i along an axis, in [-L/2, L/2)
  double coord(int i) const { return -0.5 * length + i * spacing(); }

  bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_torus_grid(int dim, int points, double length);

class TorusField {
 public:
  TorusField() = default;
  explicit TorusField(const TorusGrid& grid, double fill = 0.0);
  TorusField(const TorusGrid& grid, std::vector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

  TorusField& operator+=(const TorusField& rhs);
  TorusField& operator-=(const TorusField& rhs);
  TorusField& operator*=(double s);
  /// this += s * rhs
  void axpy(double s, const TorusField& rhs);

  double mean() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

TorusField operator+(TorusField a, const TorusField& b);
TorusField operator-(TorusField a, const TorusField& b);
TorusField operator*(double s, TorusField a);

struct TorusVectorField {
  std::vector<TorusField> component;  // size = grid dim

  explicit TorusVectorField(const TorusGrid& grid);
  TorusVectorField() = default;
  const TorusGrid& grid() const { return component.front().grid(); }
};

}  // namespace kslab

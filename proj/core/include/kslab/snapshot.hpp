#pragma once

#include <string>
#include <variant>

#include "kslab/params.hpp"

namespace kslab {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary field snapshot:
///   magic "KSFD" | version u32 = 1 | domain u8 (0 torus, 1 hyperbolic-radial)
///   | n u8 | per-axis counts u32 (n entries for torus, 1 for radial)
///   | geometry f64 (box length or tau_max) | payload f64, row-major
/// all little-endian; round-trips are bit exact.
void save_snapshot(const std::string& path, const TorusField& field);
void save_snapshot(const std::string& path, const RadialField& field);

using AnyField = std::variant<TorusField, RadialField>;

AnyField load_snapshot(const std::string& path);
TorusField load_torus_snapshot(const std::string& path);
RadialField load_radial_snapshot(const std::string& path);

}  // namespace kslab

#pragma once

// Flat Cayley-Klein planes and 3-spaces ds^2 = dx^2 + j2^2 dy^2 + j2^2 j3^2 dz^2.
//
// A nilpotent parameter makes the metric degenerate and splits the space
// into a base and a fiber, each carrying its own metric. Coordinates on
// opposite sides of such a split carry different physical-dimension tags.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckosc/algebra.hpp"
#include "json.hpp"

namespace ckosc::geometry {

struct Coordinate {
  std::string name;
  std::string tag;
};

struct FibrationLevel {
  std::vector<std::string> base;
  std::vector<std::string> fiber;

  bool operator==(const FibrationLevel&) const = default;
};

/// A value carrying a physical-dimension tag. Adding values with different
/// tags throws DimensionTagMismatch.
struct Quantity {
  double value = 0.0;
  std::string tag;
};

Quantity operator+(const Quantity& a, const Quantity& b);

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
  std::optional<double> dz;

  int dim() const { return dz ? 3 : 2; }
};

class FiberedSpace {
 public:
  /// Coordinates x, y (, z) with default tags "L", "Q1", "Q2"; the tag
  /// changes at every nilpotent parameter.
  FiberedSpace(int dim, Signature sig);

  static FiberedSpace plane(int sigma) { return FiberedSpace(2, Signature{sigma, 1}); }

  /// Reads {dim, sigma2, sigma3, coords?, levels?}. Custom tags are
  /// accepted when they respect the fibration; levels, if present, must
  /// equal the derived ones.
  static FiberedSpace from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int dim() const { return dim_; }
  Signature signature() const { return sig_; }
  const std::vector<Coordinate>& coords() const { return coords_; }
  const std::vector<FibrationLevel>& levels() const { return levels_; }

  const std::string& tag_of(std::string_view coordinate) const;
  Quantity quantity(std::string_view coordinate, double value) const;

 private:
  int dim_;
  Signature sig_;
  std::vector<Coordinate> coords_;
  std::vector<FibrationLevel> levels_;
};

/// ds^2 as an algebra element.
CKScalar metric_interval(const FiberedSpace& sp, const Displacement& d);

/// Metric of fibration level 0 (base), 1 (ds^2 / j2^2 with dx = 0) or 2
/// (ds^2 / (j2 j3)^2 with dx = dy = 0). Each coordinate weight is divided
/// formally by the level's unit before squaring, so the quotient stays
/// defined when the unit is nilpotent.
double level_metric(const FiberedSpace& sp, int level, const Displacement& d);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct IsolatedLines {
  int count = 0;
  std::vector<Point2> directions;
};

/// Lines through a point that no automorphism maps to another line of the
/// bundle: none on the Euclid plane, the fiber direction on the Galilei
/// plane, the two null directions x = +-y on the Minkowski plane.
IsolatedLines classify_line_bundle(int sigma);

/// (cos, sin), (1, phi) or (cosh, sinh) for sigma = +1, 0, -1.
struct GeneralizedTrig {
  double c = 1.0;
  double s = 0.0;
};

GeneralizedTrig generalized_trig(int sigma, double phi);

/// (x C - sigma y S, x S + y C). Preserves x^2 + sigma y^2.
Point2 generalized_rotation(int sigma, double phi, Point2 p);

}  // namespace ckosc::geometry

#include "ckosc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ckosc::geometry {

Quantity operator+(const Quantity& a, const Quantity& b) {
  if (a.tag != b.tag) {
    throw DimensionTagMismatch("cannot add [" + a.tag + "] and [" + b.tag + "]");
  }
  return {a.value + b.value, a.tag};
}

namespace {

constexpr const char* kNames[] = {"x", "y", "z"};

// nilpotent_after[i]: the parameter between coordinate i and i+1 is nilpotent
std::vector<bool> splits(int dim, Signature sig) {
  std::vector<bool> out{sig.nilpotent2()};
  if (dim == 3) out.push_back(sig.nilpotent3());
  return out;
}

}  // namespace

FiberedSpace::FiberedSpace(int dim, Signature sig) : dim_(dim), sig_(sig) {
  if (dim != 2 && dim != 3) throw DimensionMismatch("space dimension must be 2 or 3");
  const auto split = splits(dim, sig);
  int level = 0;
  coords_.push_back({kNames[0], "L"});
  for (int i = 1; i < dim; ++i) {
    if (split[i - 1]) ++level;
    coords_.push_back({kNames[i], level == 0 ? "L" : "Q" + std::to_string(level)});
  }
  // each nilpotent split at position k gives base {coords in the block
  // ending at k} and fiber {everything after k}
  std::size_t block_start = 0;
  for (int k = 0; k + 1 < dim; ++k) {
    if (!split[k]) continue;
    FibrationLevel lv;
    for (int i = static_cast<int>(block_start); i <= k; ++i) lv.base.push_back(kNames[i]);
    for (int i = k + 1; i < dim; ++i) lv.fiber.push_back(kNames[i]);
    levels_.push_back(std::move(lv));
    block_start = static_cast<std::size_t>(k + 1);
  }
}

FiberedSpace FiberedSpace::from_json(const nlohmann::json& j) {
  try {
    for (const auto& [key, value] : j.items()) {
      if (key != "dim" && key != "sigma2" && key != "sigma3" && key != "coords" && key != "levels") {
        throw ConfigError("unknown key in space description: " + key);
      }
    }
    const int dim = j.at("dim").get<int>();
    const int s2 = j.at("sigma2").get<int>();
    const int s3 = j.contains("sigma3") ? j.at("sigma3").get<int>() : 1;
    FiberedSpace sp(dim, Signature{s2, s3});

    if (j.contains("levels")) {
      std::vector<FibrationLevel> levels;
      for (const auto& lv : j.at("levels")) {
        levels.push_back({lv.at("base").get<std::vector<std::string>>(),
                          lv.at("fiber").get<std::vector<std::string>>()});
      }
      if (levels != sp.levels_) throw ConfigError("levels do not match the signature's fibration");
    }
    if (j.contains("coords")) {
      const auto& coords = j.at("coords");
      if (coords.size() != static_cast<std::size_t>(dim)) {
        throw ConfigError("coords must list " + std::to_string(dim) + " coordinates");
      }
      std::vector<Coordinate> custom;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        Coordinate c{coords[i].at("name").get<std::string>(), coords[i].at("tag").get<std::string>()};
        if (c.name != kNames[i]) throw ConfigError("coordinate " + std::to_string(i) + " must be named " + kNames[i]);
        custom.push_back(std::move(c));
      }
      // tags must change exactly where the default tags change
      for (std::size_t i = 1; i < custom.size(); ++i) {
        const bool default_differs = sp.coords_[i].tag != sp.coords_[i - 1].tag;
        const bool custom_differs = custom[i].tag != custom[i - 1].tag;
        if (default_differs != custom_differs) {
          throw ConfigError("tags of " + custom[i - 1].name + " and " + custom[i].name +
                            (default_differs ? " must differ" : " must be equal"));
        }
      }
      if (dim == 3 && sp.coords_[0].tag != sp.coords_[2].tag && custom[0].tag == custom[2].tag) {
        throw ConfigError("tags of x and z must differ");
      }
      sp.coords_ = std::move(custom);
    }
    return sp;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed space description: ") + e.what());
  } catch (const InvalidSignature& e) {
    throw ConfigError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json FiberedSpace::to_json() const {
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& c : coords_) coords.push_back({{"name", c.name}, {"tag", c.tag}});
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : levels_) levels.push_back({{"base", lv.base}, {"fiber", lv.fiber}});
  return {{"dim", dim_},
          {"sigma2", sig_.sigma2},
          {"sigma3", sig_.sigma3},
          {"coords", coords},
          {"levels", levels}};
}

const std::string& FiberedSpace::tag_of(std::string_view coordinate) const {
  for (const auto& c : coords_) {
    if (c.name == coordinate) return c.tag;
  }
  throw DimensionMismatch("no coordinate named " + std::string(coordinate));
}

Quantity FiberedSpace::quantity(std::string_view coordinate, double value) const {
  return {value, tag_of(coordinate)};
}

namespace {

void check_dim(const FiberedSpace& sp, const Displacement& d) {
  if (sp.dim() != d.dim()) {
    throw DimensionMismatch("displacement has " + std::to_string(d.dim()) + " components, space has " +
                            std::to_string(sp.dim()));
  }
}

// Factor f_k with weight f_k^2 on dq_k^2: 1, j2, j2*j3.
std::vector<CKScalar> metric_factors(const FiberedSpace& sp) {
  const Signature sig = sp.signature();
  std::vector<CKScalar> f{CKScalar(1.0, sig), CKScalar::unit(Unit::j2, sig)};
  if (sp.dim() == 3) f.push_back(CKScalar::unit(Unit::j23, sig));
  return f;
}

std::vector<double> components(const Displacement& d) {
  std::vector<double> c{d.dx, d.dy};
  if (d.dz) c.push_back(*d.dz);
  return c;
}

}  // namespace

CKScalar metric_interval(const FiberedSpace& sp, const Displacement& d) {
  check_dim(sp, d);
  const auto f = metric_factors(sp);
  const auto c = components(d);
  CKScalar ds2(0.0, sp.signature());
  for (std::size_t k = 0; k < c.size(); ++k) ds2 = ds2 + (c[k] * c[k]) * (f[k] * f[k]);
  return ds2;
}

double level_metric(const FiberedSpace& sp, int level, const Displacement& d) {
  check_dim(sp, d);
  if (level < 0 || level >= sp.dim()) {
    throw DimensionMismatch("level " + std::to_string(level) + " does not exist in dimension " +
                            std::to_string(sp.dim()));
  }
  const auto c = components(d);
  for (int k = 0; k < level; ++k) {
    if (c[static_cast<std::size_t>(k)] != 0.0) {
      throw FiberConstraintViolated("level " + std::to_string(level) + " requires d" + kNames[k] +
                                    " = 0");
    }
  }
  const auto f = metric_factors(sp);
  CKScalar total(0.0, sp.signature());
  for (std::size_t k = static_cast<std::size_t>(level); k < c.size(); ++k) {
    CKScalar q = f[k];
    if (level >= 1) q = div_unit(q, Unit::j2);
    if (level >= 2) q = div_unit(q, Unit::j3);
    total = total + (c[k] * c[k]) * (q * q);
  }
  return total.real();
}

IsolatedLines classify_line_bundle(int sigma) {
  switch (sigma) {
    case 1:
      return {0, {}};
    case 0:
      return {1, {{0.0, 1.0}}};
    case -1: {
      const double r = 1.0 / std::sqrt(2.0);
      return {2, {{r, r}, {r, -r}}};
    }
    default:
      throw InvalidSignature("sigma must be +1, 0 or -1");
  }
}

GeneralizedTrig generalized_trig(int sigma, double phi) {
  switch (sigma) {
    case 1:
      return {std::cos(phi), std::sin(phi)};
    case 0:
      return {1.0, phi};
    case -1:
      return {std::cosh(phi), std::sinh(phi)};
    default:
      throw InvalidSignature("sigma must be +1, 0 or -1");
  }
}

Point2 generalized_rotation(int sigma, double phi, Point2 p) {
  const auto [c, s] = generalized_trig(sigma, phi);
  return {p.x * c - sigma * p.y * s, p.x * s + p.y * c};
}

}  // namespace ckosc::geometry

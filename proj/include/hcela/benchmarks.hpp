#pragma once
// A compact black-box test suite: ten functions, two per function group,
// each instantiated with a seeded shift, optional rotation and fitness offset.
//
// Groups follow the usual BBOB split:
//   1 separable
//   2 low or moderate conditioning
//   3 unimodal with high conditioning
//   4 multimodal with adequate global structure
//   5 multimodal with weak global structure

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hcela/sample.hpp"

namespace hcela {

enum class BaseFunction {
  Constant,
  Sphere,
  RastriginSeparable,
  AttractiveSector,
  Rosenbrock,
  Ellipsoid,
  BentCigar,
  Rastrigin,
  SchaffersF7,
  Schwefel,
  Katsuura,
};

struct ObjectiveFunction {
  int id = 0;
  std::string name;
  int group = 0;
  std::size_t dimension = 0;
  std::uint64_t instance = 0;
  BaseFunction base = BaseFunction::Sphere;
  std::vector<double> shift;
  std::optional<std::vector<double>> rotation;  // row-major d x d
  double f_opt = 0.0;
};

inline constexpr int kSuiteSize = 10;

namespace detail {

struct SuiteEntry {
  const char* name;
  int group;
  BaseFunction base;
  bool rotated;
};

inline constexpr SuiteEntry kSuite[kSuiteSize] = {
    {"sphere", 1, BaseFunction::Sphere, false},
    {"rastrigin_separable", 1, BaseFunction::RastriginSeparable, false},
    {"attractive_sector", 2, BaseFunction::AttractiveSector, true},
    {"rosenbrock_rotated", 2, BaseFunction::Rosenbrock, true},
    {"ellipsoid_rotated", 3, BaseFunction::Ellipsoid, true},
    {"bent_cigar", 3, BaseFunction::BentCigar, true},
    {"rastrigin_rotated", 4, BaseFunction::Rastrigin, true},
    {"schaffers_f7", 4, BaseFunction::SchaffersF7, true},
    {"schwefel", 5, BaseFunction::Schwefel, true},
    {"katsuura", 5, BaseFunction::Katsuura, true},
};

// Q factor of a seeded Gaussian matrix via modified Gram-Schmidt (run twice),
// which gives the QR factor whose R has a positive diagonal.
inline std::vector<double> random_rotation(std::size_t d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  // columns stored contiguously: col j at [j*d, (j+1)*d)
  std::vector<double> cols(d * d);
  for (auto& v : cols) v = gauss(rng);
  for (std::size_t j = 0; j < d; ++j) {
    double* cj = cols.data() + j * d;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double* ck = cols.data() + k * d;
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += ck[i] * cj[i];
        for (std::size_t i = 0; i < d; ++i) cj[i] -= dot * ck[i];
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += cj[i] * cj[i];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) cj[i] /= norm;
  }
  std::vector<double> rows(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) rows[i * d + j] = cols[j * d + i];
  }
  return rows;
}

inline double rastrigin(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
  return s;
}

// Schwefel 2.26 term with the usual out-of-box penalty; u is the shifted coordinate.
inline double schwefel_term(double u, std::size_t d) {
  const double a = std::abs(u);
  if (a <= 500.0) return u * std::sin(std::sqrt(a));
  const double m = 500.0 - std::fmod(a, 500.0);
  const double sign = u > 0 ? 1.0 : -1.0;
  return sign * m * std::sin(std::sqrt(m)) - (a - 500.0) * (a - 500.0) / (10000.0 * static_cast<double>(d));
}

inline constexpr double kSchwefelOptimum = 420.9687462275036;
inline constexpr double kSchwefelScale = 45.0;

inline double base_value(const ObjectiveFunction& f, std::span<const double> z) {
  const std::size_t d = z.size();
  const double dd = static_cast<double>(d);
  switch (f.base) {
    case BaseFunction::Constant: return 0.0;
    case BaseFunction::Sphere: {
      double s = 0.0;
      for (double v : z) s += v * v;
      return s;
    }
    case BaseFunction::RastriginSeparable:
    case BaseFunction::Rastrigin: return rastrigin(z);
    case BaseFunction::AttractiveSector: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double w = z[i] * f.shift[i] > 0.0 ? 100.0 : 1.0;
        s += (w * z[i]) * (w * z[i]);
      }
      return std::pow(s, 0.9);
    }
    case BaseFunction::Rosenbrock: {
      const double c = std::max(1.0, std::sqrt(dd) / 8.0);
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const double a = c * z[i] + 1.0;
        const double b = c * z[i + 1] + 1.0;
        s += 100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0);
      }
      return s;
    }
    case BaseFunction::Ellipsoid: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += std::pow(10.0, 6.0 * static_cast<double>(i) / (dd - 1.0)) * z[i] * z[i];
      return s;
    }
    case BaseFunction::BentCigar: {
      double s = z[0] * z[0];
      for (std::size_t i = 1; i < d; ++i) s += 1e6 * z[i] * z[i];
      return s;
    }
    case BaseFunction::SchaffersF7: {
      double s = 0.0;
      auto scaled = [&](std::size_t i) { return std::pow(10.0, 0.5 * static_cast<double>(i) / (dd - 1.0)) * z[i]; };
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const double a = scaled(i);
        const double b = scaled(i + 1);
        const double si = std::sqrt(a * a + b * b);
        const double t = std::sin(50.0 * std::pow(si, 0.2));
        s += std::sqrt(si) + std::sqrt(si) * t * t;
      }
      s /= dd - 1.0;
      return s * s;
    }
    case BaseFunction::Schwefel: {
      const double at_opt = schwefel_term(kSchwefelOptimum, d);
      double s = 0.0;
      for (double v : z) s += at_opt - schwefel_term(kSchwefelOptimum + kSchwefelScale * v, d);
      return s;
    }
    case BaseFunction::Katsuura: {
      double prod = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        double inner = 0.0;
        double scale = 2.0;
        for (int j = 1; j <= 32; ++j, scale *= 2.0) {
          const double t = scale * z[i];
          inner += std::abs(t - std::round(t)) / scale;
        }
        prod *= std::pow(1.0 + static_cast<double>(i + 1) * inner, 10.0 / std::pow(dd, 1.2));
      }
      return 10.0 / (dd * dd) * prod - 10.0 / (dd * dd);
    }
  }
  return 0.0;
}

}  // namespace detail

inline double evaluate(const ObjectiveFunction& f, std::span<const double> x) {
  if (x.size() != f.dimension) throw DomainError("evaluate: dimension mismatch for " + f.name);
  const std::size_t d = f.dimension;
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - f.shift[i];
  if (!f.rotation) return detail::base_value(f, diff) + f.f_opt;
  const auto& r = *f.rotation;
  std::vector<double> z(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += r[i * d + j] * diff[j];
    z[i] = s;
  }
  return detail::base_value(f, z) + f.f_opt;
}

inline std::vector<double> evaluate_all(const ObjectiveFunction& f, const PointSet& points) {
  std::vector<double> y(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) y[k] = evaluate(f, points[k]);
  return y;
}

// Function `id` (1..10) in dimension d, materialised for one instance seed.
inline ObjectiveFunction make_function(int id, std::size_t dimension, std::uint64_t instance) {
  if (id < 1 || id > kSuiteSize) throw DomainError("make_function: id must be in 1..10");
  if (dimension < 2) throw DomainError("make_function: dimension must be >= 2");
  const auto& e = detail::kSuite[id - 1];
  ObjectiveFunction f;
  f.id = id;
  f.name = e.name;
  f.group = e.group;
  f.dimension = dimension;
  f.instance = instance;
  f.base = e.base;
  Rng rng(derive_seed(derive_seed(derive_seed(0x6263626f73756974ull, static_cast<std::uint64_t>(id)), dimension),
                      instance));
  std::uniform_real_distribution<double> shift(-4.0, 4.0);
  f.shift.resize(dimension);
  for (auto& s : f.shift) s = shift(rng);
  f.f_opt = std::uniform_real_distribution<double>(-100.0, 100.0)(rng);
  if (e.rotated) f.rotation = detail::random_rotation(dimension, rng);
  return f;
}

// Flat-landscape control: f(x) = 0 everywhere, group 0 (never used as a class label).
inline ObjectiveFunction constant_function(std::size_t dimension) {
  ObjectiveFunction f;
  f.id = 0;
  f.name = "constant";
  f.group = 0;
  f.dimension = dimension;
  f.base = BaseFunction::Constant;
  f.shift.assign(dimension, 0.0);
  return f;
}

inline std::vector<ObjectiveFunction> suite(std::size_t dimension, const std::vector<std::uint64_t>& instances) {
  std::vector<ObjectiveFunction> out;
  out.reserve(instances.size() * kSuiteSize);
  for (int id = 1; id <= kSuiteSize; ++id) {
    for (auto inst : instances) out.push_back(make_function(id, dimension, inst));
  }
  return out;
}

}  // namespace hcela

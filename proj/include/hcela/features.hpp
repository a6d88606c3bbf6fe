#pragma once
// Information-content landscape features of an ordered sample.
//
// A walk x_1..x_n with fitness y_1..y_n is turned into slopes
//   psi_i = (y_{i+1} - y_i) / |x_{i+1} - x_i|
// and, for a threshold eps, into symbols in {-1, 0, +1}. H(eps) is the
// entropy (base 6) of the unequal consecutive symbol pairs; M(eps) is the
// length of the symbol string after dropping zeros and collapsing repeats,
// relative to the number of symbols. The five features summarise H and M
// over an eps grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hcela/sample.hpp"

namespace hcela {

using Symbol = std::int8_t;

inline constexpr std::array<const char*, 5> kIcFeatureNames = {"eps_s", "eps_max", "eps_ratio", "h_max", "m0"};

// {0} followed by 1000 thresholds log-spaced over [1e-5, 1e15].
inline std::vector<double> default_epsilon_grid() {
  std::vector<double> grid;
  grid.reserve(1001);
  grid.push_back(0.0);
  for (int i = 0; i < 1000; ++i) grid.push_back(std::pow(10.0, -5.0 + 20.0 * i / 999.0));
  return grid;
}

struct IcConfig {
  std::vector<double> epsilons = default_epsilon_grid();
  double settling_threshold = 0.05;
  double ratio = 0.5;

  void validate() const {
    if (epsilons.empty() || epsilons.front() != 0.0) throw DomainError("IcConfig: epsilon grid must start at 0");
    if (!std::is_sorted(epsilons.begin(), epsilons.end())) throw DomainError("IcConfig: epsilon grid must be sorted");
    if (epsilons.size() < 2) throw DomainError("IcConfig: epsilon grid needs a positive threshold");
    if (!(settling_threshold > 0.0 && settling_threshold < 1.0)) throw DomainError("IcConfig: s must be in (0,1)");
    if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("IcConfig: r must be in (0,1)");
  }
};

struct IcFeatures {
  double eps_s = 0.0;      // log10 threshold
  double eps_max = 0.0;    // raw threshold
  double eps_ratio = 0.0;  // log10 threshold
  double h_max = 0.0;
  double m0 = 0.0;

  bool eps_s_fallback = false;  // H never dropped below s on the grid
  std::size_t skipped_pairs = 0;

  std::array<double, 5> as_array() const { return {eps_s, eps_max, eps_ratio, h_max, m0}; }
};

struct SlopeSeries {
  std::vector<double> slopes;
  // Consecutive duplicate points with different fitness; dropped from the series.
  std::size_t skipped_pairs = 0;
};

inline SlopeSeries slopes(const OrderedSample& sample) {
  sample.validate();
  if (!sample.fitness) throw DomainError("slopes: sample has no fitness values");
  if (sample.size() < 2) throw DomainError("slopes: need at least 2 points");
  const auto& y = *sample.fitness;
  SlopeSeries out;
  out.slopes.reserve(sample.size() - 1);
  for (std::size_t k = 0; k + 1 < sample.size(); ++k) {
    if (!std::isfinite(y[k]) || !std::isfinite(y[k + 1])) throw DomainError("slopes: non-finite fitness value");
    const double dist = distance(sample.points[k], sample.points[k + 1]);
    const double dy = y[k + 1] - y[k];
    if (dist > 0.0) {
      out.slopes.push_back(dy / dist);
    } else if (dy == 0.0) {
      out.slopes.push_back(0.0);
    } else {
      ++out.skipped_pairs;
    }
  }
  return out;
}

inline Symbol slope_symbol(double slope, double eps) {
  if (slope > eps) return 1;
  if (slope < -eps) return -1;
  return 0;
}

inline std::vector<Symbol> symbols_from_slopes(std::span<const double> psi, double eps) {
  std::vector<Symbol> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = slope_symbol(psi[i], eps);
  return out;
}

inline std::vector<Symbol> symbol_sequence(const OrderedSample& sample, double eps) {
  if (!(eps >= 0.0)) throw DomainError("symbol_sequence: epsilon must be >= 0");
  return symbols_from_slopes(slopes(sample).slopes, eps);
}

namespace detail {

inline int pair_code(Symbol a, Symbol b) { return (a + 1) * 3 + (b + 1); }

// Entropy over the six unequal pairs given the 3x3 pair histogram and the pair total.
inline double entropy_from_counts(const std::array<std::size_t, 9>& counts, std::size_t total) {
  static const double log6 = std::log(6.0);
  double h = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const std::size_t c = counts[static_cast<std::size_t>(a * 3 + b)];
      if (c == 0) continue;
      const double p = static_cast<double>(c) / static_cast<double>(total);
      h -= p * std::log(p) / log6;
    }
  }
  return h;
}

}  // namespace detail

inline double entropy_h(std::span<const Symbol> symbols) {
  if (symbols.size() < 2) throw DomainError("entropy_h: need at least 2 symbols");
  std::array<std::size_t, 9> counts{};
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
    ++counts[static_cast<std::size_t>(detail::pair_code(symbols[i], symbols[i + 1]))];
  }
  return detail::entropy_from_counts(counts, symbols.size() - 1);
}

inline double partial_information(std::span<const Symbol> symbols) {
  if (symbols.empty()) throw DomainError("partial_information: need at least 1 symbol");
  std::size_t length = 0;
  Symbol last = 0;
  for (auto s : symbols) {
    if (s == 0 || s == last) continue;
    ++length;
    last = s;
  }
  return static_cast<double>(length) / static_cast<double>(symbols.size());
}

struct IcCurves {
  std::vector<double> entropy;  // H per grid epsilon
  std::vector<double> partial;  // M per grid epsilon
};

// H(eps) and M(eps) over an ascending grid in one sweep: symbols only ever turn
// to 0 as eps grows, so each slope is retired once, in order of |slope|, with
// O(1) updates to the pair histogram and to a linked list of nonzero symbols.
inline IcCurves ic_curves(std::span<const double> psi, std::span<const double> epsilons) {
  const std::size_t m = psi.size();
  if (m < 2) throw DomainError("ic_curves: need at least 2 slopes");
  if (!std::is_sorted(epsilons.begin(), epsilons.end())) throw DomainError("ic_curves: grid must be ascending");

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<Symbol> sym(m);
  for (std::size_t i = 0; i < m; ++i) sym[i] = slope_symbol(psi[i], 0.0);

  std::array<std::size_t, 9> counts{};
  for (std::size_t i = 0; i + 1 < m; ++i) ++counts[static_cast<std::size_t>(detail::pair_code(sym[i], sym[i + 1]))];

  // Doubly linked list over nonzero symbols; `changes` is the collapsed length.
  std::vector<std::size_t> prev(m, none), next(m, none);
  std::size_t changes = 0;
  std::size_t last = none;
  for (std::size_t i = 0; i < m; ++i) {
    if (sym[i] == 0) continue;
    prev[i] = last;
    if (last != none) next[last] = i;
    if (last == none || sym[last] != sym[i]) ++changes;
    last = i;
  }

  std::vector<std::size_t> by_magnitude(m);
  std::iota(by_magnitude.begin(), by_magnitude.end(), std::size_t{0});
  std::sort(by_magnitude.begin(), by_magnitude.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(psi[a]) < std::abs(psi[b]); });

  auto retire = [&](std::size_t k) {
    const Symbol old = sym[k];
    if (k > 0) {
      --counts[static_cast<std::size_t>(detail::pair_code(sym[k - 1], old))];
      ++counts[static_cast<std::size_t>(detail::pair_code(sym[k - 1], 0))];
    }
    if (k + 1 < m) {
      --counts[static_cast<std::size_t>(detail::pair_code(old, sym[k + 1]))];
      ++counts[static_cast<std::size_t>(detail::pair_code(0, sym[k + 1]))];
    }
    const std::size_t p = prev[k];
    const std::size_t q = next[k];
    const bool k_counted = p == none || sym[p] != old;
    const bool q_counted_before = q != none && sym[q] != old;
    const bool q_counted_after = q != none && (p == none || sym[p] != sym[q]);
    changes = changes - (k_counted ? 1 : 0) - (q_counted_before ? 1 : 0) + (q_counted_after ? 1 : 0);
    if (p != none) next[p] = q;
    if (q != none) prev[q] = p;
    sym[k] = 0;
  };

  IcCurves out;
  out.entropy.reserve(epsilons.size());
  out.partial.reserve(epsilons.size());
  std::size_t cursor = 0;
  for (double eps : epsilons) {
    while (cursor < m && std::abs(psi[by_magnitude[cursor]]) <= eps) {
      const std::size_t k = by_magnitude[cursor++];
      if (sym[k] != 0) retire(k);
    }
    out.entropy.push_back(detail::entropy_from_counts(counts, m - 1));
    out.partial.push_back(static_cast<double>(changes) / static_cast<double>(m));
  }
  return out;
}

inline IcFeatures features_from_curves(const IcCurves& curves, const IcConfig& config) {
  const auto& eps = config.epsilons;
  IcFeatures f;

  std::size_t arg_max = 0;
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (curves.entropy[i] > curves.entropy[arg_max]) arg_max = i;
  }
  f.h_max = curves.entropy[arg_max];
  f.eps_max = eps[arg_max];

  const auto first_positive = static_cast<std::size_t>(std::upper_bound(eps.begin(), eps.end(), 0.0) - eps.begin());
  f.eps_s_fallback = true;
  f.eps_s = std::log10(eps.back());
  for (std::size_t i = first_positive; i < eps.size(); ++i) {
    if (curves.entropy[i] < config.settling_threshold) {
      f.eps_s = std::log10(eps[i]);
      f.eps_s_fallback = false;
      break;
    }
  }

  f.m0 = curves.partial[0];
  f.eps_ratio = std::log10(eps[first_positive]);
  if (f.m0 > 0.0) {
    f.eps_ratio = std::log10(eps.back());
    const double target = config.ratio * f.m0;
    for (std::size_t i = first_positive; i < eps.size(); ++i) {
      if (curves.partial[i] <= target) {
        f.eps_ratio = std::log10(eps[i]);
        break;
      }
    }
  }
  return f;
}

inline IcFeatures compute_ic_features(const OrderedSample& sample, const IcConfig& config = {}) {
  config.validate();
  if (!sample.ordered) throw ContractError("compute_ic_features: sample must be ordered first");
  if (sample.size() < 3) throw DomainError("compute_ic_features: need at least 3 points");
  const SlopeSeries series = slopes(sample);
  if (series.slopes.size() < 2) throw DomainError("compute_ic_features: fewer than 2 usable slopes");
  IcFeatures f = features_from_curves(ic_curves(series.slopes, config.epsilons), config);
  f.skipped_pairs = series.skipped_pairs;
  return f;
}

}  // namespace hcela

#pragma once
// Hilbert curve <-> grid mapping in arbitrary dimension.
//
// The conversion uses Skilling's transpose formulation ("Programming the
// Hilbert curve", AIP Conf. Proc. 707, 2004): a grid point is turned into the
// transposed index in place with O(d*p) bit operations, and the transposed
// form is then interleaved into a single integer. Index 0 maps to the origin.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcela/error.hpp"

namespace hcela {

using HilbertIndex = boost::multiprecision::cpp_int;
using GridPoint = std::vector<std::uint32_t>;

// Coordinates are stored in 32-bit words, so a single axis holds at most 32 bits.
inline constexpr unsigned kMaxOrder = 32;
// Upper bound on d*p accepted by the library; cpp_int itself is unbounded.
inline constexpr std::size_t kMaxIndexBits = 1u << 16;

struct CurveParams {
  std::size_t dim = 2;
  unsigned order = 1;

  void validate() const {
    if (dim < 1) throw DomainError("curve dimension must be >= 1");
    if (order < 1) throw DomainError("curve order must be >= 1");
    if (order > kMaxOrder) throw CapacityError("curve order exceeds 32 bits per axis");
    if (dim * order > kMaxIndexBits) throw CapacityError("d*p exceeds supported index width");
  }

  std::size_t index_bits() const { return dim * order; }
  std::uint32_t side_max() const {
    return order == 32 ? 0xffffffffu : static_cast<std::uint32_t>((std::uint64_t{1} << order) - 1);
  }
};

// 2^(d*p), exactly.
inline HilbertIndex vertex_count(const CurveParams& params) {
  params.validate();
  HilbertIndex one = 1;
  return one << params.index_bits();
}

// Smallest p with 2^p >= n + 1, i.e. ceil(log2(n + 1)), using integer arithmetic only.
inline unsigned min_order_for_sample(std::uint64_t n) {
  if (n == 0) throw DomainError("min_order_for_sample: n must be >= 1");
  unsigned p = 0;
  // n + 1 may overflow for n = 2^64 - 1; compare against n instead: 2^p > n.
  while (p < 64 && (std::uint64_t{1} << p) <= n) ++p;
  return p;
}

namespace detail {

// Skilling: axes -> transposed Hilbert index, in place.
inline void axes_to_transpose(std::span<std::uint32_t> x, unsigned bits) {
  const std::size_t n = x.size();
  const std::uint32_t m = std::uint32_t{1} << (bits - 1);
  // Inverse undo
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    const std::uint32_t p = q - 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        const std::uint32_t t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  // Gray encode
  for (std::size_t i = 1; i < n; ++i) x[i] ^= x[i - 1];
  std::uint32_t t = 0;
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    if (x[n - 1] & q) t ^= q - 1;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] ^= t;
}

// Skilling: transposed Hilbert index -> axes, in place.
inline void transpose_to_axes(std::span<std::uint32_t> x, unsigned bits) {
  const std::size_t n = x.size();
  // Gray decode by H ^ (H/2)
  std::uint32_t t = x[n - 1] >> 1;
  for (std::size_t i = n - 1; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;
  // Undo excess work
  const std::uint64_t stop = std::uint64_t{1} << bits;
  for (std::uint64_t q64 = 2; q64 != stop; q64 <<= 1) {
    const auto q = static_cast<std::uint32_t>(q64);
    const std::uint32_t p = q - 1;
    for (std::size_t i = n; i-- > 0;) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
}

// Interleave transposed form into 64-bit limbs, most significant limb first.
// Bit order of the index, from the top: bit p-1 of x[0], x[1], ..., x[d-1], then bit p-2, ...
inline std::vector<std::uint64_t> pack_transpose(std::span<const std::uint32_t> x, unsigned bits) {
  const std::size_t total = x.size() * bits;
  const std::size_t limbs = (total + 63) / 64;
  std::vector<std::uint64_t> out(limbs, 0);
  std::size_t pos = total;  // bit position counted from the least significant end, exclusive
  for (unsigned level = bits; level-- > 0;) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      --pos;
      if ((x[i] >> level) & 1u) out[limbs - 1 - pos / 64] |= std::uint64_t{1} << (pos % 64);
    }
  }
  return out;
}

inline void unpack_transpose(std::span<const std::uint64_t> limbs, std::span<std::uint32_t> x, unsigned bits) {
  const std::size_t total = x.size() * bits;
  const std::size_t count = limbs.size();
  std::size_t pos = total;
  for (auto& v : x) v = 0;
  for (unsigned level = bits; level-- > 0;) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      --pos;
      const std::size_t limb = pos / 64;
      if (limb < count && ((limbs[count - 1 - limb] >> (pos % 64)) & 1u)) x[i] |= std::uint32_t{1} << level;
    }
  }
}

}  // namespace detail

inline HilbertIndex point_to_index(const CurveParams& params, std::span<const std::uint32_t> point) {
  params.validate();
  if (point.size() != params.dim) throw DomainError("point_to_index: point dimension mismatch");
  const std::uint32_t hi = params.side_max();
  for (auto c : point) {
    if (c > hi) throw RangeError("point_to_index: coordinate " + std::to_string(c) + " outside grid");
  }
  std::vector<std::uint32_t> x(point.begin(), point.end());
  detail::axes_to_transpose(x, params.order);
  const auto limbs = detail::pack_transpose(x, params.order);
  HilbertIndex h;
  boost::multiprecision::import_bits(h, limbs.begin(), limbs.end(), 64);
  return h;
}

inline GridPoint index_to_point(const CurveParams& params, const HilbertIndex& h) {
  params.validate();
  if (h < 0 || (h != 0 && boost::multiprecision::msb(h) >= params.index_bits())) {
    throw RangeError("index_to_point: index outside [0, 2^(d*p))");
  }
  std::vector<std::uint64_t> limbs;
  if (h != 0) boost::multiprecision::export_bits(h, std::back_inserter(limbs), 64);
  GridPoint x(params.dim, 0);
  detail::unpack_transpose(limbs, x, params.order);
  detail::transpose_to_axes(x, params.order);
  return x;
}

}  // namespace hcela

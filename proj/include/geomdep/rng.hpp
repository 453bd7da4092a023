#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace geomdep {

/// Counter-based uniform generator (Philox4x32-10).
///
/// The 64-bit seed is the Philox key and the 64-bit stream id occupies the
/// upper half of the 128-bit counter, so every (seed, stream_id) pair owns a
/// disjoint block of counter space. Output depends only on integer arithmetic
/// and is identical across platforms and compilers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();
  /// Standard exponential.
  double exponential();
  /// Standard normal (Box-Muller; the second variate is cached).
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang, with the U^(1/a) boost for shape < 1.
  double gamma(double shape);

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int position_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// 64-bit FNV-1a, used to derive stream ids from labels.
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace geomdep

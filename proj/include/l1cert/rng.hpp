#pragma once

#include <cstdint>
#include <random>

namespace l1cert {

/// Seeded random stream. The engine is std::mt19937_64 (whose output sequence
/// is fixed by the standard) seeded from a SplitMix64 mix of (seed, stream_id);
/// normals use Box-Muller and uniforms take the top 53 bits. Nothing here goes
/// through std::*_distribution, so sequences are identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();

  /// Independent stream keyed by (seed, child); does not advance this stream.
  RngStream derive(std::uint64_t child) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace l1cert

#pragma once

#include <array>
#include <cstdint>

namespace randflight {

// Deterministic random stream. A (seed, stream_id) pair fully determines the
// sequence of draws on every platform; distinct stream_ids obtained from the
// same seed give statistically independent streams, which is what the batch
// samplers fan out over. All distributions are implemented here rather than
// through <random> so that output is bit-reproducible across standard
// libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_pos();
  // Standard normal (Box-Muller).
  double normal();
  // Gamma(shape) with unit scale; Marsaglia-Tsang squeeze for shape >= 1 and
  // the power boost for shape < 1.
  double gamma(double shape);
  // Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

}  // namespace randflight

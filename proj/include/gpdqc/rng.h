#ifndef GPDQC_RNG_H_
#define GPDQC_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace gpdqc {

// Philox4x64-10 block function (Salmon et al., Random123). Exposed for
// known-answer tests.
std::array<std::uint64_t, 4> philox4x64_10(std::array<std::uint64_t, 4> counter,
                                           std::array<std::uint64_t, 2> key);

// Counter-based random stream. The key is the seed; the stream id occupies
// the upper counter words, so two streams with different ids never share a
// counter value. Identical (seed, stream_id) pairs reproduce identical draws.
//
// Not thread-safe: a stream belongs to one thread at a time.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal (Marsaglia polar method).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace gpdqc

#endif  // GPDQC_RNG_H_

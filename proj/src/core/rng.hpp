#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace loclab {

// Counter-based random stream: Philox4x64-10 (Salmon et al. 2011), the same
// variant and word order as numpy.random.Philox. key = (master_seed,
// stream_index), counter = (block, 0, 0, 0). Streams with distinct keys are
// independent; a stream depends only on its own draw count, never on
// execution order. Normal variates come from Box-Muller pairs on consecutive
// 53-bit uniforms. Algorithm choice is version-pinned: loclab-rng-v1.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_{master_seed, stream_index} {}

  std::uint64_t master_seed() const { return key_[0]; }
  std::uint64_t stream_index() const { return key_[1]; }

  // Raw generator block at a given counter; exposed for known-answer tests.
  static std::array<std::uint64_t, 4> philox_block(
      const std::array<std::uint64_t, 2>& key, const std::array<std::uint64_t, 4>& counter);

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Next standard normal variate.
  double normal();
  void fill_normal(double* out, std::size_t count);

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> words_{};
  int word_pos_ = 4;  // exhausted
  double pending_normal_ = 0.0;
  bool has_pending_normal_ = false;

  std::uint64_t next_word();
};

// One-shot helper: `count` standard normals from the given stream's start.
std::vector<double> gaussian_increments(std::uint64_t master_seed, std::uint64_t stream_index,
                                        std::size_t count);

}  // namespace loclab

#include "core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace loclab {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> RngStream::philox_block(const std::array<std::uint64_t, 2>& key,
                                                     const std::array<std::uint64_t, 4>& counter) {
  std::uint64_t x0 = counter[0], x1 = counter[1], x2 = counter[2], x3 = counter[3];
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, x0, hi0, lo0);
    mulhilo(kMul1, x2, hi1, lo1);
    x0 = hi1 ^ x1 ^ k0;
    x1 = lo1;
    x2 = hi0 ^ x3 ^ k1;
    x3 = lo0;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {x0, x1, x2, x3};
}

std::uint64_t RngStream::next_word() {
  if (word_pos_ == 4) {
    words_ = philox_block(key_, {block_, 0, 0, 0});
    ++block_;
    word_pos_ = 0;
  }
  return words_[word_pos_++];
}

double RngStream::uniform() {
  return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  // Box-Muller; 1-u keeps the log argument in (0, 1].
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 6.283185307179586476925286766559 * u2;
  pending_normal_ = r * std::sin(angle);
  has_pending_normal_ = true;
  return r * std::cos(angle);
}

void RngStream::fill_normal(double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = normal();
}

std::vector<double> gaussian_increments(std::uint64_t master_seed, std::uint64_t stream_index,
                                        std::size_t count) {
  if (count < 1) throw std::invalid_argument("gaussian_increments: count must be >= 1");
  RngStream stream(master_seed, stream_index);
  std::vector<double> v(count);
  stream.fill_normal(v.data(), count);
  return v;
}

}  // namespace loclab

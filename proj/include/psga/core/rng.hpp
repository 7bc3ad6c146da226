#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psga {

/// Counter-based splittable generator. Every draw is a SplitMix64 hash of
/// (key, counter), so a stream derived with child() is a pure function of
/// the master seed and the ids along the derivation path. Output depends only
/// on 64-bit integer arithmetic and is identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : key_(mix(seed ^ kSeedSalt)) {}

  RngStream child(std::uint64_t id) const {
    RngStream s;
    s.key_ = mix(key_ ^ mix(id + kGolden));
    return s;
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5851F42D4C957F2DULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Substream ids. An optimizer at iteration k draws its batch from
// rng.child(stream::kBatch).child(k), so batches never depend on how many
// other draws happened before.
namespace stream {
inline constexpr std::uint64_t kBatch = 1;
inline constexpr std::uint64_t kRefresh = 2;
inline constexpr std::uint64_t kIndex = 3;
}  // namespace stream

struct Batch {
  std::vector<std::uint32_t> sample_ids;

  std::size_t size() const noexcept { return sample_ids.size(); }
  bool empty() const noexcept { return sample_ids.empty(); }
};

/// Draws batch_size ids uniformly with replacement.
inline Batch sample_batch(RngStream& rng, std::size_t n_samples,
                          std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
  Batch b;
  b.sample_ids.resize(batch_size);
  for (auto& id : b.sample_ids) id = static_cast<std::uint32_t>(rng.below(n_samples));
  return b;
}

}  // namespace psga

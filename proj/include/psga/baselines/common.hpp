#pragma once

#include "psga/core/rng.hpp"
#include "psga/errors.hpp"
#include "psga/problems.hpp"
#include "psga/regularizers.hpp"

namespace psga::detail {

inline Batch batch_at(const RngStream& rng, std::uint64_t k, std::size_t n_samples,
                      std::size_t batch_size) {
  RngStream s = rng.child(stream::kBatch).child(k);
  return sample_batch(s, n_samples, batch_size);
}

// Single uniform sample index for inner step t.
inline std::uint32_t index_at(const RngStream& rng, std::uint64_t t,
                              std::size_t n_samples) {
  RngStream s = rng.child(stream::kIndex).child(t);
  return static_cast<std::uint32_t>(s.below(n_samples));
}

inline void require_finite(const Vector& x, std::uint64_t k, const char* what) {
  if (!all_finite(x)) throw NumericFailure(k, what);
}

}  // namespace psga::detail

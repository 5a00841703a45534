// Copyright 2026 The cvqnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVQND_MOMENTS_H
#define CVQND_MOMENTS_H

#include "cvqnd/phase_space.h"

#include <atomic>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>

namespace cvqnd {

/// Running mean and centered second moment (Welford / Chan et al.).
class MomentAccumulator {
 public:
  explicit MomentAccumulator(Index dim) : mean_(Vector<double>::Zero(dim)), m2_(Matrix<double>::Zero(dim, dim)) {}

  void add(const Vector<double>& x) {
    ++count_;
    const Vector<double> delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_.noalias() += delta * (x - mean_).transpose();
  }

  void merge(const MomentAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_), nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const Vector<double> delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta.transpose() * (na * nb / n);
    count_ += other.count_;
  }

  size_t count() const { return count_; }
  const Vector<double>& mean() const { return mean_; }
  /// Unbiased sample covariance; symmetrized.
  Matrix<double> covariance() const {
    if (count_ < 2) throw std::invalid_argument("covariance needs at least two samples");
    const Matrix<double> c = m2_ / static_cast<double>(count_ - 1);
    return (c + c.transpose()) / 2.0;
  }

 private:
  size_t count_ = 0;
  Vector<double> mean_;
  Matrix<double> m2_;
};

inline constexpr size_t kChunkSize = size_t{1} << 14;

/// Generator for one chunk of a seeded stream. The stream is split into
/// fixed-size chunks; chunk k always draws from the engine seeded by
/// (seed, stream_id, k), whatever thread runs it.
inline std::mt19937_64 chunk_engine(uint64_t seed, uint64_t stream_id, uint64_t chunk) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream_id), static_cast<uint32_t>(stream_id >> 32),
                    static_cast<uint32_t>(chunk), static_cast<uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

/// Runs `body(chunk_index, begin, end, engine, accumulator)` over
/// ceil(n / kChunkSize) chunks on `workers` threads and merges the per-chunk
/// accumulators in chunk order, so the result does not depend on `workers`.
template <typename Body>
MomentAccumulator chunked_moments(size_t n, uint64_t seed, uint64_t stream_id, unsigned workers, Index dim,
                                  Body&& body) {
  const size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<MomentAccumulator> partial(n_chunks, MomentAccumulator(dim));
  std::vector<std::exception_ptr> errors(n_chunks);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t c = next++; c < n_chunks; c = next++) {
      try {
        auto engine = chunk_engine(seed, stream_id, c);
        const size_t begin = c * kChunkSize;
        const size_t end = std::min(n, begin + kChunkSize);
        body(c, begin, end, engine, partial[c]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<size_t>(n_chunks, 1))));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  MomentAccumulator total(dim);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace cvqnd

#endif  // CVQND_MOMENTS_H

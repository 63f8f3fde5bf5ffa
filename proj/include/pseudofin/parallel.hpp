#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace pseudofin {

// Splits [0, total) into `threads` contiguous shards, evaluates shard(begin,
// end) on each and folds the partial results in shard order. With a
// commutative, associative combine the result does not depend on the
// thread count.
template <class Result, class ShardFn, class Combine>
Result parallel_reduce(std::uint64_t total, unsigned threads, Result init,
                       ShardFn shard, Combine combine) {
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, total));
  if (workers <= 1) return combine(std::move(init), shard(0, total));

  std::vector<Result> partial(workers, init);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] { partial[w] = shard(begin, end); });
  }
  for (auto& t : pool) t.join();
  Result acc = std::move(init);
  for (auto& r : partial) acc = combine(std::move(acc), std::move(r));
  return acc;
}

// Fixed 64-bit linear congruential generator (Knuth's MMIX constants) so
// that sampled runs are bit-reproducible across platforms.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  // Uniform-ish index in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) { return (next() >> 16) % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace pseudofin

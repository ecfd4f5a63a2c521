#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>

namespace scatter {

/// Items with index ≡ start (mod stride).
struct Slice {
  std::uint64_t start = 0;
  std::uint64_t stride = 1;
};

inline constexpr std::uint64_t kNoIndex = std::numeric_limits<std::uint64_t>::max();

/// Runs body(worker, Slice{worker, workers}) for every worker, on separate threads when
/// workers > 1. Exceptions from any worker are rethrown after all have joined.
void run_slices(int workers, const std::function<void(int, Slice)>& body);

/// Smallest failing item index reported by any worker. Workers may stop scanning
/// once their current index exceeds it, so the result does not depend on scheduling.
class FirstFailure {
 public:
  void report(std::uint64_t index) noexcept {
    std::uint64_t cur = best_.load(std::memory_order_relaxed);
    while (index < cur && !best_.compare_exchange_weak(cur, index, std::memory_order_relaxed)) {
    }
  }
  bool beyond(std::uint64_t index) const noexcept { return index > best_.load(std::memory_order_relaxed); }
  std::uint64_t get() const noexcept { return best_.load(); }
  bool found() const noexcept { return get() != kNoIndex; }

 private:
  std::atomic<std::uint64_t> best_{kNoIndex};
};

}  // namespace scatter

#include "scatter/parallel.hpp"

#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "scatter/verdict.hpp"

namespace scatter {

void run_slices(int workers, const std::function<void(int, Slice)>& body) {
  if (workers <= 1) {
    body(0, Slice{0, 1});
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        body(w, Slice{static_cast<std::uint64_t>(w), static_cast<std::uint64_t>(workers)});
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void require_budget(std::uint64_t items, const ScanOptions& opt, std::string_view what) {
  if (items > opt.budget) {
    throw WorkLimitExceeded(std::string(what) + ": " + std::to_string(items) + " items exceed the work budget of " +
                            std::to_string(opt.budget));
  }
}

}  // namespace scatter

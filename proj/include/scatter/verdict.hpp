#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scatter/fq_linalg.hpp"

namespace scatter {

enum class Mode { exhaustive, sampled, fast };

constexpr std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::exhaustive:
      return "exhaustive";
    case Mode::sampled:
      return "sampled";
    case Mode::fast:
      return "fast";
  }
  return "?";
}

/// Offending object: a basis (subspace witness) or a single vector (point witness),
/// plus the recomputed quantity that violates the property.
struct Witness {
  std::string kind;
  std::vector<Vec> basis;
  std::int64_t value = 0;
};

struct Verdict {
  bool ok = true;
  std::optional<Witness> witness;
  std::uint64_t checked_count = 0;
  Mode mode = Mode::exhaustive;
  bool degenerate = false;
  bool applicable = true;
  std::string note;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct ScanOptions {
  int workers = 1;
  std::uint64_t budget = kDefaultBudget;
};

struct Sampling {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

/// Throws WorkLimitExceeded when an exhaustive scan would exceed the budget.
void require_budget(std::uint64_t items, const ScanOptions& opt, std::string_view what);

}  // namespace scatter

// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file compositions.hpp
//! Lazy enumeration of weak compositions in colexicographic order.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uowcsec/errors.hpp"

namespace uowcsec {

/// Enumerates all (q_0, ..., q_{k-1}) with q_i >= 0 and Σ q_i = total.
///
/// Order is colexicographic: (total, 0, ..., 0) first, (0, ..., 0, total)
/// last. There are C(total + k - 1, k - 1) of them.
class CompositionGenerator {
 public:
  CompositionGenerator(int total, int parts) : parts_(parts), q_(static_cast<std::size_t>(parts), 0) {
    if (total < 0 || parts < 1) throw DomainError("CompositionGenerator: need total >= 0, parts >= 1");
    q_[0] = total;
  }

  [[nodiscard]] const std::vector<int>& current() const { return q_; }

  /// Advances to the next composition; false once the last one was current.
  bool next() {
    int i = 0;
    while (i < parts_ && q_[static_cast<std::size_t>(i)] == 0) ++i;
    if (i >= parts_ - 1) return false;
    const int v = q_[static_cast<std::size_t>(i)];
    q_[static_cast<std::size_t>(i)] = 0;
    q_[static_cast<std::size_t>(i + 1)] += 1;
    q_[0] = v - 1;
    return true;
  }

 private:
  int parts_;
  std::vector<int> q_;
};

/// Calls `visit(q)` for every composition of `total` into `parts` parts.
/// `used` accumulates the count across calls; exceeding `budget` throws.
template <class Visitor>
void for_each_composition(int total, int parts, std::size_t budget, std::size_t& used,
                          Visitor&& visit) {
  CompositionGenerator gen(total, parts);
  do {
    if (++used > budget) {
      throw BudgetError("composition enumeration exceeded its budget of " + std::to_string(budget) +
                        " (sum " + std::to_string(total) + " into " + std::to_string(parts) +
                        " parts)");
    }
    visit(gen.current());
  } while (gen.next());
}

}  // namespace uowcsec

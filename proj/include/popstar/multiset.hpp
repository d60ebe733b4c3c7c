#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace popstar {

enum class MulCmp { StrictGreater, WeakGreaterOrEqual, Incomparable };

// Multiset extension of a preorder given as strict/equivalence callbacks,
// decided through covers: every right element is assigned to a left element;
// a left element either covers exactly one right element up to equivalence,
// or covers any number of right elements strictly. The comparison is strict
// when some left element covers strictly or stays uncovered, matching the
// X/Y-difference characterisation of the extension.
template <class T, class StrictFn, class EquivFn>
MulCmp multiset_compare(const std::vector<T>& lhs, const std::vector<T>& rhs,
                        StrictFn strict, EquivFn equiv) {
  const size_t n = lhs.size(), m = rhs.size();

  // 0 = unused, 1 = equal cover (one partner), 2 = strict covers
  std::vector<int> mode(n, 0);
  std::vector<std::vector<bool>> can_eq(n, std::vector<bool>(m, false));
  std::vector<std::vector<bool>> can_gt(n, std::vector<bool>(m, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      can_eq[i][j] = equiv(lhs[i], rhs[j]);
      can_gt[i][j] = strict(lhs[i], rhs[j]);
    }

  bool found_any = false, found_strict = false;
  std::function<void(size_t)> go = [&](size_t j) {
    if (found_strict) return;
    if (j == m) {
      found_any = true;
      for (size_t i = 0; i < n; ++i)
        if (mode[i] != 1) {  // strictly covering or dropped
          found_strict = true;
          return;
        }
      return;
    }
    for (size_t i = 0; i < n && !found_strict; ++i) {
      if (can_gt[i][j] && mode[i] != 1) {
        int saved = mode[i];
        mode[i] = 2;
        go(j + 1);
        mode[i] = saved;
      }
      if (can_eq[i][j] && mode[i] == 0) {
        mode[i] = 1;
        go(j + 1);
        mode[i] = 0;
      }
    }
  };
  go(0);

  if (found_strict) return MulCmp::StrictGreater;
  if (found_any) return MulCmp::WeakGreaterOrEqual;
  return MulCmp::Incomparable;
}

}  // namespace popstar

#pragma once

#include <vector>

#include "gaplab/linalg.hpp"

namespace gaplab::detail {

// Depth-first iteration over all length-N words over {0..n-1}, visiting
// leaves in lexicographic order while maintaining the left-to-right partial
// product of the chosen matrices. f(word, product) is called at each leaf.
template <typename F>
void for_each_word_product(const std::vector<Mat>& v, int N, const F& f) {
  Index k = v[0].rows();
  if (N == 0) {
    std::vector<int> empty;
    f(empty, Mat(Mat::Identity(k, k)));
    return;
  }
  const int n = static_cast<int>(v.size());
  std::vector<Mat> stack(static_cast<size_t>(N) + 1);
  std::vector<int> word(static_cast<size_t>(N), 0);
  stack[0] = Mat::Identity(k, k);
  int depth = 0;
  while (true) {
    if (depth == N) {
      f(word, stack[static_cast<size_t>(N)]);
      while (depth > 0 && word[static_cast<size_t>(depth - 1)] == n - 1) --depth;
      if (depth == 0) return;
      ++word[static_cast<size_t>(depth - 1)];
      for (size_t i = static_cast<size_t>(depth); i < word.size(); ++i) word[i] = 0;
      --depth;  // re-extend from the advanced position
    }
    stack[static_cast<size_t>(depth + 1)] =
        stack[static_cast<size_t>(depth)] *
        v[static_cast<size_t>(word[static_cast<size_t>(depth)])];
    ++depth;
  }
}

}  // namespace gaplab::detail

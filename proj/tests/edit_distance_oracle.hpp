#pragma once

// Test-only dynamic-programming oracle for approximate matching: D[i][0] = i,
// D[0][j] = 0 (free text start). Returns D[m][j] for every text position j.

#include <algorithm>
#include <string>
#include <vector>

namespace dporacle {

inline std::vector<int> per_position_distances(const std::string& pattern,
                                               const std::string& text) {
  const std::size_t m = pattern.size(), n = text.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t i = 0; i <= m; ++i) prev[i] = static_cast<int>(i);
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    cur[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      const int sub = prev[i - 1] + (pattern[i - 1] == text[j - 1] ? 0 : 1);
      cur[i] = std::min({prev[i] + 1, cur[i - 1] + 1, sub});
    }
    out.push_back(cur[m]);
    std::swap(prev, cur);
  }
  return out;
}

}  // namespace dporacle

#pragma once

#include <vector>

namespace qcl {

template <class F>
void for_each_pauli_up_to_weight(int n, int max_weight, F&& f) {
  if (max_weight > n) max_weight = n;
  for (int w = 0; w <= max_weight; ++w) {
    std::vector<int> pos(w);
    for (int i = 0; i < w; ++i) pos[i] = i;
    while (true) {
      std::vector<int> letter(w, 0);
      while (true) {
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        for (int i = 0; i < w; ++i) {
          const std::uint64_t b = std::uint64_t{1} << pos[i];
          if (letter[i] != 2) x |= b;  // X or Y
          if (letter[i] != 0) z |= b;  // Y or Z
        }
        if (!f(PauliString(n, x, z, 0))) return;
        int i = w - 1;
        while (i >= 0 && letter[i] == 2) letter[i--] = 0;
        if (i < 0) break;
        ++letter[i];
      }
      int i = w - 1;
      while (i >= 0 && pos[i] == n - w + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

}  // namespace qcl

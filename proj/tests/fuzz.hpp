#pragma once

#include <random>
#include <vector>

#include "shockcert/expr.hpp"

namespace shockcert::fuzz {

// Small random expressions over x, y, z for property tests.
class ExprFuzzer {
 public:
  explicit ExprFuzzer(unsigned seed) : rng_(seed) {}

  Expr leaf() {
    static const double kNums[] = {0.0, 1.0, -1.0, 2.0, 0.5, 3.0};
    static const char* kSyms[] = {"x", "y", "z"};
    if (pick(3) == 0) return num(kNums[pick(6)]);
    return sym(kSyms[pick(3)]);
  }

  Expr gen(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(9)) {
      case 0: return add(gen(depth - 1), gen(depth - 1));
      case 1: return add({gen(depth - 1), gen(depth - 1), gen(depth - 1)});
      case 2: return sub(gen(depth - 1), gen(depth - 1));
      case 3: return mul(gen(depth - 1), gen(depth - 1));
      case 4: return div(gen(depth - 1), gen(depth - 1));
      case 5: return abs(gen(depth - 1));
      case 6: return sqrt(gen(depth - 1));
      case 7: return min(gen(depth - 1), gen(depth - 1));
      default: return max(gen(depth - 1), gen(depth - 1));
    }
  }

  std::vector<Expr> corpus(std::size_t n, int depth) {
    std::vector<Expr> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen(depth));
    return out;
  }

  std::mt19937& rng() { return rng_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937 rng_;
};

}  // namespace shockcert::fuzz

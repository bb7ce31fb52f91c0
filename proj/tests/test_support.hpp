#pragma once

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "trocap/channel.hpp"
#include "trocap/error.hpp"
#include "trocap/matcore.hpp"

namespace trocap::test {

inline void check_close(const CMatrix& a, const CMatrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  CHECK(max_abs_diff(a, b) <= tol);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline std::vector<TroBlock> sorted_blocks(std::vector<TroBlock> b) {
  std::sort(b.begin(), b.end(), [](const TroBlock& x, const TroBlock& y) {
    return std::tie(x.n, x.m, x.l) < std::tie(y.n, y.m, y.l);
  });
  return b;
}

/// The kind of the Error thrown by fn; fails the test when nothing is thrown.
inline ErrorKind error_kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ParseError;
}

/// -x log2 x - (1-x) log2 (1-x), written out independently of the library.
inline double h2(double x) {
  double s = 0.0;
  if (x > 0.0) s -= x * std::log2(x);
  if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

}  // namespace trocap::test

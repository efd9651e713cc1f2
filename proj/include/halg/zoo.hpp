#pragma once

// Small named algebras used throughout the tests and samples.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "halg/algebra.hpp"

namespace halg::zoo {

inline Signature binary_signature(const std::string& name = "mul") { return Signature({{name, 2}}); }

inline Signature lattice_signature() { return Signature({{"meet", 2}, {"join", 2}}); }

/// (Z_n, +) with the single symbol `plus`.
inline FiniteAlgebra cyclic_group(std::size_t n, const std::string& name = "plus") {
  Table t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Element>((a + b) % n);
  return FiniteAlgebra(binary_signature(name), n, {t});
}

/// x * y = x.
inline FiniteAlgebra left_zero_band(std::size_t n, const std::string& name = "mul") {
  Table t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Element>(a);
  return FiniteAlgebra(binary_signature(name), n, {t});
}

/// x * y = y.
inline FiniteAlgebra right_zero_band(std::size_t n, const std::string& name = "mul") {
  Table t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Element>(b);
  return FiniteAlgebra(binary_signature(name), n, {t});
}

/// Pairs (a, b) in p x q encoded as a*q + b, with (a,b)(c,d) = (a,d).
inline FiniteAlgebra rectangular_band(std::size_t p, std::size_t q, const std::string& name = "mul") {
  const std::size_t n = p * q;
  Table t(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) t[x * n + y] = static_cast<Element>((x / q) * q + y % q);
  return FiniteAlgebra(binary_signature(name), n, {t});
}

/// x * y = c for every x, y.
inline FiniteAlgebra constant_groupoid(std::size_t n, Element c, const std::string& name = "mul") {
  return FiniteAlgebra(binary_signature(name), n, {Table(n * n, c)});
}

/// Lattice from its order relation (`leq[a][b]` is a <= b), with meet/join as
/// greatest lower / least upper bounds. Returns nothing if some pair lacks one.
inline std::optional<FiniteAlgebra> lattice_from_order(const std::vector<std::vector<bool>>& leq) {
  const std::size_t n = leq.size();
  Table meet(n * n), join(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::optional<std::size_t> glb, lub;
      for (std::size_t c = 0; c < n; ++c) {
        if (leq[c][a] && leq[c][b]) {
          bool greatest = true;
          for (std::size_t d = 0; d < n && greatest; ++d)
            if (leq[d][a] && leq[d][b] && !leq[d][c]) greatest = false;
          if (greatest) glb = c;
        }
        if (leq[a][c] && leq[b][c]) {
          bool least = true;
          for (std::size_t d = 0; d < n && least; ++d)
            if (leq[a][d] && leq[b][d] && !leq[c][d]) least = false;
          if (least) lub = c;
        }
      }
      if (!glb || !lub) return std::nullopt;
      meet[a * n + b] = static_cast<Element>(*glb);
      join[a * n + b] = static_cast<Element>(*lub);
    }
  }
  return FiniteAlgebra(lattice_signature(), n, {meet, join});
}

/// Order relation from covering pairs (reflexive-transitive closure).
inline std::vector<std::vector<bool>> order_from_pairs(std::size_t n,
                                                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (auto [a, b] : pairs) leq.at(a).at(b) = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  return leq;
}

/// The chain 0 < 1.
inline FiniteAlgebra two_element_lattice() { return *lattice_from_order(order_from_pairs(2, {{0, 1}})); }

/// Pentagon: 0 < a < b < 1 and 0 < c < 1, numbered 0, a=1, b=2, c=3, 1=4.
inline FiniteAlgebra pentagon() {
  return *lattice_from_order(order_from_pairs(5, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}));
}

/// Diamond: three atoms a=1, b=2, c=3 between 0 and 1=4.
inline FiniteAlgebra diamond() {
  return *lattice_from_order(order_from_pairs(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}));
}

}  // namespace halg::zoo

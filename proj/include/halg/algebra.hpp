#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halg/error.hpp"
#include "halg/signature.hpp"
#include "halg/term.hpp"

namespace halg {

using Element = std::uint32_t;

/// Dense operation table: entry i is the value at the i-th argument tuple in
/// lexicographic order (first argument most significant).
using Table = std::vector<Element>;

/// Values of x_0..x_{k-1}.
using Assignment = std::vector<Element>;

inline constexpr std::size_t kDefaultCellLimit = 1'000'000;

/// base^exp, throwing if the result exceeds `limit`.
inline std::size_t checked_power(std::size_t base, std::size_t exp,
                                 std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) throw Error("size overflow: " + std::to_string(base) + "^" +
                                                   std::to_string(exp) + " exceeds " + std::to_string(limit));
    r *= base;
  }
  return r;
}

inline std::size_t tuple_index(std::span<const Element> tuple, std::size_t n) {
  std::size_t idx = 0;
  for (auto a : tuple) idx = idx * n + a;
  return idx;
}

inline void tuple_at(std::size_t index, std::size_t n, std::span<Element> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Element>(index % n);
    index /= n;
  }
}

/// Advances `tuple` to its lexicographic successor over {0..n-1}; returns
/// false after the last tuple (leaving it all zeros).
inline bool next_tuple(std::span<Element> tuple, std::size_t n) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < n) return true;
    tuple[i] = 0;
  }
  return false;
}

/// A finite algebra on the universe {0..n-1} with one dense table per symbol.
class FiniteAlgebra {
 public:
  FiniteAlgebra(Signature sig, std::size_t size, std::vector<Table> tables)
      : sig_(std::move(sig)), size_(size), tables_(std::move(tables)) {
    if (size_ == 0) throw Error("algebra universe must be nonempty");
    if (size_ > std::numeric_limits<Element>::max()) throw Error("algebra universe too large");
    if (tables_.size() != sig_.size())
      throw Error("expected " + std::to_string(sig_.size()) + " operation tables, got " +
                  std::to_string(tables_.size()));
    for (std::size_t f = 0; f < sig_.size(); ++f) {
      const auto expected = checked_power(size_, sig_.arity(f));
      if (tables_[f].size() != expected)
        throw Error("table of '" + sig_.name(f) + "' has " + std::to_string(tables_[f].size()) +
                    " entries, expected " + std::to_string(expected));
      for (auto v : tables_[f])
        if (v >= size_)
          throw Error("table of '" + sig_.name(f) + "' contains " + std::to_string(v) +
                      " outside the universe of size " + std::to_string(size_));
    }
  }

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return size_; }
  const Table& table(std::size_t symbol) const { return tables_.at(symbol); }
  const std::vector<Table>& tables() const { return tables_; }

  Element apply(std::size_t symbol, std::span<const Element> args) const {
    return tables_[symbol][tuple_index(args, size_)];
  }

  bool operator==(const FiniteAlgebra&) const = default;

 private:
  Signature sig_;
  std::size_t size_;
  std::vector<Table> tables_;
};

/// The one-element algebra of a signature.
inline FiniteAlgebra trivial_algebra(const Signature& sig) {
  return FiniteAlgebra(sig, 1, std::vector<Table>(sig.size(), Table{0}));
}

inline void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.signature() != b.signature()) throw Error("algebras have different signatures");
}

/// Structural evaluation of `t` at the assignment.
inline Element eval_term(const FiniteAlgebra& A, const Term& t, std::span<const Element> a) {
  if (t.is_var()) {
    if (t.var_index() >= a.size()) throw Error("unbound variable x" + std::to_string(t.var_index()));
    return a[t.var_index()];
  }
  std::vector<Element> vals;
  vals.reserve(t.args().size());
  for (const auto& arg : t.args()) vals.push_back(eval_term(A, arg, a));
  return A.apply(t.symbol(), vals);
}

/// The k-ary term operation of `t` on A, as a dense table over {0..n-1}^k.
inline Table term_table(const FiniteAlgebra& A, const Term& t, VarContext k) {
  const std::size_t n = A.size();
  const std::size_t cells = checked_power(n, k.arity);
  if (t.is_var()) {
    if (t.var_index() >= k.arity) throw Error("unbound variable x" + std::to_string(t.var_index()));
    const std::size_t stride = checked_power(n, k.arity - 1 - t.var_index());
    Table out(cells);
    for (std::size_t i = 0; i < cells; ++i) out[i] = static_cast<Element>((i / stride) % n);
    return out;
  }
  if (t.symbol() >= A.signature().size() || t.args().size() != A.signature().arity(t.symbol()))
    throw Error("term is not well formed over the algebra's signature");
  std::vector<Table> children;
  children.reserve(t.args().size());
  for (const auto& arg : t.args()) children.push_back(term_table(A, arg, k));
  const Table& op = A.table(t.symbol());
  Table out(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    std::size_t idx = 0;
    for (const auto& c : children) idx = idx * n + c[i];
    out[i] = op[idx];
  }
  return out;
}

}  // namespace halg

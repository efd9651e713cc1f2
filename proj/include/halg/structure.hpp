#pragma once

// Products, subalgebras, homomorphisms, isomorphism search, congruences and
// quotients of finite algebras. Every construction renumbers its result
// into {0..n-1} and returns the witnessing maps.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"

namespace halg {

/// Mixed-radix encoding of product tuples, first coordinate most significant.
class ProductIndexer {
 public:
  explicit ProductIndexer(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
    total_ = 1;
    for (auto r : radices_) total_ *= r;
  }

  std::size_t factors() const { return radices_.size(); }
  std::size_t size() const { return total_; }
  const std::vector<std::size_t>& radices() const { return radices_; }

  std::size_t encode(std::span<const Element> tuple) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < radices_.size(); ++i) idx = idx * radices_[i] + tuple[i];
    return idx;
  }

  std::vector<Element> decode(std::size_t index) const {
    std::vector<Element> out(radices_.size());
    for (std::size_t i = radices_.size(); i-- > 0;) {
      out[i] = static_cast<Element>(index % radices_[i]);
      index /= radices_[i];
    }
    return out;
  }

  Element coordinate(std::size_t index, std::size_t factor) const {
    for (std::size_t i = radices_.size(); i-- > factor + 1;) index /= radices_[i];
    return static_cast<Element>(index % radices_[factor]);
  }

 private:
  std::vector<std::size_t> radices_;
  std::size_t total_ = 1;
};

inline ProductIndexer product_indexer(std::span<const FiniteAlgebra> family) {
  std::vector<std::size_t> radices;
  for (const auto& a : family) radices.push_back(a.size());
  return ProductIndexer(std::move(radices));
}

/// Direct product with componentwise operations. An empty family yields the
/// trivial algebra of `sig`. Throws if the result would hold more than
/// `cell_limit` table cells in total.
inline FiniteAlgebra direct_product(const Signature& sig, std::span<const FiniteAlgebra> family,
                                    std::size_t cell_limit = kDefaultCellLimit) {
  for (const auto& a : family)
    if (a.signature() != sig) throw Error("direct product factors must share the signature");
  std::size_t n = 1;
  for (const auto& a : family) {
    if (n > cell_limit / a.size())
      throw Error("size overflow: direct product exceeds " + std::to_string(cell_limit) + " cells");
    n *= a.size();
  }
  std::size_t cells = 0;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    cells += checked_power(n, sig.arity(f), cell_limit);
    if (cells > cell_limit) throw Error("size overflow: direct product exceeds " + std::to_string(cell_limit) + " cells");
  }
  const auto idx = product_indexer(family);
  std::vector<Table> tables;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    Table table(checked_power(n, m));
    std::vector<Element> args(m);
    std::vector<std::vector<Element>> decoded(m);
    std::vector<Element> comp_args(m), result(family.size());
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      tuple_at(cell, n, args);
      for (std::size_t j = 0; j < m; ++j) decoded[j] = idx.decode(args[j]);
      for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) comp_args[j] = decoded[j][i];
        result[i] = family[i].apply(f, comp_args);
      }
      table[cell] = static_cast<Element>(idx.encode(result));
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(sig, n, std::move(tables));
}

inline FiniteAlgebra direct_product(std::span<const FiniteAlgebra> family, std::size_t cell_limit = kDefaultCellLimit) {
  if (family.empty()) throw Error("direct product of an empty family needs an explicit signature");
  return direct_product(family.front().signature(), family, cell_limit);
}

/// Projection of a product element onto one factor, as a map table.
inline std::vector<Element> product_projection(std::span<const FiniteAlgebra> family, std::size_t factor) {
  const auto idx = product_indexer(family);
  std::vector<Element> out(idx.size());
  for (std::size_t e = 0; e < idx.size(); ++e) out[e] = idx.coordinate(e, factor);
  return out;
}

/// A subalgebra together with its inclusion map: embedding[i] is the element
/// of the ambient algebra that is numbered i in the subalgebra.
struct Subalgebra {
  FiniteAlgebra algebra;
  std::vector<Element> embedding;
};

/// Restriction of A to a subset given in the numbering order wanted for the
/// result. Throws if the subset is not closed under the operations.
inline Subalgebra induced_subalgebra(const FiniteAlgebra& A, std::vector<Element> elements) {
  if (elements.empty()) throw Error("subuniverse must be nonempty");
  std::vector<std::optional<Element>> pos(A.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] >= A.size()) throw Error("element " + std::to_string(elements[i]) + " outside the universe");
    if (pos[elements[i]]) throw Error("duplicate element in subuniverse");
    pos[elements[i]] = static_cast<Element>(i);
  }
  const auto& sig = A.signature();
  const std::size_t n = elements.size();
  std::vector<Table> tables;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    Table table(checked_power(n, m));
    std::vector<Element> local(m), ambient(m);
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      tuple_at(cell, n, local);
      for (std::size_t j = 0; j < m; ++j) ambient[j] = elements[local[j]];
      const Element r = A.apply(f, ambient);
      if (!pos[r])
        throw Error("subset is not closed under '" + sig.name(f) + "': produces " + std::to_string(r));
      table[cell] = *pos[r];
    }
    tables.push_back(std::move(table));
  }
  return {FiniteAlgebra(sig, n, std::move(tables)), std::move(elements)};
}

/// Least subuniverse containing `gens`. Elements are numbered in discovery
/// order: generators ascending, then each closure round scans symbols in
/// declaration order and argument tuples lexicographically.
inline Subalgebra subalgebra_generated(const FiniteAlgebra& A, std::vector<Element> gens) {
  const auto& sig = A.signature();
  if (gens.empty() && !sig.has_nullary())
    throw Error("empty generator set with no nullary symbols generates no subalgebra");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<bool> seen(A.size(), false);
  std::vector<Element> elements;
  for (auto g : gens) {
    if (g >= A.size()) throw Error("generator " + std::to_string(g) + " outside the universe");
    seen[g] = true;
    elements.push_back(g);
  }
  std::size_t done = 0;  // tuples drawn only from elements[0, done) were already applied
  bool first = true;
  while (first || done < elements.size()) {
    first = false;
    const std::size_t limit = elements.size();
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const std::size_t m = sig.arity(f);
      if (m == 0) {
        const Element c = A.apply(f, {});
        if (!seen[c]) {
          seen[c] = true;
          elements.push_back(c);
        }
        continue;
      }
      if (limit == 0) continue;
      std::vector<std::size_t> pick(m, 0);
      std::vector<Element> args(m);
      while (true) {
        const bool fresh = std::any_of(pick.begin(), pick.end(), [&](std::size_t p) { return p >= done; });
        if (fresh) {
          for (std::size_t j = 0; j < m; ++j) args[j] = elements[pick[j]];
          const Element r = A.apply(f, args);
          if (!seen[r]) {
            seen[r] = true;
            elements.push_back(r);
          }
        }
        std::size_t j = m;
        while (j-- > 0) {
          if (++pick[j] < limit) break;
          pick[j] = 0;
        }
        if (j == static_cast<std::size_t>(-1)) break;
      }
    }
    done = limit;
  }
  return induced_subalgebra(A, std::move(elements));
}

struct HomomorphismViolation {
  std::size_t symbol;
  std::vector<Element> tuple;

  bool operator==(const HomomorphismViolation&) const = default;
};

/// Empty result means `map` is a homomorphism; otherwise the first symbol
/// and lexicographically least tuple where map(f(a)) != f(map(a)).
inline std::optional<HomomorphismViolation> is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                                                            std::span<const Element> map) {
  require_same_signature(source, target);
  if (map.size() != source.size()) throw Error("map must be total on the source universe");
  for (auto v : map)
    if (v >= target.size()) throw Error("map value " + std::to_string(v) + " outside the target universe");
  const auto& sig = source.signature();
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    std::vector<Element> args(m, 0), image(m);
    do {
      for (std::size_t j = 0; j < m; ++j) image[j] = map[args[j]];
      if (map[source.apply(f, args)] != target.apply(f, image)) return HomomorphismViolation{f, args};
    } while (next_tuple(args, source.size()));
  }
  return std::nullopt;
}

namespace detail {

// Isomorphism-invariant fingerprint of an element: for each symbol, whether
// the element is the constant (nullary), or for the diagonal map
// d(x) = f(x,...,x) the tail and cycle length of the orbit, plus the number
// of tuples with first argument a that f sends back to a.
inline std::vector<std::size_t> unary_profile(const FiniteAlgebra& A, Element a) {
  const auto& sig = A.signature();
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    if (m == 0) {
      out.push_back(A.apply(f, {}) == a ? 1 : 0);
      continue;
    }
    std::vector<std::size_t> first_seen(A.size(), static_cast<std::size_t>(-1));
    Element x = a;
    std::vector<Element> diag(m);
    for (std::size_t step = 0;; ++step) {
      if (first_seen[x] != static_cast<std::size_t>(-1)) {
        out.push_back(first_seen[x]);
        out.push_back(step - first_seen[x]);
        break;
      }
      first_seen[x] = step;
      std::fill(diag.begin(), diag.end(), x);
      x = A.apply(f, diag);
    }
    std::size_t fixed = 0;
    std::vector<Element> rest(m - 1, 0), args(m);
    do {
      args[0] = a;
      std::copy(rest.begin(), rest.end(), args.begin() + 1);
      if (A.apply(f, args) == a) ++fixed;
    } while (next_tuple(rest, A.size()));
    out.push_back(fixed);
  }
  return out;
}

class IsoSearch {
 public:
  IsoSearch(const FiniteAlgebra& A, const FiniteAlgebra& B) : A_(A), B_(B), n_(A.size()) {
    for (Element a = 0; a < n_; ++a) profile_a_.push_back(unary_profile(A, a));
    for (Element b = 0; b < n_; ++b) profile_b_.push_back(unary_profile(B, b));
  }

  std::optional<std::vector<Element>> run() {
    auto pa = profile_a_, pb = profile_b_;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return std::nullopt;
    map_.assign(n_, kUnset);
    inverse_.assign(n_, kUnset);
    if (extend(0)) return map_;
    return std::nullopt;
  }

 private:
  static constexpr Element kUnset = static_cast<Element>(-1);

  bool extend(Element a) {
    if (a == n_) return true;
    for (Element b = 0; b < n_; ++b) {
      if (inverse_[b] != kUnset || profile_a_[a] != profile_b_[b]) continue;
      map_[a] = b;
      inverse_[b] = a;
      if (consistent(a) && extend(a + 1)) return true;
      map_[a] = kUnset;
      inverse_[b] = kUnset;
    }
    return false;
  }

  // Checks every tuple over {0..a} that mentions a or evaluates to a; the
  // latter were only partially checked while a was unmapped.
  bool consistent(Element a) const {
    const auto& sig = A_.signature();
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const std::size_t m = sig.arity(f);
      std::vector<Element> args(m, 0), image(m);
      do {
        const Element r = A_.apply(f, args);
        if (m > 0 && r != a && std::find(args.begin(), args.end(), a) == args.end()) continue;
        for (std::size_t j = 0; j < m; ++j) image[j] = map_[args[j]];
        const Element s = B_.apply(f, image);
        if (map_[r] != kUnset) {
          if (map_[r] != s) return false;
        } else if (inverse_[s] != kUnset) {
          return false;
        }
      } while (next_tuple(args, a + 1));
    }
    return true;
  }

  const FiniteAlgebra& A_;
  const FiniteAlgebra& B_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> profile_a_, profile_b_;
  std::vector<Element> map_, inverse_;
};

}  // namespace detail

/// Lexicographically least isomorphism A -> B, if any. Backtracking with
/// profile pruning: exponential in the worst case, fine for about 10 elements.
inline std::optional<std::vector<Element>> find_isomorphism(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  require_same_signature(A, B);
  if (A.size() != B.size()) return std::nullopt;
  return detail::IsoSearch(A, B).run();
}

inline bool isomorphic(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  return A.signature() == B.signature() && find_isomorphism(A, B).has_value();
}

/// A partition of an algebra's universe compatible with all operations.
/// Blocks are numbered in order of their least member.
class Congruence {
 public:
  /// Validates compatibility with A; throws otherwise.
  static Congruence from_labels(const FiniteAlgebra& A, std::span<const std::size_t> labels) {
    if (labels.size() != A.size()) throw Error("partition must label every element");
    Congruence c(canonical(labels));
    const auto& sig = A.signature();
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const std::size_t m = sig.arity(f);
      for (std::size_t p = 0; p < m; ++p) {
        std::vector<Element> args(m, 0);
        do {
          std::vector<Element> other = args;
          for (Element b = 0; b < A.size(); ++b) {
            if (c.block_of_[b] != c.block_of_[args[p]]) continue;
            other[p] = b;
            if (c.block_of_[A.apply(f, args)] != c.block_of_[A.apply(f, other)])
              throw Error("partition is not compatible with '" + sig.name(f) + "'");
          }
        } while (next_tuple(args, A.size()));
      }
    }
    return c;
  }

  std::size_t block(Element a) const { return block_of_.at(a); }
  const std::vector<std::size_t>& blocks() const { return block_of_; }
  std::size_t block_count() const { return count_; }
  bool related(Element a, Element b) const { return block_of_.at(a) == block_of_.at(b); }

  bool operator==(const Congruence&) const = default;

 private:
  friend Congruence congruence_generated(const FiniteAlgebra&, std::span<const std::pair<Element, Element>>);

  explicit Congruence(std::vector<std::size_t> canonical_labels) : block_of_(std::move(canonical_labels)) {
    count_ = block_of_.empty() ? 0 : *std::max_element(block_of_.begin(), block_of_.end()) + 1;
  }

  static std::vector<std::size_t> canonical(std::span<const std::size_t> labels) {
    std::map<std::size_t, std::size_t> renumber;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) {
      auto [it, inserted] = renumber.emplace(l, renumber.size());
      out.push_back(it->second);
    }
    return out;
  }

  std::vector<std::size_t> block_of_;
  std::size_t count_ = 0;
};

/// Least congruence containing `pairs`: union-find, closing every merged pair
/// under all one-place translations f(.., _, ..).
inline Congruence congruence_generated(const FiniteAlgebra& A, std::span<const std::pair<Element, Element>> pairs) {
  const std::size_t n = A.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<Element, Element>> work;
  auto unite = [&](Element a, Element b) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) return;
    parent[std::max(ra, rb)] = std::min(ra, rb);
    work.emplace_back(a, b);
  };
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw Error("congruence generator outside the universe");
    unite(a, b);
  }
  const auto& sig = A.signature();
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const std::size_t m = sig.arity(f);
      if (m == 0) continue;
      std::vector<Element> rest(m - 1, 0), args(m);
      do {
        for (std::size_t p = 0; p < m; ++p) {
          for (std::size_t j = 0, r = 0; j < m; ++j) args[j] = j == p ? a : rest[r++];
          const Element fa = A.apply(f, args);
          args[p] = b;
          unite(fa, A.apply(f, args));
        }
      } while (next_tuple(rest, n));
    }
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = find(x);
  return Congruence(Congruence::canonical(labels));
}

struct Quotient {
  FiniteAlgebra algebra;
  std::vector<Element> projection;
};

/// A/c with blocks numbered by least member; projection[a] is a's block.
inline Quotient quotient_algebra(const FiniteAlgebra& A, const Congruence& c) {
  if (c.blocks().size() != A.size()) throw Error("congruence belongs to a different algebra");
  const std::size_t q = c.block_count();
  std::vector<Element> rep(q);
  for (std::size_t a = A.size(); a-- > 0;) rep[c.block(static_cast<Element>(a))] = static_cast<Element>(a);
  const auto& sig = A.signature();
  std::vector<Table> tables;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    Table table(checked_power(q, m));
    std::vector<Element> blocks(m), args(m);
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      tuple_at(cell, q, blocks);
      for (std::size_t j = 0; j < m; ++j) args[j] = rep[blocks[j]];
      table[cell] = static_cast<Element>(c.block(A.apply(f, args)));
    }
    tables.push_back(std::move(table));
  }
  std::vector<Element> projection(A.size());
  for (std::size_t a = 0; a < A.size(); ++a) projection[a] = static_cast<Element>(c.block(static_cast<Element>(a)));
  return {FiniteAlgebra(sig, q, std::move(tables)), std::move(projection)};
}

}  // namespace halg

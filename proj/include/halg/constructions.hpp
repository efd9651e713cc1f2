#pragma once

// Reduced products over filters on finite index sets, ultraproducts, direct
// and superdirect limits of spectra, subdirectness and trivial-system
// adjunction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/structure.hpp"

namespace halg {

using IndexSet = std::uint32_t;  // bitmask over I = {0..|I|-1}

inline constexpr std::size_t kMaxIndexSetSize = 20;

/// An explicit family of subsets of a finite index set. Not necessarily a
/// filter; see validate_filter.
class FilterOnFiniteSet {
 public:
  FilterOnFiniteSet(std::size_t index_size, std::vector<IndexSet> members) : index_size_(index_size) {
    if (index_size_ > kMaxIndexSetSize) throw Error("index set too large for explicit filters");
    member_.assign(std::size_t{1} << index_size_, false);
    for (auto s : members) {
      if (s > full()) throw Error("filter member mentions an index outside I");
      member_[s] = true;
    }
  }

  /// All supersets of `base`.
  static FilterOnFiniteSet generated_by(std::size_t index_size, IndexSet base) {
    std::vector<IndexSet> members;
    if (index_size > kMaxIndexSetSize) throw Error("index set too large for explicit filters");
    const IndexSet all = (IndexSet{1} << index_size) - 1;
    for (IndexSet s = 0; s <= all; ++s)
      if ((s & base) == base) members.push_back(s);
    return FilterOnFiniteSet(index_size, std::move(members));
  }

  static FilterOnFiniteSet principal(std::size_t index_size, std::size_t point) {
    if (point >= index_size) throw Error("principal filter point outside the index set");
    return generated_by(index_size, IndexSet{1} << point);
  }

  /// The filter {I}.
  static FilterOnFiniteSet trivial(std::size_t index_size) {
    return generated_by(index_size, (IndexSet{1} << index_size) - 1);
  }

  std::size_t index_size() const { return index_size_; }
  IndexSet full() const { return (IndexSet{1} << index_size_) - 1; }
  bool contains(IndexSet s) const { return s <= full() && member_[s]; }

  std::vector<IndexSet> members() const {
    std::vector<IndexSet> out;
    for (IndexSet s = 0; s <= full(); ++s)
      if (member_[s]) out.push_back(s);
    return out;
  }

 private:
  std::size_t index_size_;
  std::vector<bool> member_;
};

struct FilterReport {
  enum class Violation { kNone, kMissingIndexSet, kNotUpwardClosed, kNotIntersectionClosed };

  Violation violation = Violation::kNone;
  std::vector<IndexSet> witness;  // the sets exhibiting the violation
  bool proper = false;
  bool ultra = false;

  bool ok() const { return violation == Violation::kNone; }
};

/// Checks I in F, upward closure and closure under binary intersection, and
/// reports whether the filter is proper and ultra.
inline FilterReport validate_filter(const FilterOnFiniteSet& f) {
  FilterReport r;
  const IndexSet all = f.full();
  const auto members = f.members();
  if (!f.contains(all)) {
    r.violation = FilterReport::Violation::kMissingIndexSet;
    r.witness = {all};
  }
  for (std::size_t i = 0; r.ok() && i < members.size(); ++i) {
    for (IndexSet t = 0; t <= all; ++t) {
      if ((t & members[i]) == members[i] && !f.contains(t)) {
        r.violation = FilterReport::Violation::kNotUpwardClosed;
        r.witness = {members[i], t};
        break;
      }
    }
  }
  for (std::size_t i = 0; r.ok() && i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!f.contains(members[i] & members[j])) {
        r.violation = FilterReport::Violation::kNotIntersectionClosed;
        r.witness = {members[i], members[j]};
        break;
      }
    }
  }
  r.proper = r.ok() && !f.contains(0);
  r.ultra = r.proper;
  for (IndexSet s = 0; r.ultra && s <= all; ++s)
    if (!f.contains(s) && !f.contains(all & ~s)) r.ultra = false;
  return r;
}

struct ReducedProduct {
  FiniteAlgebra algebra;
  std::vector<Element> class_of;  // product element (ProductIndexer encoding) -> class
};

namespace detail {

inline IndexSet agreement(const ProductIndexer& idx, std::size_t a, std::size_t b) {
  IndexSet s = 0;
  for (std::size_t i = 0; i < idx.factors(); ++i)
    if (idx.coordinate(a, i) == idx.coordinate(b, i)) s |= IndexSet{1} << i;
  return s;
}

}  // namespace detail

/// (prod A_i)/F: tuples identified when the set of coordinates where they
/// agree belongs to F. Classes are numbered by their least product element;
/// operations are computed on representatives and projected.
inline ReducedProduct reduced_product(std::span<const FiniteAlgebra> family, const FilterOnFiniteSet& filter,
                                      std::size_t cell_limit = kDefaultCellLimit) {
  if (family.empty()) throw Error("reduced product needs a nonempty family");
  if (filter.index_size() != family.size()) throw Error("filter index set size differs from the family size");
  const auto report = validate_filter(filter);
  if (!report.ok()) throw Error("not a filter");
  if (!report.proper) throw Error("reduced products require a proper filter");
  const auto product = direct_product(family, cell_limit);
  const auto idx = product_indexer(family);
  std::vector<std::size_t> labels(product.size());
  std::vector<std::size_t> reps;
  for (std::size_t a = 0; a < product.size(); ++a) {
    auto it = std::find_if(reps.begin(), reps.end(),
                           [&](std::size_t r) { return filter.contains(detail::agreement(idx, a, r)); });
    if (it == reps.end()) {
      labels[a] = reps.size();
      reps.push_back(a);
    } else {
      labels[a] = static_cast<std::size_t>(it - reps.begin());
    }
  }
  auto q = quotient_algebra(product, Congruence::from_labels(product, labels));
  return {std::move(q.algebra), std::move(q.projection)};
}

/// Reduced product over an ultrafilter. On a finite index set every
/// ultrafilter is principal, so the result is isomorphic to a factor.
inline ReducedProduct ultraproduct(std::span<const FiniteAlgebra> family, const FilterOnFiniteSet& filter,
                                   std::size_t cell_limit = kDefaultCellLimit) {
  if (!validate_filter(filter).ultra) throw Error("ultraproducts require an ultrafilter");
  return reduced_product(family, filter, cell_limit);
}

/// An up-directed family of algebras with compatible homomorphisms g_ij
/// (i <= j). Validated eagerly: partial order, directedness, identity maps
/// on the diagonal, homomorphism property and g_jk o g_ij = g_ik.
class DirectSpectrum {
 public:
  using MapKey = std::pair<std::size_t, std::size_t>;

  /// `leq[i][j]` is i <= j. Diagonal maps may be omitted (identity).
  DirectSpectrum(std::vector<std::vector<bool>> leq, std::vector<FiniteAlgebra> algebras,
                 std::map<MapKey, std::vector<Element>> maps)
      : leq_(std::move(leq)), algebras_(std::move(algebras)), maps_(std::move(maps)) {
    const std::size_t p = algebras_.size();
    if (p == 0) throw Error("spectrum needs at least one point");
    if (leq_.size() != p) throw Error("order relation size differs from the number of algebras");
    for (const auto& row : leq_)
      if (row.size() != p) throw Error("order relation must be square");
    for (std::size_t i = 0; i < p; ++i) {
      if (!leq_[i][i]) throw Error("order is not reflexive at " + std::to_string(i));
      for (std::size_t j = 0; j < p; ++j) {
        if (i != j && leq_[i][j] && leq_[j][i])
          throw Error("order is not antisymmetric: " + std::to_string(i) + " and " + std::to_string(j));
        for (std::size_t k = 0; k < p; ++k)
          if (leq_[i][j] && leq_[j][k] && !leq_[i][k])
            throw Error("order is not transitive: " + std::to_string(i) + "<=" + std::to_string(j) + "<=" +
                        std::to_string(k));
        bool bounded = false;
        for (std::size_t k = 0; k < p && !bounded; ++k) bounded = leq_[i][k] && leq_[j][k];
        if (!bounded)
          throw Error("order is not up-directed: " + std::to_string(i) + " and " + std::to_string(j) +
                      " have no upper bound");
      }
    }
    for (const auto& a : algebras_) require_same_signature(algebras_.front(), a);
    for (const auto& [key, m] : maps_)
      if (key.first >= p || key.second >= p || !leq_[key.first][key.second])
        throw Error("map " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                    " is not between comparable points");
    for (std::size_t i = 0; i < p; ++i) {
      std::vector<Element> id(algebras_[i].size());
      std::iota(id.begin(), id.end(), Element{0});
      auto [it, inserted] = maps_.emplace(MapKey{i, i}, id);
      if (!inserted && it->second != id) throw Error("map " + std::to_string(i) + "->" + std::to_string(i) +
                                                     " is not the identity");
    }
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        if (!leq_[i][j]) continue;
        auto it = maps_.find({i, j});
        if (it == maps_.end())
          throw Error("missing map " + std::to_string(i) + "->" + std::to_string(j));
        if (auto bad = is_homomorphism(algebras_[i], algebras_[j], it->second))
          throw Error("map " + std::to_string(i) + "->" + std::to_string(j) + " is not a homomorphism (symbol '" +
                      algebras_[i].signature().name(bad->symbol) + "')");
      }
    }
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
          if (!leq_[i][j] || !leq_[j][k]) continue;
          const auto& gij = maps_.at({i, j});
          const auto& gjk = maps_.at({j, k});
          const auto& gik = maps_.at({i, k});
          for (std::size_t a = 0; a < gij.size(); ++a)
            if (gjk[gij[a]] != gik[a])
              throw Error("maps do not commute: " + std::to_string(j) + "->" + std::to_string(k) + " after " +
                          std::to_string(i) + "->" + std::to_string(j) + " differs from " + std::to_string(i) +
                          "->" + std::to_string(k));
        }
  }

  std::size_t size() const { return algebras_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return leq_.at(i).at(j); }
  const std::vector<std::vector<bool>>& order() const { return leq_; }
  const FiniteAlgebra& algebra(std::size_t i) const { return algebras_.at(i); }
  const std::vector<FiniteAlgebra>& algebras() const { return algebras_; }
  const std::vector<Element>& map(std::size_t i, std::size_t j) const { return maps_.at({i, j}); }
  const std::map<MapKey, std::vector<Element>>& maps() const { return maps_; }
  const Signature& signature() const { return algebras_.front().signature(); }

  /// Points sorted by the number of points below them (ties by index): a
  /// fixed linear extension of the order.
  std::vector<std::size_t> linear_extension() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto below = [&](std::size_t j) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < size(); ++i) c += leq_[i][j] ? 1 : 0;
      return c;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below(a) < below(b); });
    return order;
  }

  /// Least point (in the linear extension) above all of `points`.
  std::size_t least_upper_bound_choice(std::span<const std::size_t> points) const {
    for (auto j : linear_extension())
      if (std::all_of(points.begin(), points.end(), [&](std::size_t i) { return leq_[i][j]; })) return j;
    throw Error("no common upper bound");  // unreachable for a validated spectrum
  }

  /// (a, i) and (b, j) name the same element of the limit.
  bool equivalent(std::size_t i, Element a, std::size_t j, Element b) const {
    for (std::size_t k = 0; k < size(); ++k)
      if (leq_[i][k] && leq_[j][k] && map(i, k)[a] == map(j, k)[b]) return true;
    return false;
  }

  /// Same spectrum with every algebra replaced by f(algebra); maps kept and
  /// re-validated.
  template <class Fn>
  DirectSpectrum transformed(Fn&& f) const {
    std::vector<FiniteAlgebra> algebras;
    for (const auto& a : algebras_) algebras.push_back(f(a));
    return DirectSpectrum(leq_, std::move(algebras), maps_);
  }

 private:
  std::vector<std::vector<bool>> leq_;
  std::vector<FiniteAlgebra> algebras_;
  std::map<MapKey, std::vector<Element>> maps_;
};

struct DirectLimit {
  FiniteAlgebra algebra;
  std::vector<std::vector<Element>> injection;  // injection[i][a] = class of (a, i)
  std::vector<std::pair<std::size_t, Element>> representative;  // least (i, a) of each class
};

/// Direct limit: pairs (a, i) modulo (a,i) == (b,j) iff some k >= i, j has
/// g_ik(a) = g_jk(b). An operation lifts its arguments along the maps to the
/// first common upper bound j in the linear extension and applies f in A_j.
inline DirectLimit direct_limit(const DirectSpectrum& spectrum) {
  const std::size_t p = spectrum.size();
  std::vector<std::vector<Element>> injection(p);
  std::vector<std::pair<std::size_t, Element>> reps;
  for (std::size_t i = 0; i < p; ++i) {
    injection[i].resize(spectrum.algebra(i).size());
    for (Element a = 0; a < spectrum.algebra(i).size(); ++a) {
      auto it = std::find_if(reps.begin(), reps.end(),
                             [&](const auto& r) { return spectrum.equivalent(i, a, r.first, r.second); });
      if (it == reps.end()) {
        injection[i][a] = static_cast<Element>(reps.size());
        reps.emplace_back(i, a);
      } else {
        injection[i][a] = static_cast<Element>(it - reps.begin());
      }
    }
  }
  const auto& sig = spectrum.signature();
  const std::size_t n = reps.size();
  std::vector<Table> tables;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    const std::size_t m = sig.arity(f);
    Table table(checked_power(n, m));
    std::vector<Element> classes(m), lifted(m);
    std::vector<std::size_t> points(m);
    for (std::size_t cell = 0; cell < table.size(); ++cell) {
      tuple_at(cell, n, classes);
      for (std::size_t r = 0; r < m; ++r) points[r] = reps[classes[r]].first;
      const std::size_t j = spectrum.least_upper_bound_choice(points);
      for (std::size_t r = 0; r < m; ++r) lifted[r] = spectrum.map(points[r], j)[reps[classes[r]].second];
      table[cell] = injection[j][spectrum.algebra(j).apply(f, lifted)];
    }
    tables.push_back(std::move(table));
  }
  return {FiniteAlgebra(sig, n, std::move(tables)), std::move(injection), std::move(reps)};
}

/// Every g_ij is onto.
inline bool is_superdirect(const DirectSpectrum& spectrum) {
  for (const auto& [key, m] : spectrum.maps()) {
    std::vector<bool> hit(spectrum.algebra(key.second).size(), false);
    for (auto v : m) hit[v] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

/// `embedding[b]` is the product element (ProductIndexer encoding) that B's
/// element b maps to. Throws unless the embedding is an injective
/// homomorphism; returns whether every coordinate projection is onto.
inline bool is_subdirect(const FiniteAlgebra& B, std::span<const FiniteAlgebra> family,
                         std::span<const Element> embedding) {
  if (embedding.size() != B.size()) throw Error("embedding must be total on B");
  const auto idx = product_indexer(family);
  std::vector<Element> sorted(embedding.begin(), embedding.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("embedding is not injective");
  for (auto e : embedding)
    if (e >= idx.size()) throw Error("embedding value outside the product");
  bool onto = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::vector<Element> coord(B.size());
    for (std::size_t b = 0; b < B.size(); ++b) coord[b] = idx.coordinate(embedding[b], i);
    if (is_homomorphism(B, family[i], coord)) throw Error("embedding is not a homomorphism");
    std::vector<bool> hit(family[i].size(), false);
    for (auto v : coord) hit[v] = true;
    onto = onto && std::find(hit.begin(), hit.end(), false) == hit.end();
  }
  return onto;
}

/// K together with the trivial algebra of the type (K_0). Nothing is added
/// if K already has a one-element member.
inline std::vector<FiniteAlgebra> adjoin_trivial(const Signature& sig, std::vector<FiniteAlgebra> K) {
  for (const auto& a : K)
    if (a.signature() != sig) throw Error("class members must share the signature");
  if (std::none_of(K.begin(), K.end(), [](const FiniteAlgebra& a) { return a.size() == 1; }))
    K.push_back(trivial_algebra(sig));
  return K;
}

}  // namespace halg

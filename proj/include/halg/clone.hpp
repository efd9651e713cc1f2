#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/error.hpp"
#include "halg/term.hpp"

namespace halg {

inline constexpr std::size_t kDefaultCloneCap = std::size_t{1} << 20;

struct TableHash {
  std::size_t operator()(const Table& t) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : t) {
      h ^= v + 1;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/// All k-ary term operations of a finite algebra, each with the first term
/// found to produce it. Entries are kept in construction order, which is
/// breadth-first by term depth.
class TermOperationSet {
 public:
  struct Entry {
    Table table;
    Term witness;
  };

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_.at(i); }

  bool contains(const Table& table) const { return index_.count(table) != 0; }

  std::optional<std::size_t> find(const Table& table) const {
    auto it = index_.find(table);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Entry indices ordered by table value (lexicographic).
  std::vector<std::size_t> sorted_by_table() const {
    std::vector<std::size_t> order(entries_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return entries_[a].table < entries_[b].table; });
    return order;
  }

 private:
  friend TermOperationSet enumerate_term_operations(const FiniteAlgebra&, std::size_t, std::size_t);
  friend TermOperationSet enumerate_ground_operations(const FiniteAlgebra&, std::size_t);

  bool add(Table table, Term witness, std::size_t cap) {
    if (index_.count(table)) return false;
    if (entries_.size() >= cap) throw CapExceeded("term operation cap exceeded", entries_.size() + 1);
    index_.emplace(table, entries_.size());
    entries_.push_back({std::move(table), std::move(witness)});
    return true;
  }

  static TermOperationSet close(const FiniteAlgebra& A, std::size_t k, std::size_t cap);

  std::size_t arity_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<Table, std::size_t, TableHash> index_;
};

inline TermOperationSet TermOperationSet::close(const FiniteAlgebra& A, std::size_t k, std::size_t cap) {
  TermOperationSet set;
  set.arity_ = k;
  const auto& sig = A.signature();
  const std::size_t n = A.size();
  const std::size_t cells = checked_power(n, k);

  // Depth 0: projections, then constants from nullary symbols.
  for (std::size_t i = 0; i < k; ++i) {
    auto t = Term::var(i);
    set.add(term_table(A, t, VarContext{k}), t, cap);
  }
  for (std::size_t f = 0; f < sig.size(); ++f) {
    if (sig.arity(f) != 0) continue;
    set.add(Table(cells, A.apply(f, {})), Term::apply(f, {}), cap);
  }

  std::size_t frontier = 0;  // entries [frontier, size) are the newest round
  while (frontier < set.entries_.size()) {
    const std::size_t limit = set.entries_.size();
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const std::size_t m = sig.arity(f);
      if (m == 0) continue;
      const Table& op = A.table(f);
      std::vector<std::size_t> pick(m, 0);
      while (true) {
        if (std::any_of(pick.begin(), pick.end(), [&](std::size_t p) { return p >= frontier; })) {
          Table table(cells);
          for (std::size_t c = 0; c < cells; ++c) {
            std::size_t idx = 0;
            for (auto p : pick) idx = idx * n + set.entries_[p].table[c];
            table[c] = op[idx];
          }
          if (!set.index_.count(table)) {
            std::vector<Term> args;
            args.reserve(m);
            for (auto p : pick) args.push_back(set.entries_[p].witness);
            set.add(std::move(table), Term::apply(f, std::move(args)), cap);
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
    frontier = limit;
  }
  return set;
}

/// Breadth-first closure from the k projections and the nullary constants,
/// applying every symbol to every tuple of known operations until nothing new
/// appears. Throws CapExceeded once more than `cap` tables would be stored.
inline TermOperationSet enumerate_term_operations(const FiniteAlgebra& A, std::size_t k,
                                                  std::size_t cap = kDefaultCloneCap) {
  if (k == 0) throw Error("term operation arity must be at least 1");
  if (cap < k) throw Error("clone cap must be at least the arity");
  return TermOperationSet::close(A, k, cap);
}

/// Values of ground terms (arity 0), each with a ground witness. Empty when
/// the signature has no nullary symbols.
inline TermOperationSet enumerate_ground_operations(const FiniteAlgebra& A, std::size_t cap = kDefaultCloneCap) {
  return TermOperationSet::close(A, 0, cap);
}

/// The stored witness for `table`; throws if the table is not a term operation.
inline const Term& witness_for(const TermOperationSet& set, const Table& table) {
  auto i = set.find(table);
  if (!i) throw Error("table is not a term operation of the algebra at this arity");
  return set[*i].witness;
}

}  // namespace halg

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halg/error.hpp"
#include "halg/signature.hpp"

namespace halg {

/// Immutable first-order term: a variable x<i> or a symbol applied to
/// arguments. Nodes are shared, so copies are cheap.
class Term {
 public:
  static Term var(std::size_t index) { return Term(std::make_shared<const Node>(Node{true, index, {}})); }

  /// Unchecked construction; use `make_apply` when a signature is at hand.
  static Term apply(std::size_t symbol, std::vector<Term> args) {
    return Term(std::make_shared<const Node>(Node{false, symbol, std::move(args)}));
  }

  bool is_var() const { return node_->is_var; }
  std::size_t var_index() const { return node_->index; }
  std::size_t symbol() const { return node_->index; }
  std::span<const Term> args() const { return node_->args; }

  /// Largest variable index plus one (0 for ground terms).
  std::size_t var_bound() const {
    if (is_var()) return var_index() + 1;
    std::size_t b = 0;
    for (const auto& a : args()) b = std::max(b, a.var_bound());
    return b;
  }

  std::set<std::size_t> variables() const {
    std::set<std::size_t> out;
    collect_vars(out);
    return out;
  }

  std::size_t depth() const {
    if (is_var()) return 0;
    std::size_t d = 0;
    for (const auto& a : args()) d = std::max(d, a.depth() + 1);
    return args().empty() ? 1 : d;
  }

  std::size_t node_count() const {
    std::size_t c = 1;
    for (const auto& a : args()) c += a.node_count();
    return c;
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_var() != b.is_var() || a.node_->index != b.node_->index) return false;
    return std::equal(a.args().begin(), a.args().end(), b.args().begin(), b.args().end());
  }

  // Variables before applications; then by index; then arguments lexicographically.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.node_->index <=> b.node_->index; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args().begin(), a.args().end(), b.args().begin(),
                                                  b.args().end());
  }

 private:
  struct Node {
    bool is_var;
    std::size_t index;
    std::vector<Term> args;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  void collect_vars(std::set<std::size_t>& out) const {
    if (is_var()) {
      out.insert(var_index());
      return;
    }
    for (const auto& a : args()) a.collect_vars(out);
  }

  std::shared_ptr<const Node> node_;
};

/// Throws unless every application in `t` names a symbol of `sig` with the
/// declared number of arguments.
inline void check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return;
  if (t.symbol() >= sig.size()) throw Error("term uses symbol index " + std::to_string(t.symbol()) +
                                            " outside the signature");
  if (t.args().size() != sig.arity(t.symbol()))
    throw Error("symbol '" + sig.name(t.symbol()) + "' expects " + std::to_string(sig.arity(t.symbol())) +
                " arguments, got " + std::to_string(t.args().size()));
  for (const auto& a : t.args()) check_term(a, sig);
}

inline Term make_apply(const Signature& sig, std::size_t symbol, std::vector<Term> args) {
  auto t = Term::apply(symbol, std::move(args));
  check_term(t, sig);
  return t;
}

/// f(x0, ..., x_{m-1}) for an m-ary symbol f.
inline Term symbol_term(const Signature& sig, std::size_t symbol) {
  std::vector<Term> args;
  for (std::size_t i = 0; i < sig.arity(symbol); ++i) args.push_back(Term::var(i));
  return Term::apply(symbol, std::move(args));
}

/// Simultaneous substitution x_i := bindings[i]. Variables introduced by the
/// bindings are not substituted again.
inline Term substitute(const Term& t, std::span<const Term> bindings) {
  if (t.is_var()) {
    if (t.var_index() >= bindings.size())
      throw Error("unbound variable x" + std::to_string(t.var_index()) + " in substitution");
    return bindings[t.var_index()];
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, bindings));
  return Term::apply(t.symbol(), std::move(args));
}

/// Number of variables x_0..x_{k-1} a term is read over. Always explicit:
/// a term over x0,x1 also induces operations of every arity >= 2.
struct VarContext {
  std::size_t arity = 1;

  bool operator==(const VarContext&) const = default;
};

inline void check_context(const Term& t, VarContext k) {
  if (t.var_bound() > k.arity)
    throw Error("term uses x" + std::to_string(t.var_bound() - 1) + " but the context has arity " +
                std::to_string(k.arity));
}

struct Equation {
  Term lhs;
  Term rhs;

  bool operator==(const Equation&) const = default;
};

}  // namespace halg

template <>
struct std::hash<halg::Term> {
  std::size_t operator()(const halg::Term& t) const noexcept {
    std::size_t h = t.is_var() ? 0x9e3779b97f4a7c15ULL : 0x7f4a7c159e3779b9ULL;
    h ^= std::hash<std::size_t>{}(t.is_var() ? t.var_index() : t.symbol()) + (h << 6) + (h >> 2);
    for (const auto& a : t.args()) h ^= (*this)(a) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

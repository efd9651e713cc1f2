#pragma once

// Hypersubstitutions, monoids of hypersubstitutions, derived algebras and
// M-hyper-satisfaction of identities and quasi-identities.
//
// Hypervariables are identified with the operation symbols of the type: a
// hypersubstitution sends each m-ary symbol to a term over x_0..x_{m-1}.
// A hyper-quasi-identity is an ordinary QuasiIdentity read through every
// member of a monoid: it holds in A iff for every sigma in M and every
// assignment a, the sigma-transformed premises holding at a forces the
// sigma-transformed conclusion at a.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/clone.hpp"
#include "halg/error.hpp"
#include "halg/satisfaction.hpp"
#include "halg/term.hpp"
#include "halg/text.hpp"

namespace halg {

class Hypersubstitution {
 public:
  /// images[f] is the term replacing symbol f; it may only use x_0..x_{m-1}
  /// where m is f's arity (a ground term for nullary f).
  Hypersubstitution(Signature sig, std::vector<Term> images) : sig_(std::move(sig)), images_(std::move(images)) {
    if (images_.size() != sig_.size())
      throw Error("hypersubstitution needs one image per symbol (" + std::to_string(sig_.size()) + "), got " +
                  std::to_string(images_.size()));
    for (std::size_t f = 0; f < sig_.size(); ++f) {
      check_term(images_[f], sig_);
      if (images_[f].var_bound() > sig_.arity(f))
        throw Error("image of '" + sig_.name(f) + "' uses x" + std::to_string(images_[f].var_bound() - 1) +
                    " but the symbol has arity " + std::to_string(sig_.arity(f)));
    }
  }

  static Hypersubstitution identity(const Signature& sig) {
    std::vector<Term> images;
    for (std::size_t f = 0; f < sig.size(); ++f) images.push_back(symbol_term(sig, f));
    return Hypersubstitution(sig, std::move(images));
  }

  const Signature& signature() const { return sig_; }
  const Term& image(std::size_t symbol) const { return images_.at(symbol); }
  const std::vector<Term>& images() const { return images_; }

  /// Copy with one image replaced.
  Hypersubstitution with_image(std::size_t symbol, Term image) const {
    auto images = images_;
    images.at(symbol) = std::move(image);
    return Hypersubstitution(sig_, std::move(images));
  }

  bool operator==(const Hypersubstitution&) const = default;

 private:
  Signature sig_;
  std::vector<Term> images_;
};

/// The extension of sigma to all terms: variables stay, f(t_1..t_m) becomes
/// sigma(f) with x_i replaced by the transformed t_{i+1}.
inline Term apply_hyper(const Hypersubstitution& sigma, const Term& t) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply_hyper(sigma, a));
  return substitute(sigma.image(t.symbol()), args);
}

/// (outer o inner)(f) = outer^(inner(f)). With this law
/// derived(derived(A, outer), inner) == derived(A, compose(outer, inner)).
inline Hypersubstitution compose(const Hypersubstitution& outer, const Hypersubstitution& inner) {
  if (outer.signature() != inner.signature()) throw Error("cannot compose hypersubstitutions of different types");
  std::vector<Term> images;
  images.reserve(inner.images().size());
  for (const auto& img : inner.images()) images.push_back(apply_hyper(outer, img));
  return Hypersubstitution(outer.signature(), std::move(images));
}

/// A^sigma: same universe, symbol f interpreted as the term operation sigma(f).
inline FiniteAlgebra derived_algebra(const FiniteAlgebra& A, const Hypersubstitution& sigma) {
  if (A.signature() != sigma.signature()) throw Error("hypersubstitution and algebra have different types");
  std::vector<Table> tables;
  for (std::size_t f = 0; f < A.signature().size(); ++f)
    tables.push_back(term_table(A, sigma.image(f), VarContext{A.signature().arity(f)}));
  return FiniteAlgebra(A.signature(), A.size(), std::move(tables));
}

/// Images of sigma as term operations of A, concatenated. Two
/// hypersubstitutions with equal keys give identical derived algebras.
inline Table table_key(const FiniteAlgebra& A, const Hypersubstitution& sigma) {
  Table key;
  const auto derived = derived_algebra(A, sigma);
  for (const auto& t : derived.tables()) key.insert(key.end(), t.begin(), t.end());
  return key;
}

enum class MonoidMode { kExplicit, kAllModAlgebra };

/// A finite monoid of hypersubstitutions, members in construction order.
///
/// Members are compared syntactically unless a reference algebra is set, in
/// which case they are compared by the term operations of their images on
/// that algebra. kAllModAlgebra monoids stand for every hypersubstitution of
/// the type (or of one symbol) and may only be used with their reference
/// algebra.
class HyperMonoid {
 public:
  /// Validates that the identity is present and that the set is closed under
  /// composition, modulo the active equivalence. Throws naming the escaping
  /// composite otherwise.
  static HyperMonoid explicit_members(Signature sig, std::vector<Hypersubstitution> members,
                                      std::optional<FiniteAlgebra> modulo = std::nullopt,
                                      std::vector<std::string> labels = {}) {
    HyperMonoid m(MonoidMode::kExplicit, std::move(sig), std::move(members), std::move(modulo), std::move(labels));
    m.validate();
    return m;
  }

  MonoidMode mode() const { return mode_; }
  const Signature& signature() const { return sig_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Hypersubstitution>& members() const { return members_; }
  const Hypersubstitution& operator[](std::size_t i) const { return members_.at(i); }
  const std::optional<FiniteAlgebra>& reference() const { return reference_; }

  /// Display name of member i: its label if one was given, else its index.
  std::string label(std::size_t i) const {
    if (i < labels_.size() && !labels_[i].empty()) return labels_[i];
    return std::to_string(i);
  }

  bool equivalent(const Hypersubstitution& a, const Hypersubstitution& b) const {
    if (reference_) return table_key(*reference_, a) == table_key(*reference_, b);
    return a == b;
  }

  std::optional<std::size_t> find(const Hypersubstitution& sigma) const {
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (equivalent(members_[i], sigma)) return i;
    return std::nullopt;
  }

  /// Throws if this monoid cannot be used to check satisfaction in A.
  void check_usable_with(const FiniteAlgebra& A) const {
    if (A.signature() != sig_) throw Error("monoid and algebra have different types");
    if (mode_ == MonoidMode::kAllModAlgebra && !(*reference_ == A))
      throw Error("an all-mod monoid can only be used with its reference algebra");
  }

  /// Re-checks the monoid axioms (identity present, closed under composition).
  void validate() const {
    const auto id = Hypersubstitution::identity(sig_);
    for (const auto& s : members_)
      if (s.signature() != sig_) throw Error("monoid member has a different type");
    if (!find(id)) throw Error("monoid does not contain the identity hypersubstitution");
    for (std::size_t i = 0; i < members_.size(); ++i) {
      for (std::size_t j = 0; j < members_.size(); ++j) {
        auto c = compose(members_[i], members_[j]);
        if (!find(c)) {
          std::string images;
          for (std::size_t f = 0; f < sig_.size(); ++f)
            images += (f ? ", " : "") + sig_.name(f) + " -> " + format_term(c.image(f), sig_);
          throw Error("monoid is not closed under composition: " + label(i) + " o " + label(j) + " = {" + images +
                      "} is not a member");
        }
      }
    }
  }

 private:
  friend HyperMonoid monoid_closure(const std::vector<Hypersubstitution>&, const std::optional<FiniteAlgebra>&,
                                    std::size_t, std::size_t);
  friend HyperMonoid all_hypersubstitutions_mod(const FiniteAlgebra&, std::size_t);
  friend HyperMonoid all_images_of_symbol_mod(const FiniteAlgebra&, std::size_t, std::size_t);

  HyperMonoid(MonoidMode mode, Signature sig, std::vector<Hypersubstitution> members,
              std::optional<FiniteAlgebra> reference, std::vector<std::string> labels)
      : mode_(mode),
        sig_(std::move(sig)),
        members_(std::move(members)),
        reference_(std::move(reference)),
        labels_(std::move(labels)) {}

  MonoidMode mode_;
  Signature sig_;
  std::vector<Hypersubstitution> members_;
  std::optional<FiniteAlgebra> reference_;
  std::vector<std::string> labels_;
};

inline constexpr std::size_t kDefaultDepthCap = 12;

/// Submonoid generated by `gens`: the identity, then words of length 1, 2, ...
/// built by composing known members with a generator on the right. With a
/// reference algebra members are identified by their image tables, which
/// makes the closure finite; without one they are identified syntactically
/// and words longer than `depth_cap` abort the closure. More than
/// `member_cap` members aborts either way.
inline HyperMonoid monoid_closure(const std::vector<Hypersubstitution>& gens,
                                  const std::optional<FiniteAlgebra>& reference = std::nullopt,
                                  std::size_t depth_cap = kDefaultDepthCap,
                                  std::size_t member_cap = kDefaultCloneCap) {
  if (gens.empty()) throw Error("monoid closure needs at least one generator (or its signature)");
  const Signature sig = gens.front().signature();
  for (const auto& g : gens)
    if (g.signature() != sig) throw Error("generators have different types");
  if (reference && reference->signature() != sig) throw Error("reference algebra has a different type");

  HyperMonoid m(MonoidMode::kExplicit, sig, {Hypersubstitution::identity(sig)}, reference, {});
  std::map<Table, bool> seen_keys;
  auto seen = [&](const Hypersubstitution& s) {
    if (reference) return !seen_keys.emplace(table_key(*reference, s), true).second;
    for (const auto& x : m.members_)
      if (x == s) return true;
    return false;
  };
  seen(m.members_.front());

  std::vector<Hypersubstitution> frontier = m.members_;
  for (std::size_t round = 1; !frontier.empty(); ++round) {
    std::vector<Hypersubstitution> fresh;
    for (const auto& f : frontier) {
      for (const auto& g : gens) {
        auto c = compose(f, g);
        if (seen(c)) continue;
        if (!reference && round > depth_cap)
          throw CapExceeded("hypersubstitution monoid closure exceeded the depth cap", round);
        fresh.push_back(c);
        m.members_.push_back(std::move(c));
        if (m.members_.size() > member_cap)
          throw CapExceeded("hypersubstitution monoid closure exceeded the member cap", m.members_.size());
      }
    }
    frontier = std::move(fresh);
  }
  return m;
}

namespace detail {

// Choices for the image of one symbol: every term operation of matching
// arity, with its witness term.
inline TermOperationSet image_choices(const FiniteAlgebra& A, std::size_t arity, std::size_t clone_cap) {
  return arity == 0 ? enumerate_ground_operations(A, clone_cap) : enumerate_term_operations(A, arity, clone_cap);
}

}  // namespace detail

/// Every hypersubstitution of the type, up to equality of image term
/// operations on A. Satisfaction in A only depends on those, so this finite
/// set is complete for checking in A. Order: the identity first, then all
/// image combinations (first symbol most significant, clone construction
/// order), skipping the combination equivalent to the identity.
inline HyperMonoid all_hypersubstitutions_mod(const FiniteAlgebra& A, std::size_t clone_cap = kDefaultCloneCap) {
  const auto& sig = A.signature();
  std::vector<TermOperationSet> choices;
  std::size_t total = 1;
  for (std::size_t f = 0; f < sig.size(); ++f) {
    choices.push_back(detail::image_choices(A, sig.arity(f), clone_cap));
    total *= choices.back().size();
    if (total > clone_cap) throw CapExceeded("hypersubstitution count exceeds the clone cap", total);
  }
  const auto id = Hypersubstitution::identity(sig);
  const auto id_key = table_key(A, id);
  std::vector<Hypersubstitution> members{id};
  std::vector<std::size_t> pick(sig.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    for (std::size_t f = sig.size(); f-- > 0;) {
      pick[f] = rest % choices[f].size();
      rest /= choices[f].size();
    }
    Table key;
    std::vector<Term> images;
    for (std::size_t f = 0; f < sig.size(); ++f) {
      const auto& e = choices[f][pick[f]];
      key.insert(key.end(), e.table.begin(), e.table.end());
      images.push_back(e.witness);
    }
    if (key == id_key) continue;
    members.emplace_back(sig, std::move(images));
  }
  return HyperMonoid(MonoidMode::kAllModAlgebra, sig, std::move(members), A, {});
}

/// Hypersubstitutions that fix every symbol except `symbol`, which ranges
/// over all term operations of its arity on A (modulo A). The identity comes
/// first; the remaining members follow clone construction order.
inline HyperMonoid all_images_of_symbol_mod(const FiniteAlgebra& A, std::size_t symbol,
                                            std::size_t clone_cap = kDefaultCloneCap) {
  const auto& sig = A.signature();
  const auto choices = detail::image_choices(A, sig.arity(symbol), clone_cap);
  const auto id = Hypersubstitution::identity(sig);
  const auto id_table = term_table(A, id.image(symbol), VarContext{sig.arity(symbol)});
  std::vector<Hypersubstitution> members{id};
  for (const auto& e : choices.entries()) {
    if (e.table == id_table) continue;
    members.push_back(id.with_image(symbol, e.witness));
  }
  return HyperMonoid(MonoidMode::kAllModAlgebra, sig, std::move(members), A, {});
}

struct HyperWitness {
  std::size_t member;
  Assignment assignment;

  bool operator==(const HyperWitness&) const = default;
};

struct HyperVerdict {
  std::optional<HyperWitness> witness;

  bool holds() const { return !witness.has_value(); }
  bool operator==(const HyperVerdict&) const = default;
};

/// A |=_M lhs = rhs: the identity obtained through every member holds in A.
/// Witness: first failing member, then its least failing assignment.
inline HyperVerdict satisfies_M_hyperidentity(const FiniteAlgebra& A, const HyperMonoid& M, const Term& lhs,
                                              const Term& rhs, VarContext k) {
  M.check_usable_with(A);
  for (std::size_t i = 0; i < M.size(); ++i) {
    auto v = satisfies_identity(A, apply_hyper(M[i], lhs), apply_hyper(M[i], rhs), k);
    if (!v.holds()) return {HyperWitness{i, std::move(*v.counterexample)}};
  }
  return {};
}

/// Hyper-satisfaction of a quasi-identity, evaluated directly: for each
/// member sigma, every premise and the conclusion are transformed by sigma
/// and checked in A at each assignment.
inline HyperVerdict satisfies_M_hyper_quasi_identity(const FiniteAlgebra& A, const HyperMonoid& M,
                                                     const QuasiIdentity& q) {
  M.check_usable_with(A);
  q.check_signature(A.signature());
  for (std::size_t i = 0; i < M.size(); ++i) {
    std::vector<Equation> premises;
    for (const auto& p : q.premises()) premises.push_back({apply_hyper(M[i], p.lhs), apply_hyper(M[i], p.rhs)});
    QuasiIdentity transformed(q.context(), std::move(premises),
                              {apply_hyper(M[i], q.conclusion().lhs), apply_hyper(M[i], q.conclusion().rhs)});
    auto v = satisfies_quasi_identity(A, transformed);
    if (!v.holds()) return {HyperWitness{i, std::move(*v.counterexample)}};
  }
  return {};
}

/// Same verdict computed the other way round: q checked classically in each
/// derived algebra A^sigma.
inline HyperVerdict satisfies_M_hyper_quasi_identity_via_derived(const FiniteAlgebra& A, const HyperMonoid& M,
                                                                 const QuasiIdentity& q) {
  M.check_usable_with(A);
  for (std::size_t i = 0; i < M.size(); ++i) {
    auto v = satisfies_quasi_identity(derived_algebra(A, M[i]), q);
    if (!v.holds()) return {HyperWitness{i, std::move(*v.counterexample)}};
  }
  return {};
}

}  // namespace halg

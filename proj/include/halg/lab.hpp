#pragma once

// Executable checks of concrete results about hyper-quasi-identities:
// abelianness (term condition and its hyper-quasi-identity form),
// semidistributive lattices, the medial hyperidentity, rectangular-band
// hyperidentities, commutation of derived algebras with the class
// operators, and closure of finite classes under derived algebras.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/clone.hpp"
#include "halg/constructions.hpp"
#include "halg/hyper.hpp"
#include "halg/satisfaction.hpp"
#include "halg/structure.hpp"

namespace halg::lab {

inline constexpr std::size_t kDefaultMaxArity = 3;

/// A hyper check together with the monoid it ran over, so that witnesses
/// can be reported by image.
struct HyperCheck {
  HyperMonoid monoid;
  HyperVerdict verdict;

  bool holds() const { return verdict.holds(); }
  const Hypersubstitution& failing_member() const { return monoid[verdict.witness->member]; }
};

/// A with a symbol of arity m to act as hypervariable: the first existing
/// m-ary symbol, or a fresh one interpreted as the first projection.
inline std::pair<FiniteAlgebra, std::size_t> with_symbol_of_arity(const FiniteAlgebra& A, std::size_t m) {
  if (auto f = A.signature().first_of_arity(m)) return {A, *f};
  std::string name = "F";
  while (A.signature().find(name)) name += "_";
  auto sig = A.signature().with_symbol({name, m});
  auto tables = A.tables();
  tables.push_back(term_table(A, Term::var(0), VarContext{m}));
  return {FiniteAlgebra(sig, A.size(), std::move(tables)), sig.size() - 1};
}

// ---------------------------------------------------------------------------
// Abelianness

struct AbelianWitness {
  Term term;  // over A's signature
  std::size_t arity = 0;
  Element u = 0, v = 0;
  std::vector<Element> xs, ys;

  bool operator==(const AbelianWitness&) const = default;
};

/// "Abelian" always means abelian up to `arity_bound`.
struct AbelianVerdict {
  std::size_t arity_bound = 0;
  std::optional<AbelianWitness> witness;

  bool abelian() const { return !witness.has_value(); }
};

namespace detail {

// Term condition for one m-ary table: f(u,x) = f(u,y) <=> f(v,x) = f(v,y),
// sweeping (u, v, x, y) lexicographically.
inline std::optional<Assignment> term_condition_failure(const Table& f, std::size_t n, std::size_t m) {
  std::vector<Element> a(2 * m, 0);
  auto at = [&](Element first, std::size_t offset) {
    std::size_t idx = first;
    for (std::size_t j = 0; j + 1 < m; ++j) idx = idx * n + a[offset + j];
    return f[idx];
  };
  do {
    const Element u = a[0], v = a[1];
    const bool left = at(u, 2) == at(u, m + 1);
    const bool right = at(v, 2) == at(v, m + 1);
    if (left != right) return a;
  } while (next_tuple(a, n));
  return std::nullopt;
}

inline AbelianWitness make_abelian_witness(Term term, std::size_t m, const Assignment& a) {
  return AbelianWitness{std::move(term), m, a[0], a[1], std::vector<Element>(a.begin() + 2, a.begin() + 1 + m),
                        std::vector<Element>(a.begin() + 1 + m, a.end())};
}

}  // namespace detail

/// Term condition for every term operation of arity 2..max_arity, in clone
/// construction order; returns the first violation.
inline AbelianVerdict is_abelian(const FiniteAlgebra& A, std::size_t max_arity = kDefaultMaxArity,
                                 std::size_t clone_cap = kDefaultCloneCap) {
  if (max_arity < 2) throw Error("abelianness needs max_arity >= 2");
  AbelianVerdict verdict{max_arity, std::nullopt};
  for (std::size_t m = 2; m <= max_arity; ++m) {
    const auto clone = enumerate_term_operations(A, m, clone_cap);
    for (const auto& e : clone.entries()) {
      if (auto bad = detail::term_condition_failure(e.table, A.size(), m)) {
        verdict.witness = detail::make_abelian_witness(e.witness, m, *bad);
        return verdict;
      }
    }
  }
  return verdict;
}

/// The same property checked as a pair of hyper-quasi-identities
///   F(u,x) = F(u,y) => F(v,x) = F(v,y)   and its converse,
/// with F an m-ary hypervariable ranging over all m-ary term operations.
/// Variables: u = x0, v = x1, x = x2..x_m, y = x_{m+1}..x_{2m-1}.
inline AbelianVerdict abelian_via_hyperquasi(const FiniteAlgebra& A, std::size_t max_arity = kDefaultMaxArity,
                                             std::size_t clone_cap = kDefaultCloneCap) {
  if (max_arity < 2) throw Error("abelianness needs max_arity >= 2");
  AbelianVerdict verdict{max_arity, std::nullopt};
  for (std::size_t m = 2; m <= max_arity; ++m) {
    const auto [Am, F] = with_symbol_of_arity(A, m);
    const auto M = all_images_of_symbol_mod(Am, F, clone_cap);
    auto app = [&, F = F](std::size_t first, std::size_t offset) {
      std::vector<Term> args{Term::var(first)};
      for (std::size_t j = 0; j + 1 < m; ++j) args.push_back(Term::var(offset + j));
      return Term::apply(F, std::move(args));
    };
    const VarContext k{2 * m};
    const Equation at_u{app(0, 2), app(0, m + 1)};
    const Equation at_v{app(1, 2), app(1, m + 1)};
    const QuasiIdentity forward(k, {at_u}, at_v);
    const QuasiIdentity backward(k, {at_v}, at_u);
    const auto single = HyperMonoid::explicit_members(Am.signature(), {Hypersubstitution::identity(Am.signature())});
    const auto clone = enumerate_term_operations(A, m, clone_cap);
    for (std::size_t i = 0; i < M.size(); ++i) {
      const auto derived = derived_algebra(Am, M[i]);
      auto v1 = satisfies_M_hyper_quasi_identity(derived, single, forward);
      auto v2 = satisfies_M_hyper_quasi_identity(derived, single, backward);
      if (v1.holds() && v2.holds()) continue;
      Assignment a;
      if (v1.holds()) a = v2.witness->assignment;
      else if (v2.holds()) a = v1.witness->assignment;
      else a = std::min(v1.witness->assignment, v2.witness->assignment);
      const auto table = term_table(Am, M[i].image(F), VarContext{m});
      verdict.witness = detail::make_abelian_witness(witness_for(clone, table), m, a);
      return verdict;
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Lattices

struct LatticeSymbols {
  std::size_t meet;
  std::size_t join;
};

/// Exactly two binary symbols; named meet/join if those names exist,
/// otherwise meet first in declaration order.
inline LatticeSymbols lattice_symbols(const Signature& sig) {
  if (sig.size() != 2 || sig.arity(0) != 2 || sig.arity(1) != 2)
    throw Error("a lattice signature has exactly two binary symbols");
  auto meet = sig.find("meet");
  auto join = sig.find("join");
  if (meet && join) return {*meet, *join};
  return {0, 1};
}

/// Throws naming the first lattice law (idempotence, commutativity,
/// associativity, absorption) that fails.
inline LatticeSymbols require_lattice(const FiniteAlgebra& L) {
  const auto s = lattice_symbols(L.signature());
  auto x = [](std::size_t i) { return Term::var(i); };
  auto op = [](std::size_t f, Term a, Term b) { return Term::apply(f, {std::move(a), std::move(b)}); };
  struct Law {
    const char* name;
    Term lhs, rhs;
    std::size_t k;
  };
  const std::vector<Law> laws = {
      {"meet idempotence", op(s.meet, x(0), x(0)), x(0), 1},
      {"join idempotence", op(s.join, x(0), x(0)), x(0), 1},
      {"meet commutativity", op(s.meet, x(0), x(1)), op(s.meet, x(1), x(0)), 2},
      {"join commutativity", op(s.join, x(0), x(1)), op(s.join, x(1), x(0)), 2},
      {"meet associativity", op(s.meet, op(s.meet, x(0), x(1)), x(2)), op(s.meet, x(0), op(s.meet, x(1), x(2))), 3},
      {"join associativity", op(s.join, op(s.join, x(0), x(1)), x(2)), op(s.join, x(0), op(s.join, x(1), x(2))), 3},
      {"meet-join absorption", op(s.meet, x(0), op(s.join, x(0), x(1))), x(0), 2},
      {"join-meet absorption", op(s.join, x(0), op(s.meet, x(0), x(1))), x(0), 2},
  };
  for (const auto& law : laws)
    if (!satisfies_identity(L, law.lhs, law.rhs, VarContext{law.k}).holds())
      throw Error(std::string("not a lattice: ") + law.name + " fails");
  return s;
}

struct SemidistributivityVerdict {
  Verdict join;  // x v y = x v z  =>  x v y = x v (y ^ z), witness (x, y, z)
  Verdict meet;  // x ^ y = x ^ z  =>  x ^ y = x ^ (y v z)

  bool semidistributive() const { return join.holds() && meet.holds(); }
};

namespace detail {

// outer(x0,x1) = outer(x0,x2) => outer(x0,x1) = outer(x0, inner(x1,x2))
inline QuasiIdentity semidistributive_law(std::size_t outer, std::size_t inner) {
  auto x = [](std::size_t i) { return Term::var(i); };
  auto op = [](std::size_t f, Term a, Term b) { return Term::apply(f, {std::move(a), std::move(b)}); };
  return QuasiIdentity(VarContext{3}, {{op(outer, x(0), x(1)), op(outer, x(0), x(2))}},
                       {op(outer, x(0), x(1)), op(outer, x(0), op(inner, x(1), x(2)))});
}

}  // namespace detail

inline SemidistributivityVerdict semidistributivity(const FiniteAlgebra& L) {
  const auto s = require_lattice(L);
  return {satisfies_quasi_identity(L, detail::semidistributive_law(s.join, s.meet)),
          satisfies_quasi_identity(L, detail::semidistributive_law(s.meet, s.join))};
}

/// (F(x,y) = F(x,z)) => (F(x,y) = F(x, G(y,z))) over all pairs of binary term
/// operations F, G. F is carried by the join symbol and G by the meet
/// symbol, so the identity member is F = join, G = meet; the remaining
/// pairs follow with G outermost.
inline HyperCheck check_prop23(const FiniteAlgebra& L, std::size_t clone_cap = kDefaultCloneCap) {
  const auto s = require_lattice(L);
  auto M = all_hypersubstitutions_mod(L, clone_cap);
  auto q = detail::semidistributive_law(s.join, s.meet);
  auto verdict = satisfies_M_hyper_quasi_identity(L, M, q);
  return {std::move(M), std::move(verdict)};
}

/// Images of F and G in the failing member of a check_prop23 result.
inline std::pair<Term, Term> prop23_images(const FiniteAlgebra& L, const HyperCheck& r) {
  const auto s = lattice_symbols(L.signature());
  const auto& sigma = r.failing_member();
  return {sigma.image(s.join), sigma.image(s.meet)};
}

// ---------------------------------------------------------------------------
// Hyperidentities

/// F(F(x0,x1), F(x2,x3)) = F(F(x0,x2), F(x1,x3)) for every binary term
/// operation F of A (F carried by the first binary symbol).
inline HyperCheck check_medial(const FiniteAlgebra& A, std::size_t clone_cap = kDefaultCloneCap) {
  const auto F = A.signature().first_of_arity(2);
  if (!F) throw Error("medial check needs a binary operation symbol");
  auto M = all_images_of_symbol_mod(A, *F, clone_cap);
  auto app = [&](Term a, Term b) { return Term::apply(*F, {std::move(a), std::move(b)}); };
  auto x = [](std::size_t i) { return Term::var(i); };
  auto verdict = satisfies_M_hyperidentity(A, M, app(app(x(0), x(1)), app(x(2), x(3))),
                                           app(app(x(0), x(2)), app(x(1), x(3))), VarContext{4});
  return {std::move(M), std::move(verdict)};
}

struct RectangularBandVerdict {
  std::optional<std::size_t> failing_arity;
  std::size_t failing_law = 0;  // 0: F(x..x)=x, 1: first-argument law, 2: last-argument law
  std::optional<HyperCheck> failure;
  std::optional<FiniteAlgebra> checked_in;  // A, possibly with an adjoined F

  bool holds() const { return !failing_arity.has_value(); }
};

/// The three rectangular-band hyperidentities for every arity 2..max_arity:
///   F(x,...,x) = x
///   F(F(x_11..x_1m), x_2..x_m) = F(x_11, x_2..x_m)
///   F(x_1..x_{m-1}, F(x_m1..x_mm)) = F(x_1..x_{m-1}, x_mm)
inline RectangularBandVerdict check_rb_hyperidentities(const FiniteAlgebra& A, std::size_t max_arity = kDefaultMaxArity,
                                                       std::size_t clone_cap = kDefaultCloneCap) {
  if (max_arity < 2) throw Error("rectangular-band check needs max_arity >= 2");
  RectangularBandVerdict out;
  for (std::size_t m = 2; m <= max_arity; ++m) {
    auto [Am, F] = with_symbol_of_arity(A, m);
    auto M = all_images_of_symbol_mod(Am, F, clone_cap);
    auto app = [F = F](std::vector<Term> args) { return Term::apply(F, std::move(args)); };
    auto vars = [](std::size_t from, std::size_t count) {
      std::vector<Term> v;
      for (std::size_t i = 0; i < count; ++i) v.push_back(Term::var(from + i));
      return v;
    };
    std::vector<std::pair<Equation, std::size_t>> laws;
    laws.push_back({{app(std::vector<Term>(m, Term::var(0))), Term::var(0)}, 1});
    {
      // x_1j -> x_{j-1}, x_2..x_m -> x_m..x_{2m-2}
      auto inner = app(vars(0, m));
      auto lhs_args = vars(m, m - 1);
      lhs_args.insert(lhs_args.begin(), inner);
      auto rhs_args = vars(m, m - 1);
      rhs_args.insert(rhs_args.begin(), Term::var(0));
      laws.push_back({{app(lhs_args), app(rhs_args)}, 2 * m - 1});
    }
    {
      // x_1..x_{m-1} -> x_0..x_{m-2}, x_mj -> x_{m-2+j}
      auto lhs_args = vars(0, m - 1);
      lhs_args.push_back(app(vars(m - 1, m)));
      auto rhs_args = vars(0, m - 1);
      rhs_args.push_back(Term::var(2 * m - 2));
      laws.push_back({{app(lhs_args), app(rhs_args)}, 2 * m - 1});
    }
    for (std::size_t l = 0; l < laws.size(); ++l) {
      auto v = satisfies_M_hyperidentity(Am, M, laws[l].first.lhs, laws[l].first.rhs, VarContext{laws[l].second});
      if (!v.holds()) {
        out.failing_arity = m;
        out.failing_law = l;
        out.failure = HyperCheck{M, std::move(v)};
        out.checked_in = Am;
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived algebras versus class operators

/// Parameters for one concrete instance of "D_M O(K) is contained in O D_M(K)".
struct OperatorInstance {
  Signature signature;
  std::vector<FiniteAlgebra> family;          // K, or the factors / spectrum points
  std::vector<Element> generators;            // case 1: in family[0]; case 4: product elements
  std::optional<FilterOnFiniteSet> filter;    // cases 5, 6
  std::optional<DirectSpectrum> spectrum;     // cases 7, 8
};

struct OperatorReport {
  bool holds = true;
  std::string detail;
  std::optional<std::size_t> failing_member;
  std::optional<FiniteAlgebra> lhs;  // the member of D_M O(K) that was built
  std::optional<FiniteAlgebra> rhs;  // its witness in O D_M(K)
};

namespace detail {

inline std::vector<FiniteAlgebra> derive_all(std::span<const FiniteAlgebra> family, const Hypersubstitution& s) {
  std::vector<FiniteAlgebra> out;
  for (const auto& a : family) out.push_back(derived_algebra(a, s));
  return out;
}

inline bool same_or_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  return a == b || isomorphic(a, b);
}

}  // namespace detail

inline const char* operator_case_name(int which) {
  switch (which) {
    case 1: return "S (subalgebras)";
    case 2: return "P (direct products)";
    case 3: return "P_omega (finite direct products)";
    case 4: return "P_s (subdirect products)";
    case 5: return "P_r (reduced products)";
    case 6: return "P_u (ultraproducts)";
    case 7: return "L (direct limits)";
    case 8: return "L_s (superdirect limits)";
    default: return "?";
  }
}

/// Builds B = (O(K))^sigma from the instance for every sigma, builds the
/// witness in O(D_M(K)) that B should equal, and compares them (table
/// equality, falling back to isomorphism).
inline OperatorReport check_prop43_case(int which, std::span<const Hypersubstitution> sigmas, const OperatorInstance& inst) {
  if (which < 1 || which > 8) throw Error("case must be between 1 and 8");
  OperatorReport report;
  const auto& sig = inst.signature;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const auto& s = sigmas[i];
    std::optional<FiniteAlgebra> lhs, rhs;
    std::string problem;
    switch (which) {
      case 1: {
        if (inst.family.empty()) throw Error("case 1 needs an algebra");
        const auto& A = inst.family.front();
        const auto sub = subalgebra_generated(A, inst.generators);
        lhs = derived_algebra(sub.algebra, s);
        try {
          rhs = induced_subalgebra(derived_algebra(A, s), sub.embedding).algebra;
        } catch (const Error& e) {
          problem = e.what();
        }
        break;
      }
      case 2:
      case 3: {
        if (which == 2 && inst.family.empty()) throw Error("case 2 needs a nonempty family");
        lhs = derived_algebra(direct_product(sig, inst.family), s);
        rhs = direct_product(sig, detail::derive_all(inst.family, s));
        break;
      }
      case 4: {
        const auto product = direct_product(sig, inst.family);
        const auto sub = subalgebra_generated(product, inst.generators);
        if (!is_subdirect(sub.algebra, inst.family, sub.embedding)) throw Error("case 4 instance is not subdirect");
        lhs = derived_algebra(sub.algebra, s);
        const auto derived = detail::derive_all(inst.family, s);
        try {
          auto w = induced_subalgebra(direct_product(sig, derived), sub.embedding);
          if (!is_subdirect(w.algebra, derived, w.embedding)) problem = "witness is not subdirect";
          rhs = std::move(w.algebra);
        } catch (const Error& e) {
          problem = e.what();
        }
        break;
      }
      case 5:
      case 6: {
        if (!inst.filter) throw Error("cases 5 and 6 need a filter");
        const auto build = [&](std::span<const FiniteAlgebra> fam) {
          return which == 6 ? ultraproduct(fam, *inst.filter) : reduced_product(fam, *inst.filter);
        };
        lhs = derived_algebra(build(inst.family).algebra, s);
        rhs = build(detail::derive_all(inst.family, s)).algebra;
        break;
      }
      case 7:
      case 8: {
        if (!inst.spectrum) throw Error("cases 7 and 8 need a spectrum");
        if (which == 8 && !is_superdirect(*inst.spectrum)) throw Error("case 8 needs a superdirect spectrum");
        lhs = derived_algebra(direct_limit(*inst.spectrum).algebra, s);
        try {
          const auto derived = inst.spectrum->transformed([&](const FiniteAlgebra& a) { return derived_algebra(a, s); });
          if (which == 8 && !is_superdirect(derived)) problem = "derived spectrum is not superdirect";
          rhs = direct_limit(derived).algebra;
        } catch (const Error& e) {
          problem = e.what();
        }
        break;
      }
    }
    if (problem.empty() && !detail::same_or_isomorphic(*lhs, *rhs)) problem = "derived construction and witness differ";
    report.lhs = lhs;
    report.rhs = rhs;
    if (!problem.empty()) {
      report.holds = false;
      report.failing_member = i;
      report.detail = std::string(operator_case_name(which)) + ": member " + std::to_string(i) + ": " + problem;
      return report;
    }
  }
  report.detail = std::string(operator_case_name(which)) + ": " + std::to_string(sigmas.size()) + " member(s) checked";
  return report;
}

inline OperatorReport check_prop43_case(int which, const HyperMonoid& M, const OperatorInstance& inst) {
  return check_prop43_case(which, M.members(), inst);
}

struct DerivedEscape {
  std::size_t algebra;  // index into K
  std::size_t member;   // index into the monoid used for that algebra
  Hypersubstitution sigma;
  FiniteAlgebra derived;
};

struct DerivedClosureVerdict {
  std::optional<DerivedEscape> escape;

  bool closed() const { return !escape.has_value(); }
};

/// D_M(K) contained in K up to isomorphism. With no monoid given, each
/// member A of K is checked against all hypersubstitutions modulo A.
inline DerivedClosureVerdict check_derived_closed(std::span<const FiniteAlgebra> K,
                                                  const std::optional<HyperMonoid>& M = std::nullopt,
                                                  std::size_t clone_cap = kDefaultCloneCap) {
  for (std::size_t a = 0; a < K.size(); ++a) {
    const auto monoid = M ? *M : all_hypersubstitutions_mod(K[a], clone_cap);
    if (monoid.signature() != K[a].signature()) throw Error("monoid and class have different types");
    for (std::size_t i = 0; i < monoid.size(); ++i) {
      auto d = derived_algebra(K[a], monoid[i]);
      const bool inside = std::any_of(K.begin(), K.end(), [&](const FiniteAlgebra& b) { return isomorphic(d, b); });
      if (!inside) return {DerivedEscape{a, i, monoid[i], std::move(d)}};
    }
  }
  return {};
}

}  // namespace halg::lab

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/term.hpp"

namespace halg {

/// Outcome of an identity or quasi-identity check: empty counterexample
/// means the law holds.
struct Verdict {
  std::optional<Assignment> counterexample;

  bool holds() const { return !counterexample.has_value(); }
  bool operator==(const Verdict&) const = default;
};

/// A Horn implication  p_0 & ... & p_{n-1} => c  over variables x_0..x_{k-1}.
/// With no premises it is a plain identity.
class QuasiIdentity {
 public:
  QuasiIdentity(VarContext context, std::vector<Equation> premises, Equation conclusion)
      : context_(context), premises_(std::move(premises)), conclusion_(std::move(conclusion)) {
    if (context_.arity == 0) throw Error("quasi-identity context arity must be positive");
    for (const auto& p : premises_) {
      check_context(p.lhs, context_);
      check_context(p.rhs, context_);
    }
    check_context(conclusion_.lhs, context_);
    check_context(conclusion_.rhs, context_);
  }

  static QuasiIdentity identity(VarContext context, Equation eq) { return QuasiIdentity(context, {}, std::move(eq)); }

  VarContext context() const { return context_; }
  const std::vector<Equation>& premises() const { return premises_; }
  const Equation& conclusion() const { return conclusion_; }

  void check_signature(const Signature& sig) const {
    for (const auto& p : premises_) {
      check_term(p.lhs, sig);
      check_term(p.rhs, sig);
    }
    check_term(conclusion_.lhs, sig);
    check_term(conclusion_.rhs, sig);
  }

  bool operator==(const QuasiIdentity&) const = default;

 private:
  VarContext context_;
  std::vector<Equation> premises_;
  Equation conclusion_;
};

namespace detail {

inline Verdict first_failure(std::size_t n, std::size_t k, const std::vector<std::pair<Table, Table>>& premises,
                             const Table& lhs, const Table& rhs) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    bool fire = true;
    for (const auto& [pl, pr] : premises) {
      if (pl[i] != pr[i]) {
        fire = false;
        break;
      }
    }
    if (fire && lhs[i] != rhs[i]) {
      Assignment a(k);
      tuple_at(i, n, a);
      return {std::move(a)};
    }
  }
  return {};
}

}  // namespace detail

/// Checks lhs = rhs on all n^k assignments; the counterexample is the
/// lexicographically least failing assignment.
inline Verdict satisfies_identity(const FiniteAlgebra& A, const Term& lhs, const Term& rhs, VarContext k) {
  check_term(lhs, A.signature());
  check_term(rhs, A.signature());
  check_context(lhs, k);
  check_context(rhs, k);
  return detail::first_failure(A.size(), k.arity, {}, term_table(A, lhs, k), term_table(A, rhs, k));
}

/// Counterexample: least assignment where every premise holds and the
/// conclusion fails.
inline Verdict satisfies_quasi_identity(const FiniteAlgebra& A, const QuasiIdentity& q) {
  q.check_signature(A.signature());
  const auto k = q.context();
  std::vector<std::pair<Table, Table>> premises;
  premises.reserve(q.premises().size());
  for (const auto& p : q.premises()) premises.emplace_back(term_table(A, p.lhs, k), term_table(A, p.rhs, k));
  return detail::first_failure(A.size(), k.arity, premises, term_table(A, q.conclusion().lhs, k),
                               term_table(A, q.conclusion().rhs, k));
}

}  // namespace halg

#include <gtest/gtest.h>

#include <set>

#include "halg/hyper.hpp"
#include "halg/text.hpp"
#include "halg/zoo.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace halg;

namespace {

const Signature& G() {
  static const Signature sig = zoo::binary_signature("plus");
  return sig;
}

Term t(const std::string& src) { return parse_term(src, G()); }

Hypersubstitution hs(const std::string& image) { return Hypersubstitution(G(), {t(image)}); }

const QuasiIdentity& cancel() {
  static const QuasiIdentity q(VarContext{3}, {parse_equation("plus(x0,x1)=plus(x0,x2)", G())},
                               parse_equation("x1=x2", G()));
  return q;
}

}  // namespace

TEST(Hypersubstitution, Validation) {
  EXPECT_THROW(Hypersubstitution(G(), {}), Error);
  EXPECT_THROW(hs("plus(x0,x2)"), Error);
  EXPECT_THROW(Hypersubstitution(G(), {Term::apply(0, {Term::var(0)})}), Error);
  EXPECT_EQ(Hypersubstitution::identity(G()).image(0), t("plus(x0,x1)"));
  const Signature with_e({{"mul", 2}, {"e", 0}});
  EXPECT_THROW(Hypersubstitution(with_e, {symbol_term(with_e, 0), Term::var(0)}), Error);
}

TEST(Hypersubstitution, ApplyHyper) {
  const auto swap = hs("plus(x1,x0)");
  EXPECT_EQ(apply_hyper(swap, t("plus(x0,x1)")), t("plus(x1,x0)"));
  EXPECT_EQ(apply_hyper(swap, t("plus(plus(x0,x1),x2)")), t("plus(x2,plus(x1,x0))"));
  const auto id = Hypersubstitution::identity(G());
  for (const char* src : {"x3", "plus(x0,plus(x1,x1))"}) EXPECT_EQ(apply_hyper(id, t(src)), t(src));
  EXPECT_EQ(apply_hyper(hs("x0"), t("plus(plus(x2,x1),x0)")), t("x2"));
}

TEST(Hypersubstitution, Composition) {
  const auto swap = hs("plus(x1,x0)");
  const auto p1 = hs("x0");
  const auto id = Hypersubstitution::identity(G());
  EXPECT_EQ(compose(swap, swap), id);
  // p1 applied to swap's image plus(x1,x0) keeps the first argument: x1.
  EXPECT_EQ(compose(p1, swap).image(0), t("x1"));
  EXPECT_EQ(compose(swap, p1).image(0), t("x0"));
  EXPECT_EQ(compose(id, swap), swap);
  EXPECT_EQ(compose(swap, id), swap);
}

TEST(Hypersubstitution, CompositionIsAssociative) {
  gen::Random rng;
  const Signature sig({{"f", 2}, {"g", 1}});
  for (int i = 0; i < 200; ++i) {
    const auto a = rng.hypersub(sig), b = rng.hypersub(sig), c = rng.hypersub(sig);
    ASSERT_EQ(compose(a, compose(b, c)), compose(compose(a, b), c));
    const auto term = rng.term(sig, 3, 3);
    ASSERT_EQ(apply_hyper(compose(a, b), term), apply_hyper(a, apply_hyper(b, term)));
  }
}

TEST(DerivedAlgebra, Examples) {
  const auto Z2 = zoo::cyclic_group(2);
  EXPECT_EQ(derived_algebra(Z2, hs("x0")), zoo::left_zero_band(2, "plus"));
  EXPECT_EQ(derived_algebra(Z2, Hypersubstitution::identity(G())), Z2);
  const auto L = zoo::two_element_lattice();
  const auto& ls = L.signature();
  const Hypersubstitution dual(ls, {parse_term("join(x0,x1)", ls), parse_term("meet(x0,x1)", ls)});
  const auto D = derived_algebra(L, dual);
  EXPECT_EQ(D.table(0), L.table(1));
  EXPECT_EQ(D.table(1), L.table(0));
  EXPECT_THROW(derived_algebra(L, hs("x0")), Error);
}

TEST(DerivedAlgebra, EvaluationLemmaAndCompositionLaw) {
  gen::Random rng;
  const Signature sig({{"f", 2}, {"g", 1}, {"c", 0}});
  for (int i = 0; i < 200; ++i) {
    const auto A = rng.algebra(sig, rng.between(1, 3));
    const auto s1 = rng.hypersub(sig), s2 = rng.hypersub(sig);
    const auto term = rng.term(sig, 3, 3);
    const auto a = rng.assignment(A.size(), 3);
    ASSERT_EQ(oracle::eval(derived_algebra(A, s1), term, a), oracle::eval(A, apply_hyper(s1, term), a));
    ASSERT_EQ(derived_algebra(derived_algebra(A, s1), s2), derived_algebra(A, compose(s1, s2)));
  }
}

TEST(HyperMonoid, ExplicitValidation) {
  const auto id = Hypersubstitution::identity(G());
  EXPECT_NO_THROW(HyperMonoid::explicit_members(G(), {id, hs("plus(x1,x0)")}));
  EXPECT_THROW(HyperMonoid::explicit_members(G(), {hs("plus(x1,x0)")}), Error);
  try {
    HyperMonoid::explicit_members(G(), {id, hs("x0"), hs("plus(x1,x0)")}, std::nullopt, {"id", "p1", "swap"});
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("not closed"), std::string::npos);
    EXPECT_NE(msg.find("p1 o swap"), std::string::npos);
  }
  // grow o grow is a new term, but modulo Z2 every member collapses to x0.
  const auto grow = hs("plus(plus(x0,x1),x1)");
  EXPECT_THROW(HyperMonoid::explicit_members(G(), {id, grow}), Error);
  EXPECT_NO_THROW(HyperMonoid::explicit_members(G(), {id, grow}, zoo::cyclic_group(2)));
  const auto dup = hs("plus(x0,x0)");
  const auto other = hs("plus(x1,x1)");
  const auto M = HyperMonoid::explicit_members(G(), {id, dup, other}, zoo::cyclic_group(2));
  EXPECT_TRUE(M.equivalent(dup, other));
  EXPECT_FALSE(HyperMonoid::explicit_members(G(), {id, dup, other}).equivalent(dup, other));
  EXPECT_EQ(M.label(1), "1");
}

TEST(HyperMonoid, Closure) {
  const auto swap = hs("plus(x1,x0)");
  const auto M = monoid_closure({swap});
  ASSERT_EQ(M.size(), 2u);
  EXPECT_EQ(M[0], Hypersubstitution::identity(G()));
  EXPECT_EQ(M[1], swap);

  // dup o dup = dup under the composition law, so even syntactically this closes.
  EXPECT_EQ(monoid_closure({hs("plus(x0,x0)")}).size(), 2u);
  const auto modZ2 = monoid_closure({hs("plus(x0,x0)")}, zoo::cyclic_group(2));
  EXPECT_EQ(modZ2.size(), 2u);

  // Nested images grow with every composition.
  const auto grow = hs("plus(plus(x0,x1),x1)");
  try {
    monoid_closure({grow}, std::nullopt, 3);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.reached(), 4u);
  }
  EXPECT_LE(monoid_closure({grow}, zoo::cyclic_group(3)).size(), 9u);
  EXPECT_THROW(monoid_closure({grow}, std::nullopt, 12, 2), CapExceeded);
}

TEST(HyperMonoid, ClosureIsClosed) {
  gen::Random rng;
  for (int i = 0; i < 40; ++i) {
    const auto A = rng.algebra(G(), rng.between(1, 2));
    const auto M = monoid_closure({rng.hypersub(G()), rng.hypersub(G())}, A);
    EXPECT_NO_THROW(M.validate());
  }
}

TEST(HyperMonoid, AllModAlgebra) {
  const auto Z2 = zoo::cyclic_group(2);
  const auto M = all_hypersubstitutions_mod(Z2);
  ASSERT_EQ(M.size(), 4u);
  EXPECT_EQ(M.mode(), MonoidMode::kAllModAlgebra);
  std::set<Table> images;
  for (const auto& s : M.members()) images.insert(term_table(Z2, s.image(0), VarContext{2}));
  EXPECT_EQ(images, (std::set<Table>{{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}}));
  EXPECT_EQ(M[0], Hypersubstitution::identity(G()));
  EXPECT_EQ(all_hypersubstitutions_mod(zoo::two_element_lattice()).size(), 16u);
  EXPECT_EQ(all_hypersubstitutions_mod(zoo::cyclic_group(1)).size(), 1u);
  EXPECT_THROW(all_hypersubstitutions_mod(zoo::two_element_lattice(), 10), CapExceeded);
  EXPECT_NO_THROW(M.validate());
  EXPECT_THROW(M.check_usable_with(zoo::cyclic_group(4)), Error);
  EXPECT_NO_THROW(M.check_usable_with(Z2));
}

TEST(HyperMonoid, ImagesOfOneSymbol) {
  const auto L = zoo::two_element_lattice();
  const auto M = all_images_of_symbol_mod(L, 0);
  EXPECT_EQ(M.size(), 4u);
  for (const auto& s : M.members()) EXPECT_EQ(s.image(1), symbol_term(L.signature(), 1));
}

TEST(HyperSatisfaction, IdentityExamples) {
  const auto Z3 = zoo::cyclic_group(3);
  EXPECT_TRUE(satisfies_M_hyperidentity(Z3, all_hypersubstitutions_mod(Z3), t("plus(plus(x0,x1),plus(x2,x3))"),
                                        t("plus(plus(x0,x2),plus(x1,x3))"), VarContext{4})
                  .holds());
  const auto L = zoo::two_element_lattice();
  EXPECT_TRUE(satisfies_M_hyperidentity(L, all_hypersubstitutions_mod(L), parse_term("meet(x0,x0)", L.signature()),
                                        Term::var(0), VarContext{1})
                  .holds());
  const auto Z2 = zoo::cyclic_group(2);
  const auto M = all_hypersubstitutions_mod(Z2);
  const auto v = satisfies_M_hyperidentity(Z2, M, t("plus(x0,x1)"), t("plus(x1,x0)"), VarContext{2});
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(M[v.witness->member].image(0), t("x0"));
  EXPECT_EQ(v.witness->assignment, (Assignment{0, 1}));
}

TEST(HyperSatisfaction, CancellationExamples) {
  const auto Z2 = zoo::cyclic_group(2);
  const auto id = Hypersubstitution::identity(G());
  const auto swap_monoid = HyperMonoid::explicit_members(G(), {id, hs("plus(x1,x0)")});
  EXPECT_TRUE(satisfies_M_hyper_quasi_identity(Z2, swap_monoid, cancel()).holds());
  const auto all = all_hypersubstitutions_mod(Z2);
  const auto v = satisfies_M_hyper_quasi_identity(Z2, all, cancel());
  ASSERT_FALSE(v.holds());
  EXPECT_EQ(all[v.witness->member].image(0), t("x0"));
  EXPECT_EQ(v.witness->assignment, (Assignment{0, 0, 1}));
  EXPECT_EQ(satisfies_M_hyper_quasi_identity_via_derived(Z2, all, cancel()), v);
}

TEST(HyperSatisfaction, IdentityMonoidIsClassical) {
  gen::Random rng;
  for (int i = 0; i < 200; ++i) {
    const auto A = rng.algebra(G(), rng.between(1, 3));
    const auto M = HyperMonoid::explicit_members(G(), {Hypersubstitution::identity(G())});
    const auto q = rng.quasi(G());
    const auto classical = satisfies_quasi_identity(A, q);
    const auto hyper = satisfies_M_hyper_quasi_identity(A, M, q);
    ASSERT_EQ(classical.holds(), hyper.holds());
    if (!classical.holds()) {
      ASSERT_EQ(*classical.counterexample, hyper.witness->assignment);
    }
  }
}

TEST(HyperSatisfaction, QuotientSoundness) {
  gen::Random rng;
  for (int i = 0; i < 100; ++i) {
    const auto A = rng.algebra(G(), rng.between(1, 2));
    const auto s = rng.hypersub(G(), 3);
    const auto M = all_hypersubstitutions_mod(A);
    const auto j = M.find(s);
    ASSERT_TRUE(j);
    EXPECT_EQ(derived_algebra(A, M[*j]), derived_algebra(A, s));
  }
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Randomized criteria honour HALG_SEED.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "halg/constructions.hpp"
#include "halg/lab.hpp"
#include "halg/text.hpp"
#include "halg/zoo.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace halg;

namespace {

// Collects the first problem found; empty means the criterion passed.
struct Check {
  std::string problem;

  void require(bool ok, const std::string& what) {
    if (!ok && problem.empty()) problem = what;
  }
};

std::set<Table> tables_of(const TermOperationSet& s) {
  std::set<Table> out;
  for (const auto& e : s.entries()) out.insert(e.table);
  return out;
}

Hypersubstitution image(const Signature& sig, const std::string& src) {
  return Hypersubstitution(sig, {parse_term(src, sig)});
}

void clone_counts(Check& c) {
  const auto L = zoo::two_element_lattice();
  const auto c2 = enumerate_term_operations(L, 2);
  const auto c3 = enumerate_term_operations(L, 3);
  c.require(c2.size() == 4, "2-element lattice: binary count " + std::to_string(c2.size()));
  c.require(c3.size() == 18, "2-element lattice: ternary count " + std::to_string(c3.size()));
  c.require(tables_of(c3) == oracle::monotone_idempotent_boolean(3), "ternary tables differ from the monotone oracle");
  const auto z3 = enumerate_term_operations(zoo::cyclic_group(3), 2);
  c.require(z3.size() == 9, "Z3: binary count " + std::to_string(z3.size()));
  c.require(tables_of(z3) == oracle::linear_forms(3, 2), "Z3 tables differ from the linear-form oracle");
}

void medial(Check& c) {
  for (std::size_t n : {2, 3}) {
    const auto r = lab::check_medial(zoo::cyclic_group(n));
    c.require(r.holds(), "medial fails on Z" + std::to_string(n));
    c.require(r.monoid.size() == (n == 2 ? 4u : 9u), "Z" + std::to_string(n) + ": wrong number of images");
  }
}

void semidistributive_hyperquasi(Check& c) {
  c.require(lab::check_prop23(zoo::pentagon()).holds(), "N5 not hypersatisfied");
  c.require(lab::check_prop23(zoo::two_element_lattice()).holds(), "2-element lattice not hypersatisfied");
  const auto M3 = zoo::diamond();
  const auto r = lab::check_prop23(M3);
  c.require(!r.holds(), "M3 hypersatisfied");
  if (r.holds()) return;
  const auto [F, G] = lab::prop23_images(M3, r);
  c.require(F == parse_term("join(x0,x1)", M3.signature()), "M3 witness F is not join");
  c.require(G == parse_term("meet(x0,x1)", M3.signature()), "M3 witness G is not meet");
  c.require(r.verdict.witness->assignment == Assignment{1, 2, 3}, "M3 witness assignment is not (a,b,c)");
}

void semidistributivity(Check& c) {
  const auto m3 = lab::semidistributivity(zoo::diamond());
  c.require(!m3.join.holds() && *m3.join.counterexample == Assignment{1, 2, 3}, "M3 SD-join witness is not (a,b,c)");
  c.require(lab::semidistributivity(zoo::pentagon()).semidistributive(), "N5 not semidistributive");
  for (const auto& L : oracle::lattice_corpus(5)) {
    const auto A = L.algebra();
    const auto sd = lab::semidistributivity(A);
    c.require(sd.join.holds() == L.join_semidistributive() && sd.meet.holds() == L.meet_semidistributive(),
              "semidistributivity disagrees with the order oracle");
    if (sd.semidistributive())
      c.require(lab::check_prop23(A).holds(), "semidistributive lattice fails the hyper-quasi-identity");
  }
}

void abelian(Check& c) {
  c.require(lab::is_abelian(zoo::rectangular_band(2, 2), 3).abelian(), "2x2 rectangular band not abelian");
  const auto L = zoo::two_element_lattice();
  const auto v = lab::is_abelian(L, 3);
  c.require(!v.abelian() && v.witness->term == parse_term("meet(x0,x1)", L.signature()),
            "2-element lattice witness is not meet");
  std::vector<FiniteAlgebra> corpus{zoo::cyclic_group(1),    zoo::cyclic_group(2),      zoo::cyclic_group(3),
                                    zoo::cyclic_group(4),    zoo::left_zero_band(2),    zoo::right_zero_band(2),
                                    zoo::rectangular_band(2, 2), zoo::constant_groupoid(2, 0), L,
                                    zoo::pentagon(),         zoo::diamond()};
  for (const auto& A : corpus)
    c.require(lab::is_abelian(A, 3).witness == lab::abelian_via_hyperquasi(A, 3).witness,
              "term condition and hyper-quasi form disagree");
}

void derived_path_agreement(Check& c) {
  gen::Random rng;
  const auto sig = zoo::binary_signature("f");
  for (int i = 0; i < 500 && c.problem.empty(); ++i) {
    const auto A = rng.algebra(sig, rng.between(1, 3));
    const auto M = rng.monoid(A, 4);
    const auto q = rng.quasi(sig, 3, 2, 2);
    const auto direct = satisfies_M_hyper_quasi_identity(A, M, q);
    const auto derived = satisfies_M_hyper_quasi_identity_via_derived(A, M, q);
    c.require(direct == derived, "verdicts differ on instance " + std::to_string(i));
    if (direct.holds() || direct != derived) continue;
    const auto& w = *direct.witness;
    const auto& s = M[w.member];
    bool premises = true;
    for (const auto& p : q.premises())
      premises = premises && oracle::eval(A, apply_hyper(s, p.lhs), w.assignment) ==
                                 oracle::eval(A, apply_hyper(s, p.rhs), w.assignment);
    const auto D = derived_algebra(A, s);
    c.require(premises, "witness premises fail on instance " + std::to_string(i));
    c.require(oracle::eval(D, q.conclusion().lhs, w.assignment) != oracle::eval(D, q.conclusion().rhs, w.assignment),
              "witness conclusion holds on instance " + std::to_string(i));
  }
}

void evaluation_lemma(Check& c) {
  gen::Random rng;
  const Signature sig({{"f", 2}, {"g", 1}, {"c", 0}});
  for (int i = 0; i < 500 && c.problem.empty(); ++i) {
    const auto A = rng.algebra(sig, rng.between(1, 3));
    const auto s1 = rng.hypersub(sig), s2 = rng.hypersub(sig);
    const auto t = rng.term(sig, 3, 3);
    const auto a = rng.assignment(A.size(), 3);
    c.require(oracle::eval(derived_algebra(A, s1), t, a) == oracle::eval(A, apply_hyper(s1, t), a),
              "evaluation lemma fails on instance " + std::to_string(i));
    c.require(derived_algebra(derived_algebra(A, s1), s2) == derived_algebra(A, compose(s1, s2)),
              "composition law fails on instance " + std::to_string(i));
  }
}

void operator_commutation(Check& c) {
  // Fixed instances.
  const auto L = zoo::two_element_lattice();
  const auto& ls = L.signature();
  const std::vector<Hypersubstitution> dual{
      Hypersubstitution(ls, {parse_term("join(x0,x1)", ls), parse_term("meet(x0,x1)", ls)})};
  c.require(lab::check_prop43_case(1, dual, {ls, {L}, {0}, std::nullopt, std::nullopt}).holds, "case 1 fixed");
  const auto Z2 = zoo::cyclic_group(2);
  const auto& zs = Z2.signature();
  const std::vector<Hypersubstitution> swap{image(zs, "plus(x1,x0)")};
  c.require(lab::check_prop43_case(2, swap, {zs, {Z2, Z2}, {}, std::nullopt, std::nullopt}).holds, "case 2 fixed");
  c.require(lab::check_prop43_case(5, swap,
                                   {zs, {Z2, Z2, Z2}, {}, FilterOnFiniteSet::generated_by(3, 0b011), std::nullopt})
                .holds,
            "case 5 fixed");

  gen::Random rng;
  const Signature sig({{"f", 2}, {"g", 1}});
  auto family = [&](std::size_t lo) {
    std::vector<FiniteAlgebra> fam;
    const std::size_t n = rng.between(lo, 3);
    for (std::size_t j = 0; j < n; ++j) fam.push_back(rng.algebra(sig, rng.between(1, 3)));
    return fam;
  };
  for (int which = 1; which <= 8; ++which) {
    int checked = 0;
    for (int attempt = 0; checked < 50 && attempt < 1000; ++attempt) {
      lab::OperatorInstance inst{sig, {}, {}, std::nullopt, std::nullopt};
      if (which == 1) {
        inst.family = {rng.algebra(sig, rng.between(1, 3))};
        inst.generators = {static_cast<Element>(rng.below(inst.family[0].size()))};
      } else if (which <= 3) {
        inst.family = family(which == 2 ? 1 : 0);
      } else if (which == 4) {
        inst.family = family(1);
        const auto size = product_indexer(inst.family).size();
        for (int g = 0; g < 2; ++g) inst.generators.push_back(static_cast<Element>(rng.below(size)));
        const auto sub = subalgebra_generated(direct_product(inst.family), inst.generators);
        if (!is_subdirect(sub.algebra, inst.family, sub.embedding)) continue;
      } else if (which <= 6) {
        inst.family = family(1);
        const std::size_t n = inst.family.size();
        inst.filter = which == 6 ? FilterOnFiniteSet::principal(n, rng.below(n))
                                 : FilterOnFiniteSet::generated_by(n, static_cast<IndexSet>(rng.between(1, (1u << n) - 1)));
      } else {
        inst.spectrum = rng.spectrum(sig, 3, which == 8);
        if (which == 8 && !is_superdirect(*inst.spectrum)) continue;
      }
      std::vector<Hypersubstitution> sigmas;
      for (int k = 0; k < 3; ++k) sigmas.push_back(rng.hypersub(sig));
      const auto r = lab::check_prop43_case(which, sigmas, inst);
      c.require(r.holds, r.detail);
      ++checked;
    }
    c.require(checked >= 50, std::string("too few instances for ") + lab::operator_case_name(which));
  }
}

void constructions(Check& c) {
  const std::vector<FiniteAlgebra> fam{zoo::cyclic_group(2), zoo::cyclic_group(3), zoo::cyclic_group(4)};
  c.require(isomorphic(reduced_product(fam, FilterOnFiniteSet::trivial(3)).algebra, direct_product(fam)),
            "trivial-filter reduced product is not the direct product");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = ultraproduct(fam, FilterOnFiniteSet::principal(3, i));
    c.require(isomorphic(r.algebra, fam[i]), "ultraproduct at " + std::to_string(i) + " is not the factor");
    // Every choice of representatives gives the same class.
    const auto P = direct_product(fam);
    for (Element a = 0; a < P.size(); ++a)
      for (Element b = 0; b < P.size(); ++b) {
        const Element ab = P.apply(0, std::vector<Element>{a, b});
        c.require(r.class_of[ab] == r.algebra.apply(0, std::vector<Element>{r.class_of[a], r.class_of[b]}),
                  "reduced product operation depends on representatives");
      }
  }
  const DirectSpectrum s({{true, true}, {false, true}}, {zoo::cyclic_group(4), zoo::cyclic_group(2)},
                         {{{0, 1}, {0, 1, 0, 1}}});
  const auto lim = direct_limit(s);
  c.require(isomorphic(lim.algebra, zoo::cyclic_group(2)), "Z4 -> Z2 limit is not Z2");
  // Recompute every cell through every common upper bound.
  const std::size_t n = lim.algebra.size();
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (std::size_t j = 0; j < s.size(); ++j) {
        const auto [i1, a1] = lim.representative[x];
        const auto [i2, a2] = lim.representative[y];
        if (!s.leq(i1, j) || !s.leq(i2, j)) continue;
        const Element v = s.algebra(j).apply(0, std::vector<Element>{s.map(i1, j)[a1], s.map(i2, j)[a2]});
        c.require(lim.injection[j][v] == lim.algebra.apply(0, std::vector<Element>{x, y}),
                  "direct limit operation depends on the upper bound");
      }
}

void reduction_remarks(Check& c) {
  const auto sig = zoo::binary_signature("plus");
  const auto id_only = HyperMonoid::explicit_members(sig, {Hypersubstitution::identity(sig)});
  gen::Random rng;
  std::vector<FiniteAlgebra> corpus{zoo::cyclic_group(1, "plus"),     zoo::cyclic_group(2, "plus"),
                                    zoo::cyclic_group(3, "plus"),     zoo::left_zero_band(2, "plus"),
                                    zoo::right_zero_band(2, "plus"),  zoo::rectangular_band(2, 2, "plus"),
                                    zoo::constant_groupoid(2, 0, "plus")};
  for (const auto& A : corpus)
    for (int i = 0; i < 40; ++i) {
      const auto q = rng.quasi(sig);
      const auto classical = satisfies_quasi_identity(A, q);
      const auto hyper = satisfies_M_hyper_quasi_identity(A, id_only, q);
      const bool same = classical.holds() == hyper.holds() &&
                        (classical.holds() || *classical.counterexample == hyper.witness->assignment);
      c.require(same, "M = {id} differs from classical satisfaction");
    }
  const auto Z2 = zoo::cyclic_group(2);
  const QuasiIdentity cancel(VarContext{3}, {parse_equation("plus(x0,x1)=plus(x0,x2)", sig)},
                             parse_equation("x1=x2", sig));
  c.require(satisfies_quasi_identity(Z2, cancel).holds(), "cancellation fails classically on Z2");
  const auto swap = HyperMonoid::explicit_members(sig, {Hypersubstitution::identity(sig), image(sig, "plus(x1,x0)")});
  c.require(satisfies_M_hyper_quasi_identity(Z2, swap, cancel).holds(), "cancellation fails for {id, swap}");
  const auto all = all_hypersubstitutions_mod(Z2);
  const auto v = satisfies_M_hyper_quasi_identity(Z2, all, cancel);
  c.require(!v.holds(), "cancellation holds for all-mod");
  if (!v.holds()) {
    c.require(all[v.witness->member].image(0) == Term::var(0), "all-mod witness is not the projection x0");
    c.require(v.witness->assignment == Assignment{0, 0, 1}, "all-mod witness assignment is not (0,0,1)");
  }
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "clone counts", 1, clone_counts},
      {2, "medial hyperidentity on Z2 and Z3", 1, medial},
      {3, "semidistributive hyper-quasi-identity on N5, L2, M3", 1, semidistributive_hyperquasi},
      {4, "semidistributivity and corpus soundness", 5, semidistributivity},
      {5, "abelianness and its hyper-quasi form", 10, abelian},
      {6, "direct sweep vs derived algebras, 500 random instances", 20, derived_path_agreement},
      {7, "evaluation lemma and composition law, 500 random instances", 10, evaluation_lemma},
      {8, "derived algebras commute with class operators, cases 1-8", 20, operator_commutation},
      {9, "reduced products, ultraproducts, direct limits", 5, constructions},
      {10, "identity monoid and cancellation examples", 1, reduction_remarks},
  };
  std::cout << "seed " << gen::seed() << "\n";
  bool all = true;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (check.problem.empty() && secs > cr.budget_seconds) {
      std::ostringstream msg;
      msg << "over the " << cr.budget_seconds << " s budget";
      check.problem = msg.str();
    }
    const bool ok = check.problem.empty();
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << cr.number << " " << cr.name << " (" << std::fixed
              << std::setprecision(3) << secs << " s)";
    if (!ok) std::cout << ": " << check.problem;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}

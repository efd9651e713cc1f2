#pragma once

// Command-line front end. run() takes the arguments after the program name
// and returns the exit code: 0 holds / built, 1 fails, 2 usage or input error.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "halg/clone.hpp"
#include "halg/constructions.hpp"
#include "halg/hyper.hpp"
#include "halg/lab.hpp"
#include "halg/satisfaction.hpp"
#include "halg/structure.hpp"
#include "halg/text.hpp"
#include "halg/workspace.hpp"

namespace halg::cli {

struct Options {
  std::vector<std::string> files;
  std::size_t max_arity = lab::kDefaultMaxArity;
  std::size_t clone_cap = kDefaultCloneCap;
  std::size_t depth_cap = kDefaultDepthCap;
  std::optional<std::size_t> arity;
  std::string monoid = "all";
  std::string filter;
  std::string gens;
};

namespace detail {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string compact(const Term& t, const Signature& sig) {
  auto s = format_term(t, sig);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

inline std::string tuple(std::span<const Element> a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

inline std::string list(std::span<const Element> a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + "]";
}

inline void print_algebra(std::ostream& out, const std::string& name, const std::string& sig_name,
                          const FiniteAlgebra& A) {
  out << "algebra " << name << " : " << sig_name << " {\n  size " << A.size() << "\n";
  for (std::size_t f = 0; f < A.signature().size(); ++f)
    out << "  op " << A.signature().name(f) << " = " << list(A.table(f)) << "\n";
  out << "}\n";
}

inline void print_images(std::ostream& out, const Hypersubstitution& s) {
  const auto& sig = s.signature();
  for (std::size_t f = 0; f < sig.size(); ++f) out << "IMAGE-v1 " << sig.name(f) << " -> " << format_term(s.image(f), sig) << "\n";
}

inline int report_hyper(std::ostream& out, const HyperMonoid& M, const HyperVerdict& v) {
  if (v.holds()) {
    out << "HOLDS\n";
    return 0;
  }
  out << "FAILS\nWITNESS-v1 sigma=" << M.label(v.witness->member) << " assign=" << tuple(v.witness->assignment) << "\n";
  print_images(out, M[v.witness->member]);
  return 1;
}

inline std::vector<Element> parse_numbers(const std::string& text) {
  std::vector<Element> out;
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ',') c = ' ';
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) {
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw UsageError("not a number: '" + tok + "'");
    out.push_back(static_cast<Element>(std::stoul(tok)));
  }
  return out;
}

/// "trivial", "principal:i" or explicit member sets "{0,1};{0,1,2}".
inline FilterOnFiniteSet parse_filter(const std::string& text, std::size_t index_size) {
  if (index_size > kMaxIndexSetSize) throw UsageError("index set too large for filters");
  if (text.empty()) throw UsageError("this command needs --filter");
  if (text == "trivial") return FilterOnFiniteSet::trivial(index_size);
  if (text.rfind("principal:", 0) == 0) {
    const auto pts = parse_numbers(text.substr(10));
    if (pts.size() != 1 || pts[0] >= index_size) throw UsageError("bad principal filter '" + text + "'");
    return FilterOnFiniteSet::principal(index_size, pts[0]);
  }
  std::vector<IndexSet> members;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ';')) {
    IndexSet s = 0;
    for (auto i : parse_numbers(part)) {
      if (i >= index_size) throw UsageError("filter member mentions index " + std::to_string(i) + " outside I");
      s |= IndexSet{1} << i;
    }
    members.push_back(s);
  }
  FilterOnFiniteSet f(index_size, members);
  const auto report = validate_filter(f);
  if (!report.ok()) throw UsageError("--filter is not a filter on " + std::to_string(index_size) + " indices");
  return f;
}

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    for (const auto& f : opt.files) ws_.load_file(f);
  }

  const FiniteAlgebra& algebra(const std::string& name) const { return ws_.algebra(name); }

  std::vector<FiniteAlgebra> family(const std::vector<std::string>& names) const {
    std::vector<FiniteAlgebra> out;
    for (const auto& n : names) {
      out.push_back(ws_.algebra(n));
      if (out.back().signature() != out.front().signature())
        throw UsageError("signature mismatch: '" + n + "' and '" + names.front() + "'");
    }
    return out;
  }

  std::string sig_name(const std::string& algebra) const { return ws_.algebra_entry(algebra).signature; }

  std::size_t arity_for(std::initializer_list<const Term*> terms) const {
    if (opt_.arity) return *opt_.arity;
    std::size_t k = 0;
    for (auto t : terms) k = std::max(k, t->var_bound());
    return k;
  }

  HyperMonoid monoid_for(const FiniteAlgebra& A) const {
    const auto& m = opt_.monoid;
    if (m == "all") return all_hypersubstitutions_mod(A, opt_.clone_cap);
    if (m == "id") return HyperMonoid::explicit_members(A.signature(), {Hypersubstitution::identity(A.signature())});
    if (m.rfind("closure:", 0) == 0) {
      std::vector<Hypersubstitution> gens;
      std::istringstream in(m.substr(8));
      std::string g;
      while (std::getline(in, g, ','))
        gens.push_back(g == "id" ? Hypersubstitution::identity(A.signature()) : ws_.hypersub(g).sigma);
      if (gens.empty()) throw UsageError("closure: needs at least one generator");
      return monoid_closure(gens, std::nullopt, opt_.depth_cap);
    }
    const auto& M = ws_.monoid(m).monoid;
    M.check_usable_with(A);
    return M;
  }

  int check_id(const std::string& alg, const std::string& eq_text) {
    const auto& A = algebra(alg);
    const auto eq = parse_equation(eq_text, A.signature());
    const auto v = satisfies_identity(A, eq.lhs, eq.rhs, VarContext{arity_for({&eq.lhs, &eq.rhs})});
    return report_classical(v);
  }

  int check_quasi(const std::string& alg, const std::string& quasi) {
    const auto& A = algebra(alg);
    const auto& q = ws_.quasi(quasi).quasi;
    q.check_signature(A.signature());
    return report_classical(satisfies_quasi_identity(A, q));
  }

  int hyper_check(const std::string& alg, const std::string& formula) {
    const auto& A = algebra(alg);
    const auto M = monoid_for(A);
    if (ws_.has_quasi(formula)) {
      const auto& q = ws_.quasi(formula).quasi;
      q.check_signature(A.signature());
      return report_hyper(out_, M, satisfies_M_hyper_quasi_identity(A, M, q));
    }
    const auto eq = parse_equation(formula, A.signature());
    return report_hyper(out_, M,
                        satisfies_M_hyperidentity(A, M, eq.lhs, eq.rhs, VarContext{arity_for({&eq.lhs, &eq.rhs})}));
  }

  int derive(const std::string& alg, const std::string& sigma) {
    const auto& A = algebra(alg);
    print_algebra(out_, alg + "_" + sigma, sig_name(alg), derived_algebra(A, ws_.hypersub(sigma).sigma));
    return 0;
  }

  int clone(const std::string& alg) {
    const auto& A = algebra(alg);
    const std::size_t k = opt_.arity.value_or(2);
    const auto set = k == 0 ? enumerate_ground_operations(A, opt_.clone_cap)
                            : enumerate_term_operations(A, k, opt_.clone_cap);
    std::size_t width = 1;
    for (std::size_t top = A.size() - 1; top >= 16; top /= 16) ++width;
    for (auto i : set.sorted_by_table()) {
      std::ostringstream hex;
      hex << std::hex << std::setfill('0');
      for (auto v : set[i].table) hex << std::setw(static_cast<int>(width)) << v;
      out_ << hex.str() << "  " << format_term(set[i].witness, A.signature()) << "\n";
    }
    return 0;
  }

  int product(const std::vector<std::string>& names) {
    const auto fam = family(names);
    print_algebra(out_, "product", sig_name(names.front()), direct_product(fam));
    return 0;
  }

  int subalgebra(const std::string& alg) {
    const auto& A = algebra(alg);
    const auto sub = subalgebra_generated(A, parse_numbers(opt_.gens));
    print_algebra(out_, alg + "_sub", sig_name(alg), sub.algebra);
    out_ << "EMBEDDING-v1 " << list(sub.embedding) << "\n";
    return 0;
  }

  int reduced(const std::vector<std::string>& names, bool ultra) {
    const auto fam = family(names);
    const auto filter = parse_filter(opt_.filter, fam.size());
    const auto r = ultra ? ultraproduct(fam, filter) : reduced_product(fam, filter);
    print_algebra(out_, ultra ? "ultraproduct" : "reduced_product", sig_name(names.front()), r.algebra);
    out_ << "CLASS-OF-v1 " << list(r.class_of) << "\n";
    return 0;
  }

  int limit(const std::string& name) {
    const auto& entry = ws_.spectrum(name);
    const auto L = direct_limit(entry.spectrum);
    print_algebra(out_, name + "_limit", entry.signature, L.algebra);
    for (std::size_t i = 0; i < L.injection.size(); ++i) out_ << "INJECTION-v1 " << i << " " << list(L.injection[i]) << "\n";
    out_ << "SUPERDIRECT-v1 " << (is_superdirect(entry.spectrum) ? "yes" : "no") << "\n";
    return 0;
  }

  int abelian(const std::string& alg, bool hyperquasi) {
    const auto& A = algebra(alg);
    const auto v = hyperquasi ? lab::abelian_via_hyperquasi(A, opt_.max_arity, opt_.clone_cap)
                              : lab::is_abelian(A, opt_.max_arity, opt_.clone_cap);
    out_ << (v.abelian() ? "HOLDS" : "FAILS") << "\nBOUND-v1 max-arity=" << v.arity_bound << "\n";
    if (v.abelian()) return 0;
    const auto& w = *v.witness;
    out_ << "WITNESS-v1 term=" << compact(w.term, A.signature()) << " arity=" << w.arity << " u=" << w.u
         << " v=" << w.v << " x=" << tuple(w.xs) << " y=" << tuple(w.ys) << "\n";
    return 1;
  }

  int sd(const std::string& alg) {
    const auto v = lab::semidistributivity(algebra(alg));
    out_ << (v.semidistributive() ? "HOLDS" : "FAILS") << "\n";
    if (!v.join.holds()) out_ << "WITNESS-v1 law=join assign=" << tuple(*v.join.counterexample) << "\n";
    if (!v.meet.holds()) out_ << "WITNESS-v1 law=meet assign=" << tuple(*v.meet.counterexample) << "\n";
    return v.semidistributive() ? 0 : 1;
  }

  int prop23(const std::string& alg) {
    const auto& L = algebra(alg);
    const auto r = lab::check_prop23(L, opt_.clone_cap);
    if (r.holds()) {
      out_ << "HOLDS\n";
      return 0;
    }
    const auto [F, G] = lab::prop23_images(L, r);
    out_ << "FAILS\nWITNESS-v1 F=" << compact(F, L.signature()) << " G=" << compact(G, L.signature())
         << " assign=" << tuple(r.verdict.witness->assignment) << "\n";
    return 1;
  }

  int medial(const std::string& alg) {
    const auto r = lab::check_medial(algebra(alg), opt_.clone_cap);
    return report_hyper(out_, r.monoid, r.verdict);
  }

  int rb(const std::string& alg) {
    const auto r = lab::check_rb_hyperidentities(algebra(alg), opt_.max_arity, opt_.clone_cap);
    out_ << (r.holds() ? "HOLDS" : "FAILS") << "\nBOUND-v1 max-arity=" << opt_.max_arity << "\n";
    if (r.holds()) return 0;
    static const char* const laws[] = {"idempotent", "first", "last"};
    const auto& M = r.failure->monoid;
    const auto& w = *r.failure->verdict.witness;
    const auto& sig = r.checked_in->signature();
    const auto F = *sig.first_of_arity(*r.failing_arity);
    out_ << "WITNESS-v1 arity=" << *r.failing_arity << " law=" << laws[r.failing_law] << " sigma=" << M.label(w.member)
         << " assign=" << tuple(w.assignment) << "\n";
    out_ << "IMAGE-v1 " << sig.name(F) << " -> " << format_term(M[w.member].image(F), sig) << "\n";
    return 1;
  }

  int derived_closed(const std::vector<std::string>& names) {
    const auto K = family(names);
    std::optional<HyperMonoid> M;
    if (opt_.monoid != "all") M = monoid_for(K.front());
    if (M)
      for (const auto& A : K) M->check_usable_with(A);
    const auto v = lab::check_derived_closed(K, M, opt_.clone_cap);
    if (v.closed()) {
      out_ << "HOLDS\n";
      return 0;
    }
    const auto& e = *v.escape;
    const std::string label = M ? M->label(e.member) : std::to_string(e.member);
    out_ << "FAILS\nWITNESS-v1 algebra=" << names[e.algebra] << " sigma=" << label << "\n";
    print_images(out_, e.sigma);
    return 1;
  }

  int prop43(int which, const std::vector<std::string>& names) {
    if (which < 1 || which > 8) throw UsageError("case must be between 1 and 8");
    if (names.empty()) throw UsageError("case " + std::to_string(which) + " needs arguments");
    std::optional<lab::OperatorInstance> inst;
    if (which >= 7) {
      if (names.size() != 1) throw UsageError("cases 7 and 8 take one spectrum");
      const auto& sp = ws_.spectrum(names.front());
      inst = lab::OperatorInstance{sp.spectrum.signature(), sp.spectrum.algebras(), {}, std::nullopt, sp.spectrum};
    } else {
      auto fam = family(names);
      const Signature sig = fam.front().signature();
      std::optional<FilterOnFiniteSet> filter;
      if (which == 5 || which == 6) filter = parse_filter(opt_.filter, fam.size());
      inst = lab::OperatorInstance{sig, std::move(fam), parse_numbers(opt_.gens), filter, std::nullopt};
    }
    const FiniteAlgebra& ref = inst->spectrum ? inst->spectrum->algebra(0) : algebra(names.front());
    const auto M = opt_.monoid == "all" ? all_hypersubstitutions_mod(ref, opt_.clone_cap) : monoid_for(ref);
    const auto r = lab::check_prop43_case(which, M.members(), *inst);
    out_ << (r.holds ? "HOLDS" : "FAILS") << "\nREPORT-v1 " << r.detail << "\n";
    return r.holds ? 0 : 1;
  }

 private:
  int report_classical(const Verdict& v) {
    if (v.holds()) {
      out_ << "HOLDS\n";
      return 0;
    }
    out_ << "FAILS\nWITNESS-v1 assign=" << tuple(*v.counterexample) << "\n";
    return 1;
  }

  const Options& opt_;
  std::ostream& out_;
  Workspace ws_;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"halg: finite universal algebra workbench", "halg"};
  app.fallthrough();
  app.require_subcommand(1);
  Options opt;
  app.add_option("-f,--file", opt.files, "workbench file to load (repeatable)")->take_all();
  app.add_option("--max-arity", opt.max_arity, "arity bound for abelian and rectangular-band checks")
      ->capture_default_str();
  app.add_option("--clone-cap", opt.clone_cap, "maximum number of term operations to enumerate")->capture_default_str();
  app.add_option("--depth-cap", opt.depth_cap, "word-length bound for syntactic monoid closure")->capture_default_str();
  app.add_option("--arity", opt.arity, "number of variables (check-id, hyper-check) or clone arity");
  app.add_option("--monoid", opt.monoid,
                 "all | id | closure:h1,h2,... | NAME of a monoid block")
      ->capture_default_str();
  app.add_option("--filter", opt.filter, "trivial | principal:i | {0,1};{0,1,2};...");
  app.add_option("--gens", opt.gens, "generators, e.g. 0,2 (product elements in mixed radix for prop43 case 4)");

  std::string a1, a2;
  std::vector<std::string> names;
  int which = 0;
  auto* check_id = app.add_subcommand("check-id", "check an identity LHS=RHS in an algebra");
  check_id->add_option("algebra", a1)->required();
  check_id->add_option("equation", a2)->required();
  auto* check_quasi = app.add_subcommand("check-quasi", "check a named quasi-identity");
  check_quasi->add_option("algebra", a1)->required();
  check_quasi->add_option("quasi", a2)->required();
  auto* hyper = app.add_subcommand("hyper-check", "M-hyper-check a named quasi-identity or an equation");
  hyper->add_option("algebra", a1)->required();
  hyper->add_option("formula", a2)->required();
  auto* derive = app.add_subcommand("derive", "print the derived algebra A^sigma");
  derive->add_option("algebra", a1)->required();
  derive->add_option("hypersub", a2)->required();
  auto* clone = app.add_subcommand("clone", "list the term operations of a given --arity (default 2)");
  clone->add_option("algebra", a1)->required();
  auto* product = app.add_subcommand("product", "direct product");
  product->add_option("algebras", names)->required();
  auto* sub = app.add_subcommand("subalgebra", "subalgebra generated by --gens");
  sub->add_option("algebra", a1)->required();
  auto* reduced = app.add_subcommand("reduced-product", "reduced product over --filter");
  reduced->add_option("algebras", names)->required();
  auto* ultra = app.add_subcommand("ultraproduct", "ultraproduct over --filter");
  ultra->add_option("algebras", names)->required();
  auto* limit = app.add_subcommand("direct-limit", "direct limit of a spectrum");
  limit->add_option("spectrum", a1)->required();

  auto* lab = app.add_subcommand("lab", "checks of results about hyper-quasi-identities");
  lab->require_subcommand(1);
  auto* abelian = lab->add_subcommand("abelian", "term condition up to --max-arity");
  abelian->add_option("algebra", a1)->required();
  auto* abelian_hq = lab->add_subcommand("abelian-hq", "abelianness as a pair of hyper-quasi-identities");
  abelian_hq->add_option("algebra", a1)->required();
  auto* sd = lab->add_subcommand("sd", "join and meet semidistributivity");
  sd->add_option("lattice", a1)->required();
  auto* prop23 = lab->add_subcommand("prop23", "semidistributive hyper-quasi-identity over all F, G");
  prop23->add_option("lattice", a1)->required();
  auto* medial = lab->add_subcommand("medial", "medial hyperidentity over all binary images");
  medial->add_option("algebra", a1)->required();
  auto* rb = lab->add_subcommand("rb", "rectangular-band hyperidentities up to --max-arity");
  rb->add_option("algebra", a1)->required();
  auto* closed = lab->add_subcommand("derived-closed", "is the class closed under derived algebras");
  closed->add_option("algebras", names)->required();
  auto* prop43 = lab->add_subcommand("prop43", "derived algebras versus a class operator (case 1-8)");
  prop43->add_option("case", which)->required()->check(CLI::Range(1, 8));
  prop43->add_option("names", names, "algebras (cases 1-6) or one spectrum (cases 7, 8)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    detail::Runner r(opt, out);
    if (*check_id) return r.check_id(a1, a2);
    if (*check_quasi) return r.check_quasi(a1, a2);
    if (*hyper) return r.hyper_check(a1, a2);
    if (*derive) return r.derive(a1, a2);
    if (*clone) return r.clone(a1);
    if (*product) return r.product(names);
    if (*sub) return r.subalgebra(a1);
    if (*reduced) return r.reduced(names, false);
    if (*ultra) return r.reduced(names, true);
    if (*limit) return r.limit(a1);
    if (*abelian) return r.abelian(a1, false);
    if (*abelian_hq) return r.abelian(a1, true);
    if (*sd) return r.sd(a1);
    if (*prop23) return r.prop23(a1);
    if (*medial) return r.medial(a1);
    if (*rb) return r.rb(a1);
    if (*closed) return r.derived_closed(names);
    if (*prop43) return r.prop43(which, names);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace halg::cli

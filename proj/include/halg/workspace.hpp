#pragma once

// Named entities loaded from workbench files.
//
//   signature G { plus/2, zero/0 }
//   algebra Z2 : G { size 2  op plus = [0,1,1,0]  op zero = [0] }
//   term t : G = plus(x0, x1)
//   quasi cancel : G { plus(x0,x1) = plus(x0,x2) => x1 = x2 }
//   quasi comm : G { arity 2  plus(x0,x1) = plus(x1,x0) }
//   hypersub swap : G { plus -> plus(x1, x0) }
//   monoid M : G { id, swap }
//   monoid Mz : G mod Z2 { id, dup }
//   monoid All : G all-mod Z2
//   spectrum L : G { poset 0<=1  algebra 0 = Z4  algebra 1 = Z2  map 0->1 = [0,1,0,1] }
//
// Blocks may appear in any order across files, but a block can only refer to
// entities declared before it.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "halg/algebra.hpp"
#include "halg/constructions.hpp"
#include "halg/error.hpp"
#include "halg/hyper.hpp"
#include "halg/satisfaction.hpp"
#include "halg/text.hpp"

namespace halg {

class Workspace {
 public:
  struct AlgebraEntry {
    std::string signature;
    FiniteAlgebra algebra;
  };
  struct TermEntry {
    std::string signature;
    Term term;
  };
  struct QuasiEntry {
    std::string signature;
    QuasiIdentity quasi;
  };
  struct HypersubEntry {
    std::string signature;
    Hypersubstitution sigma;
  };
  struct MonoidEntry {
    std::string signature;
    HyperMonoid monoid;
    std::optional<std::string> all_mod;  // reference algebra of an all-mod monoid
  };
  struct SpectrumEntry {
    std::string signature;
    DirectSpectrum spectrum;
  };

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    load_source(buf.str(), path);
  }

  /// Parse errors are reported as origin:line:column; validation errors name
  /// the entity.
  void load_source(std::string_view src, const std::string& origin = "<input>") {
    try {
      Lexer lex(src);
      while (!lex.at_end()) block(lex);
    } catch (const LoadError&) {
      throw;
    } catch (const ParseError& e) {
      throw LoadError(origin, e);
    } catch (const Error& e) {
      throw Error(origin + ": " + e.what());
    }
  }

  const Signature& signature(const std::string& name) const { return lookup(signatures_, name, "signature"); }
  const AlgebraEntry& algebra_entry(const std::string& name) const { return lookup(algebras_, name, "algebra"); }
  const FiniteAlgebra& algebra(const std::string& name) const { return algebra_entry(name).algebra; }
  const TermEntry& term(const std::string& name) const { return lookup(terms_, name, "term"); }
  const QuasiEntry& quasi(const std::string& name) const { return lookup(quasis_, name, "quasi-identity"); }
  const HypersubEntry& hypersub(const std::string& name) const { return lookup(hypersubs_, name, "hypersubstitution"); }
  const MonoidEntry& monoid(const std::string& name) const { return lookup(monoids_, name, "monoid"); }
  const SpectrumEntry& spectrum(const std::string& name) const { return lookup(spectra_, name, "spectrum"); }

  bool has_quasi(const std::string& name) const { return quasis_.count(name) != 0; }
  bool has_term(const std::string& name) const { return terms_.count(name) != 0; }

  /// Name under which `sig` was declared (first match).
  std::string signature_name(const Signature& sig) const {
    for (const auto& [name, s] : signatures_)
      if (s == sig) return name;
    throw Error("signature is not declared in the workspace");
  }

  std::size_t signature_count() const { return signatures_.size(); }
  std::size_t algebra_count() const { return algebras_.size(); }
  std::size_t monoid_count() const { return monoids_.size(); }
  std::size_t spectrum_count() const { return spectra_.size(); }

 private:
  template <class Map>
  static const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end()) throw Error(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
  }

  template <class Map, class Value>
  static void insert(Map& m, const std::string& name, const char* kind, Value&& v, const Token& at) {
    if (m.count(name)) throw ParseError(at.line, at.column, std::string("duplicate ") + kind + " '" + name + "'");
    m.emplace(name, std::forward<Value>(v));
  }

  // Wraps a validation failure so the message names the entity.
  template <class Fn>
  static auto validated(const char* kind, const std::string& name, Fn&& fn) {
    try {
      return fn();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(std::string(kind) + " " + name + ": " + e.what());
    }
  }

  void block(Lexer& lex) {
    const Token head = lex.peek();
    const std::string kw = lex.expect_ident();
    if (kw == "signature") return signature_block(lex, head);
    if (kw == "algebra") return algebra_block(lex, head);
    if (kw == "term") return term_block(lex, head);
    if (kw == "quasi") return quasi_block(lex, head);
    if (kw == "hypersub") return hypersub_block(lex, head);
    if (kw == "monoid") return monoid_block(lex, head);
    if (kw == "spectrum") return spectrum_block(lex, head);
    throw ParseError(head.line, head.column, "unknown block '" + kw + "'");
  }

  // NAME : SIG
  std::pair<std::string, std::string> header(Lexer& lex) {
    std::string name = lex.expect_ident();
    lex.expect(":");
    const Token at = lex.peek();
    std::string sig = lex.expect_ident();
    if (!signatures_.count(sig)) throw ParseError(at.line, at.column, "unknown signature '" + sig + "'");
    return {std::move(name), std::move(sig)};
  }

  std::vector<Element> value_list(Lexer& lex) {
    std::vector<Element> out;
    lex.expect("[");
    if (!lex.accept("]")) {
      do {
        out.push_back(static_cast<Element>(lex.expect_number()));
      } while (lex.accept(","));
      lex.expect("]");
    }
    return out;
  }

  void signature_block(Lexer& lex, const Token& at) {
    const std::string name = lex.expect_ident();
    std::vector<OperationSymbol> symbols;
    lex.expect("{");
    if (!lex.accept("}")) {
      do {
        std::string sym = lex.expect_ident();
        lex.expect("/");
        symbols.push_back({std::move(sym), lex.expect_number()});
      } while (lex.accept(","));
      lex.expect("}");
    }
    insert(signatures_, name, "signature", validated("signature", name, [&] { return Signature(symbols); }), at);
  }

  void algebra_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    const Signature& sig = signatures_.at(sig_name);
    lex.expect("{");
    lex.expect_keyword("size");
    const std::size_t size = lex.expect_number();
    std::vector<std::optional<Table>> tables(sig.size());
    while (!lex.accept("}")) {
      lex.expect_keyword("op");
      const Token sym_at = lex.peek();
      const std::string sym = lex.expect_ident();
      auto f = sig.find(sym);
      if (!f) throw ParseError(sym_at.line, sym_at.column, "symbol '" + sym + "' is not in signature " + sig_name);
      if (tables[*f]) throw ParseError(sym_at.line, sym_at.column, "second table for '" + sym + "'");
      lex.expect("=");
      tables[*f] = value_list(lex);
    }
    auto algebra = validated("algebra", name, [&, &sig = sig] {
      std::vector<Table> ts;
      for (std::size_t f = 0; f < sig.size(); ++f) {
        if (!tables[f]) throw Error("no table for '" + sig.name(f) + "'");
        ts.push_back(std::move(*tables[f]));
      }
      return FiniteAlgebra(sig, size, std::move(ts));
    });
    insert(algebras_, name, "algebra", AlgebraEntry{sig_name, std::move(algebra)}, at);
  }

  void term_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    lex.expect("=");
    Term t = parse_term(lex, signatures_.at(sig_name));
    insert(terms_, name, "term", TermEntry{sig_name, std::move(t)}, at);
  }

  void quasi_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    const Signature& sig = signatures_.at(sig_name);
    lex.expect("{");
    std::optional<std::size_t> arity;
    if (lex.is_keyword("arity")) {
      lex.next();
      arity = lex.expect_number();
    }
    std::vector<Equation> eqs{parse_equation(lex, sig)};
    bool implication = false;
    while (true) {
      if (lex.accept(",")) {
        if (implication) lex.fail("a quasi-identity has a single conclusion");
        eqs.push_back(parse_equation(lex, sig));
      } else if (lex.accept("=>")) {
        if (implication) lex.fail("a quasi-identity has a single '=>'");
        implication = true;
        eqs.push_back(parse_equation(lex, sig));
      } else {
        break;
      }
    }
    lex.expect("}");
    if (!implication && eqs.size() > 1) lex.fail("premises must be followed by '=>' and a conclusion");
    Equation conclusion = eqs.back();
    eqs.pop_back();
    std::size_t k = arity.value_or(0);
    if (!arity)
      for (const auto& e : eqs) k = std::max({k, e.lhs.var_bound(), e.rhs.var_bound()});
    if (!arity) k = std::max({k, conclusion.lhs.var_bound(), conclusion.rhs.var_bound()});
    auto q = validated("quasi", name, [&] { return QuasiIdentity(VarContext{k}, eqs, conclusion); });
    insert(quasis_, name, "quasi-identity", QuasiEntry{sig_name, std::move(q)}, at);
  }

  void hypersub_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    const Signature& sig = signatures_.at(sig_name);
    auto sigma = Hypersubstitution::identity(sig);
    std::vector<bool> seen(sig.size(), false);
    lex.expect("{");
    while (!lex.accept("}")) {
      const Token sym_at = lex.peek();
      const std::string sym = lex.expect_ident();
      auto f = sig.find(sym);
      if (!f) throw ParseError(sym_at.line, sym_at.column, "symbol '" + sym + "' is not in signature " + sig_name);
      if (seen[*f]) throw ParseError(sym_at.line, sym_at.column, "second image for '" + sym + "'");
      seen[*f] = true;
      lex.expect("->");
      Term image = parse_term(lex, sig);
      sigma = validated("hypersub", name, [&] { return sigma.with_image(*f, image); });
      lex.accept(",");
    }
    insert(hypersubs_, name, "hypersubstitution", HypersubEntry{sig_name, std::move(sigma)}, at);
  }

  void monoid_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    const Signature& sig = signatures_.at(sig_name);
    if (lex.is_keyword("all")) {
      lex.next();
      lex.expect("-");
      lex.expect_keyword("mod");
      const Token alg_at = lex.peek();
      const std::string alg = lex.expect_ident();
      if (!algebras_.count(alg)) throw ParseError(alg_at.line, alg_at.column, "unknown algebra '" + alg + "'");
      const auto& A = algebras_.at(alg).algebra;
      if (A.signature() != sig) throw ParseError(alg_at.line, alg_at.column, "algebra '" + alg + "' is not of type " + sig_name);
      auto M = validated("monoid", name, [&] { return all_hypersubstitutions_mod(A); });
      insert(monoids_, name, "monoid", MonoidEntry{sig_name, std::move(M), alg}, at);
      return;
    }
    std::optional<FiniteAlgebra> modulo;
    if (lex.is_keyword("mod")) {
      lex.next();
      const Token alg_at = lex.peek();
      const std::string alg = lex.expect_ident();
      if (!algebras_.count(alg)) throw ParseError(alg_at.line, alg_at.column, "unknown algebra '" + alg + "'");
      modulo = algebras_.at(alg).algebra;
      if (modulo->signature() != sig) throw ParseError(alg_at.line, alg_at.column, "algebra '" + alg + "' is not of type " + sig_name);
    }
    std::vector<Hypersubstitution> members;
    std::vector<std::string> labels;
    lex.expect("{");
    if (!lex.accept("}")) {
      do {
        const Token m_at = lex.peek();
        const std::string m = lex.expect_ident();
        if (m == "id") {
          members.push_back(Hypersubstitution::identity(sig));
        } else {
          auto it = hypersubs_.find(m);
          if (it == hypersubs_.end()) throw ParseError(m_at.line, m_at.column, "unknown hypersubstitution '" + m + "'");
          if (it->second.signature != sig_name && it->second.sigma.signature() != sig)
            throw ParseError(m_at.line, m_at.column, "hypersubstitution '" + m + "' is not of type " + sig_name);
          members.push_back(it->second.sigma);
        }
        labels.push_back(m);
      } while (lex.accept(","));
      lex.expect("}");
    }
    auto M = validated("monoid", name,
                       [&] { return HyperMonoid::explicit_members(sig, members, modulo, labels); });
    insert(monoids_, name, "monoid", MonoidEntry{sig_name, std::move(M), std::nullopt}, at);
  }

  void spectrum_block(Lexer& lex, const Token& at) {
    auto [name, sig_name] = header(lex);
    const Signature& sig = signatures_.at(sig_name);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::map<std::size_t, std::string> points;
    std::map<DirectSpectrum::MapKey, std::vector<Element>> maps;
    std::size_t p = 0;
    lex.expect("{");
    while (!lex.accept("}")) {
      const Token kw_at = lex.peek();
      const std::string kw = lex.expect_ident();
      if (kw == "poset") {
        do {
          const std::size_t i = lex.expect_number();
          lex.expect("<=");
          const std::size_t j = lex.expect_number();
          pairs.emplace_back(i, j);
          p = std::max({p, i + 1, j + 1});
        } while (lex.accept(","));
      } else if (kw == "algebra") {
        const std::size_t i = lex.expect_number();
        lex.expect("=");
        const Token alg_at = lex.peek();
        const std::string alg = lex.expect_ident();
        if (!algebras_.count(alg)) throw ParseError(alg_at.line, alg_at.column, "unknown algebra '" + alg + "'");
        if (algebras_.at(alg).algebra.signature() != sig)
          throw ParseError(alg_at.line, alg_at.column, "algebra '" + alg + "' is not of type " + sig_name);
        if (!points.emplace(i, alg).second)
          throw ParseError(kw_at.line, kw_at.column, "second algebra for point " + std::to_string(i));
        p = std::max(p, i + 1);
      } else if (kw == "map") {
        const std::size_t i = lex.expect_number();
        lex.expect("->");
        const std::size_t j = lex.expect_number();
        lex.expect("=");
        if (!maps.emplace(DirectSpectrum::MapKey{i, j}, value_list(lex)).second)
          throw ParseError(kw_at.line, kw_at.column, "second map for " + std::to_string(i) + "->" + std::to_string(j));
        p = std::max({p, i + 1, j + 1});
      } else {
        throw ParseError(kw_at.line, kw_at.column, "expected 'poset', 'algebra' or 'map', found '" + kw + "'");
      }
    }
    auto spectrum = validated("spectrum", name, [&] {
      std::vector<FiniteAlgebra> algebras;
      for (std::size_t i = 0; i < p; ++i) {
        auto it = points.find(i);
        if (it == points.end()) throw Error("no algebra for point " + std::to_string(i));
        algebras.push_back(algebras_.at(it->second).algebra);
      }
      for (auto [i, j] : pairs)
        if (i == j) throw Error("poset pair " + std::to_string(i) + "<=" + std::to_string(j) + " is not strict");
      const auto leq = closure(p, pairs);
      complete_maps(leq, maps);
      return DirectSpectrum(leq, std::move(algebras), std::move(maps));
    });
    insert(spectra_, name, "spectrum", SpectrumEntry{sig_name, std::move(spectrum)}, at);
  }

  static std::vector<std::vector<bool>> closure(std::size_t p, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<std::vector<bool>> leq(p, std::vector<bool>(p, false));
    for (std::size_t i = 0; i < p; ++i) leq[i][i] = true;
    for (auto [i, j] : pairs) leq[i][j] = true;
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
          if (leq[i][k] && leq[k][j]) leq[i][j] = true;
    return leq;
  }

  // Maps implied by the order but not given are composed from given ones.
  static void complete_maps(const std::vector<std::vector<bool>>& leq,
                            std::map<DirectSpectrum::MapKey, std::vector<Element>>& maps) {
    const std::size_t p = leq.size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          if (i == j || !leq[i][j] || maps.count({i, j})) continue;
          for (std::size_t k = 0; k < p; ++k) {
            if (k == i || k == j) continue;
            auto a = maps.find({i, k});
            auto b = maps.find({k, j});
            if (a == maps.end() || b == maps.end()) continue;
            std::vector<Element> c;
            for (auto v : a->second) {
              if (v >= b->second.size()) throw Error("map " + std::to_string(i) + "->" + std::to_string(k) + " leaves the codomain");
              c.push_back(b->second[v]);
            }
            maps.emplace(DirectSpectrum::MapKey{i, j}, std::move(c));
            changed = true;
            break;
          }
        }
    }
  }

  std::map<std::string, Signature> signatures_;
  std::map<std::string, AlgebraEntry> algebras_;
  std::map<std::string, TermEntry> terms_;
  std::map<std::string, QuasiEntry> quasis_;
  std::map<std::string, HypersubEntry> hypersubs_;
  std::map<std::string, MonoidEntry> monoids_;
  std::map<std::string, SpectrumEntry> spectra_;
};

}  // namespace halg

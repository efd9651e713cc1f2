#include <gtest/gtest.h>

#include <sstream>

#include "halg/cli.hpp"
#include "halg/workspace.hpp"

using namespace halg;

namespace {

const std::string kGroups = std::string(HALG_SAMPLES_DIR) + "/groups.halg";
const std::string kLattices = std::string(HALG_SAMPLES_DIR) + "/lattices.halg";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Result groups(std::vector<std::string> args) {
  args.insert(args.begin(), {"-f", kGroups});
  return run(std::move(args));
}

Result lattices(std::vector<std::string> args) {
  args.insert(args.begin(), {"-f", kLattices});
  return run(std::move(args));
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Workspace, LoadsSamples) {
  Workspace ws;
  ws.load_file(kGroups);
  ws.load_file(kLattices);
  EXPECT_EQ(ws.algebra("Z2").size(), 2u);
  EXPECT_EQ(ws.algebra("N5").size(), 5u);
  EXPECT_EQ(ws.monoid("Swap").monoid.size(), 2u);
  EXPECT_EQ(ws.monoid("AllZ2").monoid.size(), 4u);
  EXPECT_EQ(ws.spectrum("Mod2").spectrum.size(), 2u);
  EXPECT_TRUE(ws.has_quasi("cancel"));
  EXPECT_THROW(ws.algebra("nope"), Error);
}

TEST(Workspace, MinimalFile) {
  Workspace ws;
  ws.load_source("signature G { plus/2 }\nalgebra Z2 : G { size 2 op plus = [0,1,1,0] }\n", "mem");
  EXPECT_EQ(ws.algebra("Z2").table(0), (Table{0, 1, 1, 0}));
}

TEST(Workspace, ErrorsNameTheEntity) {
  Workspace ws;
  try {
    ws.load_source("signature G { plus/2 }\nalgebra Z2 : G { size 2 op plus = [0,1,1] }\n", "bad.halg");
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_TRUE(contains(msg, "Z2")) << msg;
    EXPECT_TRUE(contains(msg, "plus")) << msg;
  }
  try {
    Workspace w2;
    w2.load_source("signature G { plus/2 }\n"
                   "hypersub p1 : G { plus -> x0 }\n"
                   "hypersub swap : G { plus -> plus(x1,x0) }\n"
                   "monoid M : G { id, p1, swap }\n",
                   "m.halg");
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_TRUE(contains(msg, "not closed")) << msg;
    EXPECT_TRUE(contains(msg, "p1 o swap")) << msg;
  }
  try {
    Workspace w3;
    w3.load_source("signature G { plus/2 }\nalgebra A : G {\n  size 2\n  op plus = [0,1,1,0\n}\n", "p.halg");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.origin(), "p.halg");
    EXPECT_EQ(e.line(), 5u);
    EXPECT_TRUE(contains(e.what(), "p.halg:5:"));
  }
  Workspace w4;
  EXPECT_THROW(w4.load_source("signature G { plus/2 }\nalgebra A : H { size 1 op plus = [0] }\n", "s"), Error);
  EXPECT_THROW(w4.load_source("signature G { plus/2 }\nsignature G { plus/2 }\n", "d"), Error);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(groups({"check-id", "Z2", "plus(x0,x1)=plus(x1,x0)", "--arity", "2"}).code, 0);
  const auto lz = groups({"check-id", "LZ2", "plus(x0,x1)=plus(x1,x0)"});
  EXPECT_EQ(lz.code, 1);
  EXPECT_TRUE(contains(lz.out, "WITNESS-v1 assign=(0,1)"));
  EXPECT_EQ(groups({"check-quasi", "Z2", "cancel"}).code, 0);
  EXPECT_EQ(groups({"check-quasi", "LZ2", "cancel"}).code, 1);
  EXPECT_EQ(groups({"check-id", "Nope", "x0=x0"}).code, 2);
  EXPECT_EQ(groups({"check-id", "Z2", "plus(x0"}).code, 2);
  EXPECT_EQ(groups({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"-f", "/nonexistent.halg", "clone", "Z2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(groups({"check-quasi", "Z2", "sd_join"}).code, 2);
}

TEST(Cli, HyperCheck) {
  const auto all = groups({"hyper-check", "Z2", "cancel", "--monoid", "all"});
  EXPECT_EQ(all.code, 1);
  EXPECT_TRUE(contains(all.out, "FAILS\nWITNESS-v1 sigma=1 assign=(0,0,1)")) << all.out;
  EXPECT_TRUE(contains(all.out, "IMAGE-v1 plus -> x0")) << all.out;
  EXPECT_EQ(groups({"hyper-check", "Z2", "cancel", "--monoid", "Swap"}).code, 0);
  EXPECT_EQ(groups({"hyper-check", "Z2", "cancel", "--monoid", "id"}).code, 0);
  EXPECT_EQ(groups({"hyper-check", "Z3", "plus(plus(x0,x1),plus(x2,x3))=plus(plus(x0,x2),plus(x1,x3))"}).code, 0);
  EXPECT_EQ(groups({"hyper-check", "Z2", "comm", "--monoid", "closure:swap"}).code, 0);
  EXPECT_EQ(groups({"hyper-check", "Z2", "cancel", "--monoid", "Nope"}).code, 2);
}

TEST(Cli, Constructions) {
  const auto clone = groups({"clone", "Z3"});
  EXPECT_EQ(clone.code, 0);
  EXPECT_EQ(std::count(clone.out.begin(), clone.out.end(), '\n'), 9);
  EXPECT_TRUE(contains(clone.out, "012120201  plus(x0, x1)")) << clone.out;
  const auto l3 = lattices({"clone", "L2", "--arity", "3"});
  EXPECT_EQ(std::count(l3.out.begin(), l3.out.end(), '\n'), 18);

  const auto d = groups({"derive", "Z2", "p1"});
  EXPECT_EQ(d.code, 0);
  EXPECT_TRUE(contains(d.out, "op plus = [0,0,1,1]")) << d.out;

  const auto lim = groups({"direct-limit", "Mod2"});
  EXPECT_EQ(lim.code, 0);
  EXPECT_TRUE(contains(lim.out, "size 2"));
  EXPECT_TRUE(contains(lim.out, "INJECTION-v1 0 [0,1,0,1]"));
  EXPECT_TRUE(contains(lim.out, "SUPERDIRECT-v1 yes"));

  const auto sub = groups({"subalgebra", "Z4", "--gens", "2"});
  EXPECT_TRUE(contains(sub.out, "EMBEDDING-v1 [2,0]")) << sub.out;
  const auto prod = groups({"product", "Z2", "Z3"});
  EXPECT_TRUE(contains(prod.out, "size 6"));
  const auto red = groups({"reduced-product", "Z2", "Z2", "Z2", "--filter", "{0,1};{0,1,2}"});
  EXPECT_EQ(red.code, 0) << red.err;
  EXPECT_TRUE(contains(red.out, "size 4"));
  const auto ultra = groups({"ultraproduct", "Z2", "Z3", "Z4", "--filter", "principal:1"});
  EXPECT_EQ(ultra.code, 0);
  EXPECT_TRUE(contains(ultra.out, "size 3"));
  EXPECT_EQ(groups({"ultraproduct", "Z2", "Z2", "--filter", "trivial"}).code, 2);
  EXPECT_EQ(groups({"reduced-product", "Z2", "Z2", "--filter", "{0}"}).code, 2);
  EXPECT_EQ(run({"-f", kGroups, "-f", kLattices, "product", "Z2", "L2"}).code, 2);
}

TEST(Cli, Lab) {
  const auto p23 = lattices({"lab", "prop23", "M3"});
  EXPECT_EQ(p23.code, 1);
  EXPECT_TRUE(contains(p23.out, "WITNESS-v1 F=join(x0,x1) G=meet(x0,x1) assign=(1,2,3)")) << p23.out;
  EXPECT_EQ(lattices({"lab", "prop23", "N5"}).code, 0);
  const auto sd = lattices({"lab", "sd", "M3"});
  EXPECT_EQ(sd.code, 1);
  EXPECT_TRUE(contains(sd.out, "WITNESS-v1 law=join assign=(1,2,3)"));
  EXPECT_EQ(lattices({"lab", "sd", "N5"}).code, 0);
  const auto ab = lattices({"lab", "abelian", "L2"});
  EXPECT_EQ(ab.code, 1);
  EXPECT_TRUE(contains(ab.out, "WITNESS-v1 term=meet(x0,x1) arity=2 u=0 v=1 x=(0) y=(1)")) << ab.out;
  EXPECT_EQ(lattices({"lab", "abelian-hq", "L2"}).out, ab.out);
  const auto rb = groups({"lab", "abelian", "RB22"});
  EXPECT_EQ(rb.code, 0);
  EXPECT_TRUE(contains(rb.out, "BOUND-v1 max-arity=3"));
  EXPECT_EQ(groups({"lab", "rb", "RB22"}).code, 0);
  const auto z2rb = groups({"lab", "rb", "Z2"});
  EXPECT_EQ(z2rb.code, 1);
  EXPECT_TRUE(contains(z2rb.out, "law=idempotent")) << z2rb.out;
  EXPECT_TRUE(contains(z2rb.out, "IMAGE-v1 plus -> plus(x0, x1)")) << z2rb.out;
  EXPECT_EQ(groups({"lab", "medial", "Z3"}).code, 0);
  const auto dc = groups({"lab", "derived-closed", "Z2", "LZ2", "RZ2", "T1"});
  EXPECT_EQ(dc.code, 1);
  EXPECT_TRUE(contains(dc.out, "WITNESS-v1 algebra=Z2")) << dc.out;
  EXPECT_EQ(lattices({"lab", "derived-closed", "L2", "--monoid", "Duality"}).code, 0);
  EXPECT_EQ(groups({"lab", "prop43", "2", "Z2", "Z2", "--monoid", "Swap"}).code, 0);
  EXPECT_EQ(groups({"lab", "prop43", "5", "Z2", "Z2", "Z2", "--filter", "{0,1};{0,1,2}", "--monoid", "Swap"}).code, 0);
  EXPECT_EQ(groups({"lab", "prop43", "8", "Mod2"}).code, 0);
  EXPECT_EQ(groups({"lab", "prop43", "9", "Z2"}).code, 2);
  EXPECT_EQ(lattices({"lab", "sd", "Nope"}).code, 2);
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> commands{
      {"hyper-check", "Z2", "cancel", "--monoid", "all"}, {"clone", "Z4", "--arity", "2"}, {"direct-limit", "Chain"},
      {"lab", "derived-closed", "Z2", "LZ2", "RZ2", "T1"}};
  for (const auto& c : commands) {
    const auto a = groups(c), b = groups(c);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "tqo/fusion.hpp"
#include "tqo/group.hpp"

namespace tqo {
namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

TEST(Group, BuiltinAxioms) {
  const struct {
    const char* name;
    int order;
  } cases[] = {{"Z2", 2}, {"Z3", 3}, {"Z4", 4}, {"S3", 6}};
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    const FiniteGroup g = builtin_group(c.name);
    EXPECT_EQ(g.order, c.order);
    EXPECT_TRUE(validate_group(g).empty());
    for (int a = 0; a < g.order; ++a) {
      EXPECT_EQ(g.op(g.identity, a), a);
      EXPECT_EQ(g.op(a, g.identity), a);
      EXPECT_EQ(g.op(a, g.inv[a]), g.identity);
    }
  }
}

TEST(Group, Z2IsXor) {
  const FiniteGroup g = builtin_group("Z2");
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_EQ(g.op(a, b), a ^ b);
}

TEST(Group, CyclicIsAdditionModN) {
  const FiniteGroup g = cyclic_group(6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) EXPECT_EQ(g.op(a, b), (a + b) % 6);
  EXPECT_EQ(g.inv[2], 4);
  EXPECT_THROW(cyclic_group(0), InvalidInput);
}

TEST(Group, TrivialGroup) {
  const FiniteGroup g = cyclic_group(1);
  EXPECT_EQ(g.order, 1);
  EXPECT_EQ(g.identity, 0);
  EXPECT_EQ(g.op(0, 0), 0);
  EXPECT_TRUE(validate_group(g).empty());
  EXPECT_TRUE(is_abelian(g));
}

TEST(Group, AbelianFlags) {
  EXPECT_TRUE(is_abelian(builtin_group("Z2")));
  EXPECT_TRUE(is_abelian(builtin_group("Z3")));
  EXPECT_TRUE(is_abelian(builtin_group("Z4")));
  EXPECT_FALSE(is_abelian(builtin_group("S3")));
}

TEST(Group, S3ElementOrders) {
  const FiniteGroup g = builtin_group("S3");
  int involutions = 0, order3 = 0;
  for (int a = 0; a < 6; ++a) {
    if (a == g.identity) continue;
    if (g.op(a, a) == g.identity)
      ++involutions;
    else if (g.op(g.op(a, a), a) == g.identity)
      ++order3;
  }
  EXPECT_EQ(involutions, 3);
  EXPECT_EQ(order3, 2);
  EXPECT_NE(g.op(1, 2), g.op(2, 1));
}

TEST(Group, UnknownBuiltinThrows) {
  EXPECT_THROW(builtin_group("Q8"), InvalidInput);
}

TEST(Group, SaveGolden) {
  EXPECT_EQ(save_group(builtin_group("Z2")),
            "group Z2\norder 2\nmult\n0 1\n1 0\n");
}

TEST(Group, SaveLoadRoundTrip) {
  for (const char* name : {"Z2", "Z3", "Z4", "S3"}) {
    SCOPED_TRACE(name);
    const FiniteGroup g = builtin_group(name);
    const FiniteGroup h = load_group(save_group(g));
    EXPECT_EQ(g, h);
    EXPECT_EQ(save_group(g), save_group(h));
  }
}

TEST(Group, LoadRejectsNonAssociativeTable) {
  // Has a two-sided unit and inverses but (1*1)*2 != 1*(1*2).
  const std::string text = "group bad\norder 3\nmult\n0 1 2\n1 0 0\n2 0 0\n";
  try {
    load_group(text);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("associativity"), std::string::npos)
        << e.what();
  }
}

TEST(Group, LoadRejectsMalformedInput) {
  EXPECT_THROW(load_group(""), InvalidInput);
  EXPECT_THROW(load_group("group g\norder 2\nmult\n0 1\n1\n"), InvalidInput);
  EXPECT_THROW(load_group("group g\norder 2\nmult\n0 5\n1 0\n"), InvalidInput);
  EXPECT_THROW(load_group("group g\norder 0\nmult\n"), InvalidInput);
}

TEST(Group, FileRoundTrip) {
  const std::string path = testing::TempDir() + "/s3.group";
  save_group_file(builtin_group("S3"), path);
  EXPECT_EQ(load_group_file(path), builtin_group("S3"));
  EXPECT_THROW(load_group_file(testing::TempDir() + "/does-not-exist.group"),
               InvalidInput);
}

TEST(Fusion, BuiltinsSatisfyAllInvariants) {
  for (const char* name : {"VecZ2", "VecZ3", "Fibonacci"}) {
    SCOPED_TRACE(name);
    const FusionData fd = builtin_fusion(name);
    const auto violations = validate_fusion(fd);
    EXPECT_TRUE(violations.empty())
        << (violations.empty() ? "" : violations.front());
  }
  EXPECT_THROW(builtin_fusion("Ising"), InvalidInput);
}

TEST(Fusion, VecZnIsGroupAddition) {
  const FusionData fd = builtin_fusion("VecZ3");
  EXPECT_EQ(fd.nlabels, 3);
  EXPECT_EQ(fd.unit, 0);
  EXPECT_EQ(fd.dual[1], 2);
  EXPECT_EQ(fd.dual[2], 1);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(fd.qdim[a], 1.0);
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        EXPECT_EQ(fd.N(a, b, c), c == (a + b) % 3 ? 1 : 0);
  }
  EXPECT_EQ(fd.fsymbol.size(), 27u);
  for (const auto& [key, value] : fd.fsymbol)
    EXPECT_EQ(value, std::complex<double>(1.0));
  EXPECT_EQ(builtin_fusion("VecZ2").fsymbol.size(), 8u);
}

TEST(Fusion, FibonacciData) {
  const FusionData fd = builtin_fusion("Fibonacci");
  EXPECT_EQ(fd.nlabels, 2);
  EXPECT_EQ(fd.unit, 0);
  EXPECT_EQ(fd.dual, (std::vector<int>{0, 1}));
  EXPECT_NEAR(fd.qdim[1], kPhi, 1e-15);
  EXPECT_NEAR(fd.total_dim_sq, 1.0 + kPhi * kPhi, 1e-14);
  EXPECT_EQ(fd.N(1, 1, 0), 1);
  EXPECT_EQ(fd.N(1, 1, 1), 1);
  EXPECT_EQ(fd.N(0, 1, 0), 0);
  EXPECT_EQ(fd.fsymbol.size(), 15u);

  EXPECT_NEAR(fd.F(1, 1, 1, 1, 0, 0).real(), 1.0 / kPhi, 1e-15);
  EXPECT_NEAR(fd.F(1, 1, 1, 1, 0, 1).real(), 1.0 / std::sqrt(kPhi), 1e-15);
  EXPECT_NEAR(fd.F(1, 1, 1, 1, 1, 0).real(), 1.0 / std::sqrt(kPhi), 1e-15);
  EXPECT_NEAR(fd.F(1, 1, 1, 1, 1, 1).real(), -1.0 / kPhi, 1e-15);
  // Unit-containing entries are all 1 in this gauge.
  for (const auto& [key, value] : fd.fsymbol) {
    const uint64_t tau4 = FusionData::pack6(1, 1, 1, 1, 0, 0) & ~0xffffull;
    if ((key & ~0xffffull) != tau4) EXPECT_EQ(value, std::complex<double>(1.0));
  }
}

TEST(Fusion, DualIsInvolution) {
  for (const char* name : {"VecZ2", "VecZ3", "Fibonacci"}) {
    const FusionData fd = builtin_fusion(name);
    for (int a = 0; a < fd.nlabels; ++a) EXPECT_EQ(fd.dual[fd.dual[a]], a);
  }
}

TEST(Fusion, InadmissibleLookupIsZero) {
  const FusionData fib = builtin_fusion("Fibonacci");
  EXPECT_EQ(fib.F(0, 0, 0, 0, 1, 1), std::complex<double>(0.0));
  const FusionData z2 = builtin_fusion("VecZ2");
  EXPECT_EQ(z2.F(1, 1, 0, 1, 0, 0), std::complex<double>(0.0));
}

TEST(Fusion, MissingAdmissibleEntryThrows) {
  FusionData fd = builtin_fusion("Fibonacci");
  fd.fsymbol.erase(FusionData::pack6(1, 1, 1, 1, 1, 1));
  EXPECT_THROW(fd.F(1, 1, 1, 1, 1, 1), InvalidInput);
  EXPECT_THROW(pentagon_check(fd), InvalidInput);
  bool mentioned = false;
  for (const auto& v : validate_fusion(fd))
    if (v.find("missing F-symbol") != std::string::npos) mentioned = true;
  EXPECT_TRUE(mentioned);
}

TEST(Fusion, PentagonResiduals) {
  EXPECT_EQ(pentagon_check(builtin_fusion("VecZ2")), 0.0);
  EXPECT_EQ(pentagon_check(builtin_fusion("VecZ3")), 0.0);
  EXPECT_LE(pentagon_check(builtin_fusion("Fibonacci")), 1e-12);
}

TEST(Fusion, PentagonDetectsSignFlip) {
  FusionData fd = builtin_fusion("Fibonacci");
  auto& entry = fd.fsymbol.at(FusionData::pack6(1, 1, 1, 1, 1, 1));
  entry = -entry;
  EXPECT_GT(pentagon_check(fd), 0.1);
}

TEST(Fusion, SaveLoadRoundTrip) {
  for (const char* name : {"VecZ2", "VecZ3", "Fibonacci"}) {
    SCOPED_TRACE(name);
    const FusionData fd = builtin_fusion(name);
    const FusionData ld = load_fusion(save_fusion(fd));
    EXPECT_EQ(ld.name, fd.name);
    EXPECT_EQ(ld.nlabels, fd.nlabels);
    EXPECT_EQ(ld.unit, fd.unit);
    EXPECT_EQ(ld.dual, fd.dual);
    EXPECT_EQ(ld.qdim, fd.qdim);  // %.17g keeps doubles bit-exact
    EXPECT_EQ(ld.fusion_table, fd.fusion_table);
    EXPECT_EQ(ld.fsymbol.size(), fd.fsymbol.size());
    for (const auto& [key, value] : fd.fsymbol)
      EXPECT_EQ(ld.fsymbol.at(key), value);
    EXPECT_EQ(save_fusion(ld), save_fusion(fd));
  }
}

TEST(Fusion, SaveIsDeterministic) {
  EXPECT_EQ(save_fusion(builtin_fusion("Fibonacci")),
            save_fusion(builtin_fusion("Fibonacci")));
}

TEST(Fusion, LoadRejectsWrongQuantumDimension) {
  FusionData fd = builtin_fusion("Fibonacci");
  fd.qdim[1] = 1.6;
  try {
    load_fusion(save_fusion(fd));
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("dimension"), std::string::npos)
        << e.what();
  }
}

TEST(Fusion, LoadRejectsUnitaryButPentagonViolatingData) {
  // Replace the tau^4 block by the identity matrix: every F-matrix stays
  // unitary but the pentagon equation breaks.
  FusionData fd = builtin_fusion("Fibonacci");
  fd.fsymbol[FusionData::pack6(1, 1, 1, 1, 0, 0)] = 1.0;
  fd.fsymbol[FusionData::pack6(1, 1, 1, 1, 0, 1)] = 0.0;
  fd.fsymbol[FusionData::pack6(1, 1, 1, 1, 1, 0)] = 0.0;
  fd.fsymbol[FusionData::pack6(1, 1, 1, 1, 1, 1)] = 1.0;
  bool unitary_ok = true;
  for (const auto& v : validate_fusion(fd))
    if (v.find("unitarity") != std::string::npos) unitary_ok = false;
  EXPECT_TRUE(unitary_ok);
  try {
    load_fusion(save_fusion(fd));
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("pentagon"), std::string::npos)
        << e.what();
  }
}

TEST(Fusion, LoadRejectsNonUnitaryData) {
  FusionData fd = builtin_fusion("VecZ2");
  fd.fsymbol[FusionData::pack6(1, 1, 1, 1, 0, 0)] = 2.0;
  try {
    load_fusion(save_fusion(fd));
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("unitarity"), std::string::npos)
        << e.what();
  }
}

TEST(Fusion, LoadRejectsMalformedInput) {
  EXPECT_THROW(load_fusion(""), InvalidInput);
  EXPECT_THROW(load_fusion("fusion x\nunit 0\n"), InvalidInput);
  EXPECT_THROW(load_fusion("fusion x\nlabels 1\nunit 3\n"), InvalidInput);
  EXPECT_THROW(load_fusion("fusion x\nlabels 2\nwhat 1\n"), InvalidInput);
}

TEST(Fusion, FileRoundTrip) {
  const std::string path = testing::TempDir() + "/fib.fusion";
  save_fusion_file(builtin_fusion("Fibonacci"), path);
  const FusionData ld = load_fusion_file(path);
  EXPECT_EQ(save_fusion(ld), save_fusion(builtin_fusion("Fibonacci")));
}

}  // namespace
}  // namespace tqo

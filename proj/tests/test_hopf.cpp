#include <catch2/catch_amalgamated.hpp>

#include "feynhopf/hopf.hpp"
#include "test_support.hpp"

using namespace feynhopf;
using namespace fixtures;

static TheorySpec qym = preset("qym");
static TheorySpec phi3 = preset("phi3");

namespace {

FeynmanGraph phi3_rainbow() {
  FeynmanGraph g;
  g.vertices = {"s3", "s3", "s3", "s3"};
  g.edges = {{"s", 0, 1}, {"s", 1, 2}, {"s", 1, 2}, {"s", 2, 3}, {"s", 0, 3}};
  g.externals = {{"s", 0}, {"s", 3}};
  return g;
}

FeynmanGraph phi3_kite() {
  FeynmanGraph g;
  g.vertices = {"s3", "s3", "s3", "s3"};
  g.edges = {{"s", 0, 1}, {"s", 0, 2}, {"s", 1, 2}, {"s", 1, 3}, {"s", 2, 3}};
  g.externals = {{"s", 0}, {"s", 3}};
  return g;
}

FeynmanGraph phi3_corolla() {
  FeynmanGraph g;
  g.vertices = {"s3"};
  g.externals = {{"s", 0}, {"s", 0}, {"s", 0}};
  return g;
}

FeynmanGraph qym_ghost_se() {
  FeynmanGraph g;
  g.vertices = {"ccA3", "ccA3"};
  g.edges = {{"c", 0, 1, true}, {"A", 0, 1}};
  g.externals = {{"c", 0, +1}, {"c", 1, -1}};
  return g;
}

FeynmanGraph qym_ghost_se_2loop() {
  FeynmanGraph g;
  g.vertices = {"ccA3", "A3", "A3", "ccA3"};
  g.edges = {{"c", 0, 3, true}, {"A", 0, 1}, {"A", 1, 2}, {"A", 1, 2}, {"A", 2, 3}};
  g.externals = {{"c", 0, +1}, {"c", 3, -1}};
  return g;
}

Rat tcoeff(const TensorSum& t, const Monomial& a, const Monomial& b) {
  auto it = t.terms.find(std::vector<Monomial>{a, b});
  return it == t.terms.end() ? Rat(0) : it->second;
}

}  // namespace

TEST_CASE("formal sum arithmetic") {
  FormalSum a = FormalSum::of({"x"}, 2) + FormalSum::of({"y"}, -1);
  FormalSum b = FormalSum::of({"x"});
  CHECK((a * b).coeff({"x", "x"}) == 2);
  CHECK((a * b).coeff({"x", "y"}) == -1);
  CHECK((a - a).is_zero());
  CHECK(FormalSum::unit() * a == a);
  CHECK(mono_mul({"y"}, {"x"}) == Monomial{"x", "y"});
}

TEST_CASE("one loop generators are primitive") {
  HopfAlgebra H(phi3);
  for (auto g : {phi3_bubble(), phi3_triangle()}) {
    auto k = H.intern(g);
    const auto& d = H.coproduct_generator(k);
    CHECK(d.terms.size() == 2);
    CHECK(tcoeff(d, {}, {k}) == 1);
    CHECK(tcoeff(d, {k}, {}) == 1);
    CHECK(H.antipode_generator(k) == FormalSum::of({k}, -1));
  }
  HopfAlgebra G(qym);
  for (auto g : {qym_gluon_bubble(), qym_ghost_bubble(), qym_seagull(), qym_ghost_se()}) {
    auto k = G.intern(g);
    CHECK(G.coproduct_generator(k).terms.size() == 2);
    CHECK(G.antipode_generator(k) == FormalSum::of({k}, -1));
  }
}

TEST_CASE("rainbow coproduct has one nested term") {
  HopfAlgebra H(phi3);
  auto kR = H.intern(phi3_rainbow());
  auto kB = H.intern(phi3_bubble());
  const auto& d = H.coproduct_generator(kR);
  CHECK(d.terms.size() == 3);
  CHECK(tcoeff(d, {kB}, {kB}) == 1);
  FormalSum s = H.antipode_generator(kR);
  CHECK(s.coeff({kR}) == -1);
  CHECK(s.coeff({kB, kB}) == 1);
  CHECK(s.terms.size() == 2);
}

TEST_CASE("kite coproduct counts both wings") {
  HopfAlgebra H(phi3);
  auto kK = H.intern(phi3_kite());
  auto kT = H.intern(phi3_triangle());
  auto kB = H.intern(phi3_bubble());
  const auto& d = H.coproduct_generator(kK);
  CHECK(d.terms.size() == 3);
  CHECK(tcoeff(d, {kT}, {kB}) == 2);
  FormalSum s = H.antipode_generator(kK);
  CHECK(s.coeff({kK}) == -1);
  CHECK(s.coeff({kB, kT}) == 2);
}

TEST_CASE("coproduct extends multiplicatively") {
  HopfAlgebra H(phi3);
  auto kB = H.intern(phi3_bubble());
  TensorSum d = H.coproduct(Monomial{kB, kB});
  CHECK(tcoeff(d, {kB}, {kB}) == 2);
  CHECK(tcoeff(d, {}, {kB, kB}) == 1);
  CHECK(tcoeff(d, {kB, kB}, {}) == 1);
  CHECK(d.terms.size() == 3);

  CHECK(H.antipode(FormalSum::of({kB, kB})) == FormalSum::of({kB, kB}));
  CHECK(H.counit(FormalSum::unit()) == 1);
  CHECK(H.counit(FormalSum::of({kB})) == 0);
}

TEST_CASE("antipode is an involution here") {
  HopfAlgebra H(phi3);
  for (auto g : {phi3_bubble(), phi3_rainbow(), phi3_kite()}) {
    auto k = H.intern(g);
    FormalSum s = H.antipode_generator(k);
    CHECK(H.antipode(s) == FormalSum::of({k}));
  }
}

TEST_CASE("classed mode identifies leg orderings") {
  Profile four;
  four.legs = {{"s", 0}, {"s", 0}, {"s", 0}, {"s", 0}};
  EnumOptions opt;
  opt.one_pi_only = true;
  HopfAlgebra H(phi3);

  auto trees = enumerate_graphs(phi3, four, opt);
  std::set<std::string> fixed, classed;
  opt.max_loops = 1;
  auto all = enumerate_graphs(phi3, four, opt);
  for (const auto& g : all) {
    if (graph_loops(g) != 1) continue;
    fixed.insert(canonical_key(phi3, g));
    classed.insert(H.intern(g));
  }
  CHECK(fixed.size() == 3);   // one box per leg ordering
  CHECK(classed.size() == 1);
  CHECK(trees.empty());       // trees are not 1PI
}

TEST_CASE("hopf axioms hold on small generator sets") {
  HopfAlgebra H(phi3);
  auto gens = hopf_generators(H, 2);
  CHECK(gens.size() >= 6);
  for (const auto& k : gens) {
    INFO(k);
    CHECK(H.check_counit(k));
    CHECK(H.check_coassociativity(k));
    CHECK(H.check_antipode(k));
  }
  // loop grading is additive across every coproduct term
  for (const auto& k : gens) {
    int total = graph_loops(H.rep(k));
    for (const auto& [s, c] : H.coproduct_generator(k).terms) {
      int l = 0;
      for (const auto& f : s[0]) l += graph_loops(H.rep(f));
      for (const auto& f : s[1]) l += graph_loops(H.rep(f));
      CHECK(l == total);
    }
  }

  HopfAlgebra G(qym);
  auto qgens = hopf_generators(G, 1);
  std::set<std::string> qset(qgens.begin(), qgens.end());
  CHECK(qset.count(G.intern(qym_seagull())) == 1);
  CHECK(qset.count(G.intern(qym_gluon_bubble())) == 1);
  CHECK(qset.count(G.intern(qym_ghost_se())) == 1);
  int three_gluon = 0;
  for (const auto& k : qgens) {
    const auto& r = G.rep(k);
    if (r.n_legs() == 3 && r.externals[0].color == "A" && r.externals[1].color == "A" &&
        r.externals[2].color == "A")
      ++three_gluon;
    INFO(k);
    CHECK(G.check_counit(k));
    CHECK(G.check_coassociativity(k));
    CHECK(G.check_antipode(k));
  }
  CHECK(three_gluon == 4);
}

TEST_CASE("axioms on a nested gauge self energy") {
  HopfAlgebra G(qym);
  auto k = G.intern(qym_ghost_se_2loop());
  auto kB = G.intern(qym_gluon_bubble());
  auto kSE = G.intern(qym_ghost_se());
  CHECK(G.check_counit(k));
  CHECK(G.check_coassociativity(k));
  CHECK(G.check_antipode(k));
  FormalSum s = G.antipode_generator(k);
  CHECK(s.coeff({k}) == -1);
  CHECK(s.coeff({kB, kSE}) == 1);
}

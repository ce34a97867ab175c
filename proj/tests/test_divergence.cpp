#include <catch2/catch_amalgamated.hpp>

#include "feynhopf/divergence.hpp"
#include "test_support.hpp"

using namespace feynhopf;
using namespace fixtures;

static TheorySpec qym = preset("qym");
static TheorySpec phi3 = preset("phi3");

namespace {

// rainbow: inner bubble nested on one line of an outer bubble
FeynmanGraph phi3_rainbow() {
  FeynmanGraph g;
  g.vertices = {"s3", "s3", "s3", "s3"};
  g.edges = {{"s", 0, 1}, {"s", 1, 2}, {"s", 1, 2}, {"s", 2, 3}, {"s", 0, 3}};
  g.externals = {{"s", 0}, {"s", 3}};
  return g;
}

// kite: bubble with one vertex blown up into a triangle
FeynmanGraph phi3_kite() {
  FeynmanGraph g;
  g.vertices = {"s3", "s3", "s3", "s3"};
  g.edges = {{"s", 0, 1}, {"s", 0, 2}, {"s", 1, 2}, {"s", 1, 3}, {"s", 2, 3}};
  g.externals = {{"s", 0}, {"s", 3}};
  return g;
}

// ghost self energy with a gluon bubble inserted on its gauge line
FeynmanGraph qym_ghost_se_2loop() {
  FeynmanGraph g;
  g.vertices = {"ccA3", "A3", "A3", "ccA3"};
  g.edges = {{"c", 0, 3, true}, {"A", 0, 1}, {"A", 1, 2}, {"A", 1, 2}, {"A", 2, 3}};
  g.externals = {{"c", 0, +1}, {"c", 3, -1}};
  return g;
}

FeynmanGraph qym_ghost_se() {
  FeynmanGraph g;
  g.vertices = {"ccA3", "ccA3"};
  g.edges = {{"c", 0, 1, true}, {"A", 0, 1}};
  g.externals = {{"c", 0, +1}, {"c", 1, -1}};
  return g;
}

std::string key(const TheorySpec& t, const FeynmanGraph& g) { return canonical_key(t, g); }

}  // namespace

TEST_CASE("one loop primitives have no proper divergent subsets") {
  CHECK(divergent_subsets(phi3, phi3_bubble()).empty());
  CHECK(divergent_subsets(phi3, phi3_triangle()).empty());
  CHECK(divergent_subsets(phi3, phi3_theta()).empty());
  CHECK(divergent_subsets(phi3, phi3_snail()).empty());
  CHECK(divergent_subsets(qym, qym_gluon_bubble()).empty());
  CHECK(divergent_subsets(qym, qym_ghost_bubble()).empty());
  CHECK(divergent_subsets(qym, qym_seagull()).empty());
  CHECK(divergent_subsets(qym, qym_candy()).empty());
}

TEST_CASE("subgraph components carry full corollas") {
  auto g = qym_gluon_bubble();
  auto parts = subgraph_components(g, {0});
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].vertices.size() == 2);
  CHECK(parts[0].edges.size() == 1);
  REQUIRE(parts[0].externals.size() == 4);
  for (const auto& x : parts[0].externals) {
    CHECK(x.color == "A");
    CHECK(x.dir == 0);
  }
  CHECK_FALSE(is_1pi(parts[0]));  // single cut edge is a bridge

  auto h = qym_ghost_se_2loop();
  auto hp = subgraph_components(h, {1, 2, 3});
  REQUIRE(hp.size() == 1);
  REQUIRE(hp[0].externals.size() == 3);
  // parent external first, then cut legs in edge order: the ghost line leaves
  // the component at its tail, the far gauge edge hangs unoriented
  CHECK(hp[0].externals[0].color == "c");
  CHECK(hp[0].externals[0].dir == +1);
  CHECK(hp[0].externals[1].color == "c");
  CHECK(hp[0].externals[1].dir == -1);
  CHECK(hp[0].externals[2].color == "A");
  CHECK(hp[0].externals[2].dir == 0);

  auto two = subgraph_components(phi3_rainbow(), {0, 3});
  CHECK(two.size() == 2);
}

TEST_CASE("rainbow self energy has a single divergent subset") {
  auto g = phi3_rainbow();
  auto subs = divergent_subsets(phi3, g);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0] == std::vector<int>{1, 2});

  auto parts = subgraph_components(g, subs[0]);
  REQUIRE(parts.size() == 1);
  CHECK(key(phi3, parts[0]) == key(phi3, phi3_bubble()));

  auto co = contract_subgraph(phi3, g, subs[0]);
  REQUIRE(co.has_value());
  CHECK(key(phi3, *co) == key(phi3, phi3_bubble()));
  CHECK(is_cograph_divergent(phi3, g, subs[0]));
  CHECK(graph_loops(parts[0]) + graph_loops(*co) == graph_loops(g));
}

TEST_CASE("kite vertex correction contracts from both wings") {
  auto g = phi3_kite();
  auto subs = divergent_subsets(phi3, g);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0] == std::vector<int>{0, 1, 2});
  CHECK(subs[1] == std::vector<int>{2, 3, 4});
  for (const auto& s : subs) {
    auto parts = subgraph_components(g, s);
    REQUIRE(parts.size() == 1);
    CHECK(key(phi3, parts[0]) == key(phi3, phi3_triangle()));
    auto co = contract_subgraph(phi3, g, s);
    REQUIRE(co.has_value());
    CHECK(key(phi3, *co) == key(phi3, phi3_bubble()));
  }
}

TEST_CASE("vertex collapse picks the matching vertex type") {
  // contracting one edge of the gauge bubble leaves a seagull
  auto co = contract_subgraph(qym, qym_gluon_bubble(), {0});
  REQUIRE(co.has_value());
  CHECK(key(qym, *co) == key(qym, qym_seagull()));

  // the ghost bubble needs a two-ghost-two-gauge vertex that does not exist
  CHECK_FALSE(contract_subgraph(qym, qym_ghost_bubble(), {0}).has_value());

  // full contraction keeps no vertex and is not a subset contraction
  CHECK_FALSE(contract_subgraph(qym, qym_gluon_bubble(), {0, 1}).has_value());
}

TEST_CASE("propagator fusion walks through wire chains") {
  auto g = qym_ghost_se_2loop();
  auto subs = divergent_subsets(qym, g);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0] == std::vector<int>{2, 3});

  auto parts = subgraph_components(g, subs[0]);
  REQUIRE(parts.size() == 1);
  CHECK(key(qym, parts[0]) == key(qym, qym_gluon_bubble()));

  auto co = contract_subgraph(qym, g, subs[0]);
  REQUIRE(co.has_value());
  CHECK(key(qym, *co) == key(qym, qym_ghost_se()));
  REQUIRE(co->externals.size() == 2);
  CHECK(co->externals[0].dir == +1);
  CHECK(co->externals[1].dir == -1);

  // collapsing the ghost corner with the bubble also lands on the self energy
  auto co2 = contract_subgraph(qym, g, {1, 2, 3});
  REQUIRE(co2.has_value());
  CHECK(key(qym, *co2) == key(qym, qym_ghost_se()));
}

TEST_CASE("superficial degree wrapper") {
  CHECK(omega(phi3, phi3_bubble()) == 2);
  CHECK(omega(phi3, phi3_triangle()) == 0);
  CHECK(omega(phi3, phi3_rainbow()) == 2);
  CHECK(omega(qym, qym_gluon_bubble()) == 2);
  CHECK(omega(qym, qym_ghost_se()) == 2);
  CHECK(omega(qym, qym_tree_3pt()) == 1);
}

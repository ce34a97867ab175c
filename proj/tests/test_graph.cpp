#include <catch2/catch_amalgamated.hpp>

#include "feynhopf/graph.hpp"
#include "test_support.hpp"

using namespace feynhopf;
using namespace fixtures;

static TheorySpec qym = preset("qym");
static TheorySpec phi3 = preset("phi3");

TEST_CASE("loops and connectivity") {
  CHECK(graph_loops(phi3_bubble()) == 1);
  CHECK(graph_loops(phi3_theta()) == 2);
  CHECK(graph_loops(phi3_triangle()) == 1);
  CHECK(graph_loops(phi3_tadpole()) == 1);
  CHECK(graph_loops(qym_tree_3pt()) == 0);
  CHECK(graph_loops(bare_line("s")) == 0);
  CHECK(graph_connected(phi3_bubble()));
  CHECK(graph_connected(bare_line("s")));

  FeynmanGraph two;
  two.vertices = {"s3", "s3"};
  two.edges = {{"s", 0, 0}, {"s", 1, 1}};
  two.externals = {{"s", 0}, {"s", 1}};
  CHECK_FALSE(graph_connected(two));
  CHECK(graph_loops(two) == 2);
}

TEST_CASE("one particle irreducibility") {
  CHECK(is_1pi(phi3_bubble()));
  CHECK(is_1pi(phi3_theta()));
  CHECK(is_1pi(phi3_tadpole()));
  CHECK(is_1pi(qym_tree_3pt()));  // no internal edge to cut
  CHECK(is_1pi(bare_line("A")));
  CHECK_FALSE(is_1pi(phi3_snail()));

  // two bubbles joined by a bridge: reducible but pendant free
  FeynmanGraph chain;
  chain.vertices = {"s3", "s3", "s3", "s3"};
  chain.edges = {{"s", 0, 1}, {"s", 0, 1}, {"s", 1, 2}, {"s", 2, 3}, {"s", 2, 3}};
  chain.externals = {{"s", 0}, {"s", 3}};
  CHECK(graph_connected(chain));
  CHECK_FALSE(is_1pi(chain));
  CHECK(is_pendant_free(chain));
  CHECK(graph_loops(chain) == 2);
}

TEST_CASE("pendant detection") {
  CHECK(is_pendant_free(phi3_bubble()));
  CHECK_FALSE(is_pendant_free(phi3_snail()));
  CHECK(is_pendant_free(bare_line("s")));
}

TEST_CASE("gradings") {
  auto n = leg_counts(qym, qym_ghost_bubble());
  CHECK(n == LegCounts{2, 0, 0});
  FeynmanGraph gt = qym_ghost_tadpole();
  CHECK(leg_counts(qym, gt) == LegCounts{1, 0, 0});

  FeynmanGraph ccv;
  ccv.vertices = {"ccA3"};
  ccv.externals = {{"A", 0, 0}, {"c", 0, +1}, {"c", 0, -1}};
  CHECK(leg_counts(qym, ccv) == LegCounts{1, 2, 0});

  CHECK(coupling_degree(qym, qym_gluon_bubble()) == 2);
  CHECK(coupling_degree(qym, qym_seagull()) == 2);
  CHECK(coupling_degree(qym, qym_candy()) == 4);
  CHECK(coupling_degree(phi3, phi3_theta()) == 2);
  CHECK(coupling_degree(qym, bare_line("A")) == 0);
  CHECK(coupling_order(qym, qym_candy()).at("g") == 4);
}

TEST_CASE("residue profiles") {
  Profile p = residue(qym_candy());
  CHECK(p.legs.size() == 4);
  CHECK(classify(qym, residue(qym_gluon_bubble())) == AmpClass::propagator_residue);
  FeynmanGraph ccv;
  ccv.vertices = {"ccA3"};
  ccv.externals = {{"A", 0, 0}, {"c", 0, +1}, {"c", 0, -1}};
  CHECK(classify(qym, residue(ccv)) == AmpClass::vertex_residue);
}

TEST_CASE("validity") {
  CHECK(is_valid(qym, qym_gluon_bubble()));
  CHECK(is_valid(qym, qym_ghost_bubble()));
  CHECK(is_valid(qym, qym_seagull()));
  CHECK(is_valid(qym, qym_ghost_tadpole()));
  CHECK(is_valid(qym, qym_candy()));
  CHECK(is_valid(qym, qym_tree_3pt()));
  CHECK(is_valid(phi3, phi3_bubble()));
  CHECK(is_valid(phi3, phi3_theta()));
  CHECK(is_valid(phi3, bare_line("s")));
  CHECK(is_valid(qym, bare_line("A")));

  SECTION("slot count violations") {
    FeynmanGraph g = qym_tree_3pt();
    g.externals.pop_back();
    CHECK_FALSE(is_valid(qym, g));
    g.externals.push_back({"A", 0});
    g.externals.push_back({"A", 0});
    CHECK_FALSE(is_valid(qym, g));
  }
  SECTION("ghost flow violations") {
    FeynmanGraph g = qym_ghost_bubble();
    g.edges[1] = {"c", 0, 1, true};  // both arrows the same way
    CHECK_FALSE(is_valid(qym, g));
  }
  SECTION("wrong color") {
    FeynmanGraph g = qym_gluon_bubble();
    g.edges[0].color = "c";
    CHECK_FALSE(is_valid(qym, g));
  }
  SECTION("direction on unoriented color") {
    FeynmanGraph g = qym_gluon_bubble();
    g.edges[0].directed = true;
    CHECK_FALSE(is_valid(qym, g));
  }
  SECTION("forgotten ghost orientation accepted on color counts") {
    FeynmanGraph g = qym_ghost_bubble();
    g.edges[0].directed = false;
    g.edges[1].directed = false;
    CHECK(is_valid(qym, g));
  }
  SECTION("mismatched bare line") {
    FeynmanGraph g = bare_line("A");
    g.externals[1].color = "c";
    CHECK_FALSE(is_valid(qym, g));
  }
}

TEST_CASE("text format round trip") {
  for (const FeynmanGraph& g :
       {phi3_bubble(), phi3_tadpole(), phi3_theta(), qym_ghost_bubble(),
        qym_seagull(), qym_ghost_tadpole(), qym_candy(), bare_line("A")}) {
    CHECK(parse_graph(print_graph(g)) == g);
  }

  FeynmanGraph ccv;
  ccv.vertices = {"ccA3"};
  ccv.externals = {{"A", 0, 0, 'L'}, {"c", 0, +1}, {"c", 0, -1}};
  std::string text = print_graph(ccv);
  CHECK(text.find("x 0 A 0 L") != std::string::npos);
  CHECK(text.find("x 1 c> 0") != std::string::npos);
  CHECK(text.find("x 2 c< 0") != std::string::npos);
  CHECK(parse_graph(text) == ccv);
}

TEST_CASE("text format errors") {
  CHECK_THROWS_AS(parse_graph("q 0 A3\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("v 1 A3\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("v 0 A3\ne 0 A 0 0 <\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("v 0 A3\nx 0 A 0 Q\n"), GraphError);
}

TEST_CASE("superficial degree") {
  CHECK(superficial_degree(qym, qym_gluon_bubble()) == 2);
  CHECK(superficial_degree(qym, qym_ghost_bubble()) == 2);
  CHECK(superficial_degree(qym, qym_seagull()) == 2);
  CHECK(superficial_degree(qym, qym_candy()) == 0);
  CHECK(superficial_degree(qym, qym_tree_3pt()) == 1);
  CHECK(superficial_degree(phi3, phi3_bubble()) == 2);
  CHECK(superficial_degree(phi3, phi3_triangle()) == 0);
  CHECK(superficial_degree(phi3, phi3_theta()) == 6 * 2 - 3 * 2);

  TheorySpec qgr = preset("qgr", 4);
  FeynmanGraph hb;
  hb.vertices = {"h3", "h3"};
  hb.edges = {{"h", 0, 1}, {"h", 0, 1}};
  hb.externals = {{"h", 0}, {"h", 1}};
  CHECK(superficial_degree(qgr, hb) == 4);  // 2 loops + 2 rule

  CHECK_THROWS_AS(superficial_degree(phi3, bare_line("s")), GraphError);
}

#include <cmath>

#include <doctest.h>

#include "certipose/dual_certifier.hpp"
#include "certipose/g2o_io.hpp"
#include "certipose/synthetic_bench.hpp"

using namespace certipose;

TEST_CASE("parse a minimal document") {
  const std::string text =
      "VERTEX_SE2 0 0 0 0\n"
      "VERTEX_SE2 1 1 0 0\n"
      "EDGE_SE2 0 1 1 0 0 1 0 0 1 0 1\n";
  const ParsedGraph parsed = parse_g2o(text);
  CHECK(parsed.graph.node_count == 2);
  REQUIRE(parsed.graph.edges.size() == 1);
  CHECK(parsed.graph.edges[0].tail == 0);
  CHECK(parsed.graph.edges[0].head == 1);
  CHECK(parsed.warnings.empty());
  REQUIRE(parsed.initial.has_value());
  CHECK(parsed.initial->poses[1].position.x() == doctest::Approx(1.0));
}

TEST_CASE("comments and blank lines are ignored; ids are remapped") {
  const std::string text =
      "# a comment\n"
      "\n"
      "VERTEX_SE2 10 0 0 0\n"
      "VERTEX_SE2 20 1 2 0.5\n"
      "EDGE_SE2 10 20 1 2 0.5 1 0 0 1 0 1\n";
  const ParsedGraph parsed = parse_g2o(text);
  CHECK(parsed.graph.node_count == 2);
  CHECK(parsed.original_ids == std::vector<int>{10, 20});
  CHECK(parsed.graph.edges[0].tail == 0);
  CHECK(parsed.graph.edges[0].head == 1);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_g2o("VERTEX_SE2 0 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_g2o("EDGE_SE2 0 1 1 0 0 1 0 0 1 0\n"), ParseError);
  CHECK_THROWS_AS(
      parse_g2o("VERTEX_SE2 0 0 0 0\nVERTEX_SE2 0 1 0 0\n"),
      DuplicateVertexError);
}

TEST_CASE("unknown tags warn by default and error when strict") {
  const std::string text =
      "VERTEX_SE2 0 0 0 0\n"
      "VERTEX_SE2 1 1 0 0\n"
      "EDGE_SE2 0 1 1 0 0 1 0 0 1 0 1\n"
      "VERTEX_SE3:QUAT 2 0 0 0 0 0 0 1\n";
  const ParsedGraph lenient = parse_g2o(text);
  REQUIRE(lenient.warnings.size() == 1);
  CHECK(lenient.graph.node_count == 2);

  ParseOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(parse_g2o(text, strict), UnknownTagError);
}

TEST_CASE("non-identity information warns by default and errors when strict") {
  const std::string text =
      "VERTEX_SE2 0 0 0 0\n"
      "VERTEX_SE2 1 1 0 0\n"
      "EDGE_SE2 0 1 1 0 0 500 0 0 500 0 5000\n";
  const ParsedGraph lenient = parse_g2o(text);
  REQUIRE(lenient.warnings.size() == 1);

  ParseOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(parse_g2o(text, strict), Error);
}

TEST_CASE("write then parse round-trips the fixture") {
  const GeneratedGraph fx = counterexample_fixture();
  const auto g = validate_graph(fx.graph);
  const std::string text = write_g2o(g, &fx.ground_truth);

  const ParsedGraph parsed = parse_g2o(text);
  REQUIRE(parsed.graph.node_count == 5);
  REQUIRE(parsed.graph.edges.size() == 5);
  for (size_t k = 0; k < fx.graph.edges.size(); ++k) {
    CHECK(parsed.graph.edges[k].tail == fx.graph.edges[k].tail);
    CHECK(parsed.graph.edges[k].head == fx.graph.edges[k].head);
    CHECK((parsed.graph.edges[k].delta - fx.graph.edges[k].delta).norm() <
          1e-12);
    CHECK(std::abs(parsed.graph.edges[k].angle - fx.graph.edges[k].angle) <
          1e-12);
  }

  // parse . write . parse is the identity on parsed documents.
  const std::string again =
      write_g2o(validate_graph(parsed.graph), &*parsed.initial);
  CHECK(text == again);
}

TEST_CASE("re-parsed fixture certifies identically") {
  const GeneratedGraph fx = counterexample_fixture();
  const auto g = validate_graph(fx.graph);
  const Certificate direct = certify(g);

  const ParsedGraph parsed = parse_g2o(write_g2o(g, &fx.ground_truth));
  const Certificate reparsed = certify(validate_graph(parsed.graph));

  CHECK(direct.status == reparsed.status);
  CHECK(direct.zero_count == reparsed.zero_count);
  CHECK(direct.dual_value ==
        doctest::Approx(reparsed.dual_value).epsilon(1e-9));
  CHECK(direct.primal_value ==
        doctest::Approx(reparsed.primal_value).epsilon(1e-9));
}

TEST_CASE("edge-only documents parse without an initial guess") {
  const std::string text =
      "EDGE_SE2 3 7 1 0 0.1 1 0 0 1 0 1\n"
      "EDGE_SE2 7 9 0 1 -0.2 1 0 0 1 0 1\n";
  const ParsedGraph parsed = parse_g2o(text);
  CHECK(parsed.graph.node_count == 3);
  CHECK_FALSE(parsed.initial.has_value());
  CHECK(parsed.original_ids == std::vector<int>{3, 7, 9});

  // Partially declared vertices also yield no initial guess.
  const ParsedGraph partial =
      parse_g2o("VERTEX_SE2 3 0 0 0\n" + text);
  CHECK(partial.graph.node_count == 3);
  CHECK_FALSE(partial.initial.has_value());
}

TEST_CASE("writing a tree without poses falls back to the tree solution") {
  PoseGraph g;
  g.node_count = 3;
  g.edges.emplace_back(0, 1, Eigen::Vector2d(1.0, 0.25), 0.4);
  g.edges.emplace_back(1, 2, Eigen::Vector2d(-0.5, 2.0), -0.9);
  const auto validated = validate_graph(g);
  const ParsedGraph parsed = parse_g2o(write_g2o(validated));
  REQUIRE(parsed.initial.has_value());
  CHECK(evaluate_cost(validate_graph(parsed.graph), *parsed.initial) < 1e-15);
}

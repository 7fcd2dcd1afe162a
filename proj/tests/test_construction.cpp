#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "qsobp/construction.hpp"
#include "qsobp/dynamics.hpp"
#include "qsobp/error.hpp"
#include "qsobp/random.hpp"

using namespace qsobp;

namespace {

using Edges = std::vector<Graph::Edge>;

ConfigurationSpace two_vertex_space() {
  return ConfigurationSpace(Graph(2, {}), 2, {0, 1});
}

// one edge {1,2} plus an isolated vertex; females are cells 1,3,6,8 (1-based)
ConfigurationSpace three_vertex_space() {
  return ConfigurationSpace(Graph(3, {{1, 2}}), 2, {0, 2, 5, 7});
}

std::vector<double> positive_weights(std::size_t count, std::mt19937_64& rng) {
  std::vector<double> w(count);
  for (auto& v : w) v = uniform_open(0.1, 5.0, rng);
  return w;
}

// All simple graphs on `vertices` vertices.
std::vector<Edges> all_graphs(std::size_t vertices) {
  Edges slots;
  for (std::size_t u = 1; u <= vertices; ++u) {
    for (std::size_t v = u + 1; v <= vertices; ++v) slots.emplace_back(u, v);
  }
  std::vector<Edges> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
    Edges e;
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask & (std::size_t{1} << b)) e.push_back(slots[b]);
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph(2, {{1, 1}}), Error);
  CHECK_THROWS_AS(Graph(2, {{1, 3}}), Error);
  CHECK_THROWS_AS(Graph(0, {}), Error);
  const Graph g(3, {{2, 1}, {1, 2}});
  CHECK(g.edges().size() == 1);
  CHECK(g.edges()[0] == Graph::Edge{1, 2});
}

TEST_CASE("connected components") {
  using V = std::vector<std::vector<std::size_t>>;
  CHECK(connected_components(Graph(2, {})) == V{{1}, {2}});
  CHECK(connected_components(Graph(3, {{1, 2}})) == V{{1, 2}, {3}});
  CHECK(connected_components(Graph(2, {{1, 2}})) == V{{1, 2}});
  CHECK(connected_components(Graph(4, {{1, 4}, {2, 3}})) == V{{1, 4}, {2, 3}});
  CHECK(Graph(4, {{1, 2}, {2, 3}, {3, 4}}).is_connected());
  CHECK_FALSE(Graph(4, {{1, 2}, {3, 4}}).is_connected());
}

TEST_CASE("components agree with a relaxation oracle on every small graph") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& e : all_graphs(n)) {
      const auto comps = connected_components(Graph(n, e));
      const auto label = oracle::component_labels(n, e);
      for (const auto& comp : comps) {
        for (std::size_t v : comp) CHECK(label[v - 1] == label[comp.front() - 1]);
      }
      std::size_t distinct = 0;
      for (std::size_t v = 0; v < n; ++v) distinct += label[v] == static_cast<int>(v) ? 1 : 0;
      CHECK(comps.size() == distinct);
    }
  }
}

TEST_CASE("cell enumeration order and size") {
  const auto cells = enumerate_cells(Graph(2, {}), 2);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].alleles == std::vector<std::uint32_t>{1, 1});
  CHECK(cells[1].alleles == std::vector<std::uint32_t>{1, 2});
  CHECK(cells[2].alleles == std::vector<std::uint32_t>{2, 1});
  CHECK(cells[3].alleles == std::vector<std::uint32_t>{2, 2});
  CHECK(enumerate_cells(Graph(3, {{1, 2}}), 2).size() == 8);
  CHECK(enumerate_cells(Graph(1, {}), 1).size() == 1);
  CHECK(enumerate_cells(Graph(3, {}), 3).size() == 27);
  try {
    (void)enumerate_cells(Graph(21, {}), 2);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeOverflow);
  }
  CHECK(enumerate_cells(Graph(4, {}), 2, 16).size() == 16);
  CHECK_THROWS_AS((void)enumerate_cells(Graph(4, {}), 2, 15), Error);
}

TEST_CASE("configuration space partition") {
  const auto cs = three_vertex_space();
  CHECK(cs.females() == std::vector<std::size_t>{0, 2, 5, 7});
  CHECK(cs.males() == std::vector<std::size_t>{1, 3, 4, 6});
  CHECK(cs.is_female(5));
  CHECK(cs.is_male(4));
  CHECK(cs.position(5) == 2);
  CHECK(cs.position(4) == 2);
  CHECK_THROWS_AS(ConfigurationSpace(Graph(2, {}), 2, {}), Error);
  CHECK_THROWS_AS(ConfigurationSpace(Graph(2, {}), 2, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(ConfigurationSpace(Graph(2, {}), 2, {0, 9}), Error);
  CHECK_THROWS_AS(ConfigurationSpace(Graph(2, {}), 2, {0, 0}), Error);
}

TEST_CASE("compatible sets on the edgeless two-vertex graph") {
  const auto cs = two_vertex_space();
  // sigma_2 = (1,2) with sigma_3 = (2,1): either allele at each vertex
  auto s = compatible_sets(cs, 1, 2);
  CHECK(s.female == std::vector<std::size_t>{0, 1});
  CHECK(s.male == std::vector<std::size_t>{2, 3});
  // sigma_1 = (1,1) with sigma_4 = (2,2) mixes the same way under the
  // component rule; see the project notes on this pair.
  s = compatible_sets(cs, 0, 3);
  CHECK(s.female == std::vector<std::size_t>{0, 1});
  CHECK(s.male == std::vector<std::size_t>{2, 3});
  // (1,1) with (2,1) differ only at vertex 1, which no female can take as 2
  s = compatible_sets(cs, 0, 2);
  CHECK(s.female == std::vector<std::size_t>{0});
  CHECK(s.male == std::vector<std::size_t>{2});
  try {
    (void)compatible_sets(cs, 2, 3);
    FAIL("expected IndexOutOfPartition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfPartition);
  }
}

TEST_CASE("compatible sets on the one-edge three-vertex graph") {
  const auto cs = three_vertex_space();
  // mother (1,1,1) father (1,2,2): the pair block {1,2} and vertex 3 each come from either parent
  auto s = compatible_sets(cs, 0, 3);
  CHECK(s.female == std::vector<std::size_t>{0, 2});
  CHECK(s.male == std::vector<std::size_t>{1, 3});
  s = compatible_sets(cs, 5, 6);
  CHECK(s.female == std::vector<std::size_t>{5, 7});
  CHECK(s.male == std::vector<std::size_t>{4, 6});
  s = compatible_sets(cs, 0, 1);
  CHECK(s.female == std::vector<std::size_t>{0});
  CHECK(s.male == std::vector<std::size_t>{1});
}

TEST_CASE("connected graphs give singleton compatible sets") {
  const ConfigurationSpace cs(Graph(3, {{1, 2}, {2, 3}}), 2, {0, 1, 2, 3});
  for (std::size_t f : cs.females()) {
    for (std::size_t m : cs.males()) {
      const auto s = compatible_sets(cs, f, m);
      CHECK(s.female == std::vector<std::size_t>{f});
      CHECK(s.male == std::vector<std::size_t>{m});
    }
  }
}

TEST_CASE("two-vertex heredity with weights 2 and 1") {
  const auto cs = two_vertex_space();
  const WeightPair w{{2.0, 1.0}, {1.0, 1.0}};
  const auto t = build_heredity(cs, w);
  CHECK(t.pf(1, 0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(t.pf(1, 0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(t.pm(1, 0, 0) == doctest::Approx(0.5));
  CHECK(t.pf(0, 0, 0) == 1.0);
  CHECK(t.pf(1, 1, 1) == 1.0);
  CHECK(t.pm(0, 0, 0) == 1.0);
  // with no edge each vertex is its own component, so sigma_1 x sigma_4 mixes too
  CHECK(t.pf(0, 1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("uniform weights give a = 1/2") {
  const auto t = build_heredity(two_vertex_space(), {{1.0, 1.0}, {1.0, 1.0}});
  CHECK(t.pf(1, 0, 0) == 0.5);
  CHECK(t.pm(1, 0, 0) == 0.5);
}

TEST_CASE("weights are validated") {
  const auto cs = two_vertex_space();
  try {
    (void)build_heredity(cs, {{1.0, 0.0}, {1.0, 1.0}});
    FAIL("expected NonPositiveWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveWeight);
  }
  CHECK_THROWS_AS((void)build_heredity(cs, {{1.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("three-vertex heredity matches the mixing pattern") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto wf = positive_weights(4, rng);
    const auto wm = positive_weights(4, rng);
    const auto t = build_heredity(three_vertex_space(), {wf, wm});
    const double a = wf[0] / (wf[0] + wf[1]);
    const double b = wf[2] / (wf[2] + wf[3]);
    const double c = wm[0] / (wm[0] + wm[1]);
    const double d = wm[2] / (wm[2] + wm[3]);
    CHECK(t.pf(0, 1, 0) == doctest::Approx(a).epsilon(1e-14));
    CHECK(t.pf(1, 0, 0) == doctest::Approx(a).epsilon(1e-14));
    CHECK(t.pf(2, 3, 2) == doctest::Approx(b).epsilon(1e-14));
    CHECK(t.pf(3, 2, 3) == doctest::Approx(1 - b).epsilon(1e-14));
    CHECK(t.pm(1, 0, 0) == doctest::Approx(c).epsilon(1e-14));
    CHECK(t.pm(0, 1, 1) == doctest::Approx(1 - c).epsilon(1e-14));
    CHECK(t.pm(3, 2, 2) == doctest::Approx(d).epsilon(1e-14));
    CHECK(t.pm(2, 3, 3) == doctest::Approx(1 - d).epsilon(1e-14));
    CHECK(t.pf(0, 2, 0) == 1.0);
    CHECK(t.pm(3, 0, 0) == 1.0);
  }
}

TEST_CASE("heredity agrees with a brute-force oracle on random spaces") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t vertices = 1 + rng() % 3;
    const int alleles = 2 + static_cast<int>(rng() % 2);
    const auto graphs = all_graphs(vertices);
    const Edges edges = graphs[rng() % graphs.size()];
    const std::size_t cells = static_cast<std::size_t>(std::pow(alleles, vertices));
    std::vector<std::size_t> females;
    for (std::size_t c = 0; c < cells; ++c) {
      if (rng() % 2) females.push_back(c);
    }
    if (females.empty()) females.push_back(0);
    if (females.size() == cells) females.pop_back();
    const ConfigurationSpace cs(Graph(vertices, edges), static_cast<std::size_t>(alleles), females);
    const WeightPair w{positive_weights(cs.females().size(), rng),
                       positive_weights(cs.males().size(), rng)};
    const auto got = build_heredity(cs, w);
    const auto want = oracle::heredity(vertices, edges, alleles, females, w.female, w.male);
    const std::size_t n = want.n, nu = want.nu;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < nu; ++k) {
        double sf = 0.0, sm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(got.pf(i, k, j) == doctest::Approx(want.f(i, k, j)).epsilon(1e-14));
          sf += got.pf(i, k, j);
        }
        for (std::size_t l = 0; l < nu; ++l) {
          CHECK(got.pm(i, k, l) == doctest::Approx(want.m(i, k, l)).epsilon(1e-14));
          sm += got.pm(i, k, l);
        }
        CHECK(std::abs(sf - 1.0) <= 1e-12);
        CHECK(std::abs(sm - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("support lies inside the compatible sets") {
  std::mt19937_64 rng(5);
  const ConfigurationSpace cs(Graph(3, {{2, 3}}), 2, {0, 1, 4, 6});
  const WeightPair w{positive_weights(4, rng), positive_weights(4, rng)};
  const auto t = build_heredity(cs, w);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto s = compatible_sets(cs, cs.females()[i], cs.males()[k]);
      for (std::size_t j = 0; j < 4; ++j) {
        const bool in = std::find(s.female.begin(), s.female.end(), cs.females()[j]) != s.female.end();
        CHECK((t.pf(i, k, j) > 0.0) == in);
      }
    }
  }
}

TEST_CASE("scaling the weights leaves the tensors unchanged") {
  std::mt19937_64 rng(9);
  const auto cs = three_vertex_space();
  const WeightPair w{positive_weights(4, rng), positive_weights(4, rng)};
  for (double lambda : {0.001, 3.0, 1e6}) {
    WeightPair scaled = w;
    for (auto& v : scaled.female) v *= lambda;
    for (auto& v : scaled.male) v *= lambda;
    const auto t1 = build_heredity(cs, w);
    const auto t2 = build_heredity(cs, scaled);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t j = 0; j < 4; ++j) {
          CHECK(std::abs(t1.pf(i, k, j) - t2.pf(i, k, j)) <= 1e-15);
          CHECK(std::abs(t1.pm(i, k, j) - t2.pm(i, k, j)) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("connected graphs build the identity") {
  std::mt19937_64 rng(3);
  for (std::size_t vertices = 1; vertices <= 4; ++vertices) {
    for (int alleles : {2, 3}) {
      for (const auto& e : all_graphs(vertices)) {
        const Graph g(vertices, e);
        if (!g.is_connected()) continue;
        const std::size_t cells = static_cast<std::size_t>(std::pow(alleles, vertices));
        if (cells < 2) continue;
        std::vector<std::size_t> females;
        for (std::size_t c = 0; c < cells; c += 2) females.push_back(c);
        const ConfigurationSpace cs(g, static_cast<std::size_t>(alleles), females);
        const auto op = build_operator(
            cs, {positive_weights(cs.females().size(), rng), positive_weights(cs.males().size(), rng)});
        CHECK(is_identity(op, 5));
      }
    }
  }
}

TEST_CASE("disconnected graphs with the first-vertex split are not the identity") {
  std::mt19937_64 rng(4);
  for (std::size_t vertices = 2; vertices <= 4; ++vertices) {
    for (const auto& e : all_graphs(vertices)) {
      const Graph g(vertices, e);
      if (g.is_connected()) continue;
      const auto cells = enumerate_cells(g, 2);
      std::vector<std::size_t> females;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].alleles[0] == 1) females.push_back(c);
      }
      const ConfigurationSpace cs(g, 2, females);
      const auto op = build_operator(cs, {positive_weights(females.size(), rng),
                                          positive_weights(cs.males().size(), rng)});
      CHECK_FALSE(is_identity(op, 5));
    }
  }
}

TEST_CASE("constructed operators preserve the simplex") {
  std::mt19937_64 rng(8);
  const ConfigurationSpace cs(Graph(3, {}), 2, {0, 3, 5});
  const auto op = build_operator(cs, {positive_weights(3, rng), positive_weights(5, rng)});
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_state(3, 5, rng);
    CHECK_NOTHROW((void)apply(op, s));
  }
}

#include "qsobp/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qsobp/dynamics.hpp"
#include "qsobp/error.hpp"
#include "qsobp/random.hpp"

namespace qsobp {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
  if (vertex_count == 0) {
    throw Error(ErrorCode::InvalidGraph, "graph needs at least one vertex");
  }
  for (auto [u, v] : edges) {
    if (u < 1 || v < 1 || u > vertex_count || v > vertex_count) {
      throw Error(ErrorCode::InvalidGraph,
                  "edge {" + std::to_string(u) + "," + std::to_string(v) + "} out of range");
    }
    if (u == v) {
      throw Error(ErrorCode::InvalidGraph, "loop at vertex " + std::to_string(u));
    }
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Graph::is_connected() const { return connected_components(*this).size() == 1; }

std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  // union-find over 0-based vertices
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (auto [u, v] : g.edges()) {
    const std::size_t ru = find(u - 1);
    const std::size_t rv = find(v - 1);
    if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
  }
  std::vector<std::vector<std::size_t>> by_root(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) by_root[find(v)].push_back(v + 1);
  std::vector<std::vector<std::size_t>> out;
  for (auto& comp : by_root) {
    if (!comp.empty()) out.push_back(std::move(comp));
  }
  return out;
}

std::vector<Cell> enumerate_cells(const Graph& g, std::size_t allele_count, std::size_t cap) {
  if (allele_count == 0) {
    throw Error(ErrorCode::InvalidParameter, "allele set must be nonempty");
  }
  std::size_t total = 1;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (total > cap / allele_count) {
      throw Error(ErrorCode::SizeOverflow, "more than " + std::to_string(cap) + " cells");
    }
    total *= allele_count;
  }
  if (total > cap) {
    throw Error(ErrorCode::SizeOverflow, "more than " + std::to_string(cap) + " cells");
  }
  std::vector<Cell> cells;
  cells.reserve(total);
  Cell current{std::vector<std::uint32_t>(g.vertex_count(), 1)};
  for (std::size_t c = 0; c < total; ++c) {
    cells.push_back(current);
    // odometer increment, last vertex fastest
    for (std::size_t v = g.vertex_count(); v-- > 0;) {
      if (current.alleles[v] < allele_count) {
        ++current.alleles[v];
        break;
      }
      current.alleles[v] = 1;
    }
  }
  return cells;
}

ConfigurationSpace::ConfigurationSpace(Graph graph, std::size_t allele_count,
                                       std::vector<std::size_t> females, std::size_t cap)
    : graph_(std::move(graph)),
      allele_count_(allele_count),
      cells_(enumerate_cells(graph_, allele_count, cap)),
      components_(connected_components(graph_)),
      female_(cells_.size(), false),
      position_(cells_.size(), -1) {
  for (std::size_t f : females) {
    if (f >= cells_.size()) {
      throw Error(ErrorCode::IndexOutOfPartition,
                  "female cell " + std::to_string(f) + " does not exist");
    }
    if (female_[f]) {
      throw Error(ErrorCode::IndexOutOfPartition,
                  "female cell " + std::to_string(f) + " listed twice");
    }
    female_[f] = true;
  }
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (female_[c]) {
      position_[c] = static_cast<long>(females_.size());
      females_.push_back(c);
    } else {
      position_[c] = static_cast<long>(males_.size());
      males_.push_back(c);
    }
  }
  if (females_.empty() || males_.empty()) {
    throw Error(ErrorCode::IndexOutOfPartition, "both F and M must be nonempty");
  }
}

namespace {

bool agrees_on(const Cell& a, const Cell& b, const std::vector<std::size_t>& component) {
  return std::all_of(component.begin(), component.end(),
                     [&](std::size_t v) { return a.alleles[v - 1] == b.alleles[v - 1]; });
}

bool compatible(const ConfigurationSpace& cs, const Cell& candidate, const Cell& mother,
                const Cell& father) {
  return std::all_of(cs.components().begin(), cs.components().end(), [&](const auto& comp) {
    return agrees_on(candidate, mother, comp) || agrees_on(candidate, father, comp);
  });
}

}  // namespace

CompatibleSets compatible_sets(const ConfigurationSpace& cs, std::size_t mother,
                               std::size_t father) {
  if (mother >= cs.cells().size() || !cs.is_female(mother)) {
    throw Error(ErrorCode::IndexOutOfPartition, "cell " + std::to_string(mother) + " is not in F");
  }
  if (father >= cs.cells().size() || !cs.is_male(father)) {
    throw Error(ErrorCode::IndexOutOfPartition, "cell " + std::to_string(father) + " is not in M");
  }
  const Cell& m = cs.cells()[mother];
  const Cell& f = cs.cells()[father];
  CompatibleSets out;
  for (std::size_t c : cs.females()) {
    if (compatible(cs, cs.cells()[c], m, f)) out.female.push_back(c);
  }
  for (std::size_t c : cs.males()) {
    if (compatible(cs, cs.cells()[c], m, f)) out.male.push_back(c);
  }
  return out;
}

HeredityTensors build_heredity(const ConfigurationSpace& cs, const WeightPair& w) {
  const std::size_t n = cs.females().size();
  const std::size_t nu = cs.males().size();
  if (w.female.size() != n || w.male.size() != nu) {
    throw Error(ErrorCode::DimensionMismatch, "weights must align with F and M");
  }
  auto check_positive = [](const std::vector<double>& ws, const char* which) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (!(ws[i] > 0.0) || !std::isfinite(ws[i])) {
        throw Error(ErrorCode::NonPositiveWeight,
                    std::string(which) + " weight " + std::to_string(i) + " must be > 0");
      }
    }
  };
  check_positive(w.female, "female");
  check_positive(w.male, "male");

  HeredityTensors t(n, nu);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < nu; ++k) {
      const CompatibleSets sets = compatible_sets(cs, cs.females()[i], cs.males()[k]);
      if (sets.female.empty() || sets.male.empty()) {
        throw Error(ErrorCode::EmptyCompatibleSet, "internal: parent missing from its own set");
      }
      double female_mass = 0.0;
      for (std::size_t c : sets.female) female_mass += w.female[cs.position(c)];
      for (std::size_t c : sets.female) t.pf(i, k, cs.position(c)) = w.female[cs.position(c)] / female_mass;
      double male_mass = 0.0;
      for (std::size_t c : sets.male) male_mass += w.male[cs.position(c)];
      for (std::size_t c : sets.male) t.pm(i, k, cs.position(c)) = w.male[cs.position(c)] / male_mass;
    }
  }
  return t;
}

BisexualOperator build_operator(const ConfigurationSpace& cs, const WeightPair& w) {
  return BisexualOperator(build_heredity(cs, w));
}

bool is_identity(const BisexualOperator& op, std::size_t trials, const Tolerance& tol,
                 std::uint64_t seed) {
  if (trials == 0) {
    throw Error(ErrorCode::InvalidParameter, "is_identity needs at least one trial");
  }
  const HeredityTensors& t = op.tensors();
  for (std::size_t i = 0; i < op.n(); ++i) {
    for (std::size_t k = 0; k < op.nu(); ++k) {
      for (std::size_t j = 0; j < op.n(); ++j) {
        if (std::abs(t.pf(i, k, j) - (i == j ? 1.0 : 0.0)) > tol.abs_eps) return false;
      }
      for (std::size_t l = 0; l < op.nu(); ++l) {
        if (std::abs(t.pm(i, k, l) - (k == l ? 1.0 : 0.0)) > tol.abs_eps) return false;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const PopulationState s = random_state(op.n(), op.nu(), rng);
    if (state_distance(apply(op, s), s) > tol.abs_eps) return false;
  }
  return true;
}

}  // namespace qsobp

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qsobp/operator.hpp"
#include "qsobp/simplex.hpp"

namespace qsobp {

inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 20;

/// Finite simple graph on vertices 1..vertex_count.
///
/// Edges are kept as a set: duplicates collapse, self-loops are rejected.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  [[nodiscard]] std::size_t vertex_count() const noexcept { return vertex_count_; }
  /// Normalized (min, max) pairs in ascending order.
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] bool is_connected() const;

 private:
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
};

/// Assignment of an allele (1..|Phi|) to every vertex; alleles[v-1] belongs to vertex v.
struct Cell {
  std::vector<std::uint32_t> alleles;

  bool operator==(const Cell&) const = default;
};

/// Maximal connected subgraphs as sorted vertex lists, ordered by smallest vertex.
std::vector<std::vector<std::size_t>> connected_components(const Graph& g);

/// All allele_count^vertex_count cells in lexicographic order (vertex 1 most significant).
/// Throws SizeOverflow above `cap`, InvalidParameter for allele_count == 0.
std::vector<Cell> enumerate_cells(const Graph& g, std::size_t allele_count,
                                  std::size_t cap = kDefaultCellCap);

/// Graph + alleles + the female/male split of the enumerated cells.
///
/// Cell indices are 0-based positions in cells(). females() and males() are
/// ascending; their order fixes the coordinate order of x and y.
class ConfigurationSpace {
 public:
  ConfigurationSpace(Graph graph, std::size_t allele_count, std::vector<std::size_t> females,
                     std::size_t cap = kDefaultCellCap);

  [[nodiscard]] const Graph& graph() const noexcept { return graph_; }
  [[nodiscard]] std::size_t allele_count() const noexcept { return allele_count_; }
  [[nodiscard]] const std::vector<Cell>& cells() const noexcept { return cells_; }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& components() const noexcept {
    return components_;
  }
  [[nodiscard]] const std::vector<std::size_t>& females() const noexcept { return females_; }
  [[nodiscard]] const std::vector<std::size_t>& males() const noexcept { return males_; }

  [[nodiscard]] bool is_female(std::size_t cell) const { return position_[cell] >= 0 && female_[cell]; }
  [[nodiscard]] bool is_male(std::size_t cell) const { return position_[cell] >= 0 && !female_[cell]; }
  /// Coordinate of a cell inside F (if female) or M (if male).
  [[nodiscard]] std::size_t position(std::size_t cell) const {
    return static_cast<std::size_t>(position_[cell]);
  }

 private:
  Graph graph_;
  std::size_t allele_count_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> components_;
  std::vector<std::size_t> females_;
  std::vector<std::size_t> males_;
  std::vector<bool> female_;
  std::vector<long> position_;
};

/// Strictly positive, unnormalized weights aligned with females() and males().
struct WeightPair {
  std::vector<double> female;
  std::vector<double> male;
};

/// Omega^f and Omega^m for a mating pair, as ascending cell indices.
struct CompatibleSets {
  std::vector<std::size_t> female;
  std::vector<std::size_t> male;
};

/// Cells of F (resp. M) that agree, on every component, with the mother or the
/// father. Throws IndexOutOfPartition unless mother is in F and father in M.
CompatibleSets compatible_sets(const ConfigurationSpace& cs, std::size_t mother,
                               std::size_t father);

/// Heredity coefficients: weight of a compatible cell divided by the weight of
/// its whole compatible set, zero elsewhere.
HeredityTensors build_heredity(const ConfigurationSpace& cs, const WeightPair& w);

BisexualOperator build_operator(const ConfigurationSpace& cs, const WeightPair& w);

/// True iff every heredity row is the indicator of the parent of the same sex
/// and `trials` random states are left unchanged within tol.abs_eps.
bool is_identity(const BisexualOperator& op, std::size_t trials, const Tolerance& tol = {},
                 std::uint64_t seed = 42);

}  // namespace qsobp

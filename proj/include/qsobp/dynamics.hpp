#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qsobp/operator.hpp"
#include "qsobp/simplex.hpp"

namespace qsobp {

// ---------------------------------------------------------------------------
// Evolution

/// Raw coordinate map x'_j = sum pf[i][k][j] x_i y_k, y'_l = sum pm[i][k][l] x_i y_k,
/// defined for any real inputs (no simplex checks). Throws DimensionMismatch.
void evaluate(const BisexualOperator& op, std::span<const double> x, std::span<const double> y,
              std::span<double> x_out, std::span<double> y_out);

/// One generation. The result is validated as a PopulationState.
PopulationState apply(const BisexualOperator& op, const PopulationState& s);

using StateMap = std::function<PopulationState(const PopulationState&)>;

inline constexpr std::size_t kMaxStoredStates = 10'000;

/// Orbit s_0, s_1, ... of a map.
///
/// Up to 10^4 states are stored verbatim. Longer runs keep every stride-th
/// state (stride a power of two), and the first and last states always.
struct Trajectory {
  std::vector<PopulationState> states;
  std::vector<std::size_t> step_of;  // generation index of each stored state
  std::size_t stride = 1;
  bool converged = false;
  std::optional<PopulationState> limit;
  std::size_t steps_taken = 0;
};

/// Iterates until two successive states are within tol.iter_eps (converged,
/// limit = the later one) or tol.max_iters applications have been made.
Trajectory iterate(const StateMap& map, const PopulationState& s0, const Tolerance& tol = {});
Trajectory iterate(const BisexualOperator& op, const PopulationState& s0,
                   const Tolerance& tol = {});

/// Exactly `steps` applications with no convergence test. The observer, if
/// given, sees every state including s_0.
Trajectory run_steps(const StateMap& map, const PopulationState& s0, std::size_t steps,
                     const std::function<void(std::size_t, const PopulationState&)>& observer = {});

/// max_t |functional(s_t) - functional(s_0)| over the stored states.
double conserved_quantity_drift(const Trajectory& traj,
                                const std::function<double(const PopulationState&)>& functional);

// ---------------------------------------------------------------------------
// Linearization

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Analytic Jacobian of the unrestricted map; rows (x'_1..x'_n, y'_1..y'_nu),
/// columns (x_1..x_n, y_1..y_nu).
Matrix jacobian(const BisexualOperator& op, std::span<const double> x, std::span<const double> y);
Matrix jacobian(const BisexualOperator& op, const PopulationState& s);

using Matrix2 = std::array<std::array<double, 2>, 2>;

// ---------------------------------------------------------------------------
// Classification

/// Characteristic polynomial F(lambda) = lambda^2 + B lambda + C.
struct QuadraticCharacteristic {
  double B = 0.0;
  double C = 0.0;

  [[nodiscard]] double at(double lambda) const { return lambda * lambda + B * lambda + C; }
  [[nodiscard]] std::array<std::complex<double>, 2> roots() const;
};

QuadraticCharacteristic characteristic(const Matrix2& j);

enum class RootSide { Inside, Outside, On };

/// Where the two roots sit relative to the unit circle.
///
/// RootAtOne: lambda = 1 is a root and `other` locates the second one.
/// OnCircle: some root has modulus one (lambda = -1 or a unimodular complex
/// pair) and neither root is 1.
struct RootLocation {
  enum class Kind { BothInside, BothOutside, Split, OnCircle, RootAtOne };
  Kind kind = Kind::BothInside;
  RootSide other = RootSide::Inside;

  bool operator==(const RootLocation&) const = default;
};

std::string_view to_string(RootLocation::Kind kind) noexcept;
std::string_view to_string(RootSide side) noexcept;

/// Decides the root location from the signs of F(1), F(-1) and C - 1 alone,
/// without computing roots. Quantities within eps of zero count as zero.
RootLocation classify_quadratic(const QuadraticCharacteristic& qc, double eps = 1e-9);

enum class FixedPointKind { Attracting, Repelling, Saddle, NonHyperbolic };

std::string_view to_string(FixedPointKind kind) noexcept;

struct FixedPointClass {
  FixedPointKind kind = FixedPointKind::NonHyperbolic;
  std::array<double, 2> eigen_moduli{};  // ascending
};

/// NonHyperbolic when an eigenvalue modulus is within tol.abs_eps of 1.
FixedPointClass classify_fixed_point_2d(const Matrix2& j, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Fixed-point search for planar maps

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
};

using Map2D = std::function<Point2(Point2)>;

/// Max-norm residual |map(p) - p|.
double fixed_point_residual(const Map2D& map, Point2 p);

/// Seeds a grid x grid lattice over `domain`, refines each seed by
/// Levenberg-Marquardt on map(p) - p (clamped to the domain), keeps points
/// with residual <= tol.abs_eps and merges those closer than 10 * tol.abs_eps.
/// Output is sorted by (x, y).
std::vector<Point2> find_fixed_points_grid(const Map2D& map, const Rect& domain, std::size_t grid,
                                           const Tolerance& tol = {});

/// Central-difference Jacobian of a planar map.
Matrix2 numeric_jacobian(const Map2D& map, Point2 p, double h = 1e-7);

}  // namespace qsobp

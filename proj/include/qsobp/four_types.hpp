#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qsobp/dynamics.hpp"
#include "qsobp/operator.hpp"
#include "qsobp/simplex.hpp"

namespace qsobp::four_types {

/// |a + c - 1| (or |b + d - 1|) at or below this routes to the critical-line path.
inline constexpr double kCriticalLineTol = 1e-9;

/// Mixing shares a, b (daughters) and c, d (sons) of the two recombining
/// blocks, plus the slice masses a0 = x1 + x2 and c0 = y1 + y2. All six lie in (0,1).
struct FourTypeParams {
  double a = 0.5;
  double b = 0.5;
  double c = 0.5;
  double d = 0.5;
  double a0 = 0.5;
  double c0 = 0.5;

  static FourTypeParams make(double a, double b, double c, double d, double a0, double c0);

  /// Parameters under which w1_step reproduces the (u, v) block:
  /// a <-> b, c <-> d, a0 -> 1 - a0, c0 -> 1 - c0.
  [[nodiscard]] FourTypeParams mirrored() const { return {b, a, d, c, 1.0 - a0, 1.0 - c0}; }
};

/// Coordinates (x1, y1, x3, y3) of a point of the slice I_{a0 c0}.
struct SliceState {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Slice masses of an arbitrary state of S^3 x S^3.
std::pair<double, double> slice_masses(const PopulationState& s);

SliceState to_slice(const PopulationState& s);
PopulationState from_slice(const FourTypeParams& p, const SliceState& s);

/// True when the pairwise sums of s equal (a0, 1 - a0, c0, 1 - c0) within tol.
bool in_slice(const FourTypeParams& p, const PopulationState& s, double tol = 1e-9);

/// One step of the eight-coordinate operator in closed form.
PopulationState v4_step(const FourTypeParams& p, const PopulationState& s);

/// The same operator as heredity tensors (a0, c0 are not used).
BisexualOperator v4_operator(const FourTypeParams& p);

/// (x, y) block of the slice dynamics.
Point2 w1_step(const FourTypeParams& p, Point2 s);
/// (u, v) block: w1_step with mirrored() parameters.
Point2 w2_step(const FourTypeParams& p, Point2 s);

Matrix2 jacobian_w1(const FourTypeParams& p, Point2 s);

/// B and C of the characteristic polynomial of the (x, y) block at s, from
/// the closed-form expressions in the parameters.
QuadraticCharacteristic characteristic_w1(const FourTypeParams& p, Point2 s);

inline bool on_critical_line(double s1, double s2, double tol = kCriticalLineTol) {
  return std::abs(s1 + s2 - 1.0) <= tol;
}

/// Fixed points of the (x, y) block: {(0,0), (a0,c0)} off the critical line,
/// the curve y = c c0 x / (a a0 + (c - a) x) on it.
struct FixedPointsW1 {
  bool is_curve = false;
  std::vector<Point2> points;  // isolated points, or curve samples
  double a = 0.0, c = 0.0, a0 = 0.0, c0 = 0.0;

  [[nodiscard]] double curve_y(double x) const { return c * c0 * x / (a * a0 + (c - a) * x); }
};

FixedPointsW1 fixed_points_w1(const FourTypeParams& p, std::size_t curve_samples = 33);

/// Each fixed point of the (x, y) block with its class. Isolated points are
/// classified through the root-location test on characteristic_w1; curve
/// samples come out NonHyperbolic.
std::vector<std::pair<Point2, FixedPointClass>> classify_w1_fixed_points(
    const FourTypeParams& p, const Tolerance& tol = {});

/// Limit of the orbit of s0 in I_{a0 c0}. Each block goes to 0 when its
/// parameter sum is below one and to its full mass above one; a block that
/// already sits at a fixed point stays there.
/// Throws OnCriticalLine, IsFixedPoint, or InvalidParameter when s0 is off the slice.
PopulationState predict_limit_v4(const FourTypeParams& p, const PopulationState& s0,
                                 const Tolerance& tol = {});

/// Limit of the (x, y) block from s0 off the critical line.
Point2 predict_limit_w1(const FourTypeParams& p, Point2 s0, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Critical line a + c = 1: the one-dimensional map on x + y = 1.

struct TMapParams {
  double a = 0.5;
  double a0 = 0.5;
  double c0 = 0.5;

  static TMapParams make(double a, double a0, double c0);
  static TMapParams from(const FourTypeParams& p) { return make(p.a, p.a0, p.c0); }
};

double t_step(const TMapParams& tp, double x);

/// Coefficients of T(x) = q x^2 + r x + s.
struct TCoefficients {
  double q, r, s;
};
TCoefficients t_coefficients(const TMapParams& tp);

struct TFixedPoints {
  double fixed = 0.0;                 // the fixed point inside [0,1]
  std::optional<double> spurious;     // second root of T(x) = x, outside [0,1]
  double discriminant = 0.0;          // D; zero when a = 1/2
};

TFixedPoints fixed_points_t(const TMapParams& tp);

/// T'(t*) at the fixed point inside [0,1].
double t_derivative_at_fixed(const TMapParams& tp);

/// Roots in [0,1] of map^p(x) - x that are not within 1e-8 of a fixed point
/// of map. Sign changes on a uniform grid are bisected to 1e-10.
std::vector<double> scan_periodic_points(const std::function<double(double)>& map, int p,
                                         std::size_t grid);
std::vector<double> scan_periodic_points(const TMapParams& tp, int p, std::size_t grid);

/// Fixed point the orbit of x0 converges to. Throws IsFixedPoint.
double predict_limit_t(const TMapParams& tp, double x0, const Tolerance& tol = {});

/// For a + c = 1: the fixed point of the (x, y) block on the invariant line
/// x + y = s, found by bisection of the block restricted to that line.
/// Throws InvalidParameter off the critical line or when the line misses the box.
Point2 critical_section_fixed_point(const FourTypeParams& p, double s);

}  // namespace qsobp::four_types

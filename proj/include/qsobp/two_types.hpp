#pragma once

#include <vector>

#include "qsobp/dynamics.hpp"
#include "qsobp/operator.hpp"
#include "qsobp/simplex.hpp"

namespace qsobp::two_types {

inline constexpr double kMembershipTol = 1e-9;

/// a: share of type-1 daughters from a type-2 mother and type-1 father;
/// b: share of type-1 sons from the same pair. Both strictly inside (0, 1).
struct TwoTypeParams {
  double a = 0.5;
  double b = 0.5;

  /// Throws InvalidParameter outside the open unit interval.
  static TwoTypeParams make(double a, double b);
};

/// (x, y) = (x_1, y_1); the second coordinates are 1 - x and 1 - y.
using ReducedState2 = Point2;

ReducedState2 w_step(const TwoTypeParams& p, ReducedState2 s);

Matrix2 jacobian_w(const TwoTypeParams& p, ReducedState2 s);

/// The full operator on S^1 x S^1 with heredity tensors in closed form.
BisexualOperator lift_to_v(const TwoTypeParams& p);

ReducedState2 project(const PopulationState& s);
PopulationState lift_state(ReducedState2 s);

/// Label of the invariant line through s: x/a + y/(1 - b).
double invariant_line_c(const TwoTypeParams& p, ReducedState2 s);

/// Limit of the reduced orbit from s0: (ac, 0) when ac < 1, otherwise
/// (1, (ac - 1)(1 - b)/a), with c the invariant-line label of s0.
/// Throws IsFixedPoint when s0 already is fixed.
ReducedState2 predict_limit_w(const TwoTypeParams& p, ReducedState2 s0);

/// predict_limit_w lifted through x_2 = 1 - x_1, y_2 = 1 - y_1.
PopulationState predict_limit_v(const TwoTypeParams& p, const PopulationState& s0);

/// Fixed set of the reduced map: Z1 = {y = 0, x in [0,1)} and Z2 = {x = 1}.
struct FixedSetsW {
  [[nodiscard]] bool in_z1(ReducedState2 s, double tol = kMembershipTol) const;
  [[nodiscard]] bool in_z2(ReducedState2 s, double tol = kMembershipTol) const;
  [[nodiscard]] bool contains(ReducedState2 s, double tol = kMembershipTol) const {
    return in_z1(s, tol) || in_z2(s, tol);
  }
  /// Z1 at x = t for t in [0,1), Z2 at y = t for t in [0,1].
  [[nodiscard]] static ReducedState2 z1_at(double t) { return {t, 0.0}; }
  [[nodiscard]] static ReducedState2 z2_at(double t) { return {1.0, t}; }
};

FixedSetsW fixed_sets_w(const TwoTypeParams& p);

}  // namespace qsobp::two_types

#include "qsobp/two_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsobp/error.hpp"

namespace qsobp::two_types {

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::InvalidParameter,
                std::string(name) + " must lie in (0,1), got " + std::to_string(v));
  }
}

}  // namespace

TwoTypeParams TwoTypeParams::make(double a, double b) {
  require_open_unit(a, "a");
  require_open_unit(b, "b");
  return {a, b};
}

ReducedState2 w_step(const TwoTypeParams& p, ReducedState2 s) {
  // y loses (1 - b)/a times what x gains. Using the gain x actually
  // realised keeps x/a + y/(1 - b) fixed even once x sits next to 1 and
  // the increment starts rounding away.
  const double x = s.x + p.a * (1.0 - s.x) * s.y;
  const double y = s.y - (1.0 - p.b) / p.a * (x - s.x);
  return {x, std::max(y, 0.0)};
}

Matrix2 jacobian_w(const TwoTypeParams& p, ReducedState2 s) {
  return {{{1.0 - p.a * s.y, p.a * (1.0 - s.x)}, {s.y * (1.0 - p.b), s.x * (1.0 - p.b) + p.b}}};
}

BisexualOperator lift_to_v(const TwoTypeParams& p) {
  // types: females sigma_1, sigma_2 -> 0, 1; males sigma_3, sigma_4 -> 0, 1
  HeredityTensors t(2, 2);
  t.pf(0, 0, 0) = 1.0;
  t.pf(0, 1, 0) = 1.0;
  t.pf(1, 0, 0) = p.a;
  t.pf(1, 0, 1) = 1.0 - p.a;
  t.pf(1, 1, 1) = 1.0;
  t.pm(0, 0, 0) = 1.0;
  t.pm(0, 1, 1) = 1.0;
  t.pm(1, 0, 0) = p.b;
  t.pm(1, 0, 1) = 1.0 - p.b;
  t.pm(1, 1, 1) = 1.0;
  return BisexualOperator(std::move(t));
}

ReducedState2 project(const PopulationState& s) {
  if (s.n() != 2 || s.nu() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "two-type state must live on S^1 x S^1");
  }
  return {s.female[0], s.male[0]};
}

PopulationState lift_state(ReducedState2 s) {
  return make_state({s.x, 1.0 - s.x}, {s.y, 1.0 - s.y});
}

double invariant_line_c(const TwoTypeParams& p, ReducedState2 s) {
  return s.x / p.a + s.y / (1.0 - p.b);
}

ReducedState2 predict_limit_w(const TwoTypeParams& p, ReducedState2 s0) {
  if (fixed_sets_w(p).contains(s0)) {
    throw Error(ErrorCode::IsFixedPoint, "initial point is already fixed");
  }
  const double ac = p.a * invariant_line_c(p, s0);
  if (ac < 1.0) return {ac, 0.0};
  return {1.0, (ac - 1.0) * (1.0 - p.b) / p.a};
}

PopulationState predict_limit_v(const TwoTypeParams& p, const PopulationState& s0) {
  return lift_state(predict_limit_w(p, project(s0)));
}

bool FixedSetsW::in_z1(ReducedState2 s, double tol) const {
  return std::abs(s.y) <= tol && s.x >= -tol && s.x < 1.0 - tol;
}

bool FixedSetsW::in_z2(ReducedState2 s, double tol) const {
  return std::abs(s.x - 1.0) <= tol && s.y >= -tol && s.y <= 1.0 + tol;
}

FixedSetsW fixed_sets_w(const TwoTypeParams& p) {
  TwoTypeParams::make(p.a, p.b);
  return {};
}

}  // namespace qsobp::two_types

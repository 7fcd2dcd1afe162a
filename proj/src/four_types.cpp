#include "qsobp/four_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsobp/error.hpp"

namespace qsobp::four_types {

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::InvalidParameter,
                std::string(name) + " must lie in (0,1), got " + std::to_string(v));
  }
}

bool near(Point2 p, Point2 q, double tol) {
  return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
}

}  // namespace

FourTypeParams FourTypeParams::make(double a, double b, double c, double d, double a0,
                                    double c0) {
  require_open_unit(a, "a");
  require_open_unit(b, "b");
  require_open_unit(c, "c");
  require_open_unit(d, "d");
  require_open_unit(a0, "a0");
  require_open_unit(c0, "c0");
  return {a, b, c, d, a0, c0};
}

std::pair<double, double> slice_masses(const PopulationState& s) {
  if (s.n() != 4 || s.nu() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "four-type state must live on S^3 x S^3");
  }
  return {s.female[0] + s.female[1], s.male[0] + s.male[1]};
}

SliceState to_slice(const PopulationState& s) {
  slice_masses(s);
  return {s.female[0], s.male[0], s.female[2], s.male[2]};
}

PopulationState from_slice(const FourTypeParams& p, const SliceState& s) {
  return make_state({s.x, p.a0 - s.x, s.u, 1.0 - p.a0 - s.u},
                    {s.y, p.c0 - s.y, s.v, 1.0 - p.c0 - s.v});
}

bool in_slice(const FourTypeParams& p, const PopulationState& s, double tol) {
  const auto [a0, c0] = slice_masses(s);
  return std::abs(a0 - p.a0) <= tol && std::abs(c0 - p.c0) <= tol &&
         std::abs(s.female[2] + s.female[3] - (1.0 - p.a0)) <= tol &&
         std::abs(s.male[2] + s.male[3] - (1.0 - p.c0)) <= tol;
}

PopulationState v4_step(const FourTypeParams& p, const PopulationState& s) {
  slice_masses(s);
  const double x1 = s.female[0], x2 = s.female[1], x3 = s.female[2], x4 = s.female[3];
  const double y1 = s.male[0], y2 = s.male[1], y3 = s.male[2], y4 = s.male[3];
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  return make_state(
      {x1 - (1 - a) * x1 * y2 + a * x2 * y1, x2 - a * x2 * y1 + (1 - a) * x1 * y2,
       x3 - (1 - b) * x3 * y4 + b * x4 * y3, x4 - b * x4 * y3 + (1 - b) * x3 * y4},
      {y1 - (1 - c) * x2 * y1 + c * x1 * y2, y2 - c * x1 * y2 + (1 - c) * x2 * y1,
       y3 - (1 - d) * x4 * y3 + d * x3 * y4, y4 - d * x3 * y4 + (1 - d) * x4 * y3});
}

BisexualOperator v4_operator(const FourTypeParams& p) {
  HeredityTensors t(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      // recombining pairs: types {1,2} x {5,6} crosswise, and {3,4} x {7,8}
      const bool block_a = (i == 0 && k == 1) || (i == 1 && k == 0);
      const bool block_b = (i == 2 && k == 3) || (i == 3 && k == 2);
      if (block_a) {
        t.pf(i, k, 0) = p.a;
        t.pf(i, k, 1) = 1.0 - p.a;
        t.pm(i, k, 0) = p.c;
        t.pm(i, k, 1) = 1.0 - p.c;
      } else if (block_b) {
        t.pf(i, k, 2) = p.b;
        t.pf(i, k, 3) = 1.0 - p.b;
        t.pm(i, k, 2) = p.d;
        t.pm(i, k, 3) = 1.0 - p.d;
      } else {
        t.pf(i, k, i) = 1.0;
        t.pm(i, k, k) = 1.0;
      }
    }
  }
  return BisexualOperator(std::move(t));
}

Point2 w1_step(const FourTypeParams& p, Point2 s) {
  const double x = s.x, y = s.y;
  return {x - (1 - p.a) * x * (p.c0 - y) + p.a * (p.a0 - x) * y,
          y - (1 - p.c) * (p.a0 - x) * y + p.c * x * (p.c0 - y)};
}

Point2 w2_step(const FourTypeParams& p, Point2 s) { return w1_step(p.mirrored(), s); }

Matrix2 jacobian_w1(const FourTypeParams& p, Point2 s) {
  const double a = p.a, c = p.c, a0 = p.a0, c0 = p.c0;
  return {{{1 - (1 - a) * c0 + (1 - 2 * a) * s.y, a * a0 + (1 - 2 * a) * s.x},
           {c * c0 + (1 - 2 * c) * s.y, 1 - (1 - c) * a0 + (1 - 2 * c) * s.x}}};
}

QuadraticCharacteristic characteristic_w1(const FourTypeParams& p, Point2 s) {
  const double a = p.a, c = p.c, a0 = p.a0, c0 = p.c0, x = s.x, y = s.y;
  const double B = (1 - a) * c0 + (1 - c) * a0 - (1 - 2 * a) * y - (1 - 2 * c) * x - 2;
  const double C = (1 - a - c) * (a0 * c0 - c0 * x - a0 * y) - (1 - a) * c0 - (1 - c) * a0 +
                   (1 - 2 * a) * y + (1 - 2 * c) * x + 1;
  return {B, C};
}

FixedPointsW1 fixed_points_w1(const FourTypeParams& p, std::size_t curve_samples) {
  FixedPointsW1 out;
  out.a = p.a;
  out.c = p.c;
  out.a0 = p.a0;
  out.c0 = p.c0;
  if (!on_critical_line(p.a, p.c)) {
    out.points = {{0.0, 0.0}, {p.a0, p.c0}};
    return out;
  }
  out.is_curve = true;
  const std::size_t k = std::max<std::size_t>(curve_samples, 2);
  for (std::size_t i = 0; i < k; ++i) {
    const double x = p.a0 * static_cast<double>(i) / static_cast<double>(k - 1);
    out.points.push_back({x, out.curve_y(x)});
  }
  return out;
}

namespace {

FixedPointKind kind_from_location(const RootLocation& loc) {
  switch (loc.kind) {
    case RootLocation::Kind::BothInside: return FixedPointKind::Attracting;
    case RootLocation::Kind::BothOutside: return FixedPointKind::Repelling;
    case RootLocation::Kind::Split: return FixedPointKind::Saddle;
    case RootLocation::Kind::OnCircle:
    case RootLocation::Kind::RootAtOne: return FixedPointKind::NonHyperbolic;
  }
  return FixedPointKind::NonHyperbolic;
}

}  // namespace

std::vector<std::pair<Point2, FixedPointClass>> classify_w1_fixed_points(const FourTypeParams& p,
                                                                         const Tolerance& tol) {
  std::vector<std::pair<Point2, FixedPointClass>> out;
  for (const Point2& pt : fixed_points_w1(p).points) {
    const QuadraticCharacteristic qc = characteristic_w1(p, pt);
    const auto roots = qc.roots();
    FixedPointClass cls;
    cls.eigen_moduli = {std::abs(roots[0]), std::abs(roots[1])};
    std::sort(cls.eigen_moduli.begin(), cls.eigen_moduli.end());
    cls.kind = kind_from_location(classify_quadratic(qc, tol.abs_eps));
    out.emplace_back(pt, cls);
  }
  return out;
}

Point2 predict_limit_w1(const FourTypeParams& p, Point2 s0, const Tolerance& tol) {
  if (on_critical_line(p.a, p.c)) {
    throw Error(ErrorCode::OnCriticalLine, "a + c = 1: use the T-map path");
  }
  if (near(s0, {0.0, 0.0}, tol.abs_eps) || near(s0, {p.a0, p.c0}, tol.abs_eps)) {
    throw Error(ErrorCode::IsFixedPoint, "initial block already fixed");
  }
  return p.a + p.c < 1.0 ? Point2{0.0, 0.0} : Point2{p.a0, p.c0};
}

PopulationState predict_limit_v4(const FourTypeParams& p, const PopulationState& s0,
                                  const Tolerance& tol) {
  if (!in_slice(p, s0)) {
    throw Error(ErrorCode::InvalidParameter, "initial state is not in the slice (a0, c0)");
  }
  if (on_critical_line(p.a, p.c) || on_critical_line(p.b, p.d)) {
    throw Error(ErrorCode::OnCriticalLine, "a + c = 1 or b + d = 1: use the T-map path");
  }
  const SliceState s = to_slice(s0);
  const Point2 xy{s.x, s.y};
  const Point2 uv{s.u, s.v};
  const FourTypeParams m = p.mirrored();
  const bool xy_fixed = near(xy, {0.0, 0.0}, tol.abs_eps) || near(xy, {p.a0, p.c0}, tol.abs_eps);
  const bool uv_fixed = near(uv, {0.0, 0.0}, tol.abs_eps) || near(uv, {m.a0, m.c0}, tol.abs_eps);
  if (xy_fixed && uv_fixed) {
    throw Error(ErrorCode::IsFixedPoint, "initial state is a fixed point");
  }
  const Point2 xy_lim = xy_fixed ? xy : predict_limit_w1(p, xy, tol);
  const Point2 uv_lim = uv_fixed ? uv : predict_limit_w1(m, uv, tol);
  return from_slice(p, {xy_lim.x, xy_lim.y, uv_lim.x, uv_lim.y});
}

TMapParams TMapParams::make(double a, double a0, double c0) {
  require_open_unit(a, "a");
  require_open_unit(a0, "a0");
  require_open_unit(c0, "c0");
  return {a, a0, c0};
}

TCoefficients t_coefficients(const TMapParams& tp) {
  const double a = tp.a;
  return {2 * a - 1, (1 - a) * (2 - tp.c0) - a * tp.a0, a * tp.a0};
}

double t_step(const TMapParams& tp, double x) {
  const TCoefficients k = t_coefficients(tp);
  return (k.q * x + k.r) * x + k.s;
}

TFixedPoints fixed_points_t(const TMapParams& tp) {
  // T(x) = x  <=>  q x^2 - K x + a a0 = 0 with K = 1 + a a0 - (1-a)(2-c0)
  const TCoefficients k = t_coefficients(tp);
  const double K = 1.0 - k.r;
  const double D = K * K - 4.0 * k.s * k.q;
  const double root = std::sqrt(std::max(D, 0.0));
  TFixedPoints out;
  out.discriminant = D;
  // pick the form without cancellation. For K >= 0 the small root is
  // 2 s / (K + sqrt D), which stays exact as q -> 0. K < 0 only happens for
  // a < 1/2, where q < 0 and (K - sqrt D) / (2q) is the stable form.
  if (K >= 0.0) {
    out.fixed = 2.0 * k.s / (K + root);
    if (k.q != 0.0) out.spurious = (K + root) / (2.0 * k.q);
  } else {
    out.fixed = (K - root) / (2.0 * k.q);
    out.spurious = 2.0 * k.s / (K - root);
  }
  return out;
}

double t_derivative_at_fixed(const TMapParams& tp) {
  const TCoefficients k = t_coefficients(tp);
  return 2.0 * k.q * fixed_points_t(tp).fixed + k.r;
}

namespace {

std::vector<double> sign_change_roots(const std::function<double(double)>& g, std::size_t grid) {
  std::vector<double> roots;
  double x_prev = 0.0;
  double g_prev = g(0.0);
  if (g_prev == 0.0) roots.push_back(0.0);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid);
    const double gx = g(x);
    if (gx == 0.0) {
      roots.push_back(x);
    } else if (g_prev != 0.0 && (g_prev < 0.0) != (gx < 0.0)) {
      double lo = x_prev, hi = x, g_lo = g_prev;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (g_lo < 0.0)) {
          lo = mid;
          g_lo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    g_prev = gx;
  }
  return roots;
}

}  // namespace

std::vector<double> scan_periodic_points(const std::function<double(double)>& map, int p,
                                         std::size_t grid) {
  if (p < 2) throw Error(ErrorCode::InvalidParameter, "period must be at least 2");
  if (grid < 1000) throw Error(ErrorCode::InvalidParameter, "grid must be at least 1000");
  const std::vector<double> fixed = sign_change_roots([&](double x) { return map(x) - x; }, grid);
  const std::vector<double> roots = sign_change_roots(
      [&](double x) {
        double y = x;
        for (int i = 0; i < p; ++i) y = map(y);
        return y - x;
      },
      grid);
  std::vector<double> out;
  for (double r : roots) {
    const bool is_fixed =
        std::any_of(fixed.begin(), fixed.end(), [r](double f) { return std::abs(r - f) <= 1e-8; });
    if (is_fixed) continue;
    if (!out.empty() && std::abs(out.back() - r) <= 1e-9) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<double> scan_periodic_points(const TMapParams& tp, int p, std::size_t grid) {
  const double t_star = fixed_points_t(tp).fixed;
  std::vector<double> out = scan_periodic_points([&tp](double x) { return t_step(tp, x); }, p, grid);
  std::erase_if(out, [t_star](double r) { return std::abs(r - t_star) <= 1e-8; });
  return out;
}

double predict_limit_t(const TMapParams& tp, double x0, const Tolerance& tol) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "x0 must lie in [0,1]");
  }
  const double t_star = fixed_points_t(tp).fixed;
  if (std::abs(x0 - t_star) <= tol.abs_eps) {
    throw Error(ErrorCode::IsFixedPoint, "x0 is the fixed point of T");
  }
  return t_star;
}

Point2 critical_section_fixed_point(const FourTypeParams& p, double s) {
  if (!on_critical_line(p.a, p.c)) {
    throw Error(ErrorCode::InvalidParameter, "section fixed points exist only for a + c = 1");
  }
  double lo = std::max(0.0, s - p.c0);
  double hi = std::min(p.a0, s);
  if (lo > hi) {
    throw Error(ErrorCode::InvalidParameter, "line x + y = s misses the box");
  }
  // displacement of x along the line: >= 0 at lo, <= 0 at hi
  auto h = [&](double x) { return w1_step(p, {x, s - x}).x - x; };
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, s - x};
}

}  // namespace qsobp::four_types

#include "qsobp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsobp/error.hpp"

namespace qsobp {

void evaluate(const BisexualOperator& op, std::span<const double> x, std::span<const double> y,
              std::span<double> x_out, std::span<double> y_out) {
  const std::size_t n = op.n();
  const std::size_t nu = op.nu();
  if (x.size() != n || y.size() != nu || x_out.size() != n || y_out.size() != nu) {
    throw Error(ErrorCode::DimensionMismatch, "state does not match operator dimensions");
  }
  const HeredityTensors& t = op.tensors();
  std::fill(x_out.begin(), x_out.end(), 0.0);
  std::fill(y_out.begin(), y_out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < nu; ++k) {
      const double w = x[i] * y[k];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) x_out[j] += t.pf(i, k, j) * w;
      for (std::size_t l = 0; l < nu; ++l) y_out[l] += t.pm(i, k, l) * w;
    }
  }
}

PopulationState apply(const BisexualOperator& op, const PopulationState& s) {
  std::vector<double> x(op.n());
  std::vector<double> y(op.nu());
  evaluate(op, s.female.probs(), s.male.probs(), x, y);
  // Both output masses equal (sum x)(sum y), so rounding in the masses doubles
  // every generation. Dividing by that product gives the same map on the
  // simplex and keeps the masses at one.
  double sx = 0.0, sy = 0.0;
  for (double v : s.female.probs()) sx += v;
  for (double v : s.male.probs()) sy += v;
  const double mass = sx * sy;
  for (double& v : x) v /= mass;
  for (double& v : y) v /= mass;
  return make_state(x, y);
}

namespace {

class TrajectoryRecorder {
 public:
  explicit TrajectoryRecorder(Trajectory& tr) : tr_(tr) {}

  void record(std::size_t step, const PopulationState& s) {
    if (step % tr_.stride != 0) return;
    tr_.states.push_back(s);
    tr_.step_of.push_back(step);
    if (tr_.states.size() > kMaxStoredStates) thin();
  }

  void finish(std::size_t last_step, const PopulationState& last) {
    if (tr_.step_of.empty() || tr_.step_of.back() != last_step) {
      tr_.states.push_back(last);
      tr_.step_of.push_back(last_step);
    }
  }

 private:
  void thin() {
    const std::size_t next_stride = tr_.stride * 2;
    std::size_t w = 0;
    for (std::size_t r = 0; r < tr_.states.size(); ++r) {
      if (tr_.step_of[r] % next_stride == 0) {
        if (w != r) {
          tr_.states[w] = std::move(tr_.states[r]);
          tr_.step_of[w] = tr_.step_of[r];
        }
        ++w;
      }
    }
    tr_.states.erase(tr_.states.begin() + static_cast<std::ptrdiff_t>(w), tr_.states.end());
    tr_.step_of.resize(w);
    tr_.stride = next_stride;
  }

  Trajectory& tr_;
};

}  // namespace

Trajectory iterate(const StateMap& map, const PopulationState& s0, const Tolerance& tol) {
  tol.validate();
  Trajectory tr;
  TrajectoryRecorder rec(tr);
  rec.record(0, s0);
  PopulationState cur = s0;
  for (std::size_t t = 0; t < tol.max_iters; ++t) {
    PopulationState next = map(cur);
    if (state_distance(cur, next) <= tol.iter_eps) {
      tr.converged = true;
      tr.limit = std::move(next);
      tr.steps_taken = t;
      rec.finish(t, cur);
      return tr;
    }
    cur = std::move(next);
    rec.record(t + 1, cur);
  }
  tr.steps_taken = tol.max_iters;
  rec.finish(tol.max_iters, cur);
  return tr;
}

Trajectory iterate(const BisexualOperator& op, const PopulationState& s0, const Tolerance& tol) {
  return iterate([&op](const PopulationState& s) { return apply(op, s); }, s0, tol);
}

Trajectory run_steps(const StateMap& map, const PopulationState& s0, std::size_t steps,
                     const std::function<void(std::size_t, const PopulationState&)>& observer) {
  Trajectory tr;
  TrajectoryRecorder rec(tr);
  rec.record(0, s0);
  if (observer) observer(0, s0);
  PopulationState cur = s0;
  for (std::size_t t = 1; t <= steps; ++t) {
    cur = map(cur);
    rec.record(t, cur);
    if (observer) observer(t, cur);
  }
  tr.steps_taken = steps;
  rec.finish(steps, cur);
  return tr;
}

double conserved_quantity_drift(const Trajectory& traj,
                                const std::function<double(const PopulationState&)>& functional) {
  if (traj.states.empty()) {
    throw Error(ErrorCode::InvalidParameter, "empty trajectory");
  }
  const double base = functional(traj.states.front());
  double drift = 0.0;
  for (const auto& s : traj.states) drift = std::max(drift, std::abs(functional(s) - base));
  return drift;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix jacobian(const BisexualOperator& op, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = op.n();
  const std::size_t nu = op.nu();
  if (x.size() != n || y.size() != nu) {
    throw Error(ErrorCode::DimensionMismatch, "state does not match operator dimensions");
  }
  const HeredityTensors& t = op.tensors();
  Matrix jac(n + nu, n + nu);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < nu; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        jac(j, i) += t.pf(i, k, j) * y[k];
        jac(j, n + k) += t.pf(i, k, j) * x[i];
      }
      for (std::size_t l = 0; l < nu; ++l) {
        jac(n + l, i) += t.pm(i, k, l) * y[k];
        jac(n + l, n + k) += t.pm(i, k, l) * x[i];
      }
    }
  }
  return jac;
}

Matrix jacobian(const BisexualOperator& op, const PopulationState& s) {
  return jacobian(op, s.female.probs(), s.male.probs());
}

std::array<std::complex<double>, 2> QuadraticCharacteristic::roots() const {
  const double disc = B * B - 4.0 * C;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    const double q = -0.5 * (B + (B >= 0.0 ? r : -r));
    if (q == 0.0) return {std::complex<double>(0.0), std::complex<double>(0.0)};
    return {std::complex<double>(q), std::complex<double>(C / q)};
  }
  const double re = -0.5 * B;
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

QuadraticCharacteristic characteristic(const Matrix2& j) {
  return {-(j[0][0] + j[1][1]), j[0][0] * j[1][1] - j[0][1] * j[1][0]};
}

std::string_view to_string(RootLocation::Kind kind) noexcept {
  switch (kind) {
    case RootLocation::Kind::BothInside: return "both_inside";
    case RootLocation::Kind::BothOutside: return "both_outside";
    case RootLocation::Kind::Split: return "split";
    case RootLocation::Kind::OnCircle: return "on_circle";
    case RootLocation::Kind::RootAtOne: return "root_at_one";
  }
  return "unknown";
}

std::string_view to_string(RootSide side) noexcept {
  switch (side) {
    case RootSide::Inside: return "inside";
    case RootSide::Outside: return "outside";
    case RootSide::On: return "on";
  }
  return "unknown";
}

RootLocation classify_quadratic(const QuadraticCharacteristic& qc, double eps) {
  using Kind = RootLocation::Kind;
  const double f_plus = qc.at(1.0);
  const double f_minus = qc.at(-1.0);
  auto is_zero = [eps](double v) { return std::abs(v) <= eps; };

  if (is_zero(f_plus)) {
    // 1 is a root, so the other one equals C
    const double m = std::abs(qc.C);
    const RootSide side = is_zero(m - 1.0) ? RootSide::On
                          : m < 1.0        ? RootSide::Inside
                                           : RootSide::Outside;
    return {Kind::RootAtOne, side};
  }
  if (is_zero(f_minus)) return {Kind::OnCircle, RootSide::On};
  if (f_plus > 0.0) {
    if (f_minus < 0.0) return {Kind::Split, RootSide::Inside};
    if (is_zero(qc.C - 1.0)) return {Kind::OnCircle, RootSide::On};
    return qc.C < 1.0 ? RootLocation{Kind::BothInside, RootSide::Inside}
                      : RootLocation{Kind::BothOutside, RootSide::Outside};
  }
  // F(1) < 0: one root beyond 1
  if (f_minus < 0.0) return {Kind::BothOutside, RootSide::Outside};
  return {Kind::Split, RootSide::Inside};
}

std::string_view to_string(FixedPointKind kind) noexcept {
  switch (kind) {
    case FixedPointKind::Attracting: return "attracting";
    case FixedPointKind::Repelling: return "repelling";
    case FixedPointKind::Saddle: return "saddle";
    case FixedPointKind::NonHyperbolic: return "non_hyperbolic";
  }
  return "unknown";
}

FixedPointClass classify_fixed_point_2d(const Matrix2& j, const Tolerance& tol) {
  for (const auto& row : j) {
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "non-finite Jacobian");
    }
  }
  const auto r = characteristic(j).roots();
  std::array<double, 2> m{std::abs(r[0]), std::abs(r[1])};
  std::sort(m.begin(), m.end());
  FixedPointClass out;
  out.eigen_moduli = m;
  if (std::abs(m[0] - 1.0) <= tol.abs_eps || std::abs(m[1] - 1.0) <= tol.abs_eps) {
    out.kind = FixedPointKind::NonHyperbolic;
  } else if (m[1] < 1.0) {
    out.kind = FixedPointKind::Attracting;
  } else if (m[0] > 1.0) {
    out.kind = FixedPointKind::Repelling;
  } else {
    out.kind = FixedPointKind::Saddle;
  }
  return out;
}

double fixed_point_residual(const Map2D& map, Point2 p) {
  const Point2 q = map(p);
  return std::max(std::abs(q.x - p.x), std::abs(q.y - p.y));
}

Matrix2 numeric_jacobian(const Map2D& map, Point2 p, double h) {
  const Point2 xp = map({p.x + h, p.y});
  const Point2 xm = map({p.x - h, p.y});
  const Point2 yp = map({p.x, p.y + h});
  const Point2 ym = map({p.x, p.y - h});
  return {{{(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h)},
           {(xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)}}};
}

namespace {

Point2 clamp_to(const Rect& r, Point2 p) {
  return {std::clamp(p.x, r.x_lo, r.x_hi), std::clamp(p.y, r.y_lo, r.y_hi)};
}

struct Refined {
  Point2 p;
  double residual;
};

Refined refine_seed(const Map2D& map, const Rect& domain, Point2 p) {
  auto g_of = [&](Point2 q) {
    const Point2 f = map(q);
    return Point2{f.x - q.x, f.y - q.y};
  };
  Point2 g = g_of(p);
  double norm2 = g.x * g.x + g.y * g.y;
  double lambda = 1e-3;
  for (int it = 0; it < 200; ++it) {
    // keep going past abs_eps: on fixed continua a small residual alone can
    // still leave the point visibly off the set
    if (g.x == 0.0 && g.y == 0.0) break;
    Matrix2 j = numeric_jacobian(map, p);
    j[0][0] -= 1.0;
    j[1][1] -= 1.0;
    // normal equations (J^T J + lambda I) delta = -J^T g
    const double a11 = j[0][0] * j[0][0] + j[1][0] * j[1][0] + lambda;
    const double a12 = j[0][0] * j[0][1] + j[1][0] * j[1][1];
    const double a22 = j[0][1] * j[0][1] + j[1][1] * j[1][1] + lambda;
    const double r1 = -(j[0][0] * g.x + j[1][0] * g.y);
    const double r2 = -(j[0][1] * g.x + j[1][1] * g.y);
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 0.0)) {
      lambda *= 10.0;
      continue;
    }
    const Point2 cand = clamp_to(domain, {p.x + (r1 * a22 - r2 * a12) / det,
                                          p.y + (a11 * r2 - a12 * r1) / det});
    const Point2 gc = g_of(cand);
    const double cand2 = gc.x * gc.x + gc.y * gc.y;
    if (cand2 < norm2) {
      p = cand;
      g = gc;
      norm2 = cand2;
      lambda = std::max(lambda * 0.1, 1e-15);
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return {p, std::max(std::abs(g.x), std::abs(g.y))};
}

}  // namespace

std::vector<Point2> find_fixed_points_grid(const Map2D& map, const Rect& domain, std::size_t grid,
                                           const Tolerance& tol) {
  if (grid < 2) throw Error(ErrorCode::InvalidParameter, "grid must be at least 2");
  tol.validate();
  std::vector<Refined> found;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t k = 0; k < grid; ++k) {
      const double tx = static_cast<double>(i) / static_cast<double>(grid - 1);
      const double ty = static_cast<double>(k) / static_cast<double>(grid - 1);
      const Point2 seed{domain.x_lo + tx * (domain.x_hi - domain.x_lo),
                        domain.y_lo + ty * (domain.y_hi - domain.y_lo)};
      const Refined r = refine_seed(map, domain, seed);
      if (r.residual <= tol.abs_eps) found.push_back(r);
    }
  }
  std::sort(found.begin(), found.end(), [](const Refined& a, const Refined& b) {
    return a.p.x != b.p.x ? a.p.x < b.p.x : a.p.y < b.p.y;
  });
  const double merge = 10.0 * tol.abs_eps;
  std::vector<Point2> out;
  for (const Refined& r : found) {
    bool duplicate = false;
    for (auto it = out.rbegin(); it != out.rend() && r.p.x - it->x <= merge; ++it) {
      if (std::abs(r.p.y - it->y) <= merge) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(r.p);
  }
  return out;
}

}  // namespace qsobp

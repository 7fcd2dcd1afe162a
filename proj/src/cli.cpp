#include "qsobp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qsobp/construction.hpp"
#include "qsobp/dynamics.hpp"
#include "qsobp/error.hpp"
#include "qsobp/four_types.hpp"
#include "qsobp/io.hpp"
#include "qsobp/random.hpp"
#include "qsobp/two_types.hpp"

namespace qsobp::cli {

namespace {

using io::json;
namespace tt = two_types;
namespace ft = four_types;

struct RunSpec {
  std::string operator_path;
  std::string construction_path;
  std::string model;
  std::optional<double> a, b, c, d, a0, c0;
  bool critical_line = false;
  std::string state;
  double iter_eps = 1e-12;
  double abs_eps = 1e-9;
  std::size_t max_iters = 1'000'000;
  std::uint64_t seed = 42;
  std::string output;
  std::string summary;
  std::string format = "csv";
  std::string portrait;
  std::size_t grid = 10;
  std::size_t samples = 20;
  double match_tol = 1e-6;
  std::string param;
  double from = 0.0;
  double to = 1.0;
  std::size_t steps = 11;

  [[nodiscard]] Tolerance tolerance() const {
    Tolerance t{abs_eps, iter_eps, max_iters};
    t.validate();
    return t;
  }
};

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorCode::InvalidParameter, what);
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) input_error(std::string("--") + name + " is required here");
  return *v;
}

enum class Source { Operator, Construction, Two, Four, TMap };

Source resolve_source(const RunSpec& spec) {
  const int count = static_cast<int>(!spec.operator_path.empty()) +
                    static_cast<int>(!spec.construction_path.empty()) +
                    static_cast<int>(!spec.model.empty() || spec.critical_line);
  if (count != 1) {
    input_error("give exactly one of --operator, --construction, --model/--critical-line");
  }
  if (!spec.operator_path.empty()) return Source::Operator;
  if (!spec.construction_path.empty()) return Source::Construction;
  if (spec.critical_line) {
    if (!spec.model.empty() && spec.model != "four") input_error("--critical-line needs --model four");
    return Source::TMap;
  }
  if (spec.model == "two") return Source::Two;
  if (spec.model == "four") return Source::Four;
  input_error("--model must be 'two' or 'four'");
}

const char* source_name(Source s) {
  switch (s) {
    case Source::Operator: return "operator";
    case Source::Construction: return "construction";
    case Source::Two: return "two";
    case Source::Four: return "four";
    case Source::TMap: return "t_map";
  }
  return "?";
}

BisexualOperator load_operator(const RunSpec& spec, Source src) {
  if (src == Source::Operator) return io::operator_from_json(io::read_json_file(spec.operator_path));
  const io::ConstructionInput in = io::parse_construction(io::read_json_file(spec.construction_path));
  return build_operator(in.space, in.weights);
}

tt::TwoTypeParams two_params(const RunSpec& spec) {
  return tt::TwoTypeParams::make(need(spec.a, "a"), need(spec.b, "b"));
}

ft::TMapParams t_params(const RunSpec& spec) {
  return ft::TMapParams::make(need(spec.a, "a"), need(spec.a0, "a0"), need(spec.c0, "c0"));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      input_error("bad coordinate '" + tok + "'");
    }
  }
  return out;
}

std::optional<std::size_t> grid_count(const std::string& state) {
  if (state.rfind("grid:", 0) != 0) return std::nullopt;
  try {
    const long long v = std::stoll(state.substr(5));
    if (v < 1) throw std::out_of_range("grid");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    input_error("grid:N needs a positive N");
  }
}

/// Four-type parameters; a0, c0 come from the state when one is given in full.
ft::FourTypeParams four_params(const RunSpec& spec, const std::optional<PopulationState>& s0) {
  double a0 = 0.0, c0 = 0.0;
  if (s0) {
    std::tie(a0, c0) = ft::slice_masses(*s0);
  } else {
    a0 = need(spec.a0, "a0");
    c0 = need(spec.c0, "c0");
  }
  return ft::FourTypeParams::make(need(spec.a, "a"), need(spec.b, "b"), need(spec.c, "c"),
                                  need(spec.d, "d"), a0, c0);
}

std::vector<PopulationState> initial_states(const RunSpec& spec, Source src,
                                            std::optional<ft::FourTypeParams>& four) {
  if (spec.state.empty()) input_error("--state is required");
  const auto grid = grid_count(spec.state);
  std::vector<PopulationState> out;
  if (src == Source::Two) {
    if (grid) {
      for (std::size_t i = 0; i < *grid; ++i) {
        for (std::size_t k = 0; k < *grid; ++k) {
          out.push_back(tt::lift_state({(static_cast<double>(i) + 0.5) / static_cast<double>(*grid),
                                        (static_cast<double>(k) + 0.5) / static_cast<double>(*grid)}));
        }
      }
    } else if (spec.state.find(';') != std::string::npos) {
      out.push_back(io::parse_state(spec.state));
    } else {
      const auto v = parse_list(spec.state);
      if (v.size() != 2) input_error("two-type reduced state is 'x,y'");
      out.push_back(tt::lift_state({v[0], v[1]}));
    }
    return out;
  }
  if (src == Source::Four) {
    if (grid) {
      four = four_params(spec, std::nullopt);
      for (std::size_t i = 0; i < *grid; ++i) {
        for (std::size_t k = 0; k < *grid; ++k) {
          const double fx = (static_cast<double>(i) + 0.5) / static_cast<double>(*grid);
          const double fy = (static_cast<double>(k) + 0.5) / static_cast<double>(*grid);
          out.push_back(ft::from_slice(*four, {fx * four->a0, fy * four->c0, 0.5 * (1 - four->a0),
                                               0.5 * (1 - four->c0)}));
        }
      }
    } else if (spec.state.find(';') != std::string::npos) {
      out.push_back(io::parse_state(spec.state));
      four = four_params(spec, out.front());
    } else {
      const auto v = parse_list(spec.state);
      if (v.size() != 4) input_error("four-type slice state is 'x,y,u,v'");
      four = four_params(spec, std::nullopt);
      out.push_back(ft::from_slice(*four, {v[0], v[1], v[2], v[3]}));
    }
    return out;
  }
  if (grid) input_error("grid:N needs --model two or four");
  out.push_back(io::parse_state(spec.state));
  return out;
}

json tolerance_json(const Tolerance& t) {
  return json{{"abs_eps", t.abs_eps}, {"iter_eps", t.iter_eps}, {"max_iters", t.max_iters}};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

void emit(const RunSpec& spec, std::ostream& out, const json& doc) {
  if (spec.output.empty()) {
    out << io::dump(doc);
  } else {
    io::write_text_file(spec.output, io::dump(doc));
  }
}

/// Runs body(i) for i in [0, count) on worker threads; each call owns slot i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::mt19937_64 cell_rng(std::uint64_t seed, std::size_t cell) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cell)};
  return std::mt19937_64(seq);
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// ---------------------------------------------------------------------------
// Limits with critical blocks

/// Predicted limit of the eight-coordinate orbit from s0. Critical blocks go
/// to the fixed point of the curve on their invariant line.
PopulationState predict_four(const ft::FourTypeParams& p, const PopulationState& s0,
                             const Tolerance& tol) {
  const bool crit_xy = ft::on_critical_line(p.a, p.c);
  const bool crit_uv = ft::on_critical_line(p.b, p.d);
  if (!crit_xy && !crit_uv) {
    try {
      return ft::predict_limit_v4(p, s0, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IsFixedPoint) return s0;
      throw;
    }
  }
  const ft::SliceState s = ft::to_slice(s0);
  const ft::FourTypeParams m = p.mirrored();
  auto block = [&](const ft::FourTypeParams& q, bool crit, Point2 b) -> Point2 {
    if (crit) return ft::critical_section_fixed_point(q, b.x + b.y);
    try {
      return ft::predict_limit_w1(q, b, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IsFixedPoint) return b;
      throw;
    }
  };
  const Point2 xy = block(p, crit_xy, {s.x, s.y});
  const Point2 uv = block(m, crit_uv, {s.u, s.v});
  return ft::from_slice(p, {xy.x, xy.y, uv.x, uv.y});
}

PopulationState random_slice_state(const ft::FourTypeParams& p, std::mt19937_64& rng) {
  return ft::from_slice(p, {uniform_open(0.0, 1.0, rng) * p.a0, uniform_open(0.0, 1.0, rng) * p.c0,
                            uniform_open(0.0, 1.0, rng) * (1 - p.a0),
                            uniform_open(0.0, 1.0, rng) * (1 - p.c0)});
}

PopulationState iterated_limit(const Trajectory& tr) {
  return tr.limit ? *tr.limit : tr.states.back();
}

// ---------------------------------------------------------------------------
// construct

int cmd_construct(const RunSpec& spec, std::ostream& out) {
  if (spec.construction_path.empty()) input_error("construct needs --input");
  if (spec.output.empty()) input_error("construct needs --output");
  const io::ConstructionInput in = io::parse_construction(io::read_json_file(spec.construction_path));
  const BisexualOperator op = build_operator(in.space, in.weights);
  io::write_text_file(spec.output, io::dump(io::operator_to_json(op)));
  const Tolerance tol = spec.tolerance();
  out << "n=" << op.n() << "\n";
  out << "nu=" << op.nu() << "\n";
  out << "components=" << in.space.components().size() << "\n";
  out << "connected=" << (in.space.graph().is_connected() ? "true" : "false") << "\n";
  out << "identity=" << (is_identity(op, 20, tol, spec.seed) ? "true" : "false") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// iterate

json drifts_json(const Trajectory& tr, Source src, const std::optional<tt::TwoTypeParams>& two) {
  auto mass = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  json d{{"female_mass",
          conserved_quantity_drift(tr, [&](const PopulationState& s) { return mass(s.female.probs()); })},
         {"male_mass",
          conserved_quantity_drift(tr, [&](const PopulationState& s) { return mass(s.male.probs()); })}};
  if (src == Source::Two && two) {
    d["invariant_line_c"] = conserved_quantity_drift(tr, [&](const PopulationState& s) {
      return tt::invariant_line_c(*two, tt::project(s));
    });
  }
  if (src == Source::Four) {
    d["x1_plus_x2"] = conserved_quantity_drift(tr, [](const PopulationState& s) { return s.female[0] + s.female[1]; });
    d["x3_plus_x4"] = conserved_quantity_drift(tr, [](const PopulationState& s) { return s.female[2] + s.female[3]; });
    d["y1_plus_y2"] = conserved_quantity_drift(tr, [](const PopulationState& s) { return s.male[0] + s.male[1]; });
    d["y3_plus_y4"] = conserved_quantity_drift(tr, [](const PopulationState& s) { return s.male[2] + s.male[3]; });
  }
  return d;
}

int iterate_t_map(const RunSpec& spec, std::ostream& out) {
  const ft::TMapParams tp = t_params(spec);
  const Tolerance tol = spec.tolerance();
  std::vector<double> starts;
  if (const auto g = grid_count(spec.state)) {
    for (std::size_t i = 0; i < *g; ++i) starts.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(*g));
  } else {
    starts = parse_list(spec.state);
    if (starts.size() != 1) input_error("T-map state is a single x0");
  }
  std::ostringstream csv;
  csv << (starts.size() > 1 ? "traj,step,x\n" : "step,x\n");
  json runs = json::array();
  for (std::size_t r = 0; r < starts.size(); ++r) {
    double x = starts[r];
    if (!(x >= 0.0 && x <= 1.0)) input_error("x0 must lie in [0,1]");
    auto row = [&](std::size_t step, double v) {
      if (starts.size() > 1) csv << r << ",";
      csv << step << "," << io::format_double(v) << "\n";
    };
    row(0, x);
    bool converged = false;
    std::size_t t = 0;
    for (; t < tol.max_iters; ++t) {
      const double next = ft::t_step(tp, x);
      if (std::abs(next - x) <= tol.iter_eps) {
        converged = true;
        x = next;
        break;
      }
      x = next;
      if (t < kMaxStoredStates) row(t + 1, x);
    }
    runs.push_back(json{{"x0", starts[r]}, {"converged", converged}, {"steps", t}, {"limit", x},
                        {"predicted", ft::fixed_points_t(tp).fixed}});
  }
  if (!spec.output.empty()) io::write_text_file(spec.output, csv.str());
  json summary{{"command", "iterate"},
               {"source", "t_map"},
               {"seed", spec.seed},
               {"tolerance", tolerance_json(tol)},
               {"trajectories", std::move(runs)}};
  if (spec.summary.empty()) {
    out << io::dump(summary);
  } else {
    io::write_text_file(spec.summary, io::dump(summary));
  }
  return kExitOk;
}

int cmd_iterate(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  if (src == Source::TMap) return iterate_t_map(spec, out);
  const Tolerance tol = spec.tolerance();
  std::optional<ft::FourTypeParams> four;
  std::optional<tt::TwoTypeParams> two;
  std::optional<BisexualOperator> op;
  const std::vector<PopulationState> starts = initial_states(spec, src, four);
  StateMap map;
  if (src == Source::Two) {
    two = two_params(spec);
    op.emplace(tt::lift_to_v(*two));
  } else if (src == Source::Four) {
    map = [p = *four](const PopulationState& s) { return ft::v4_step(p, s); };
  } else {
    op.emplace(load_operator(spec, src));
  }
  if (op) map = [&o = *op](const PopulationState& s) { return apply(o, s); };

  std::vector<Trajectory> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { runs[i] = iterate(map, starts[i], tol); });

  const std::size_t n = starts.front().n();
  const std::size_t nu = starts.front().nu();
  const bool multi = starts.size() > 1;
  if (!spec.output.empty()) {
    if (spec.format == "csv") {
      std::ostringstream csv;
      if (multi) csv << "traj,";
      csv << "step";
      for (std::size_t i = 1; i <= n; ++i) csv << ",x_" << i;
      for (std::size_t k = 1; k <= nu; ++k) csv << ",y_" << k;
      csv << "\n";
      for (std::size_t r = 0; r < runs.size(); ++r) {
        for (std::size_t t = 0; t < runs[r].states.size(); ++t) {
          if (multi) csv << r << ",";
          csv << runs[r].step_of[t];
          for (double v : runs[r].states[t].female.probs()) csv << "," << io::format_double(v);
          for (double v : runs[r].states[t].male.probs()) csv << "," << io::format_double(v);
          csv << "\n";
        }
      }
      io::write_text_file(spec.output, csv.str());
    } else {
      json trajs = json::array();
      for (const auto& tr : runs) {
        json states = json::array();
        for (const auto& s : tr.states) states.push_back(io::state_to_json(s));
        trajs.push_back(json{{"steps", tr.step_of}, {"states", std::move(states)}});
      }
      io::write_text_file(spec.output, io::dump(json{{"trajectories", std::move(trajs)}}));
    }
  }
  json items = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Trajectory& tr = runs[r];
    json item{{"initial", io::state_to_json(starts[r])},
              {"converged", tr.converged},
              {"steps", tr.steps_taken},
              {"limit", tr.limit ? io::state_to_json(*tr.limit) : json(nullptr)},
              {"final", io::state_to_json(tr.states.back())},
              {"drifts", drifts_json(tr, src, two)}};
    items.push_back(std::move(item));
  }
  json summary{{"command", "iterate"},
               {"source", source_name(src)},
               {"seed", spec.seed},
               {"n", n},
               {"nu", nu},
               {"tolerance", tolerance_json(tol)},
               {"trajectories", std::move(items)}};
  if (spec.summary.empty()) {
    out << io::dump(summary);
  } else {
    io::write_text_file(spec.summary, io::dump(summary));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fixed-points

json w1_fixed_points_json(const ft::FourTypeParams& p, std::size_t grid, const Tolerance& tol) {
  const ft::FixedPointsW1 closed = ft::fixed_points_w1(p);
  const auto found = find_fixed_points_grid([&](Point2 s) { return ft::w1_step(p, s); },
                                            Rect{0.0, p.a0, 0.0, p.c0}, grid, tol);
  bool agree = true;
  json pts = json::array();
  for (const Point2& q : found) {
    pts.push_back(point_json(q));
    if (closed.is_curve) {
      agree = agree && std::abs(q.y - closed.curve_y(q.x)) <= 1e-7;
    } else {
      agree = agree && std::any_of(closed.points.begin(), closed.points.end(), [&](Point2 c) {
                return std::max(std::abs(c.x - q.x), std::abs(c.y - q.y)) <= 1e-6;
              });
    }
  }
  if (!closed.is_curve) agree = agree && found.size() == closed.points.size();
  json closed_pts = json::array();
  for (const Point2& q : closed.points) closed_pts.push_back(point_json(q));
  return json{{"curve", closed.is_curve}, {"closed_form", std::move(closed_pts)},
              {"found", std::move(pts)}, {"agree", agree}};
}

int cmd_fixed_points(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  const Tolerance tol = spec.tolerance();
  json doc{{"command", "fixed-points"}, {"source", source_name(src)}};
  if (src == Source::Two) {
    const tt::TwoTypeParams p = two_params(spec);
    const auto found = find_fixed_points_grid([&](Point2 s) { return tt::w_step(p, s); },
                                              Rect{0.0, 1.0, 0.0, 1.0}, spec.grid, tol);
    const tt::FixedSetsW sets = tt::fixed_sets_w(p);
    json pts = json::array();
    bool agree = true;
    for (const Point2& q : found) {
      pts.push_back(point_json(q));
      agree = agree && sets.contains(q, 1e-6);
    }
    doc["closed_form"] = json{{"Z1", "y = 0, x in [0,1)"}, {"Z2", "x = 1, y in [0,1]"}};
    doc["found"] = std::move(pts);
    doc["agree"] = agree;
  } else if (src == Source::Four) {
    const ft::FourTypeParams p = four_params(spec, std::nullopt);
    doc["w1"] = w1_fixed_points_json(p, spec.grid, tol);
    doc["w2"] = w1_fixed_points_json(p.mirrored(), spec.grid, tol);
  } else if (src == Source::TMap) {
    const ft::TMapParams tp = t_params(spec);
    const ft::TFixedPoints fp = ft::fixed_points_t(tp);
    doc["fixed"] = fp.fixed;
    doc["spurious"] = fp.spurious ? json(*fp.spurious) : json(nullptr);
    doc["discriminant"] = fp.discriminant;
  } else {
    input_error("fixed-points works on --model two, --model four or --critical-line");
  }
  emit(spec, out, doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// classify

json class_json(const FixedPointClass& c) {
  return json{{"kind", to_string(c.kind)}, {"eigen_moduli", c.eigen_moduli}};
}

int cmd_classify(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  const Tolerance tol = spec.tolerance();
  json doc{{"command", "classify"}, {"source", source_name(src)}};
  if (src == Source::Four) {
    const ft::FourTypeParams p = four_params(spec, std::nullopt);
    for (const auto& [name, q] : {std::pair{"w1", p}, std::pair{"w2", p.mirrored()}}) {
      json list = json::array();
      for (const auto& [pt, cls] : ft::classify_w1_fixed_points(q, tol)) {
        json item = class_json(cls);
        item["point"] = point_json(pt);
        list.push_back(std::move(item));
      }
      doc[name] = std::move(list);
    }
  } else if (src == Source::Two) {
    const tt::TwoTypeParams p = two_params(spec);
    const auto v = parse_list(spec.state);
    if (v.size() != 2) input_error("classify --model two needs --state x,y");
    const Point2 s{v[0], v[1]};
    doc["point"] = point_json(s);
    doc["is_fixed"] = tt::fixed_sets_w(p).contains(s);
    json cls = class_json(classify_fixed_point_2d(tt::jacobian_w(p, s), tol));
    doc.update(cls);
  } else if (src == Source::TMap) {
    const ft::TMapParams tp = t_params(spec);
    const double slope = ft::t_derivative_at_fixed(tp);
    const double m = std::abs(slope);
    doc["fixed"] = ft::fixed_points_t(tp).fixed;
    doc["derivative"] = slope;
    doc["kind"] = std::abs(m - 1.0) <= tol.abs_eps ? "non_hyperbolic"
                  : m < 1.0                         ? "attracting"
                                                    : "repelling";
  } else {
    const BisexualOperator op = load_operator(spec, src);
    const PopulationState s = io::parse_state(spec.state);
    const Matrix j = jacobian(op, s);
    json rows = json::array();
    for (std::size_t r = 0; r < j.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < j.cols(); ++c) row.push_back(j(r, c));
      rows.push_back(std::move(row));
    }
    doc["jacobian"] = std::move(rows);
    doc["fixed_residual"] = state_distance(apply(op, s), s);
  }
  emit(spec, out, doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  const Tolerance tol = spec.tolerance();
  json doc{{"command", "predict"}, {"source", source_name(src)}};
  try {
    if (src == Source::Two) {
      std::optional<ft::FourTypeParams> unused;
      const PopulationState s0 = initial_states(spec, src, unused).front();
      doc["initial"] = io::state_to_json(s0);
      doc["limit"] = io::state_to_json(tt::predict_limit_v(two_params(spec), s0));
    } else if (src == Source::Four) {
      std::optional<ft::FourTypeParams> p;
      const PopulationState s0 = initial_states(spec, src, p).front();
      doc["initial"] = io::state_to_json(s0);
      doc["limit"] = io::state_to_json(ft::predict_limit_v4(*p, s0, tol));
    } else if (src == Source::TMap) {
      const auto v = parse_list(spec.state);
      if (v.size() != 1) input_error("T-map state is a single x0");
      doc["initial"] = v[0];
      doc["limit"] = ft::predict_limit_t(t_params(spec), v[0], tol);
    } else {
      input_error("predict works on --model two, --model four or --critical-line");
    }
    doc["fixed_point"] = false;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IsFixedPoint) throw;
    doc["fixed_point"] = true;
    doc["limit"] = doc["initial"];
  }
  emit(spec, out, doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CellResult {
  json doc;
  double mismatch = 0.0;
  bool pass = false;
};

json portrait_rows_two(const tt::TwoTypeParams& p, std::ostringstream& csv, int figure) {
  const std::vector<Point2> starts{{0.05, 0.95}, {0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2},
                                   {0.1, 0.3},  {0.3, 0.1}, {0.6, 0.9}, {0.9, 0.6}};
  for (std::size_t r = 0; r < starts.size(); ++r) {
    Point2 s = starts[r];
    for (int step = 0; step <= 200; ++step) {
      csv << figure << "," << r << "," << step << "," << io::format_double(s.x) << ","
          << io::format_double(s.y) << "\n";
      const Point2 next = tt::w_step(p, s);
      if (std::max(std::abs(next.x - s.x), std::abs(next.y - s.y)) <= 1e-9) break;
      s = next;
    }
  }
  return json{{"figure", figure}, {"a", p.a}, {"b", p.b}};
}

json portrait_rows_four(const ft::FourTypeParams& p, std::ostringstream& csv, int figure) {
  std::vector<Point2> starts;
  for (double t : {0.25, 0.5, 0.75}) {
    starts.push_back({t * p.a0, p.c0});
    starts.push_back({p.a0, t * p.c0});
    starts.push_back({t * p.a0, 0.0});
    starts.push_back({0.0, t * p.c0});
  }
  for (std::size_t r = 0; r < starts.size(); ++r) {
    Point2 s = starts[r];
    for (int step = 0; step <= 200; ++step) {
      csv << figure << "," << r << "," << step << "," << io::format_double(s.x) << ","
          << io::format_double(s.y) << "\n";
      const Point2 next = ft::w1_step(p, s);
      if (std::max(std::abs(next.x - s.x), std::abs(next.y - s.y)) <= 1e-9) break;
      s = next;
    }
  }
  return json{{"figure", figure}, {"a", p.a}, {"c", p.c}, {"a0", p.a0}, {"c0", p.c0}};
}

CellResult verify_two_cell(const tt::TwoTypeParams& p, const PopulationState& s0,
                           const Tolerance& tol, double match_tol) {
  const Trajectory tr = iterate(tt::lift_to_v(p), s0, tol);
  const PopulationState got = iterated_limit(tr);
  CellResult res;
  std::optional<PopulationState> want;
  try {
    want = tt::predict_limit_v(p, s0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IsFixedPoint) throw;
    want = s0;
  }
  res.mismatch = state_distance(*want, got);
  res.pass = res.mismatch <= match_tol;
  res.doc = json{{"a", p.a},
                 {"b", p.b},
                 {"route", "closed_form"},
                 {"initial", io::state_to_json(s0)},
                 {"predicted", io::state_to_json(*want)},
                 {"iterated", io::state_to_json(got)},
                 {"converged", tr.converged},
                 {"steps", tr.steps_taken},
                 {"mismatch", res.mismatch},
                 {"pass", res.pass}};
  return res;
}

json t_map_check(const ft::FourTypeParams& q, std::mt19937_64& rng, const Tolerance& tol,
                 double match_tol, bool& pass) {
  const ft::TMapParams tp = ft::TMapParams::from(q);
  double x = uniform_open(0.0, 1.0, rng);
  const double x0 = x;
  for (std::size_t t = 0; t < tol.max_iters; ++t) {
    const double next = ft::t_step(tp, x);
    const bool done = std::abs(next - x) <= tol.iter_eps;
    x = next;
    if (done) break;
  }
  const double want = ft::fixed_points_t(tp).fixed;
  const double mismatch = std::abs(x - want);
  pass = pass && mismatch <= match_tol;
  return json{{"a", tp.a}, {"a0", tp.a0}, {"c0", tp.c0}, {"x0", x0},
              {"predicted", want}, {"iterated", x}, {"mismatch", mismatch}};
}

CellResult verify_four_cell(const ft::FourTypeParams& p, const PopulationState& s0,
                            std::mt19937_64& rng, const Tolerance& tol, double match_tol) {
  const bool crit_xy = ft::on_critical_line(p.a, p.c);
  const bool crit_uv = ft::on_critical_line(p.b, p.d);
  const Trajectory tr = iterate([&p](const PopulationState& s) { return ft::v4_step(p, s); }, s0, tol);
  const PopulationState got = iterated_limit(tr);
  const PopulationState want = predict_four(p, s0, tol);
  CellResult res;
  res.mismatch = state_distance(want, got);
  res.pass = res.mismatch <= match_tol;
  res.doc = json{{"a", p.a},
                 {"b", p.b},
                 {"c", p.c},
                 {"d", p.d},
                 {"a0", p.a0},
                 {"c0", p.c0},
                 {"route", crit_xy || crit_uv ? "t_map" : "closed_form"},
                 {"initial", io::state_to_json(s0)},
                 {"predicted", io::state_to_json(want)},
                 {"iterated", io::state_to_json(got)},
                 {"converged", tr.converged},
                 {"steps", tr.steps_taken},
                 {"mismatch", res.mismatch}};
  if (crit_xy) res.doc["t_map_w1"] = t_map_check(p, rng, tol, match_tol, res.pass);
  if (crit_uv) res.doc["t_map_w2"] = t_map_check(p.mirrored(), rng, tol, match_tol, res.pass);
  res.doc["pass"] = res.pass;
  return res;
}

/// Recognizes operators that coincide with one of the closed-form families.
std::optional<tt::TwoTypeParams> as_two_type(const BisexualOperator& op) {
  if (op.n() != 2 || op.nu() != 2) return std::nullopt;
  const double a = op.tensors().pf(1, 0, 0);
  const double b = op.tensors().pm(1, 0, 0);
  if (!(a > 0 && a < 1 && b > 0 && b < 1)) return std::nullopt;
  const tt::TwoTypeParams p{a, b};
  if (!(tt::lift_to_v(p).tensors() == op.tensors())) return std::nullopt;
  return p;
}

std::optional<ft::FourTypeParams> as_four_type(const BisexualOperator& op) {
  if (op.n() != 4 || op.nu() != 4) return std::nullopt;
  const auto& t = op.tensors();
  ft::FourTypeParams p{t.pf(1, 0, 0), t.pf(3, 2, 2), t.pm(1, 0, 0), t.pm(3, 2, 2), 0.5, 0.5};
  for (double v : {p.a, p.b, p.c, p.d}) {
    if (!(v > 0 && v < 1)) return std::nullopt;
  }
  const BisexualOperator ref_op = ft::v4_operator(p);
  const auto& ref = ref_op.tensors();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (std::abs(ref.pf(i, k, j) - t.pf(i, k, j)) > 1e-12) return std::nullopt;
        if (std::abs(ref.pm(i, k, j) - t.pm(i, k, j)) > 1e-12) return std::nullopt;
      }
    }
  }
  return p;
}

int cmd_verify(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  const Tolerance tol = spec.tolerance();
  if (spec.grid < 1 || spec.samples < 1) input_error("grid and sample counts must be >= 1");
  std::vector<CellResult> cells;
  json meta{{"command", "verify"}, {"source", source_name(src)}, {"seed", spec.seed},
            {"tolerance", tolerance_json(tol)}, {"match_tol", spec.match_tol}};
  auto axis = [&](std::size_t i) {
    return 0.05 + (static_cast<double>(i) + 0.5) * 0.9 / static_cast<double>(spec.grid);
  };

  if (src == Source::Two) {
    cells.resize(spec.grid * spec.grid);
    meta["grid"] = spec.grid;
    parallel_for(cells.size(), [&](std::size_t cell) {
      auto rng = cell_rng(spec.seed, cell);
      const tt::TwoTypeParams p = tt::TwoTypeParams::make(axis(cell / spec.grid), axis(cell % spec.grid));
      const PopulationState s0 = tt::lift_state({uniform_open(0.0, 1.0, rng), uniform_open(0.0, 1.0, rng)});
      cells[cell] = verify_two_cell(p, s0, tol, spec.match_tol);
    });
  } else if (src == Source::Four) {
    const double b = need(spec.b, "b");
    const double d = need(spec.d, "d");
    cells.resize(spec.grid * spec.grid);
    meta["grid"] = spec.grid;
    parallel_for(cells.size(), [&](std::size_t cell) {
      auto rng = cell_rng(spec.seed, cell);
      const double a0 = spec.a0 ? *spec.a0 : uniform_open(0.05, 0.95, rng);
      const double c0 = spec.c0 ? *spec.c0 : uniform_open(0.05, 0.95, rng);
      const auto p = ft::FourTypeParams::make(axis(cell / spec.grid), b, axis(cell % spec.grid), d, a0, c0);
      const PopulationState s0 = random_slice_state(p, rng);
      cells[cell] = verify_four_cell(p, s0, rng, tol, spec.match_tol);
    });
  } else if (src == Source::TMap) {
    cells.resize(spec.grid);
    meta["grid"] = spec.grid;
    const double a0 = need(spec.a0, "a0");
    const double c0 = need(spec.c0, "c0");
    parallel_for(cells.size(), [&](std::size_t cell) {
      auto rng = cell_rng(spec.seed, cell);
      const double a = axis(cell);
      const auto p = ft::FourTypeParams::make(a, 0.5, 1.0 - a, 0.5, a0, c0);
      CellResult r;
      r.pass = true;
      r.doc = t_map_check(p, rng, tol, spec.match_tol, r.pass);
      r.mismatch = r.doc["mismatch"].get<double>();
      r.doc["route"] = "t_map";
      r.doc["pass"] = r.pass;
      cells[cell] = std::move(r);
    });
  } else {
    const BisexualOperator op = load_operator(spec, src);
    const auto two = as_two_type(op);
    const auto four = as_four_type(op);
    const bool identity = !two && !four && is_identity(op, 20, tol, spec.seed);
    meta["samples"] = spec.samples;
    meta["recognized"] = two ? "two_type" : four ? "four_type" : identity ? "identity" : "generic";
    cells.resize(spec.samples);
    parallel_for(cells.size(), [&](std::size_t cell) {
      auto rng = cell_rng(spec.seed, cell);
      const PopulationState s0 = random_state(op.n(), op.nu(), rng);
      if (two) {
        cells[cell] = verify_two_cell(*two, s0, tol, spec.match_tol);
        return;
      }
      if (four) {
        ft::FourTypeParams p = *four;
        std::tie(p.a0, p.c0) = ft::slice_masses(s0);
        // the first step lands in the slice; verify from there
        const PopulationState s1 = apply(op, s0);
        cells[cell] = verify_four_cell(p, s1, rng, tol, spec.match_tol);
        return;
      }
      const Trajectory tr = iterate(op, s0, tol);
      CellResult r;
      const PopulationState got = iterated_limit(tr);
      r.doc = json{{"route", identity ? "identity" : "convergence_only"},
                   {"initial", io::state_to_json(s0)},
                   {"iterated", io::state_to_json(got)},
                   {"converged", tr.converged},
                   {"steps", tr.steps_taken}};
      if (identity) {
        r.mismatch = state_distance(s0, got);
        r.pass = r.mismatch <= spec.match_tol;
        r.doc["mismatch"] = r.mismatch;
      } else {
        r.pass = tr.converged;
      }
      r.doc["pass"] = r.pass;
      cells[cell] = std::move(r);
    });
  }

  if (!spec.portrait.empty()) {
    std::ostringstream csv;
    csv << "figure,traj,step,x,y\n";
    json figs = json::array();
    if (src == Source::Two || (src != Source::Four && src != Source::TMap)) {
      const tt::TwoTypeParams p = tt::TwoTypeParams::make(spec.a.value_or(0.4), spec.b.value_or(0.5));
      figs.push_back(portrait_rows_two(p, csv, 0));
    } else {
      const double a0 = spec.a0.value_or(0.5);
      const double c0 = spec.c0.value_or(0.5);
      figs.push_back(portrait_rows_four(ft::FourTypeParams::make(0.3, 0.5, 0.3, 0.5, a0, c0), csv, 1));
      figs.push_back(portrait_rows_four(ft::FourTypeParams::make(0.7, 0.5, 0.7, 0.5, a0, c0), csv, 2));
      figs.push_back(portrait_rows_four(ft::FourTypeParams::make(0.4, 0.5, 0.6, 0.5, a0, c0), csv, 3));
    }
    io::write_text_file(spec.portrait, csv.str());
    meta["portraits"] = std::move(figs);
  }

  std::size_t passed = 0;
  double worst = 0.0;
  json list = json::array();
  for (auto& c : cells) {
    passed += c.pass ? 1 : 0;
    worst = std::max(worst, c.mismatch);
    list.push_back(std::move(c.doc));
  }
  meta["cells"] = std::move(list);
  meta["summary"] = json{{"cells", cells.size()},
                         {"passed", passed},
                         {"failed", cells.size() - passed},
                         {"max_mismatch", worst},
                         {"pass", passed == cells.size()}};
  emit(spec, out, meta);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<double> sweep_values(const RunSpec& spec) {
  std::vector<double> v;
  for (std::size_t i = 0; i < spec.steps; ++i) {
    v.push_back(spec.steps == 1 ? spec.from
                                : spec.from + (spec.to - spec.from) * static_cast<double>(i) /
                                                  static_cast<double>(spec.steps - 1));
  }
  return v;
}

std::string four_class(const ft::FourTypeParams& p) {
  const bool ca = ft::on_critical_line(p.a, p.c);
  const bool cb = ft::on_critical_line(p.b, p.d);
  if (ca && cb) return "critical_both";
  if (ca) return "critical_ac";
  if (cb) return "critical_bd";
  const bool ac = p.a + p.c > 1.0;
  const bool bd = p.b + p.d > 1.0;
  return !ac && !bd ? "row1" : !ac && bd ? "row2" : ac && !bd ? "row3" : "row4";
}

int cmd_sweep(const RunSpec& spec, std::ostream& out) {
  const Source src = resolve_source(spec);
  const Tolerance tol = spec.tolerance();
  const std::vector<double> values = sweep_values(spec);
  std::vector<std::string> rows(values.size());
  std::string header;
  auto fmt = [](double v) { return io::format_double(v); };

  if (src == Source::TMap) {
    if (spec.param != "a" && spec.param != "a0" && spec.param != "c0") {
      input_error("T-map sweeps vary a, a0 or c0");
    }
    header = "a,a0,c0,x0,limit,class,converged,steps,error";
    std::optional<double> x0_given;
    if (!spec.state.empty()) {
      const auto v = parse_list(spec.state);
      if (v.size() != 1) input_error("T-map state is a single x0");
      x0_given = v[0];
    }
    parallel_for(values.size(), [&](std::size_t i) {
      double a = spec.a.value_or(0.5), a0 = spec.a0.value_or(0.5), c0 = spec.c0.value_or(0.5);
      (spec.param == "a" ? a : spec.param == "a0" ? a0 : c0) = values[i];
      std::ostringstream row;
      row << fmt(a) << "," << fmt(a0) << "," << fmt(c0) << ",";
      try {
        const ft::TMapParams tp = ft::TMapParams::make(a, a0, c0);
        auto rng = cell_rng(spec.seed, 0);
        double x = x0_given ? *x0_given : uniform_open(0.0, 1.0, rng);
        row << fmt(x) << ",";
        bool converged = false;
        std::size_t t = 0;
        for (; t < tol.max_iters; ++t) {
          const double next = ft::t_step(tp, x);
          const bool done = std::abs(next - x) <= tol.iter_eps;
          x = next;
          if (done) {
            converged = true;
            break;
          }
        }
        row << fmt(x) << "," << (tp.a == 0.5 ? "t3" : "t1") << "," << (converged ? "true" : "false")
            << "," << t << ",";
      } catch (const Error& e) {
        row << ",,,,," << csv_quote(e.what());
      }
      rows[i] = row.str();
    });
  } else if (src == Source::Four) {
    static const std::vector<std::string> names{"a", "b", "c", "d", "a0", "c0"};
    if (std::find(names.begin(), names.end(), spec.param) == names.end()) {
      input_error("--param must be one of a, b, c, d, a0, c0");
    }
    std::optional<PopulationState> given;
    if (!spec.state.empty()) {
      given = io::parse_state(spec.state);
      if (spec.param == "a0" || spec.param == "c0") {
        input_error("a0 and c0 follow from a full --state and cannot be swept with one");
      }
    }
    header = "a,b,c,d,a0,c0";
    for (const char* s : {"x", "y"}) {
      for (int i = 1; i <= 4; ++i) header += std::string(",") + s + std::to_string(i);
    }
    for (const char* s : {"x", "y"}) {
      for (int i = 1; i <= 4; ++i) header += std::string(",lim_") + s + std::to_string(i);
    }
    header += ",class,converged,steps,error";
    parallel_for(values.size(), [&](std::size_t i) {
      std::array<double, 6> v{spec.a.value_or(0.3), spec.b.value_or(0.3), spec.c.value_or(0.3),
                              spec.d.value_or(0.3), spec.a0.value_or(0.5), spec.c0.value_or(0.5)};
      if (given) std::tie(v[4], v[5]) = ft::slice_masses(*given);
      const auto idx = static_cast<std::size_t>(
          std::find(names.begin(), names.end(), spec.param) - names.begin());
      v[idx] = values[i];
      std::ostringstream row;
      for (std::size_t k = 0; k < 6; ++k) row << (k ? "," : "") << fmt(v[k]);
      try {
        const auto p = ft::FourTypeParams::make(v[0], v[1], v[2], v[3], v[4], v[5]);
        auto rng = cell_rng(spec.seed, 0);
        const PopulationState s0 = given ? *given : random_slice_state(p, rng);
        const Trajectory tr =
            iterate([&p](const PopulationState& s) { return ft::v4_step(p, s); }, s0, tol);
        const PopulationState lim = iterated_limit(tr);
        for (const auto* st : {&s0, &lim}) {
          for (double x : st->female.probs()) row << "," << fmt(x);
          for (double y : st->male.probs()) row << "," << fmt(y);
        }
        row << "," << four_class(p) << "," << (tr.converged ? "true" : "false") << ","
            << tr.steps_taken << ",";
      } catch (const Error& e) {
        row << std::string(16, ',') << ",,," << "," << csv_quote(e.what());
      }
      rows[i] = row.str();
    });
  } else if (src == Source::Two) {
    if (spec.param != "a" && spec.param != "b") input_error("--param must be a or b");
    header = "a,b,x1,x2,y1,y2,lim_x1,lim_x2,lim_y1,lim_y2,class,converged,steps,error";
    std::optional<PopulationState> given;
    if (!spec.state.empty()) {
      std::optional<ft::FourTypeParams> unused;
      given = initial_states(spec, src, unused).front();
    }
    parallel_for(values.size(), [&](std::size_t i) {
      double a = spec.a.value_or(0.5), b = spec.b.value_or(0.5);
      (spec.param == "a" ? a : b) = values[i];
      std::ostringstream row;
      row << fmt(a) << "," << fmt(b);
      try {
        const auto p = tt::TwoTypeParams::make(a, b);
        auto rng = cell_rng(spec.seed, 0);
        const PopulationState s0 =
            given ? *given : tt::lift_state({uniform_open(0.0, 1.0, rng), uniform_open(0.0, 1.0, rng)});
        const Trajectory tr = iterate(tt::lift_to_v(p), s0, tol);
        const PopulationState lim = iterated_limit(tr);
        for (const auto* st : {&s0, &lim}) {
          for (double x : st->female.probs()) row << "," << fmt(x);
          for (double y : st->male.probs()) row << "," << fmt(y);
        }
        const tt::ReducedState2 r0 = tt::project(s0);
        const char* cls = tt::fixed_sets_w(p).contains(r0)         ? "fixed"
                          : p.a * tt::invariant_line_c(p, r0) < 1.0 ? "ac<1"
                                                                    : "ac>=1";
        row << "," << cls << "," << (tr.converged ? "true" : "false") << "," << tr.steps_taken << ",";
      } catch (const Error& e) {
        row << std::string(8, ',') << ",,," << "," << csv_quote(e.what());
      }
      rows[i] = row.str();
    });
  } else {
    input_error("sweep works on --model two, --model four or --critical-line");
  }

  std::ostringstream csv;
  csv << header << "\n";
  for (const auto& r : rows) csv << r << "\n";
  if (spec.output.empty()) {
    out << csv.str();
  } else {
    io::write_text_file(spec.output, csv.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_source_options(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--operator", spec.operator_path, "Operator JSON file");
  sub->add_option("--construction", spec.construction_path, "Construction JSON file");
  sub->add_option("--model", spec.model, "Closed-form model: two or four");
  sub->add_flag("--critical-line", spec.critical_line, "Use the a + c = 1 map T");
  sub->add_option("--a", spec.a);
  sub->add_option("--b", spec.b);
  sub->add_option("--c", spec.c);
  sub->add_option("--d", spec.d);
  sub->add_option("--a0", spec.a0);
  sub->add_option("--c0", spec.c0);
}

void add_tolerance_options(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--iter-eps", spec.iter_eps, "Successive-state stop distance");
  sub->add_option("--abs-eps", spec.abs_eps, "Absolute tolerance for fixed points");
  sub->add_option("--max-iters", spec.max_iters, "Iteration cap");
  sub->add_option("--seed", spec.seed, "Seed for random states");
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic stochastic operators of bisexual populations"};
  app.require_subcommand(1);
  RunSpec spec;

  auto* construct = app.add_subcommand("construct", "Build an operator from a graph description");
  construct->add_option("--input", spec.construction_path, "Construction JSON")->required();
  construct->add_option("-o,--output", spec.output, "Operator JSON to write")->required();
  add_tolerance_options(construct, spec);

  auto* iter = app.add_subcommand("iterate", "Run trajectories");
  add_source_options(iter, spec);
  add_tolerance_options(iter, spec);
  iter->add_option("--state", spec.state, "x1,..;y1,.. | x,y | x,y,u,v | x0 | grid:N")->required();
  iter->add_option("-o,--output", spec.output, "Trajectory file");
  iter->add_option("--summary", spec.summary, "Summary JSON file (default stdout)");
  iter->add_option("--format", spec.format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}));

  auto* fixed = app.add_subcommand("fixed-points", "Closed-form and searched fixed points");
  add_source_options(fixed, spec);
  add_tolerance_options(fixed, spec);
  fixed->add_option("--grid", spec.grid, "Seed lattice size")->check(CLI::Range(2, 1000));
  fixed->add_option("-o,--output", spec.output);

  auto* classify = app.add_subcommand("classify", "Fixed-point types");
  add_source_options(classify, spec);
  add_tolerance_options(classify, spec);
  classify->add_option("--state", spec.state);
  classify->add_option("-o,--output", spec.output);

  auto* predict = app.add_subcommand("predict", "Closed-form limit of a trajectory");
  add_source_options(predict, spec);
  add_tolerance_options(predict, spec);
  predict->add_option("--state", spec.state)->required();
  predict->add_option("-o,--output", spec.output);

  auto* verify = app.add_subcommand("verify", "Compare predicted and iterated limits");
  add_source_options(verify, spec);
  add_tolerance_options(verify, spec);
  verify->add_option("--grid", spec.grid, "Parameter grid size per axis");
  verify->add_option("--samples", spec.samples, "Random initial states (operator sources)");
  verify->add_option("--match-tol", spec.match_tol, "Max-norm pass threshold");
  verify->add_option("--portrait", spec.portrait, "Phase-portrait CSV to write");
  verify->add_option("-o,--output", spec.output, "Report JSON (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Limits along a one-parameter family");
  add_source_options(sweep, spec);
  add_tolerance_options(sweep, spec);
  sweep->add_option("--param", spec.param, "Parameter to vary")->required();
  sweep->add_option("--from", spec.from);
  sweep->add_option("--to", spec.to);
  sweep->add_option("--steps", spec.steps, "Number of rows (0 gives a header only)");
  sweep->add_option("--state", spec.state);
  sweep->add_option("-o,--output", spec.output, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (construct->parsed()) return cmd_construct(spec, out);
  if (iter->parsed()) return cmd_iterate(spec, out);
  if (fixed->parsed()) return cmd_fixed_points(spec, out);
  if (classify->parsed()) return cmd_classify(spec, out);
  if (predict->parsed()) return cmd_predict(spec, out);
  if (verify->parsed()) return cmd_verify(spec, out);
  return cmd_sweep(spec, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? kExitIo : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace qsobp::cli

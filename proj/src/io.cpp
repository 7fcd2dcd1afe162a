#include "qsobp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qsobp/error.hpp"

namespace qsobp::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Schema, "field '" + field + "': " + what);
}

const json& require(const json& doc, const char* field) {
  if (!doc.is_object()) schema_error("<root>", "expected an object");
  const auto it = doc.find(field);
  if (it == doc.end()) schema_error(field, "missing");
  return *it;
}

std::size_t require_count(const json& doc, const char* field, std::size_t min) {
  const json& v = require(doc, field);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
    schema_error(field, "expected an integer >= " + std::to_string(min));
  }
  return v.get<std::size_t>();
}

std::vector<double> parse_weights(const json& w, const std::string& field,
                                  const std::vector<std::size_t>& part) {
  std::vector<double> out(part.size(), 0.0);
  if (w.is_array()) {
    if (w.size() != part.size()) {
      schema_error(field, "expected " + std::to_string(part.size()) + " weights, got " +
                              std::to_string(w.size()));
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!w[i].is_number()) schema_error(field + "[" + std::to_string(i) + "]", "not a number");
      out[i] = w[i].get<double>();
    }
    return out;
  }
  if (!w.is_object()) schema_error(field, "expected an object or an array");
  std::vector<bool> seen(part.size(), false);
  for (const auto& [key, value] : w.items()) {
    std::size_t cell = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), cell);
    if (res.ec != std::errc() || res.ptr != key.data() + key.size() || cell == 0) {
      schema_error(field + "." + key, "key must be a 1-based cell index");
    }
    const auto it = std::lower_bound(part.begin(), part.end(), cell - 1);
    if (it == part.end() || *it != cell - 1) {
      schema_error(field + "." + key, "cell is not in this partition");
    }
    if (!value.is_number()) schema_error(field + "." + key, "not a number");
    const auto pos = static_cast<std::size_t>(it - part.begin());
    out[pos] = value.get<double>();
    seen[pos] = true;
  }
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (!seen[i]) schema_error(field, "no weight for cell " + std::to_string(part[i] + 1));
  }
  return out;
}

}  // namespace

ConstructionInput parse_construction(const json& doc) {
  const std::size_t vertices = require_count(doc, "vertices", 1);
  const std::size_t alleles = require_count(doc, "alleles", 1);
  std::vector<Graph::Edge> edges;
  const json& e = require(doc, "edges");
  if (!e.is_array()) schema_error("edges", "expected an array");
  for (std::size_t i = 0; i < e.size(); ++i) {
    const json& pair = e[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer() || pair[0].get<long long>() < 1 ||
        pair[1].get<long long>() < 1) {
      schema_error("edges[" + std::to_string(i) + "]", "expected [u, v] with 1-based vertices");
    }
    edges.emplace_back(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
  }
  std::vector<std::size_t> females;
  const json& f = require(doc, "females");
  if (!f.is_array()) schema_error("females", "expected an array of 1-based cell indices");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i].is_number_integer() || f[i].get<long long>() < 1) {
      schema_error("females[" + std::to_string(i) + "]", "expected a 1-based cell index");
    }
    females.push_back(f[i].get<std::size_t>() - 1);
  }
  std::size_t cap = kDefaultCellCap;
  if (doc.contains("cell_cap")) cap = require_count(doc, "cell_cap", 1);

  ConfigurationSpace space(Graph(vertices, std::move(edges)), alleles, std::move(females), cap);
  WeightPair weights{parse_weights(require(doc, "female_weights"), "female_weights", space.females()),
                     parse_weights(require(doc, "male_weights"), "male_weights", space.males())};
  return {std::move(space), std::move(weights)};
}

json operator_to_json(const BisexualOperator& op) {
  const HeredityTensors& t = op.tensors();
  json pf = json::array();
  json pm = json::array();
  for (std::size_t i = 0; i < op.n(); ++i) {
    json pf_i = json::array();
    json pm_i = json::array();
    for (std::size_t k = 0; k < op.nu(); ++k) {
      json row_f = json::array();
      for (std::size_t j = 0; j < op.n(); ++j) row_f.push_back(t.pf(i, k, j));
      json row_m = json::array();
      for (std::size_t l = 0; l < op.nu(); ++l) row_m.push_back(t.pm(i, k, l));
      pf_i.push_back(std::move(row_f));
      pm_i.push_back(std::move(row_m));
    }
    pf.push_back(std::move(pf_i));
    pm.push_back(std::move(pm_i));
  }
  return json{{"n", op.n()}, {"nu", op.nu()}, {"pf", std::move(pf)}, {"pm", std::move(pm)}};
}

BisexualOperator operator_from_json(const json& doc) {
  const std::size_t n = require_count(doc, "n", 1);
  const std::size_t nu = require_count(doc, "nu", 1);
  HeredityTensors t(n, nu);
  auto read = [&](const char* field, std::size_t last, auto&& setter) {
    const json& arr = require(doc, field);
    if (!arr.is_array() || arr.size() != n) schema_error(field, "expected n rows");
    for (std::size_t i = 0; i < n; ++i) {
      if (!arr[i].is_array() || arr[i].size() != nu) {
        schema_error(std::string(field) + "[" + std::to_string(i) + "]", "expected nu rows");
      }
      for (std::size_t k = 0; k < nu; ++k) {
        const json& row = arr[i][k];
        const std::string where =
            std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
        if (!row.is_array() || row.size() != last) schema_error(where, "wrong row length");
        for (std::size_t j = 0; j < last; ++j) {
          if (!row[j].is_number()) schema_error(where, "not a number");
          setter(i, k, j, row[j].get<double>());
        }
      }
    }
  };
  read("pf", n, [&](std::size_t i, std::size_t k, std::size_t j, double v) { t.pf(i, k, j) = v; });
  read("pm", nu, [&](std::size_t i, std::size_t k, std::size_t l, double v) { t.pm(i, k, l) = v; });
  return BisexualOperator(std::move(t));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Schema, path.string() + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": invalid JSON");
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json state_to_json(const PopulationState& s) {
  return json{{"x", std::vector<double>(s.female.probs().begin(), s.female.probs().end())},
              {"y", std::vector<double>(s.male.probs().begin(), s.male.probs().end())}};
}

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::InvalidParameter, "bad coordinate '" + std::string(tok) + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

PopulationState parse_state(std::string_view text) {
  const std::size_t semi = text.find(';');
  if (semi == std::string_view::npos) {
    throw Error(ErrorCode::InvalidParameter, "state must look like 'x1,..,xn;y1,..,ynu'");
  }
  return make_state(parse_numbers(text.substr(0, semi)), parse_numbers(text.substr(semi + 1)));
}

}  // namespace qsobp::io

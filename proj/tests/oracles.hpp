#pragma once

// Reference computations written independently of the library, used to check it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "qsobp/construction.hpp"
#include "qsobp/dynamics.hpp"
#include "qsobp/simplex.hpp"

namespace oracle {

using Cells = std::vector<std::vector<int>>;

// Component label of every vertex (0-based) by repeated relaxation.
inline std::vector<int> component_labels(std::size_t vertices,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<int> label(vertices);
  for (std::size_t v = 0; v < vertices; ++v) label[v] = static_cast<int>(v);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [u, v] : edges) {
      const int m = std::min(label[u - 1], label[v - 1]);
      if (label[u - 1] != m || label[v - 1] != m) {
        label[u - 1] = label[v - 1] = m;
        changed = true;
      }
    }
  }
  return label;
}

// Cells in base-|Phi| counting order with vertex 1 as the leading digit.
inline Cells all_cells(std::size_t vertices, int alleles) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < vertices; ++i) total *= static_cast<std::size_t>(alleles);
  Cells out;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> cell(vertices);
    std::size_t c = code;
    for (std::size_t v = vertices; v-- > 0;) {
      cell[v] = static_cast<int>(c % static_cast<std::size_t>(alleles)) + 1;
      c /= static_cast<std::size_t>(alleles);
    }
    out.push_back(cell);
  }
  return out;
}

// sigma agrees with mother or father on every component.
inline bool compatible(const std::vector<int>& label, const std::vector<int>& sigma,
                       const std::vector<int>& mother, const std::vector<int>& father) {
  for (int comp : label) {
    bool m = true, f = true;
    for (std::size_t v = 0; v < label.size(); ++v) {
      if (label[v] != comp) continue;
      m = m && sigma[v] == mother[v];
      f = f && sigma[v] == father[v];
    }
    if (!m && !f) return false;
  }
  return true;
}

struct Tensors {
  std::size_t n = 0, nu = 0;
  std::vector<double> pf, pm;  // [i][k][j] flattened
  double f(std::size_t i, std::size_t k, std::size_t j) const { return pf[(i * nu + k) * n + j]; }
  double m(std::size_t i, std::size_t k, std::size_t l) const { return pm[(i * nu + k) * nu + l]; }
};

// Direct evaluation of the heredity ratio formula over all pairs.
inline Tensors heredity(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                        int alleles, const std::vector<std::size_t>& females,
                        const std::vector<double>& wf, const std::vector<double>& wm) {
  const Cells cells = all_cells(vertices, alleles);
  const auto label = component_labels(vertices, edges);
  std::vector<std::size_t> males;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (std::find(females.begin(), females.end(), c) == females.end()) males.push_back(c);
  }
  Tensors t;
  t.n = females.size();
  t.nu = males.size();
  t.pf.assign(t.n * t.nu * t.n, 0.0);
  t.pm.assign(t.n * t.nu * t.nu, 0.0);
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t k = 0; k < t.nu; ++k) {
      const auto& mo = cells[females[i]];
      const auto& fa = cells[males[k]];
      double zf = 0.0, zm = 0.0;
      for (std::size_t j = 0; j < t.n; ++j) {
        if (compatible(label, cells[females[j]], mo, fa)) zf += wf[j];
      }
      for (std::size_t l = 0; l < t.nu; ++l) {
        if (compatible(label, cells[males[l]], mo, fa)) zm += wm[l];
      }
      for (std::size_t j = 0; j < t.n; ++j) {
        if (compatible(label, cells[females[j]], mo, fa)) t.pf[(i * t.nu + k) * t.n + j] = wf[j] / zf;
      }
      for (std::size_t l = 0; l < t.nu; ++l) {
        if (compatible(label, cells[males[l]], mo, fa)) t.pm[(i * t.nu + k) * t.nu + l] = wm[l] / zm;
      }
    }
  }
  return t;
}

// Root moduli of lambda^2 + B lambda + C via std::complex.
inline std::array<double, 2> root_moduli(double B, double C) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(B * B - 4.0 * C, 0.0));
  const double r1 = std::abs((-B + disc) / 2.0);
  const double r2 = std::abs((-B - disc) / 2.0);
  return {std::min(r1, r2), std::max(r1, r2)};
}

inline std::array<std::complex<double>, 2> roots(double B, double C) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(B * B - 4.0 * C, 0.0));
  return {(-B + disc) / 2.0, (-B - disc) / 2.0};
}

// Central differences of the raw coordinate map.
inline qsobp::Matrix fd_jacobian(const qsobp::BisexualOperator& op, std::vector<double> x,
                                 std::vector<double> y, double h) {
  const std::size_t n = op.n(), nu = op.nu(), d = n + nu;
  qsobp::Matrix j(d, d);
  std::vector<double> xp(n), yp(nu), xm(n), ym(nu);
  for (std::size_t c = 0; c < d; ++c) {
    double& v = c < n ? x[c] : y[c - n];
    const double keep = v;
    v = keep + h;
    qsobp::evaluate(op, x, y, xp, yp);
    v = keep - h;
    qsobp::evaluate(op, x, y, xm, ym);
    v = keep;
    for (std::size_t r = 0; r < n; ++r) j(r, c) = (xp[r] - xm[r]) / (2 * h);
    for (std::size_t r = 0; r < nu; ++r) j(n + r, c) = (yp[r] - ym[r]) / (2 * h);
  }
  return j;
}

// Reduced two-type map written out directly.
inline std::pair<double, double> two_step(double a, double b, double x, double y) {
  return {x + a * (1 - x) * y, y * (x + b * (1 - x))};
}

// Eight-coordinate four-type map, coordinate by coordinate.
inline std::array<double, 8> four_step(double a, double b, double c, double d,
                                       const std::array<double, 8>& s) {
  const double x1 = s[0], x2 = s[1], x3 = s[2], x4 = s[3];
  const double y1 = s[4], y2 = s[5], y3 = s[6], y4 = s[7];
  return {x1 - (1 - a) * x1 * y2 + a * x2 * y1,
          x2 + (1 - a) * x1 * y2 - a * x2 * y1,
          x3 - (1 - b) * x3 * y4 + b * x4 * y3,
          x4 + (1 - b) * x3 * y4 - b * x4 * y3,
          y1 - (1 - c) * x2 * y1 + c * x1 * y2,
          y2 + (1 - c) * x2 * y1 - c * x1 * y2,
          y3 - (1 - d) * x4 * y3 + d * x3 * y4,
          y4 + (1 - d) * x4 * y3 - d * x3 * y4};
}

// Brute-force iteration of a scalar map to a fixed point.
inline double iterate_scalar(const std::function<double(double)>& f, double x, std::size_t cap,
                             double eps) {
  for (std::size_t t = 0; t < cap; ++t) {
    const double nx = f(x);
    if (std::abs(nx - x) <= eps) return nx;
    x = nx;
  }
  return x;
}

}  // namespace oracle

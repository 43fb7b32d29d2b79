#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "onevstwo/errors.hpp"

namespace onevstwo {

// Nodes and weights of an n-point Gauss rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]. Computed once per order via the Jacobi
// matrix (Golub-Welsch) and cached; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

// Gauss-Hermite rule for weight exp(-t^2) on the real line.
const GaussRule& gauss_hermite(int order);

// E[g(X)] for X ~ N(0,1) via Gauss-Hermite of the given order.
template <class F>
double normal_expectation(F&& g, int order) {
  const GaussRule& r = gauss_hermite(order);
  const double root2 = std::sqrt(2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    sum += r.weights[i] * g(root2 * r.nodes[i]);
  return sum / std::sqrt(M_PI);
}

struct Box {
  double x0, x1, y0, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct QuadratureConfig {
  const char* scheme = "gauss-legendre-adaptive";
  double abs_tol = 1e-10;
  double half_width = 8.0;  // truncation half-width, extended by d/2 downstream
  int panel_order = 12;     // Gauss-Legendre points per axis per panel
  int max_panels = 200000;  // subdivision budget
};

namespace detail {

template <class F>
double tensor_panel(const F& f, const Box& b, const GaussRule& r) {
  const double cx = 0.5 * (b.x0 + b.x1), sx = 0.5 * (b.x1 - b.x0);
  const double cy = 0.5 * (b.y0 + b.y1), sy = 0.5 * (b.y1 - b.y0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = cx + sx * r.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
      row += r.weights[j] * f(x, cy + sy * r.nodes[j]);
    sum += r.weights[i] * row;
  }
  return sum * sx * sy;
}

}  // namespace detail

// Product-rule Gauss-Legendre panels with adaptive subdivision: a panel is
// accepted when refining it into quadrants moves the estimate by less than its
// share of the absolute tolerance. Throws QuadratureFailure when the panel
// budget runs out.
template <class F>
double integrate2d(F&& f, const Box& box, const QuadratureConfig& cfg = {}) {
  const GaussRule& rule = gauss_legendre(cfg.panel_order);

  struct Item {
    Box b;
    double coarse;
    double tol;
  };

  // Pre-split into panels of width <= 2 so the first refinement already sees
  // well-resolved integrands.
  std::vector<Item> stack;
  const int nx = std::max(1, static_cast<int>(std::ceil(box.width() / 2.0)));
  const int ny = std::max(1, static_cast<int>(std::ceil(box.height() / 2.0)));
  const double dx = box.width() / nx, dy = box.height() / ny;
  const double tol0 = cfg.abs_tol / (nx * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Box b{box.x0 + i * dx, box.x0 + (i + 1) * dx, box.y0 + j * dy,
            box.y0 + (j + 1) * dy};
      stack.push_back({b, detail::tensor_panel(f, b, rule), tol0});
    }

  double total = 0.0;
  int popped = 0;
  while (!stack.empty()) {
    if (++popped > cfg.max_panels)
      throw QuadratureFailure("integrate2d: panel budget exhausted");
    Item it = stack.back();
    stack.pop_back();

    const double mx = 0.5 * (it.b.x0 + it.b.x1);
    const double my = 0.5 * (it.b.y0 + it.b.y1);
    const Box q[4] = {{it.b.x0, mx, it.b.y0, my},
                      {mx, it.b.x1, it.b.y0, my},
                      {it.b.x0, mx, my, it.b.y1},
                      {mx, it.b.x1, my, it.b.y1}};
    double refined = 0.0, part[4];
    for (int k = 0; k < 4; ++k) {
      part[k] = detail::tensor_panel(f, q[k], rule);
      refined += part[k];
    }

    const double err = std::fabs(refined - it.coarse);
    const double floor_tol =
        32.0 * std::numeric_limits<double>::epsilon() * std::fabs(refined);
    if (err <= std::max(it.tol, floor_tol) || it.b.width() < 1e-7) {
      total += refined;
    } else {
      for (int k = 0; k < 4; ++k)
        stack.push_back({q[k], part[k], 0.25 * it.tol});
    }
  }
  return total;
}

}  // namespace onevstwo

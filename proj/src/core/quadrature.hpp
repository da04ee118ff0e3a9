#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <vector>

namespace dtebell::quad {

struct Box {
  double x_lo;
  double x_hi;
  double y_lo;
  double y_hi;
};

struct AdaptiveOptions {
  double abs_tolerance = 1e-9;
  int max_depth = 30;
  int rule_points = 15;  // 15 (Gauss 7 / Kronrod 15) or 21 (Gauss 10 / Kronrod 21)
  std::size_t max_panels = 400000;
};

template <std::size_t K>
struct AdaptiveResult {
  std::array<double, K> value{};
  // Per-component sums of the panel-level |Kronrod - Gauss| differences.
  std::array<double, K> error{};
  std::size_t panels = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Kronrod extension of a Gauss rule on [-1, 1]. Abscissae are the positive
// half in descending order with the center point last; the embedded Gauss
// nodes sit at the odd indices.
struct KronrodRule {
  const double* abscissae;
  const double* kronrod_weights;
  const double* gauss_weights;  // gauss_weights[i] pairs with abscissae[2i+1]
  int half_count;
};

// Throws std::invalid_argument unless points is 15 or 21.
const KronrodRule& kronrod_rule(int points);

namespace detail {

// Expanded 1-D rule on [-1, 1]: every Kronrod node with its Kronrod weight
// and its Gauss weight (zero on Kronrod-only nodes).
struct ExpandedRule {
  std::vector<double> node;
  std::vector<double> wk;
  std::vector<double> wg;
};

inline ExpandedRule expand_rule(const KronrodRule& rule) {
  ExpandedRule out;
  const int half = rule.half_count;
  const int total = 2 * half - 1;
  out.node.resize(total);
  out.wk.resize(total);
  out.wg.assign(total, 0.0);
  // Negative half ascending, center, positive half ascending.
  for (int i = 0; i < half - 1; ++i) {
    out.node[i] = -rule.abscissae[i];
    out.wk[i] = rule.kronrod_weights[i];
    if (i % 2 == 1) {
      out.wg[i] = rule.gauss_weights[i / 2];
    }
  }
  out.node[half - 1] = rule.abscissae[half - 1];
  out.wk[half - 1] = rule.kronrod_weights[half - 1];
  if ((half - 1) % 2 == 1) {
    out.wg[half - 1] = rule.gauss_weights[(half - 1) / 2];
  }
  for (int i = half; i < total; ++i) {
    const int mirror = total - 1 - i;
    out.node[i] = -out.node[mirror];
    out.wk[i] = out.wk[mirror];
    out.wg[i] = out.wg[mirror];
  }
  return out;
}

// Neumaier-compensated accumulator; the final reduction runs over panels in
// a fixed geometric order so results are reproducible for a given spec.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;
  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + compensation; }
};

}  // namespace detail

// Adaptive tensor-product Gauss-Kronrod quadrature of a vector-valued
// integrand over a rectangle. x_breaks/y_breaks give the initial panel
// edges (must start/end at the box edges); the caller is responsible for
// making them fine enough that each initial panel resolves the integrand's
// oscillation. Panels are then split, worst error first, until every
// component's summed error estimate is below abs_tolerance.
template <std::size_t K, typename F>
AdaptiveResult<K> integrate_adaptive(F&& f, const std::vector<double>& x_breaks,
                                     const std::vector<double>& y_breaks,
                                     const AdaptiveOptions& opt) {
  const KronrodRule& rule = kronrod_rule(opt.rule_points);
  const detail::ExpandedRule expanded = detail::expand_rule(rule);
  const std::size_t n_nodes = expanded.node.size();

  struct Panel {
    double x_lo, x_hi, y_lo, y_hi;
    std::array<double, K> value;
    std::array<double, K> error;
    double priority;
    int depth;
    bool alive;
  };

  AdaptiveResult<K> result;
  std::vector<Panel> panels;
  panels.reserve(std::max<std::size_t>(
      1024, (x_breaks.size() - 1) * (y_breaks.size() - 1)));

  std::vector<double> fx_node(n_nodes), fy_node(n_nodes);
  std::vector<std::array<double, K>> row(n_nodes);

  auto evaluate_panel = [&](Panel& panel) {
    const double cx = 0.5 * (panel.x_lo + panel.x_hi);
    const double hx = 0.5 * (panel.x_hi - panel.x_lo);
    const double cy = 0.5 * (panel.y_lo + panel.y_hi);
    const double hy = 0.5 * (panel.y_hi - panel.y_lo);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      fx_node[i] = cx + hx * expanded.node[i];
      fy_node[i] = cy + hy * expanded.node[i];
    }
    std::array<double, K> kron{};
    std::array<double, K> gauss{};
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double wkx = expanded.wk[i];
      const double wgx = expanded.wg[i];
      std::array<double, K> kron_row{};
      std::array<double, K> gauss_row{};
      for (std::size_t j = 0; j < n_nodes; ++j) {
        const std::array<double, K> fv = f(fx_node[i], fy_node[j]);
        for (std::size_t k = 0; k < K; ++k) {
          kron_row[k] += expanded.wk[j] * fv[k];
          gauss_row[k] += expanded.wg[j] * fv[k];
        }
      }
      for (std::size_t k = 0; k < K; ++k) {
        kron[k] += wkx * kron_row[k];
        gauss[k] += wgx * gauss_row[k];
      }
    }
    result.evaluations += n_nodes * n_nodes;
    const double scale = hx * hy;
    panel.priority = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      panel.value[k] = scale * kron[k];
      panel.error[k] = scale * std::abs(kron[k] - gauss[k]);
      panel.priority += panel.error[k];
    }
  };

  std::array<double, K> running_error{};
  for (std::size_t ix = 0; ix + 1 < x_breaks.size(); ++ix) {
    for (std::size_t iy = 0; iy + 1 < y_breaks.size(); ++iy) {
      Panel panel{x_breaks[ix], x_breaks[ix + 1],
                  y_breaks[iy], y_breaks[iy + 1],
                  {},           {},
                  0.0,          0,
                  true};
      evaluate_panel(panel);
      for (std::size_t k = 0; k < K; ++k) {
        running_error[k] += panel.error[k];
      }
      panels.push_back(panel);
    }
  }

  struct HeapEntry {
    double priority;
    std::size_t index;
    bool operator<(const HeapEntry& other) const {
      if (priority != other.priority) return priority < other.priority;
      return index > other.index;  // older panel first on ties
    }
  };
  std::priority_queue<HeapEntry> heap;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    heap.push({panels[i].priority, i});
  }

  auto worst_component = [&]() {
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      worst = std::max(worst, running_error[k]);
    }
    return worst;
  };

  while (worst_component() > opt.abs_tolerance && !heap.empty() &&
         panels.size() + 2 <= opt.max_panels) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (!panels[top.index].alive) {
      continue;
    }
    if (panels[top.index].depth >= opt.max_depth) {
      continue;  // cannot refine further; its error stays in the total
    }
    Panel parent = panels[top.index];
    panels[top.index].alive = false;
    for (std::size_t k = 0; k < K; ++k) {
      running_error[k] -= parent.error[k];
    }
    const bool split_x = (parent.depth % 2) == 0;
    Panel child_a = parent;
    Panel child_b = parent;
    if (split_x) {
      const double mid = 0.5 * (parent.x_lo + parent.x_hi);
      child_a.x_hi = mid;
      child_b.x_lo = mid;
    } else {
      const double mid = 0.5 * (parent.y_lo + parent.y_hi);
      child_a.y_hi = mid;
      child_b.y_lo = mid;
    }
    child_a.depth = child_b.depth = parent.depth + 1;
    child_a.alive = child_b.alive = true;
    evaluate_panel(child_a);
    evaluate_panel(child_b);
    for (const Panel& child : {child_a, child_b}) {
      for (std::size_t k = 0; k < K; ++k) {
        running_error[k] += child.error[k];
      }
      panels.push_back(child);
      heap.push({panels.back().priority, panels.size() - 1});
    }
  }

  // Deterministic reduction: leaves sorted by geometry, compensated sums.
  std::vector<std::size_t> order;
  order.reserve(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (panels[i].alive) {
      order.push_back(i);
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Panel& pa = panels[a];
    const Panel& pb = panels[b];
    if (pa.x_lo != pb.x_lo) return pa.x_lo < pb.x_lo;
    if (pa.y_lo != pb.y_lo) return pa.y_lo < pb.y_lo;
    if (pa.x_hi != pb.x_hi) return pa.x_hi < pb.x_hi;
    return pa.y_hi < pb.y_hi;
  });
  for (std::size_t k = 0; k < K; ++k) {
    detail::CompensatedSum value_sum;
    detail::CompensatedSum error_sum;
    for (std::size_t idx : order) {
      value_sum.add(panels[idx].value[k]);
      error_sum.add(panels[idx].error[k]);
    }
    result.value[k] = value_sum.total();
    result.error[k] = error_sum.total();
  }
  result.panels = order.size();
  result.converged = true;
  for (std::size_t k = 0; k < K; ++k) {
    if (result.error[k] > opt.abs_tolerance) {
      result.converged = false;
    }
  }
  return result;
}

}  // namespace dtebell::quad

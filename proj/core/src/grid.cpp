#include "utm/grid.hpp"

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

PanelGrid::PanelGrid(std::vector<double> breaks, int order) : p_(order), breaks_(std::move(breaks)) {
  if (breaks_.size() < 2) raise(ErrorKind::Argument, "PanelGrid: need at least two breaks");
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1])) raise(ErrorKind::Argument, "PanelGrid: breaks must increase");
  const GaussRule& g = gauss_legendre(p_);
  const size_t P = panels();
  x_.reserve(P * (p_ + 1) + 1);
  w_.reserve(P * (p_ + 1) + 1);
  for (size_t i = 0; i < P; ++i) {
    double a = breaks_[i], b = breaks_[i + 1];
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    x_.push_back(a);
    w_.push_back(0.0);
    for (int j = 0; j < p_; ++j) {
      x_.push_back(c + h * g.x[j]);
      w_.push_back(h * g.w[j]);
    }
  }
  x_.push_back(breaks_.back());
  w_.push_back(0.0);
}

size_t PanelGrid::panel_of_point(size_t i) const {
  size_t panel = i / static_cast<size_t>(p_ + 1);
  return std::min(panel, panels() - 1);
}

std::optional<size_t> PanelGrid::find_break(double x) const {
  double tol = 1e-13 * std::max(1.0, hi() - lo());
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x - tol);
  if (it != breaks_.end() && std::abs(*it - x) <= tol) return static_cast<size_t>(it - breaks_.begin());
  return std::nullopt;
}

std::optional<size_t> PanelGrid::find_point(double x) const {
  if (auto b = find_break(x)) return break_point(*b);
  if (x < lo() || x > hi()) return std::nullopt;
  size_t panel = panel_of(x);
  double tol = 1e-13 * std::max(1.0, hi() - lo());
  for (int j = 0; j < p_; ++j) {
    size_t idx = node_point(panel, j);
    if (std::abs(x_[idx] - x) <= tol) return idx;
  }
  return std::nullopt;
}

size_t PanelGrid::panel_of(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.begin()) return 0;
  size_t idx = static_cast<size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, panels() - 1);
}

std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  if (a.empty()) return a;
  double span = std::max(1.0, a.back() - a.front());
  std::vector<double> out;
  out.reserve(a.size());
  for (double v : a) {
    if (out.empty() || v - out.back() > 1e-13 * span) out.push_back(v);
  }
  return out;
}

std::vector<double> subdivide(const std::vector<double>& base, double max_width) {
  std::vector<double> out;
  if (base.empty()) return out;
  out.push_back(base.front());
  for (size_t i = 1; i < base.size(); ++i) {
    double a = base[i - 1], b = base[i];
    int m = std::max(1, static_cast<int>(std::ceil((b - a) / max_width - 1e-9)));
    for (int j = 1; j < m; ++j) out.push_back(a + (b - a) * j / m);
    out.push_back(b);
  }
  return out;
}

std::vector<double> clip_breaks(const std::vector<double>& breaks, double a, double b) {
  std::vector<double> inner;
  for (double v : breaks)
    if (v > a && v < b) inner.push_back(v);
  return merge_breaks(inner, {a, b});
}

}  // namespace utm

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace utm {

// Composite Gauss grid. Point layout per panel i: break i, then p nodes;
// the final break closes the grid. Breaks carry zero quadrature weight.
class PanelGrid {
 public:
  PanelGrid() = default;
  PanelGrid(std::vector<double> breaks, int order);

  int order() const { return p_; }
  size_t panels() const { return breaks_.empty() ? 0 : breaks_.size() - 1; }
  size_t size() const { return x_.size(); }
  double x(size_t i) const { return x_[i]; }
  double weight(size_t i) const { return w_[i]; }
  const std::vector<double>& points() const { return x_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& breaks() const { return breaks_; }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }

  size_t break_point(size_t b) const { return b * static_cast<size_t>(p_ + 1); }
  size_t node_point(size_t panel, int j) const {
    return panel * static_cast<size_t>(p_ + 1) + 1 + static_cast<size_t>(j);
  }
  bool is_break(size_t i) const { return i % static_cast<size_t>(p_ + 1) == 0; }
  size_t panel_of_point(size_t i) const;

  // Index of the break equal to x (relative tolerance 1e-13), if any.
  std::optional<size_t> find_break(double x) const;
  // Index of the grid point equal to x, if any.
  std::optional<size_t> find_point(double x) const;
  // Panel containing x (clamped to the grid).
  size_t panel_of(double x) const;

 private:
  int p_ = 0;
  std::vector<double> breaks_;
  std::vector<double> x_;
  std::vector<double> w_;
};

// Merge, sort, and deduplicate breakpoints (relative tolerance 1e-13 of the span).
std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b);

// Split every panel of `base` into ceil(width / max_width) equal pieces.
std::vector<double> subdivide(const std::vector<double>& base, double max_width);

// Restrict breaks to [a, b], adding a and b.
std::vector<double> clip_breaks(const std::vector<double>& breaks, double a, double b);

}  // namespace utm

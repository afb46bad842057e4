#include "brc/numerics/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brc {

std::array<double, 4> cubic_bspline_basis(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double s = 1.0 - t;
  return {s * s * s / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0, (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0,
          t3 / 6.0};
}

BSplineFitter::AxisTerms BSplineFitter::axis_terms(int n, double spacing, int& n_ctrl) {
  const int spans = std::max(1, static_cast<int>(std::ceil((n - 1) / spacing - 1e-12)));
  n_ctrl = spans + 3;
  AxisTerms terms;
  terms.first.resize(n);
  terms.basis.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = i / spacing;
    const int k = std::min(static_cast<int>(std::floor(u)), spans - 1);
    terms.first[i] = k;
    terms.basis[i] = cubic_bspline_basis(u - k);
  }
  return terms;
}

BSplineFitter::BSplineFitter(const RealImage& weights, double control_spacing)
    : height_(weights.height()), width_(weights.width()), weights_(weights) {
  if (!(control_spacing >= 2.0)) throw std::invalid_argument("bspline: control_spacing must be >= 2");
  double total = 0.0;
  for (double w : weights.values()) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("bspline: weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("bspline: all weights are zero");

  rows_ = axis_terms(height_, control_spacing, ctrl_rows_);
  cols_ = axis_terms(width_, control_spacing, ctrl_cols_);

  const int n = ctrl_rows_ * ctrl_cols_;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  std::array<int, 16> idx{};
  std::array<double, 16> phi{};
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const double w = weights_(r, c);
      if (w == 0.0) continue;
      int m = 0;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b, ++m) {
          idx[m] = (rows_.first[r] + a) * ctrl_cols_ + cols_.first[c] + b;
          phi[m] = rows_.basis[r][a] * cols_.basis[c][b];
        }
      }
      for (int i = 0; i < 16; ++i) {
        const double wi = w * phi[i];
        for (int j = 0; j < 16; ++j) normal(idx[i], idx[j]) += wi * phi[j];
      }
    }
  }
  // Trace-scaled ridge keeps control points with no weighted support solvable.
  const double lambda = 1e-13 * normal.trace() / n;
  normal.diagonal().array() += lambda;
  solver_.compute(normal);
  if (solver_.info() != Eigen::Success) throw std::runtime_error("bspline: normal equations factorization failed");
}

Eigen::VectorXd BSplineFitter::fit_coefficients(const RealImage& field) const {
  require_same_shape(field, weights_, "bspline_smooth");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ctrl_rows_ * ctrl_cols_);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const double wf = weights_(r, c) * field(r, c);
      if (wf == 0.0) continue;
      for (int a = 0; a < 4; ++a) {
        const double ra = wf * rows_.basis[r][a];
        const int base = (rows_.first[r] + a) * ctrl_cols_ + cols_.first[c];
        for (int b = 0; b < 4; ++b) rhs(base + b) += ra * cols_.basis[c][b];
      }
    }
  }
  return solver_.solve(rhs);
}

RealImage BSplineFitter::evaluate(const Eigen::VectorXd& coefficients) const {
  RealImage out(height_, width_);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) {
        const int base = (rows_.first[r] + a) * ctrl_cols_ + cols_.first[c];
        double inner = 0.0;
        for (int b = 0; b < 4; ++b) inner += coefficients(base + b) * cols_.basis[c][b];
        acc += rows_.basis[r][a] * inner;
      }
      out(r, c) = acc;
    }
  }
  return out;
}

RealImage BSplineFitter::smooth(const RealImage& field) const { return evaluate(fit_coefficients(field)); }

RealImage bspline_smooth(const RealImage& field, const RealImage& weights, double control_spacing) {
  return BSplineFitter(weights, control_spacing).smooth(field);
}

}  // namespace brc

#pragma once

#include <Eigen/Dense>
#include <array>

#include "brc/numerics/image.hpp"

namespace brc {

/// Uniform cubic B-spline basis values at local parameter t in [0, 1].
std::array<double, 4> cubic_bspline_basis(double t);

/// Weighted least-squares fit of a tensor-product uniform cubic B-spline
/// surface. The normal matrix depends only on the weights and the grid, so
/// it is factored once and reused for every field fitted with those weights.
class BSplineFitter {
 public:
  /// weights >= 0 and not all zero; control_spacing >= 2 pixels.
  BSplineFitter(const RealImage& weights, double control_spacing);

  /// Fit field and evaluate the spline on the full grid.
  RealImage smooth(const RealImage& field) const;
  /// Control-point coefficients of the fit, row-major (ctrl_rows x ctrl_cols).
  Eigen::VectorXd fit_coefficients(const RealImage& field) const;
  RealImage evaluate(const Eigen::VectorXd& coefficients) const;

  int ctrl_rows() const { return ctrl_rows_; }
  int ctrl_cols() const { return ctrl_cols_; }

 private:
  struct AxisTerms {
    std::vector<int> first;                   // first control index per pixel
    std::vector<std::array<double, 4>> basis;  // four nonzero basis values
  };
  static AxisTerms axis_terms(int n, double spacing, int& n_ctrl);

  int height_;
  int width_;
  int ctrl_rows_ = 0;
  int ctrl_cols_ = 0;
  RealImage weights_;
  AxisTerms rows_;
  AxisTerms cols_;
  Eigen::LDLT<Eigen::MatrixXd> solver_;
};

/// One-shot weighted B-spline smoothing; see BSplineFitter.
RealImage bspline_smooth(const RealImage& field, const RealImage& weights, double control_spacing);

}  // namespace brc

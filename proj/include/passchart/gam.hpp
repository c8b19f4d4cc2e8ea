#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "passchart/kde.hpp"
#include "passchart/surface.hpp"

namespace passchart {

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Cubic B-spline basis on equally spaced knots covering [lo, hi]. Arguments
/// outside the range are clamped to it.
class BSplineBasis {
 public:
  BSplineBasis() = default;
  BSplineBasis(double lo, double hi, int size);

  int size() const noexcept { return size_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  /// Writes all `size()` basis values at x into `out`.
  void evaluate(double x, std::span<double> out) const;
  Eigen::VectorXd evaluate(double x) const;
  /// D'D for the order-`order` difference matrix D on the coefficients.
  Eigen::MatrixXd difference_penalty(int order = 2) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  int size_ = 4;
};

struct GamLambdas {
  double x = 1.0;
  double y = 1.0;
  double xy = 1.0;
};

struct GamConfig {
  int basis_x = 10;
  int basis_y = 8;
  GridGeometry domain = make_geometry();  // knot range
  std::optional<GamLambdas> lambdas;      // fixed smoothing; GCV when absent
  std::vector<double> lambda_grid{1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  int max_iterations = 100;
  // Penalty on the linear trends the difference penalties leave free, as a
  // fraction of the smallest nonzero penalty eigenvalue. 0 turns it off.
  double null_space_shrinkage = 0.1;
};

struct GamDiagnostics {
  int iterations = 0;
  double max_gradient = 0.0;
  double deviance = 0.0;
  double edf = 0.0;
  double gcv = 0.0;
  std::vector<double> objective_history;  // penalized objective after each accepted step
};

struct LabeledPass {
  FieldCoordinate coord;
  bool completed = false;
};

/// Logistic additive model: logit P(complete) = c0 + f_x(x) + f_y(y) + f_xy(x, y)
/// with sum-to-zero marginal smooths and a tensor-product interaction.
class GamModel {
 public:
  /// Model with every smooth zero: a flat surface at logistic(c0).
  static GamModel intercept_only(double c0, const GamConfig& config = {});

  double linear_predictor(const FieldCoordinate& c) const;
  double probability(const FieldCoordinate& c) const;
  Eigen::RowVectorXd design_row(const FieldCoordinate& c) const;

  double intercept() const { return coef_(0); }
  const Eigen::VectorXd& coefficients() const noexcept { return coef_; }
  int parameter_count() const noexcept { return static_cast<int>(coef_.size()); }
  const GamLambdas& lambdas() const noexcept { return lambdas_; }
  const GamDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  friend class GamProblem;

  BSplineBasis bx_;
  BSplineBasis by_;
  Eigen::MatrixXd zx_;  // sum-to-zero constraint null spaces
  Eigen::MatrixXd zy_;
  Eigen::VectorXd coef_;
  GamLambdas lambdas_;
  GamDiagnostics diagnostics_;
};

/// Penalized Bernoulli likelihood for a fixed data set. The objective is the
/// negative log-likelihood plus half the quadratic smoothing penalty.
class GamProblem {
 public:
  /// Throws InsufficientData unless both outcomes are present.
  GamProblem(std::span<const LabeledPass> passes, const GamConfig& config = {});

  int parameter_count() const noexcept { return static_cast<int>(design_.cols()); }
  int observation_count() const noexcept { return static_cast<int>(design_.rows()); }
  const Eigen::MatrixXd& design() const noexcept { return design_; }
  Eigen::MatrixXd penalty(const GamLambdas& lambdas) const;

  double objective(const Eigen::VectorXd& beta, const GamLambdas& lambdas) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const GamLambdas& lambdas) const;

  /// Newton/IRLS with step halving from `start` (intercept-only when absent).
  GamModel fit(const GamLambdas& lambdas, const Eigen::VectorXd* start = nullptr) const;
  /// Fixed lambdas from the config, else the shared lambda minimizing GCV.
  GamModel fit() const;

 private:
  GamConfig config_;
  GamModel shape_;  // bases and constraints, no coefficients
  Eigen::MatrixXd design_;
  Eigen::VectorXd response_;
  Eigen::MatrixXd penalty_x_;
  Eigen::MatrixXd penalty_y_;
  Eigen::MatrixXd penalty_xy_;
};

GamModel fit_gam(std::span<const LabeledPass> passes, const GamConfig& config = {});

/// Inverse-logit of the additive predictor at every cell center.
SurfaceGrid predict_surface(const GamModel& model, const GridGeometry& geometry);

inline constexpr double kDisplayProbabilityFloor = 0.001;
inline constexpr double kDisplayProbabilityCeiling = 0.999;

/// Probabilities clamped to [0.001, 0.999] for rendering and logit differences.
SurfaceGrid clamp_probabilities(SurfaceGrid grid);

}  // namespace passchart

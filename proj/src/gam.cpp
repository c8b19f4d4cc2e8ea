#include "passchart/gam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace passchart {

namespace {

double softplus(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double logistic(double eta) noexcept {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

Eigen::MatrixXd constraint_null_space(const Eigen::VectorXd& column_sums) {
  const auto k = column_sums.size();
  const Eigen::MatrixXd c = column_sums;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  return q.rightCols(k - 1);
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Lifts the zero eigenvalues of a penalty to `shrink` times its smallest
// positive one, so a large lambda pulls the whole term to zero.
Eigen::MatrixXd shrink_null_space(const Eigen::MatrixXd& s, double shrink) {
  if (shrink <= 0.0) return s;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = ev.cwiseAbs().maxCoeff() * 1e-9;
  double smallest = std::numeric_limits<double>::infinity();
  for (double v : ev) {
    if (v > tol) smallest = std::min(smallest, v);
  }
  if (!std::isfinite(smallest)) return s;
  for (auto& v : ev) v = v > tol ? v : shrink * smallest;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

struct Layout {
  Eigen::Index mx;  // constrained marginal sizes
  Eigen::Index my;
  Eigen::Index p() const { return 1 + mx + my + mx * my; }
  Eigen::Index x0() const { return 1; }
  Eigen::Index y0() const { return 1 + mx; }
  Eigen::Index xy0() const { return 1 + mx + my; }
};

}  // namespace

BSplineBasis::BSplineBasis(double lo, double hi, int size) : lo_(lo), hi_(hi), size_(size) {
  if (size < 4) throw Error("cubic B-spline basis needs at least 4 functions");
  if (!(hi > lo)) throw Error("B-spline range must be non-empty");
}

void BSplineBasis::evaluate(double x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const double h = (hi_ - lo_) / (size_ - 3);
  const double t = (std::clamp(x, lo_, hi_) - lo_) / h;
  const int i = std::clamp(static_cast<int>(std::floor(t)), 0, size_ - 4);
  const double u = t - i;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const auto base = static_cast<std::size_t>(i);
  out[base] = (1.0 - u) * (1.0 - u) * (1.0 - u) / 6.0;
  out[base + 1] = (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0;
  out[base + 2] = (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0;
  out[base + 3] = u3 / 6.0;
}

Eigen::VectorXd BSplineBasis::evaluate(double x) const {
  Eigen::VectorXd v(size_);
  evaluate(x, std::span<double>(v.data(), static_cast<std::size_t>(size_)));
  return v;
}

Eigen::MatrixXd BSplineBasis::difference_penalty(int order) const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(size_, size_);
  for (int k = 0; k < order; ++k) {
    d = (d.bottomRows(d.rows() - 1) - d.topRows(d.rows() - 1)).eval();
  }
  return d.transpose() * d;
}

GamModel GamModel::intercept_only(double c0, const GamConfig& config) {
  const GridGeometry& g = config.domain;
  GamModel m;
  m.bx_ = BSplineBasis(g.x_min, g.x_max, config.basis_x);
  m.by_ = BSplineBasis(g.y_min, g.y_max, config.basis_y);
  Eigen::VectorXd sx = Eigen::VectorXd::Zero(config.basis_x);
  Eigen::VectorXd sy = Eigen::VectorXd::Zero(config.basis_y);
  for (int ix = 0; ix < g.nx; ++ix) sx += m.bx_.evaluate(g.x_center(ix));
  for (int iy = 0; iy < g.ny; ++iy) sy += m.by_.evaluate(g.y_center(iy));
  m.zx_ = constraint_null_space(sx);
  m.zy_ = constraint_null_space(sy);
  const Layout layout{m.zx_.cols(), m.zy_.cols()};
  m.coef_ = Eigen::VectorXd::Zero(layout.p());
  m.coef_(0) = c0;
  return m;
}

Eigen::RowVectorXd GamModel::design_row(const FieldCoordinate& c) const {
  const Eigen::VectorXd ux = zx_.transpose() * bx_.evaluate(c.downfield);
  const Eigen::VectorXd uy = zy_.transpose() * by_.evaluate(c.lateral);
  const Layout layout{ux.size(), uy.size()};
  Eigen::RowVectorXd row(layout.p());
  row(0) = 1.0;
  row.segment(layout.x0(), layout.mx) = ux.transpose();
  row.segment(layout.y0(), layout.my) = uy.transpose();
  for (Eigen::Index a = 0; a < layout.mx; ++a) {
    row.segment(layout.xy0() + a * layout.my, layout.my) = ux(a) * uy.transpose();
  }
  return row;
}

double GamModel::linear_predictor(const FieldCoordinate& c) const {
  return design_row(c).dot(coef_);
}

double GamModel::probability(const FieldCoordinate& c) const {
  return logistic(linear_predictor(c));
}

GamProblem::GamProblem(std::span<const LabeledPass> passes, const GamConfig& config)
    : config_(config) {
  if (config.basis_x < 4 || config.basis_y < 4) throw Error("GAM bases need at least 4 functions");
  std::size_t completed = 0;
  for (const auto& p : passes) completed += p.completed ? 1 : 0;
  if (completed == 0 || completed == passes.size()) {
    throw InsufficientData("GAM needs at least one completed and one incomplete pass");
  }

  const GridGeometry& g = config.domain;
  shape_.bx_ = BSplineBasis(g.x_min, g.x_max, config.basis_x);
  shape_.by_ = BSplineBasis(g.y_min, g.y_max, config.basis_y);

  const auto n = static_cast<Eigen::Index>(passes.size());
  Eigen::MatrixXd bx(n, config.basis_x);
  Eigen::MatrixXd by(n, config.basis_y);
  response_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = passes[static_cast<std::size_t>(i)];
    bx.row(i) = shape_.bx_.evaluate(p.coord.downfield).transpose();
    by.row(i) = shape_.by_.evaluate(p.coord.lateral).transpose();
    response_(i) = p.completed ? 1.0 : 0.0;
  }
  shape_.zx_ = constraint_null_space(bx.colwise().sum().transpose());
  shape_.zy_ = constraint_null_space(by.colwise().sum().transpose());

  const Eigen::MatrixXd ux = bx * shape_.zx_;
  const Eigen::MatrixXd uy = by * shape_.zy_;
  const Layout layout{ux.cols(), uy.cols()};
  design_.resize(n, layout.p());
  design_.col(0).setOnes();
  design_.middleCols(layout.x0(), layout.mx) = ux;
  design_.middleCols(layout.y0(), layout.my) = uy;
  for (Eigen::Index a = 0; a < layout.mx; ++a) {
    design_.middleCols(layout.xy0() + a * layout.my, layout.my) =
        uy.array().colwise() * ux.col(a).array();
  }

  const Eigen::MatrixXd px = shape_.zx_.transpose() * shape_.bx_.difference_penalty() * shape_.zx_;
  const Eigen::MatrixXd py = shape_.zy_.transpose() * shape_.by_.difference_penalty() * shape_.zy_;
  const double shrink = config.null_space_shrinkage;
  const Eigen::Index p = layout.p();
  penalty_x_ = Eigen::MatrixXd::Zero(p, p);
  penalty_y_ = Eigen::MatrixXd::Zero(p, p);
  penalty_xy_ = Eigen::MatrixXd::Zero(p, p);
  penalty_x_.block(layout.x0(), layout.x0(), layout.mx, layout.mx) = shrink_null_space(px, shrink);
  penalty_y_.block(layout.y0(), layout.y0(), layout.my, layout.my) = shrink_null_space(py, shrink);
  penalty_xy_.block(layout.xy0(), layout.xy0(), layout.mx * layout.my, layout.mx * layout.my) =
      shrink_null_space(kron(px, Eigen::MatrixXd::Identity(layout.my, layout.my)) +
                            kron(Eigen::MatrixXd::Identity(layout.mx, layout.mx), py),
                        shrink);
}

Eigen::MatrixXd GamProblem::penalty(const GamLambdas& l) const {
  return l.x * penalty_x_ + l.y * penalty_y_ + l.xy * penalty_xy_;
}

double GamProblem::objective(const Eigen::VectorXd& beta, const GamLambdas& lambdas) const {
  const Eigen::VectorXd eta = design_ * beta;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) nll += softplus(eta(i)) - response_(i) * eta(i);
  return nll + 0.5 * beta.dot(penalty(lambdas) * beta);
}

Eigen::VectorXd GamProblem::gradient(const Eigen::VectorXd& beta, const GamLambdas& lambdas) const {
  const Eigen::VectorXd eta = design_ * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = logistic(eta(i)) - response_(i);
  return design_.transpose() * resid + penalty(lambdas) * beta;
}

GamModel GamProblem::fit(const GamLambdas& lambdas, const Eigen::VectorXd* start) const {
  const Eigen::Index n = design_.rows();
  const Eigen::Index p = design_.cols();
  const Eigen::MatrixXd s = penalty(lambdas);
  // Newton converges quadratically; this sits far inside the 1e-6 * n gate.
  const double tolerance = 1e-9 * static_cast<double>(n);

  Eigen::VectorXd beta;
  if (start && start->size() == p) {
    beta = *start;
  } else {
    beta = Eigen::VectorXd::Zero(p);
    const double rate = response_.mean();
    beta(0) = std::log(rate / (1.0 - rate));
  }

  GamModel model = shape_;
  model.lambdas_ = lambdas;
  GamDiagnostics& diag = model.diagnostics_;
  double f = objective(beta, lambdas);
  diag.objective_history.push_back(f);

  Eigen::VectorXd eta(n), mu(n), w(n);
  Eigen::MatrixXd hessian(p, p);
  auto refresh = [&] {
    eta = design_ * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = logistic(eta(i));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-12);
    }
  };

  bool converged = false;
  for (int iter = 0; iter < config_.max_iterations; ++iter) {
    refresh();
    const Eigen::VectorXd g = design_.transpose() * (mu - response_) + s * beta;
    diag.max_gradient = g.cwiseAbs().maxCoeff();
    if (diag.max_gradient < tolerance) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd xw = design_.array().colwise() * w.array().sqrt();
    hessian.setZero();
    hessian.selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose());
    hessian = hessian.selfadjointView<Eigen::Lower>();
    hessian += s;
    const Eigen::VectorXd step = hessian.ldlt().solve(-g);

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Eigen::VectorXd trial = beta + scale * step;
      const double ft = objective(trial, lambdas);
      if (std::isfinite(ft) && ft <= f) {
        beta = trial;
        f = ft;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    diag.iterations = iter + 1;
    if (!accepted) break;  // no descent left at machine precision
    diag.objective_history.push_back(f);
  }
  refresh();
  const Eigen::VectorXd g = design_.transpose() * (mu - response_) + s * beta;
  diag.max_gradient = g.cwiseAbs().maxCoeff();
  if (!converged && diag.max_gradient >= 1e-6 * static_cast<double>(n)) {
    throw NonConvergence("GAM fit stopped after " + std::to_string(diag.iterations) +
                         " iterations with max gradient " + std::to_string(diag.max_gradient));
  }

  const Eigen::MatrixXd xw = design_.array().colwise() * w.array().sqrt();
  const Eigen::MatrixXd info = xw.transpose() * xw;
  diag.edf = (info + s).ldlt().solve(info).trace();
  double deviance = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    deviance += 2.0 * (softplus(eta(i)) - response_(i) * eta(i));
  }
  diag.deviance = deviance;
  const double denom = static_cast<double>(n) - diag.edf;
  diag.gcv = denom > 0.0 ? static_cast<double>(n) * deviance / (denom * denom)
                         : std::numeric_limits<double>::infinity();
  model.coef_ = beta;
  return model;
}

GamModel GamProblem::fit() const {
  if (config_.lambdas) return fit(*config_.lambdas);
  if (config_.lambda_grid.empty()) throw Error("GAM lambda grid is empty");
  std::optional<GamModel> best;
  Eigen::VectorXd warm;
  // Largest penalty first: each fit warm-starts the next, rougher one.
  std::vector<double> grid = config_.lambda_grid;
  std::sort(grid.rbegin(), grid.rend());
  for (double lambda : grid) {
    GamModel m = fit({lambda, lambda, lambda}, warm.size() ? &warm : nullptr);
    warm = m.coefficients();
    if (!best || m.diagnostics().gcv < best->diagnostics().gcv) best = std::move(m);
  }
  return *best;
}

GamModel fit_gam(std::span<const LabeledPass> passes, const GamConfig& config) {
  return GamProblem(passes, config).fit();
}

SurfaceGrid predict_surface(const GamModel& model, const GridGeometry& geometry) {
  SurfaceGrid grid(geometry);
  for (int ix = 0; ix < geometry.nx; ++ix) {
    for (int iy = 0; iy < geometry.ny; ++iy) {
      grid.at(ix, iy) = model.probability({geometry.x_center(ix), geometry.y_center(iy)});
    }
  }
  return grid;
}

SurfaceGrid clamp_probabilities(SurfaceGrid grid) {
  for (double& v : grid.values()) v = std::clamp(v, kDisplayProbabilityFloor, kDisplayProbabilityCeiling);
  return grid;
}

}  // namespace passchart

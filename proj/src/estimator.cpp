#include "mobisense/estimator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "mobisense/errors.hpp"

namespace mobisense {

std::vector<SamplePoint> uniform_grid(int count, double horizon) {
  std::vector<SamplePoint> points;
  points.reserve(count);
  for (int i = 1; i <= count; ++i) {
    points.push_back({static_cast<double>(i) / count, i * horizon / count});
  }
  return points;
}

std::vector<SamplePoint> path_points(const SamplePath& path) {
  std::vector<SamplePoint> points;
  points.reserve(path.count);
  for (int i = 0; i < path.count; ++i) {
    points.push_back({path.positions[i], path.times[i]});
  }
  return points;
}

DesignMatrix build_design_matrix(std::span<const HarmonicRoots> roots,
                                 std::span<const SamplePoint> points,
                                 GridKind grid) {
  DesignMatrix design;
  design.grid = grid;
  design.band = (static_cast<int>(roots.size()) - 1) / 2;
  design.order = roots.empty() ? 0 : static_cast<int>(roots.front().roots.size());
  const int rows = static_cast<int>(points.size());
  const int cols = static_cast<int>(roots.size()) * design.order;
  design.entries.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto [x, t] = points[r];
    int col = 0;
    for (const auto& harmonic : roots) {
      const Complex wave(0.0, 2.0 * std::numbers::pi * harmonic.k * x);
      for (const auto& root : harmonic.roots) {
        design.entries(r, col++) = std::exp(root * t + wave);
      }
    }
  }
  return design;
}

LeastSquaresSolver::LeastSquaresSolver(const DesignMatrix& design) {
  const auto rows = design.entries.rows();
  const auto cols = design.entries.cols();
  if (rows < cols) {
    std::ostringstream msg;
    msg << "need at least " << cols << " samples, got " << rows;
    throw InsufficientSamples(msg.str());
  }
  qr_.compute(design.entries);
  const Eigen::MatrixXcd r = qr_.matrixR()
                                 .topLeftCorner(cols, cols)
                                 .template triangularView<Eigen::Upper>();
  singular_values_ = Eigen::JacobiSVD<Eigen::MatrixXcd>(r).singularValues();
  if (cols > 0) {
    const double top = singular_values_(0);
    const double bottom = singular_values_(cols - 1);
    if (!(top > 0.0) || bottom < kRankTolerance * top) {
      std::ostringstream msg;
      msg << "design matrix is numerically rank deficient (sigma_min/sigma_max = "
          << (top > 0.0 ? bottom / top : 0.0) << ")";
      throw RankDeficient(msg.str());
    }
  }
}

Eigen::VectorXcd LeastSquaresSolver::solve(std::span<const double> values) const {
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) rhs(i) = values[i];
  return solve(rhs);
}

Eigen::VectorXcd LeastSquaresSolver::solve(const Eigen::VectorXcd& values) const {
  if (values.size() != qr_.rows()) {
    throw ConfigInvalid("sample count does not match design matrix rows");
  }
  return qr_.solve(values);
}

double LeastSquaresSolver::gram_condition() const {
  if (singular_values_.size() == 0) return 1.0;
  const double ratio =
      singular_values_(0) / singular_values_(singular_values_.size() - 1);
  return ratio * ratio;
}

Eigen::VectorXcd least_squares(const DesignMatrix& design,
                               std::span<const double> values) {
  return LeastSquaresSolver(design).solve(values);
}

double distortion(std::span<const Complex> estimate,
                  std::span<const Complex> truth) {
  if (estimate.size() != truth.size()) {
    throw ConfigInvalid("distortion needs coefficient vectors of equal length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < estimate.size(); ++k) {
    total += std::norm(estimate[k] - truth[k]);
  }
  return total;
}

std::vector<Complex> harmonic_sums(const Eigen::VectorXcd& stacked, int band,
                                   int order) {
  std::vector<Complex> sums(2 * band + 1, Complex(0.0));
  for (int row = 0; row < 2 * band + 1; ++row) {
    for (int i = 0; i < order; ++i) sums[row] += stacked(row * order + i);
  }
  return sums;
}

double trace_floor_constant(std::span<const HarmonicRoots> roots,
                            double horizon) {
  double c3 = 0.0;
  for (const auto& harmonic : roots) {
    for (const auto& root : harmonic.roots) {
      const double rate = 2.0 * root.real();
      // int_0^T0 e^{rate t} dt; expm1 keeps the small-rate limit accurate.
      const double integral =
          rate == 0.0 ? horizon : std::expm1(rate * horizon) / rate;
      c3 += std::exp(rate) * integral;
    }
  }
  return c3;
}

ConditionDiagnostics condition_diagnostics(const DesignMatrix& design,
                                           std::span<const HarmonicRoots> roots,
                                           double horizon) {
  const LeastSquaresSolver solver(design);
  const auto& sv = solver.singular_values();
  ConditionDiagnostics diag;
  diag.kappa = solver.gram_condition();
  diag.trace = design.entries.squaredNorm();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    diag.trace_inverse += 1.0 / (sv(i) * sv(i));
  }

  const auto rows = static_cast<int>(design.entries.rows());
  for (const auto& harmonic : roots) {
    for (const auto& root : harmonic.roots) {
      for (int i = 1; i <= rows; ++i) {
        diag.trace_direct += std::exp(2.0 * root.real() * (i * horizon / rows));
      }
    }
  }

  const double columns = static_cast<double>(design.entries.cols());
  const double spread = diag.kappa + 1.0 / diag.kappa;
  const double polya_bound = columns * columns / 4.0 * spread * spread;
  diag.polya_szego_ok =
      diag.trace * diag.trace_inverse <= polya_bound * (1.0 + 1e-9);

  diag.trace_floor = rows * trace_floor_constant(roots, horizon);
  diag.trace_lower_ok = diag.trace >= diag.trace_floor * (1.0 - 1e-12);
  return diag;
}

ReconstructionResult reconstruct(const FieldState& truth,
                                 const SamplePath& path,
                                 const SampleSet& samples) {
  const auto grid = uniform_grid(path.count, path.horizon);
  const auto design =
      build_design_matrix(truth.all_roots(), grid, GridKind::kUniform);
  const LeastSquaresSolver solver(design);

  ReconstructionResult result;
  result.a_hat = solver.solve(samples.values);
  result.a_hat_sums = harmonic_sums(result.a_hat, truth.band(), truth.order());
  const auto reference = coefficients_at(truth, 0.0);
  result.distortion = distortion(result.a_hat_sums, reference);
  result.kappa = solver.gram_condition();

  Eigen::VectorXcd observed(path.count);
  for (int i = 0; i < path.count; ++i) observed(i) = samples.values[i];
  result.residual_norm = (observed - design.entries * result.a_hat).norm();
  result.coefficient_error = (result.a_hat - truth.stacked()).squaredNorm();
  return result;
}

nlohmann::json to_json(const ReconstructionResult& result) {
  nlohmann::json a_hat = nlohmann::json::array();
  for (Eigen::Index i = 0; i < result.a_hat.size(); ++i) {
    a_hat.push_back({result.a_hat(i).real(), result.a_hat(i).imag()});
  }
  return {
      {"a_hat", std::move(a_hat)},
      {"distortion", result.distortion},
      {"kappa", result.kappa},
      {"residual_norm", result.residual_norm},
  };
}

}  // namespace mobisense

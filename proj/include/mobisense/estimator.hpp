#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>
#include <json.hpp>

#include "mobisense/field.hpp"
#include "mobisense/sampling.hpp"

namespace mobisense {

// Singular values below kRankTolerance * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-10;

enum class GridKind {
  kUniform,  // (i/M, i T0/M): the grid the estimator assumes
  kTrue,     // the realized (S_i, T_i), available only to oracles
};

struct SamplePoint {
  double x = 0.0;
  double t = 0.0;
};

std::vector<SamplePoint> uniform_grid(int count, double horizon);
std::vector<SamplePoint> path_points(const SamplePath& path);

// M x m(2b+1) matrix of modal basis values. Column (k, i) sits at
// (k + b) * m + i and row r holds exp(r_i(k) t_r + j 2 pi k x_r), so that
// (row r) * a reproduces g(x_r, t_r) for the stacked coefficient vector a.
struct DesignMatrix {
  Eigen::MatrixXcd entries;
  GridKind grid = GridKind::kUniform;
  int band = 0;
  int order = 0;
};

DesignMatrix build_design_matrix(std::span<const HarmonicRoots> roots,
                                 std::span<const SamplePoint> points,
                                 GridKind grid);

// Least-squares solver over a fixed design matrix. Factorizes once with
// column-pivoted Householder QR; the singular values of Y0 are those of the
// triangular factor.
class LeastSquaresSolver {
 public:
  // Throws InsufficientSamples when rows < columns and RankDeficient when the
  // numerical rank falls short of the column count.
  explicit LeastSquaresSolver(const DesignMatrix& design);

  Eigen::VectorXcd solve(std::span<const double> values) const;
  Eigen::VectorXcd solve(const Eigen::VectorXcd& values) const;

  // Singular values of the design matrix, descending.
  const Eigen::VectorXd& singular_values() const { return singular_values_; }

  // Condition number of Y0^H Y0, i.e. (sigma_max / sigma_min)^2.
  double gram_condition() const;

 private:
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr_;
  Eigen::VectorXd singular_values_;
};

Eigen::VectorXcd least_squares(const DesignMatrix& design,
                               std::span<const double> values);

// sum_k |estimate_k - truth_k|^2.
double distortion(std::span<const Complex> estimate,
                  std::span<const Complex> truth);

// A_k(0) = sum_i a_ki for a stacked coefficient vector.
std::vector<Complex> harmonic_sums(const Eigen::VectorXcd& stacked, int band,
                                   int order);

struct ConditionDiagnostics {
  double kappa = 1.0;          // condition number of Y0^H Y0
  double trace = 0.0;          // tr(Y0^H Y0)
  double trace_inverse = 0.0;  // tr((Y0^H Y0)^{-1})
  double trace_direct = 0.0;   // sum_{k,j,i} exp(2 Re r_j(k) t_i)
  double trace_floor = 0.0;    // M * C3
  bool polya_szego_ok = false;
  bool trace_lower_ok = false;
};

// C3 = sum_{j,k} exp(2 Re r_j(k)) * int_0^T0 exp(2 Re r_j(k) t) dt.
double trace_floor_constant(std::span<const HarmonicRoots> roots,
                            double horizon);

// Diagnostics for a uniform-grid design matrix built with `roots` over
// `rows` points ending at `horizon`.
ConditionDiagnostics condition_diagnostics(const DesignMatrix& design,
                                           std::span<const HarmonicRoots> roots,
                                           double horizon);

struct ReconstructionResult {
  Eigen::VectorXcd a_hat;            // stacked estimate
  std::vector<Complex> a_hat_sums;   // estimated A_k(0), k = -b..b
  double distortion = 0.0;
  double kappa = 1.0;
  double residual_norm = 0.0;
  double coefficient_error = 0.0;    // ||a_hat - a||^2
};

// Builds Y0 on the uniform grid of the path, solves for the coefficients and
// scores the estimate against the true field at t = 0.
ReconstructionResult reconstruct(const FieldState& truth,
                                 const SamplePath& path,
                                 const SampleSet& samples);

// {"a_hat": [[re, im], ...], "distortion": d, "kappa": k, "residual_norm": r}
nlohmann::json to_json(const ReconstructionResult& result);

}  // namespace mobisense

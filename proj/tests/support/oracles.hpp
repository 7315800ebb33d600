#pragma once

// Reference computations used only by the tests. None of these call into the
// library's solvers, so agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace mobisense::testing {

using Complex = std::complex<double>;

// Gaussian elimination with partial pivoting on a dense complex system.
inline std::vector<Complex> gauss_solve(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

// Least squares through the normal equations (Y^H Y) x = Y^H v.
inline std::vector<Complex> normal_equations_solve(
    const std::vector<std::vector<Complex>>& rows,
    const std::vector<double>& values) {
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<Complex>> gram(cols, std::vector<Complex>(cols));
  std::vector<Complex> rhs(cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      rhs[i] += std::conj(rows[r][i]) * values[r];
      for (std::size_t j = 0; j < cols; ++j) {
        gram[i][j] += std::conj(rows[r][i]) * rows[r][j];
      }
    }
  }
  return gauss_solve(std::move(gram), std::move(rhs));
}

// Periodic trapezoid rule for the integral of f over [0, 1].
inline double trapezoid_periodic(const std::function<double(double)>& f,
                                 int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += f(static_cast<double>(i) / points);
  return acc / points;
}

// Discrete Fourier transform X_j = (1/N) sum_i x_i e^{-j 2 pi i j / N}.
inline std::vector<Complex> naive_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> twiddle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(i) / n;
    twiddle[i] = {std::cos(phase), std::sin(phase)};
  }
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * twiddle[(i * j) % n];
    out[j] = acc / static_cast<double>(n);
  }
  return out;
}

// Closed-form roots of r^2 + b r + c = 0 for real b, c.
inline std::pair<Complex, Complex> quadratic_roots(double b, double c) {
  const Complex disc = std::sqrt(Complex(b * b - 4.0 * c, 0.0));
  return {(-b - disc) / 2.0, (-b + disc) / 2.0};
}

}  // namespace mobisense::testing

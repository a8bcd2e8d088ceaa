#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace fano {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Pade approximant orders and the corresponding 1-norm thresholds from
// Higham's scaling-and-squaring method (backward error < u in double
// precision for ||A|| below theta_m).
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <typename Matrix>
Matrix pade_solve(const Matrix& u, const Matrix& v) {
  // r = (v - u)^{-1} (v + u)
  return (v - u).partialPivLu().solve(v + u);
}

template <typename Matrix>
Matrix expm_pade3(const Matrix& a, const Matrix& a2) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix u = a * (a2 + 60.0 * ident);
  const Matrix v = 12.0 * a2 + 120.0 * ident;
  return pade_solve(u, v);
}

template <typename Matrix>
Matrix expm_pade5(const Matrix& a, const Matrix& a2, const Matrix& a4) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix u = a * (a4 + 420.0 * a2 + 15120.0 * ident);
  const Matrix v = 30.0 * a4 + 3360.0 * a2 + 30240.0 * ident;
  return pade_solve(u, v);
}

template <typename Matrix>
Matrix expm_pade7(const Matrix& a, const Matrix& a2, const Matrix& a4,
                  const Matrix& a6) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix u = a * (a6 + 1512.0 * a4 + 277200.0 * a2 + 8648640.0 * ident);
  const Matrix v =
      56.0 * a6 + 25200.0 * a4 + 1995840.0 * a2 + 17297280.0 * ident;
  return pade_solve(u, v);
}

template <typename Matrix>
Matrix expm_pade9(const Matrix& a, const Matrix& a2, const Matrix& a4,
                  const Matrix& a6) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix a8 = a4 * a4;
  const Matrix u = a * (a8 + 3960.0 * a6 + 2162160.0 * a4 + 302702400.0 * a2 +
                        8821612800.0 * ident);
  const Matrix v = 90.0 * a8 + 110880.0 * a6 + 30270240.0 * a4 +
                   2075673600.0 * a2 + 17643225600.0 * ident;
  return pade_solve(u, v);
}

template <typename Matrix>
Matrix expm_pade13(const Matrix& a, const Matrix& a2, const Matrix& a4,
                   const Matrix& a6) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix w =
      a6 * (a6 + 16380.0 * a4 + 40840800.0 * a2) +
      33522128640.0 * a6 + 10559470521600.0 * a4 + 1187353796428800.0 * a2 +
      32382376266240000.0 * ident;
  const Matrix u = a * w;
  const Matrix v = a6 * (182.0 * a6 + 960960.0 * a4 + 1323241920.0 * a2) +
                   670442572800.0 * a6 + 129060195264000.0 * a4 +
                   7771770303897600.0 * a2 + 64764752532480000.0 * ident;
  return pade_solve(u, v);
}

}  // namespace detail

// Matrix exponential e^M by scaling and squaring with diagonal Pade
// approximants. Works for real and complex square Eigen matrices.
template <typename Matrix>
Matrix expm(const Matrix& m) {
  if (!m.allFinite()) throw NumericError("expm: non-finite matrix entries");
  if (m.rows() != m.cols()) throw NumericError("expm: matrix must be square");

  using detail::kTheta13;
  // Induced 1-norm (max column sum), the norm Higham's thresholds refer to.
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  const Matrix m2 = m * m;
  if (norm <= detail::kTheta3) return detail::expm_pade3(m, m2);
  const Matrix m4 = m2 * m2;
  if (norm <= detail::kTheta5) return detail::expm_pade5(m, m2, m4);
  const Matrix m6 = m4 * m2;
  if (norm <= detail::kTheta7) return detail::expm_pade7(m, m2, m4, m6);
  if (norm <= detail::kTheta9) return detail::expm_pade9(m, m2, m4, m6);

  int squarings = 0;
  double scale = 1.0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    scale = std::ldexp(1.0, -squarings);
  }
  Matrix result = detail::expm_pade13(
      Matrix(m * scale), Matrix(m2 * (scale * scale)),
      Matrix(m4 * (scale * scale * scale * scale)),
      Matrix(m6 * (scale * scale * scale * scale * scale * scale)));
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// e^{M t}
template <typename Matrix>
Matrix expm(const Matrix& m, double t) {
  if (!(t >= 0.0)) throw NumericError("expm: time must be >= 0");
  return expm(Matrix(m * t));
}

}  // namespace fano

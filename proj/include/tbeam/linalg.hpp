#ifndef TBEAM_LINALG_HPP
#define TBEAM_LINALG_HPP

#include <complex>
#include <vector>

namespace tbeam::linalg {

/// Dense row-major matrix over double or std::complex<double>.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), T{}) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  T* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const T* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Matrix = Mat<double>;
using CMatrix = Mat<std::complex<double>>;
using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Vec matvec(const Matrix& a, const Vec& x);
CVec matvec(const Matrix& a, const CVec& x);
double frobenius(const Matrix& a);
double max_abs(const Matrix& a);
double norm_1(const Matrix& a);  // max column sum
double norm2(const Vec& x);
double norm2(const CVec& x);

/// LU with partial pivoting. Throws NumericalError on (numerically) singular input.
template <typename T>
struct LuDecomp {
  Mat<T> lu;
  std::vector<int> perm;
};

LuDecomp<double> lu_factor(Matrix a);
LuDecomp<std::complex<double>> lu_factor(CMatrix a);
Vec lu_solve(const LuDecomp<double>& f, Vec b);
CVec lu_solve(const LuDecomp<std::complex<double>>& f, CVec b);
Matrix lu_solve_mat(const LuDecomp<double>& f, const Matrix& b);
Matrix inverse(const Matrix& a);

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
Matrix cholesky_lower(const Matrix& s);
/// Solves L y = b (forward) and L^T x = y (backward) for SPD systems.
Vec cholesky_solve(const Matrix& chol_lower, Vec b);
/// X = C * R^{-1} where R is upper triangular.
Matrix right_solve_upper(const Matrix& c, const Matrix& r);

/// Eigenvalues of a general real matrix: block-triangular permutation of the
/// nonzero pattern, then per diagonal block balancing, Householder reduction
/// to Hessenberg form and Francis double-shift QR. Throws NumericalError when
/// the QR iteration does not converge within 100*dim iterations.
CVec eigenvalues(const Matrix& a);

/// Eigenvector for a computed eigenvalue via shifted inverse iteration.
CVec inverse_iteration(const Matrix& a, std::complex<double> lambda);

/// Matrix exponential via Pade(13) with scaling and squaring.
Matrix expm(const Matrix& a);

/// Singular values in descending order, one-sided Jacobi on columns.
Vec singular_values(Matrix a);

/// Largest singular value via eigenvalues of A^T A.
double spectral_norm(const Matrix& a);

}  // namespace tbeam::linalg

#endif

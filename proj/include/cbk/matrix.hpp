#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cbk {

using cplx = std::complex<double>;

/// Tolerance used wherever a tolerance argument is optional.
inline constexpr double kDefaultTol = 1e-9;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  /// The matrix unit E_{i,j} of the given shape.
  static ComplexMatrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const cplx> entries() const { return entries_; }
  std::span<cplx> entries() { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Frobenius distance, throws on shape mismatch.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |H - H*| entrywise.
double hermitian_defect(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double tol = kDefaultTol);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns, unitary
};

/// Hermitian eigendecomposition by cyclic Jacobi sweeps on the real embedding
/// [[Re H, -Im H], [Im H, Re H]].
EigenDecomposition eig_hermitian(const ComplexMatrix& h);

double min_eigenvalue(const ComplexMatrix& h);

/// min eigenvalue >= -tol.
bool is_psd(const ComplexMatrix& h, double tol = kDefaultTol);

struct JordanSplit {
  ComplexMatrix plus;
  ComplexMatrix minus;
};

/// H = plus - minus with both parts PSD and plus * minus = 0.
JordanSplit jordan_split(const ComplexMatrix& h);

/// F with H = F* F and F of (numerical rank) rows. Eigenvalues at or below
/// tol * max(1, lambda_max) count as zero; anything below -tol * max(1, lambda_max)
/// is rejected with a PreconditionError.
ComplexMatrix psd_factor(const ComplexMatrix& h, double tol = kDefaultTol);

/// Principal square root of a PSD matrix (negative noise clipped to zero).
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

/// Index permutation that reorders (outer, inner, cell) into (inner, outer, cell):
/// perm[new_index] = old_index.
std::vector<std::size_t> shuffle_permutation(std::size_t outer, std::size_t inner, std::size_t cell);

/// result(a, b) = m(perm[a], perm[b]).
ComplexMatrix permute(const ComplexMatrix& m, std::span<const std::size_t> perm);

/// P* M P for the permutation identifying M_outer(M_inner(M_cell)) with
/// M_inner(M_outer(M_cell)).
ComplexMatrix canonical_shuffle(const ComplexMatrix& m, std::size_t outer, std::size_t inner,
                                std::size_t cell);

/// Entrywise (Schur) product.
ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace cbk

#include <limits>
#include "cbk/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cbk/errors.hpp"

namespace cbk {

namespace {

std::string shape(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

void require_hermitian(const ComplexMatrix& h, double tol, const char* what) {
  if (!h.square()) throw DimensionError(std::string(what) + ": matrix is not square (" + shape(h) + ")");
  const double slack = std::max(tol, 1e-12) * std::max(1.0, h.max_abs());
  if (hermitian_defect(h) > slack) {
    throw PreconditionError(std::string(what) + ": matrix is not Hermitian (defect " +
                            std::to_string(hermitian_defect(h)) + ")");
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& h) {
  ComplexMatrix s = h;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    s(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return s;
}

// Cyclic Jacobi on a dense real symmetric matrix (row-major, n x n). On return
// a holds (numerically) a diagonal matrix and v the accumulated rotations.
void jacobi_symmetric(std::vector<double>& a, std::size_t n, std::vector<double>& v) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  double norm2 = 0.0;
  for (double x : a) norm2 += x * x;
  if (norm2 == 0.0) return;
  const double norm = std::sqrt(norm2);
  const double skip = 1e-18 * norm;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (std::sqrt(off) <= 1e-15 * norm) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= skip) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

// Complex Cholesky attempt; true iff every pivot stays positive.
bool cholesky_succeeds(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw DimensionError("ComplexMatrix: " + std::to_string(entries_.size()) + " entries for a " +
                         std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  if (i >= rows || j >= cols) throw DimensionError("unit: index out of range");
  ComplexMatrix m(rows, cols);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix r = *this;
  for (auto& x : r.entries_) x = std::conj(x);
  return r;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block: out of range");
  ComplexMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("set_block: out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

cplx ComplexMatrix::trace() const {
  if (!square()) throw DimensionError("trace: matrix is not square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : entries_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : entries_) m = std::max(m, std::abs(x));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : entries_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: " + shape(a) + " times " + shape(b));
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "distance");
  double s = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) s += std::norm(a.entries()[k] - b.entries()[k]);
  return std::sqrt(s);
}

double hermitian_defect(const ComplexMatrix& h) {
  if (!h.square()) throw DimensionError("hermitian_defect: matrix is not square");
  double d = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j) d = std::max(d, std::abs(h(i, j) - std::conj(h(j, i))));
  return d;
}

bool is_hermitian(const ComplexMatrix& h, double tol) {
  return h.square() && hermitian_defect(h) <= tol;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  const ComplexMatrix g = m.rows() >= m.cols() ? m.adjoint() * m : m * m.adjoint();
  const auto e = eig_hermitian(g);
  return std::sqrt(std::max(0.0, e.values.front()));
}

EigenDecomposition eig_hermitian(const ComplexMatrix& h_in) {
  require_hermitian(h_in, kDefaultTol, "eig_hermitian");
  const ComplexMatrix h = symmetrized(h_in);
  const std::size_t n = h.rows();
  EigenDecomposition out;
  out.vectors = ComplexMatrix(n, n);
  if (n == 0) return out;

  const std::size_t nn = 2 * n;
  std::vector<double> a(nn * nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = h(i, j).real();
      const double im = h(i, j).imag();
      a[i * nn + j] = re;
      a[(n + i) * nn + (n + j)] = re;
      a[i * nn + (n + j)] = -im;
      a[(n + i) * nn + j] = im;
    }
  std::vector<double> v;
  jacobi_symmetric(a, nn, v);

  std::vector<std::size_t> order(nn);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * nn + x] > a[y * nn + y]; });

  // A real eigenvector [x; y] of the embedding is the complex eigenvector x + i y;
  // the partner [-y; x] is i times it. Each cluster of (doubled) eigenvalues
  // therefore yields half as many complex directions, picked by pivoted
  // Gram-Schmidt.
  const double scale = std::max(1.0, h.max_abs());
  const double cluster_gap = 1e-9 * scale;
  std::vector<std::vector<cplx>> accepted;
  accepted.reserve(n);

  auto candidate = [&](std::size_t col) {
    std::vector<cplx> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = cplx(v[i * nn + col], v[(n + i) * nn + col]);
    return c;
  };
  auto project_out = [&](std::vector<cplx>& c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : accepted) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q[i]) * c[i];
        for (std::size_t i = 0; i < n; ++i) c[i] -= dot * q[i];
      }
    }
  };
  auto vnorm = [&](const std::vector<cplx>& c) {
    double s = 0.0;
    for (const auto& x : c) s += std::norm(x);
    return std::sqrt(s);
  };
  auto pick = [&](std::vector<std::vector<cplx>>& pool, std::size_t count) {
    for (std::size_t k = 0; k < count && accepted.size() < n && !pool.empty(); ++k) {
      std::size_t best = 0;
      double best_norm = -1.0;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        project_out(pool[c]);
        const double nc = vnorm(pool[c]);
        if (nc > best_norm) {
          best_norm = nc;
          best = c;
        }
      }
      if (best_norm <= 1e-8) break;
      auto q = pool[best];
      for (auto& x : q) x /= best_norm;
      accepted.push_back(std::move(q));
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
  };

  std::vector<std::vector<cplx>> leftovers;
  std::size_t start = 0;
  while (start < nn) {
    std::size_t end = start + 1;
    while (end < nn && a[order[end - 1] * nn + order[end - 1]] - a[order[end] * nn + order[end]] <= cluster_gap) ++end;
    std::vector<std::vector<cplx>> pool;
    for (std::size_t k = start; k < end; ++k) pool.push_back(candidate(order[k]));
    pick(pool, (end - start) / 2);
    for (auto& c : pool) leftovers.push_back(std::move(c));
    start = end;
  }
  if (accepted.size() < n) pick(leftovers, n - accepted.size());
  if (accepted.size() < n) throw NumericalError("eig_hermitian: failed to extract a complete eigenbasis");

  // Rayleigh quotients give the eigenvalues of the selected complex vectors.
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& q = accepted[k];
    cplx r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx hq = 0.0;
      for (std::size_t j = 0; j < n; ++j) hq += h(i, j) * q[j];
      r += std::conj(q[i]) * hq;
    }
    ranked.emplace_back(r.real(), k);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  out.values.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values.push_back(ranked[c].first);
    const auto& q = accepted[ranked[c].second];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = q[i];
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& h) {
  if (h.empty()) return 0.0;
  return eig_hermitian(h).values.back();
}

bool is_psd(const ComplexMatrix& h, double tol) {
  require_hermitian(h, tol, "is_psd");
  if (h.rows() == 0) return true;
  ComplexMatrix shifted = symmetrized(h);
  for (std::size_t i = 0; i < h.rows(); ++i) shifted(i, i) += tol;
  if (cholesky_succeeds(shifted)) return true;
  return eig_hermitian(h).values.back() >= -tol;
}

JordanSplit jordan_split(const ComplexMatrix& h) {
  const auto e = eig_hermitian(h);
  const std::size_t n = h.rows();
  std::vector<double> pos(n), neg(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = std::max(0.0, e.values[i]);
    neg[i] = std::max(0.0, -e.values[i]);
  }
  const ComplexMatrix vh = e.vectors.adjoint();
  return {e.vectors * ComplexMatrix::diagonal(pos) * vh, e.vectors * ComplexMatrix::diagonal(neg) * vh};
}

ComplexMatrix psd_factor(const ComplexMatrix& h, double tol) {
  const auto e = eig_hermitian(h);
  const std::size_t n = h.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const double cutoff = tol * std::max(1.0, e.values.front());
  if (e.values.back() < -cutoff) {
    throw PreconditionError("psd_factor: matrix is not positive semidefinite (eigenvalue " +
                            std::to_string(e.values.back()) + ")");
  }
  std::size_t rank = 0;
  while (rank < n && e.values[rank] > cutoff) ++rank;
  ComplexMatrix f(rank, n);
  for (std::size_t r = 0; r < rank; ++r) {
    const double s = std::sqrt(e.values[r]);
    for (std::size_t j = 0; j < n; ++j) f(r, j) = s * std::conj(e.vectors(j, r));
  }
  return f;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
  const auto e = eig_hermitian(h);
  std::vector<double> s(e.values.size());
  if (s.empty()) return ComplexMatrix(0, 0);
  // Round-off eigenvalues are zeroed; their square roots would be far larger than the noise.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e.values.front())) *
                       static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = e.values[i] > floor ? std::sqrt(e.values[i]) : 0.0;
  return e.vectors * ComplexMatrix::diagonal(s) * e.vectors.adjoint();
}

std::vector<std::size_t> shuffle_permutation(std::size_t outer, std::size_t inner, std::size_t cell) {
  std::vector<std::size_t> perm(outer * inner * cell);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i)
      for (std::size_t c = 0; c < cell; ++c) perm[(i * outer + o) * cell + c] = (o * inner + i) * cell + c;
  return perm;
}

ComplexMatrix permute(const ComplexMatrix& m, std::span<const std::size_t> perm) {
  if (!m.square() || perm.size() != m.rows()) throw DimensionError("permute: size mismatch");
  ComplexMatrix r(m.rows(), m.cols());
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = 0; b < perm.size(); ++b) r(a, b) = m(perm[a], perm[b]);
  return r;
}

ComplexMatrix canonical_shuffle(const ComplexMatrix& m, std::size_t outer, std::size_t inner, std::size_t cell) {
  if (!m.square() || m.rows() != outer * inner * cell) {
    throw DimensionError("canonical_shuffle: " + shape(m) + " is not of size " +
                         std::to_string(outer * inner * cell));
  }
  const auto perm = shuffle_permutation(outer, inner, cell);
  return permute(m, perm);
}

ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "schur_product");
  ComplexMatrix r = a;
  for (std::size_t k = 0; k < r.entries().size(); ++k) r.entries()[k] *= b.entries()[k];
  return r;
}

}  // namespace cbk

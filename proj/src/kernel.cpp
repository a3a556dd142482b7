#include "cbk/kernel.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "cbk/completion.hpp"
#include "cbk/errors.hpp"

namespace cbk {

Kernel::Kernel(std::vector<std::string> labels, std::size_t p, std::size_t q)
    : labels_(std::move(labels)), p_(p), q_(q), values_(labels_.size() * labels_.size(), LinMap(p, q)) {
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw PreconditionError("Kernel: labels must be distinct");
  }
}

Kernel::Kernel(std::vector<std::string> labels, std::size_t p, std::size_t q, std::vector<LinMap> values)
    : Kernel(std::move(labels), p, q) {
  if (values.size() != n() * n()) throw DimensionError("Kernel: expected " + std::to_string(n() * n()) + " entries");
  for (std::size_t k = 0; k < values.size(); ++k) set(k / n(), k % n(), std::move(values[k]));
}

Kernel Kernel::scalar(std::vector<std::string> labels, const ComplexMatrix& m) {
  Kernel k(std::move(labels), 1, 1);
  if (m.rows() != k.n() || m.cols() != k.n()) throw DimensionError("Kernel::scalar: matrix does not match labels");
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) k.set(i, j, LinMap(1, 1, ComplexMatrix{{m(i, j)}}));
  return k;
}

Kernel Kernel::constant(std::vector<std::string> labels, const LinMap& phi) {
  Kernel k(std::move(labels), phi.p(), phi.q());
  for (auto& v : k.values_) v = phi;
  return k;
}

std::size_t Kernel::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw PreconditionError("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

void Kernel::set(std::size_t i, std::size_t j, LinMap phi) {
  if (phi.p() != p_ || phi.q() != q_) throw DimensionError("Kernel::set: entry has the wrong block sizes");
  values_.at(i * n() + j) = std::move(phi);
}

Kernel& Kernel::operator+=(const Kernel& o) {
  require_compatible(*this, o, "Kernel::operator+");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

Kernel& Kernel::operator-=(const Kernel& o) {
  require_compatible(*this, o, "Kernel::operator-");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

Kernel& Kernel::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

void require_compatible(const Kernel& a, const Kernel& b, const char* what) {
  if (a.labels() != b.labels()) throw DimensionError(std::string(what) + ": kernels on different label sets");
  if (a.p() != b.p() || a.q() != b.q()) throw DimensionError(std::string(what) + ": kernels with different block sizes");
}

double kernel_distance(const Kernel& a, const Kernel& b) {
  require_compatible(a, b, "kernel_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) d = std::max(d, choi_distance(a.at(i, j), b.at(i, j)));
  return d;
}

ComplexMatrix kernel_choi(const Kernel& k) {
  const std::size_t p = k.p(), q = k.q(), pq = p * q;
  ComplexMatrix c(k.n() * pq, k.n() * pq);
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) c.set_block(i * pq, j * pq, k.at(i, j).choi());
  return c;
}

Kernel from_kernel_choi(std::vector<std::string> labels, std::size_t p, std::size_t q, const ComplexMatrix& c) {
  Kernel k(std::move(labels), p, q);
  const std::size_t pq = p * q;
  if (!c.square() || c.rows() != k.n() * pq) throw DimensionError("from_kernel_choi: matrix has the wrong size");
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) k.set(i, j, LinMap(p, q, c.block(i * pq, j * pq, pq, pq)));
  return k;
}

Kernel involution(const Kernel& k) {
  Kernel out(k.labels(), k.p(), k.q());
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) out.set(i, j, adjoint_map(k.at(j, i)));
  return out;
}

ReIm re_im(const Kernel& k) {
  const Kernel ks = involution(k);
  return {0.5 * (k + ks), cplx(0.0, -0.5) * (k - ks)};
}

bool is_hermitian_kernel(const Kernel& k, double tol) { return kernel_distance(k, involution(k)) <= tol; }

LinMap schur_op(const Kernel& k) {
  const std::size_t n = k.n(), p = k.p(), q = k.q();
  const std::size_t nq = n * q;
  ComplexMatrix c(n * p * nq, n * p * nq);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = k.at(i, j).choi();
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t w = 0; w < q; ++w)
          for (std::size_t v = 0; v < p; ++v)
            for (std::size_t z = 0; z < q; ++z)
              c((i * p + u) * nq + i * q + w, (j * p + v) * nq + j * q + z) = e(u * q + w, v * q + z);
    }
  return {n * p, nq, std::move(c)};
}

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (auto& x : m.entries()) {
    const double re = g(rng);
    x = cplx(re, g(rng));
  }
  const double f = m.frobenius_norm();
  if (f > 0) m *= 1.0 / f;
  return m;
}

}  // namespace

bool is_cp_kernel(const Kernel& k, double tol, std::size_t samples) {
  if (k.n() == 0) return true;
  const ComplexMatrix c = kernel_choi(k);
  const double scale = std::max(1.0, c.max_abs());
  if (hermitian_defect(c) > tol * scale) return false;
  if (!is_psd(c, tol)) return false;

  // Any sum below is a compression of the Choi quadratic form by vectors of
  // norm at most sqrt(n), so a PSD Choi matrix bounds it below by -n*tol.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  const std::size_t n = k.n();
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<ComplexMatrix> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(random_matrix(rng, k.p(), k.p()));
      b.push_back(random_matrix(rng, k.q(), k.q()));
    }
    ComplexMatrix sum(k.q(), k.q());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum += b[i].adjoint() * apply(k.at(i, j), a[i].adjoint() * a[j]) * b[j];
    sum = 0.5 * (sum + sum.adjoint());
    const double lo = min_eigenvalue(sum);
    if (lo < -(static_cast<double>(n) * tol + 1e-12 * scale)) {
      std::ostringstream os;
      os << "is_cp_kernel: Choi test passed but a sampled positivity sum has eigenvalue " << lo;
      throw ConsistencyError(os.str());
    }
  }
  return true;
}

bool leq(const Kernel& k1, const Kernel& k2, double tol) {
  require_compatible(k1, k2, "leq");
  return is_cp_kernel(k2 - k1, tol);
}

double is_cb_kernel_norm(const Kernel& k, const sdp::SolverOptions& opts) {
  const ComplexMatrix c = kernel_choi(k);
  if (k.n() == 0 || c.max_abs() == 0.0) return 0.0;
  return std::max(0.0, complete_off_diagonal(c, k.n(), k.p(), k.q(), opts).t);
}

Kernel2x2 make_2x2(Kernel k00, Kernel k01, Kernel k10, Kernel k11) {
  require_compatible(k00, k01, "make_2x2");
  require_compatible(k00, k10, "make_2x2");
  require_compatible(k00, k11, "make_2x2");
  return {{std::move(k00), std::move(k01), std::move(k10), std::move(k11)}};
}

Kernel2x2 assemble_2x2(const Kernel& l1, const Kernel& k, const Kernel& l2) {
  return make_2x2(l1, k, involution(k), l2);
}

Kernel psi_form(const Kernel2x2& kk) {
  const std::size_t p = kk.p(), q = kk.q(), q2 = 2 * q;
  Kernel out(kk.labels(), p, q2);
  for (std::size_t i = 0; i < out.n(); ++i)
    for (std::size_t j = 0; j < out.n(); ++j) {
      ComplexMatrix c(p * q2, p * q2);
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
          const auto& e = kk.at(b, b2).at(i, j).choi();
          for (std::size_t u = 0; u < p; ++u)
            for (std::size_t w = 0; w < q; ++w)
              for (std::size_t v = 0; v < p; ++v)
                for (std::size_t z = 0; z < q; ++z)
                  c(u * q2 + b * q + w, v * q2 + b2 * q + z) = e(u * q + w, v * q + z);
        }
      out.set(i, j, LinMap(p, q2, std::move(c)));
    }
  return out;
}

LinMap block_map(const LinMap& phi00, const LinMap& phi01, const LinMap& phi10, const LinMap& phi11) {
  const std::size_t p = phi00.p(), q = phi00.q();
  for (const LinMap* m : {&phi01, &phi10, &phi11})
    if (m->p() != p || m->q() != q) throw DimensionError("block_map: blocks have different shapes");
  const LinMap* blocks[2][2] = {{&phi00, &phi01}, {&phi10, &phi11}};
  const std::size_t q2 = 2 * q;
  ComplexMatrix c(4 * p * q, 4 * p * q);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t a2 = 0; a2 < 2; ++a2) {
      const auto& e = blocks[a][a2]->choi();
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t w = 0; w < q; ++w)
          for (std::size_t v = 0; v < p; ++v)
            for (std::size_t z = 0; z < q; ++z)
              c((a * p + u) * q2 + a * q + w, (a2 * p + v) * q2 + a2 * q + z) = e(u * q + w, v * q + z);
    }
  return {2 * p, q2, std::move(c)};
}

Kernel phi_form(const Kernel2x2& kk) {
  Kernel out(kk.labels(), 2 * kk.p(), 2 * kk.q());
  for (std::size_t i = 0; i < out.n(); ++i)
    for (std::size_t j = 0; j < out.n(); ++j)
      out.set(i, j, block_map(kk.at(0, 0).at(i, j), kk.at(0, 1).at(i, j), kk.at(1, 0).at(i, j), kk.at(1, 1).at(i, j)));
  return out;
}

bool is_cp_2x2(const Kernel2x2& kk, double tol) {
  const bool psi = is_cp_kernel(psi_form(kk), tol);
  const bool phi = is_cp_kernel(phi_form(kk), tol);
  if (psi != phi) {
    throw ConsistencyError(std::string("is_cp_2x2: the M_p -> M_2(M_q) reading says ") + (psi ? "CP" : "not CP") +
                           " but the M_2(M_p) -> M_2(M_q) reading disagrees");
  }
  return psi;
}

Kernel2x2 conjugate_2x2(const Kernel2x2& kk, const ComplexMatrix& s) {
  if (s.rows() != 2 || s.cols() != 2) throw DimensionError("conjugate_2x2: S must be 2x2");
  Kernel2x2 out;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      Kernel acc(kk.labels(), kk.p(), kk.q());
      for (std::size_t g = 0; g < 2; ++g)
        for (std::size_t d = 0; d < 2; ++d) {
          const cplx coeff = std::conj(s(g, a)) * s(d, b);
          if (coeff != cplx{}) acc += coeff * kk.at(g, d);
        }
      out.at(a, b) = std::move(acc);
    }
  return out;
}

LinMap interleaved_2x2_map(const Kernel2x2& kk) { return schur_op(phi_form(kk)); }

LinMap blocked_2x2_map(const Kernel2x2& kk) {
  return block_map(schur_op(kk.at(0, 0)), schur_op(kk.at(0, 1)), schur_op(kk.at(1, 0)), schur_op(kk.at(1, 1)));
}

bool bimodule_check(const LinMap& phi, std::size_t n, double tol) {
  if (n == 0 || phi.p() % n != 0 || phi.q() % n != 0) {
    throw DimensionError("bimodule_check: map sizes are not multiples of n = " + std::to_string(n));
  }
  const std::size_t p = phi.p() / n, q = phi.q() / n;
  const auto& c = phi.choi();
  // phi(E_UV) is the (U, V) Choi block; it must live in the (i, j) outer block.
  for (std::size_t row = 0; row < c.rows(); ++row) {
    const std::size_t i = row / phi.q() / p, ti = row % phi.q() / q;
    for (std::size_t col = 0; col < c.cols(); ++col) {
      const std::size_t j = col / phi.q() / p, tj = col % phi.q() / q;
      if ((i != ti || j != tj) && std::abs(c(row, col)) > tol) return false;
    }
  }
  return true;
}

}  // namespace cbk

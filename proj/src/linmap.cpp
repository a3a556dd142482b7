#include "cbk/linmap.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "cbk/completion.hpp"
#include "cbk/errors.hpp"

namespace cbk {

namespace {

using MatC = Eigen::MatrixXcd;

MatC to_eigen(const ComplexMatrix& m) {
  MatC e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

ComplexMatrix from_eigen(const MatC& e) {
  ComplexMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

void require_same_sizes(const LinMap& a, const LinMap& b, const char* what) {
  if (a.p() != b.p() || a.q() != b.q()) throw DimensionError(std::string(what) + ": maps between different algebras");
}

}  // namespace

LinMap::LinMap(std::size_t p, std::size_t q) : p_(p), q_(q), choi_(p * q, p * q) {}

LinMap::LinMap(std::size_t p, std::size_t q, ComplexMatrix choi) : p_(p), q_(q), choi_(std::move(choi)) {
  if (!choi_.square() || choi_.rows() != p * q) {
    throw DimensionError("LinMap: Choi matrix of a map M_" + std::to_string(p) + " -> M_" + std::to_string(q) +
                         " must be " + std::to_string(p * q) + " square");
  }
}

LinMap LinMap::identity(std::size_t p) {
  LinMap m(p, p);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) m.choi_(u * p + u, v * p + v) = 1.0;
  return m;
}

LinMap LinMap::transpose(std::size_t p) {
  LinMap m(p, p);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) m.choi_(u * p + v, v * p + u) = 1.0;
  return m;
}

LinMap LinMap::conjugation(const ComplexMatrix& v) {
  const std::size_t p = v.rows(), q = v.cols();
  LinMap m(p, q);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t w = 0; w < q; ++w)
      for (std::size_t x = 0; x < p; ++x)
        for (std::size_t z = 0; z < q; ++z) m.choi_(u * q + w, x * q + z) = std::conj(v(u, w)) * v(x, z);
  return m;
}

LinMap LinMap::from_function(std::size_t p, std::size_t q,
                             const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
  LinMap m(p, q);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) {
      const ComplexMatrix img = f(ComplexMatrix::unit(p, p, u, v));
      if (img.rows() != q || img.cols() != q) throw DimensionError("LinMap::from_function: image has wrong shape");
      m.choi_.set_block(u * q, v * q, img);
    }
  return m;
}

ComplexMatrix LinMap::block(std::size_t u, std::size_t v) const { return choi_.block(u * q_, v * q_, q_, q_); }

LinMap& LinMap::operator+=(const LinMap& o) {
  require_same_sizes(*this, o, "LinMap::operator+");
  choi_ += o.choi_;
  return *this;
}

LinMap& LinMap::operator-=(const LinMap& o) {
  require_same_sizes(*this, o, "LinMap::operator-");
  choi_ -= o.choi_;
  return *this;
}

LinMap& LinMap::operator*=(cplx s) {
  choi_ *= s;
  return *this;
}

double choi_distance(const LinMap& a, const LinMap& b) {
  require_same_sizes(a, b, "choi_distance");
  return distance(a.choi(), b.choi());
}

ComplexMatrix apply(const LinMap& phi, const ComplexMatrix& a) {
  const std::size_t p = phi.p(), q = phi.q();
  if (a.rows() != p || a.cols() != p) {
    throw DimensionError("apply: argument must be " + std::to_string(p) + "x" + std::to_string(p));
  }
  ComplexMatrix out(q, q);
  const auto& c = phi.choi();
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) {
      const cplx auv = a(u, v);
      if (auv == cplx{}) continue;
      for (std::size_t w = 0; w < q; ++w)
        for (std::size_t z = 0; z < q; ++z) out(w, z) += auv * c(u * q + w, v * q + z);
    }
  return out;
}

LinMap adjoint_map(const LinMap& phi) { return {phi.p(), phi.q(), phi.choi().adjoint()}; }

bool is_hermitian_map(const LinMap& phi, double tol) { return choi_distance(phi, adjoint_map(phi)) <= tol; }

bool is_cp_map(const LinMap& phi, double tol) {
  const auto& c = phi.choi();
  if (hermitian_defect(c) > std::max(tol, 1e-12) * std::max(1.0, c.max_abs())) return false;
  return is_psd(c, tol);
}

LinMap tensor_id(const LinMap& phi, std::size_t r) {
  if (r == 0) throw DimensionError("tensor_id: r must be at least 1");
  const std::size_t p = phi.p(), q = phi.q();
  const std::size_t pr = p * r, qr = q * r;
  LinMap out(pr, qr);
  ComplexMatrix c(pr * qr, pr * qr);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v)
      for (std::size_t w = 0; w < q; ++w)
        for (std::size_t z = 0; z < q; ++z) {
          const cplx val = phi.choi()(u * q + w, v * q + z);
          if (val == cplx{}) continue;
          for (std::size_t s = 0; s < r; ++s)
            for (std::size_t t = 0; t < r; ++t) {
              const std::size_t src_row = u * r + s, src_col = v * r + t;
              const std::size_t tgt_row = w * r + s, tgt_col = z * r + t;
              c(src_row * qr + tgt_row, src_col * qr + tgt_col) = val;
            }
        }
  return {pr, qr, std::move(c)};
}

ComplexMatrix apply_amplified(const LinMap& phi, std::size_t r, const ComplexMatrix& a) {
  const std::size_t p = phi.p(), q = phi.q();
  if (a.rows() != p * r || a.cols() != p * r) throw DimensionError("apply_amplified: argument has wrong size");
  ComplexMatrix out(q * r, q * r);
  const auto& c = phi.choi();
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v)
      for (std::size_t w = 0; w < q; ++w)
        for (std::size_t z = 0; z < q; ++z) {
          const cplx val = c(u * q + w, v * q + z);
          if (val == cplx{}) continue;
          for (std::size_t s = 0; s < r; ++s)
            for (std::size_t t = 0; t < r; ++t) out(w * r + s, z * r + t) += val * a(u * r + s, v * r + t);
        }
  return out;
}

CbNorm cb_norm(const LinMap& phi, const sdp::SolverOptions& opts) {
  const auto res = complete_off_diagonal(phi.choi(), 1, phi.p(), phi.q(), opts);
  CbNorm out;
  out.value = std::max(0.0, res.t);
  out.psi1 = LinMap(phi.p(), phi.q(), res.first);
  out.psi2 = LinMap(phi.p(), phi.q(), res.second);
  out.gap = res.solution.gap;
  out.iterations = res.solution.iterations;
  return out;
}

double cb_norm_lower_bound(const LinMap& phi, std::size_t r, std::size_t trials, std::uint64_t seed) {
  if (r == 0) throw DimensionError("cb_norm_lower_bound: r must be at least 1");
  const std::size_t p = phi.p(), q = phi.q();
  const std::size_t n_in = p * r;
  const auto& c = phi.choi();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  auto value = [&](const ComplexMatrix& a) {
    return Eigen::BDCSVD<MatC>(to_eigen(apply_amplified(phi, r, a))).singularValues()(0);
  };

  double best = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ComplexMatrix a(n_in, n_in);
    for (auto& x : a.entries()) {
      const double re = gauss(rng);
      x = cplx(re, gauss(rng));
    }
    {
      const double s = Eigen::BDCSVD<MatC>(to_eigen(a)).singularValues()(0);
      a *= 1.0 / s;
    }
    double current = value(a);
    for (int sweep = 0; sweep < 50; ++sweep) {
      // Fix a: the best output functional is the top singular pair of the image.
      Eigen::BDCSVD<MatC> svd(to_eigen(apply_amplified(phi, r, a)), Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXcd x = svd.matrixU().col(0);
      const Eigen::VectorXcd y = svd.matrixV().col(0);
      // x* Phi(a) y = sum a(U,V) g(U,V) is maximized over contractions by the
      // polar part of g^T.
      MatC g = MatC::Zero(static_cast<Eigen::Index>(n_in), static_cast<Eigen::Index>(n_in));
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t v = 0; v < p; ++v)
          for (std::size_t w = 0; w < q; ++w)
            for (std::size_t z = 0; z < q; ++z) {
              const cplx val = c(u * q + w, v * q + z);
              if (val == cplx{}) continue;
              for (std::size_t s = 0; s < r; ++s)
                for (std::size_t t = 0; t < r; ++t)
                  g(static_cast<Eigen::Index>(u * r + s), static_cast<Eigen::Index>(v * r + t)) +=
                      std::conj(x(static_cast<Eigen::Index>(w * r + s))) * val * y(static_cast<Eigen::Index>(z * r + t));
            }
      Eigen::BDCSVD<MatC> gs(g.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
      const MatC next = gs.matrixV() * gs.matrixU().adjoint();
      const ComplexMatrix candidate = from_eigen(next);
      const double v = value(candidate);
      if (v <= current * (1.0 + 1e-12)) {
        current = std::max(current, v);
        break;
      }
      a = candidate;
      current = v;
    }
    best = std::max(best, current);
  }
  return best;
}

}  // namespace cbk

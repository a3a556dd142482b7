#pragma once

#include <cstdint>
#include <functional>

#include "cbk/matrix.hpp"
#include "cbk/sdp.hpp"

namespace cbk {

/// A linear map M_p -> M_q stored as its Choi matrix
///   C = sum_{u,v} E_{u,v} (x) phi(E_{u,v}),
/// a pq x pq matrix whose row (u, w) sits at index u*q + w.
class LinMap {
 public:
  LinMap() = default;
  /// The zero map.
  LinMap(std::size_t p, std::size_t q);
  LinMap(std::size_t p, std::size_t q, ComplexMatrix choi);

  static LinMap identity(std::size_t p);
  static LinMap transpose(std::size_t p);
  /// a -> V* a V for a p x q matrix V.
  static LinMap conjugation(const ComplexMatrix& v);
  /// Samples f on the matrix units of M_p.
  static LinMap from_function(std::size_t p, std::size_t q,
                              const std::function<ComplexMatrix(const ComplexMatrix&)>& f);

  std::size_t p() const { return p_; }
  std::size_t q() const { return q_; }
  const ComplexMatrix& choi() const { return choi_; }

  /// phi(E_{u,v}), the (u, v) block of the Choi matrix.
  ComplexMatrix block(std::size_t u, std::size_t v) const;

  LinMap& operator+=(const LinMap& o);
  LinMap& operator-=(const LinMap& o);
  LinMap& operator*=(cplx s);
  friend LinMap operator+(LinMap a, const LinMap& b) { return a += b; }
  friend LinMap operator-(LinMap a, const LinMap& b) { return a -= b; }
  friend LinMap operator*(cplx s, LinMap a) { return a *= s; }
  friend LinMap operator*(LinMap a, cplx s) { return a *= s; }

 private:
  std::size_t p_ = 0;
  std::size_t q_ = 0;
  ComplexMatrix choi_;
};

/// Frobenius distance between Choi matrices.
double choi_distance(const LinMap& a, const LinMap& b);

ComplexMatrix apply(const LinMap& phi, const ComplexMatrix& a);

/// phi*(a) = phi(a*)*; its Choi matrix is the adjoint of phi's.
LinMap adjoint_map(const LinMap& phi);

bool is_hermitian_map(const LinMap& phi, double tol = kDefaultTol);
bool is_cp_map(const LinMap& phi, double tol = kDefaultTol);

/// phi (x) id_r : M_{pr} -> M_{qr}, with M_{pr} = M_p(M_r).
LinMap tensor_id(const LinMap& phi, std::size_t r);

/// (phi (x) id_r)(a) evaluated without materializing the amplified Choi matrix.
ComplexMatrix apply_amplified(const LinMap& phi, std::size_t r, const ComplexMatrix& a);

struct CbNorm {
  double value = 0.0;
  /// Completing CP maps: [[psi1, phi], [phi*, psi2]] is CP and psi_i(1) <= value.
  LinMap psi1;
  LinMap psi2;
  double gap = 0.0;
  int iterations = 0;
};

/// Completely bounded norm as the optimum of the off-diagonal completion SDP.
/// Throws NumericalError when the solver does not certify optimality.
CbNorm cb_norm(const LinMap& phi, const sdp::SolverOptions& opts = {});

/// Brute-force lower bound: max over sampled contractions a in M_{pr} of
/// ||(phi (x) id_r)(a)||, each refined by alternating singular-vector ascent.
double cb_norm_lower_bound(const LinMap& phi, std::size_t r, std::size_t trials, std::uint64_t seed);

}  // namespace cbk

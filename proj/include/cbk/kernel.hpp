#pragma once

#include <array>
#include <string>
#include <vector>

#include "cbk/linmap.hpp"

namespace cbk {

/// A kernel on a finite ordered label set with values in maps M_p -> M_q.
/// Entry (i, j) is k(x_i, x_j); the label order fixes every indexing below.
class Kernel {
 public:
  Kernel() = default;
  /// The zero kernel.
  Kernel(std::vector<std::string> labels, std::size_t p, std::size_t q);
  /// `values` is row-major, n*n entries, all of shape (p, q).
  Kernel(std::vector<std::string> labels, std::size_t p, std::size_t q, std::vector<LinMap> values);

  /// p = q = 1 kernel whose entry (i, j) multiplies by m(i, j).
  static Kernel scalar(std::vector<std::string> labels, const ComplexMatrix& m);
  static Kernel constant(std::vector<std::string> labels, const LinMap& phi);

  std::size_t n() const { return labels_.size(); }
  std::size_t p() const { return p_; }
  std::size_t q() const { return q_; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Throws PreconditionError for an unknown label.
  std::size_t index_of(const std::string& label) const;

  const LinMap& at(std::size_t i, std::size_t j) const { return values_[i * n() + j]; }
  const LinMap& at(const std::string& x, const std::string& y) const { return at(index_of(x), index_of(y)); }
  void set(std::size_t i, std::size_t j, LinMap phi);

  Kernel& operator+=(const Kernel& o);
  Kernel& operator-=(const Kernel& o);
  Kernel& operator*=(cplx s);
  friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
  friend Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
  friend Kernel operator-(Kernel a) { return a *= -1.0; }
  friend Kernel operator*(cplx s, Kernel a) { return a *= s; }
  friend Kernel operator*(Kernel a, cplx s) { return a *= s; }

 private:
  std::vector<std::string> labels_;
  std::size_t p_ = 0;
  std::size_t q_ = 0;
  std::vector<LinMap> values_;
};

/// Throws DimensionError unless a and b share labels and block sizes.
void require_compatible(const Kernel& a, const Kernel& b, const char* what);

/// Largest Choi-Frobenius distance over entries.
double kernel_distance(const Kernel& a, const Kernel& b);

/// The npq-square matrix K[(i,u,w), (j,v,z)] = Choi(k(x_i,x_j))[(u,w), (v,z)],
/// index (i*p + u)*q + w. It is the nonzero principal part of the Choi matrix
/// of schur_op(k).
ComplexMatrix kernel_choi(const Kernel& k);
Kernel from_kernel_choi(std::vector<std::string> labels, std::size_t p, std::size_t q, const ComplexMatrix& c);

/// k*(x, y) = k(y, x)*.
Kernel involution(const Kernel& k);

struct ReIm {
  Kernel re;
  Kernel im;
};
/// k = re + i im with both parts hermitian.
ReIm re_im(const Kernel& k);

bool is_hermitian_kernel(const Kernel& k, double tol = kDefaultTol);

/// (a_ij) -> (k(x_i, x_j)[a_ij]) as a map M_n(M_p) -> M_n(M_q).
LinMap schur_op(const Kernel& k);

/// Choi test on kernel_choi(k), cross-checked against `samples` random sums
/// sum_ij b_i* k(x_i,x_j)[a_i* a_j] b_j. Throws ConsistencyError when a sum
/// certifies a negative direction the Choi test missed.
bool is_cp_kernel(const Kernel& k, double tol = kDefaultTol, std::size_t samples = 32);

/// k2 - k1 is CP.
bool leq(const Kernel& k1, const Kernel& k2, double tol = kDefaultTol);

/// cb norm of schur_op(k), solved on the compressed bimodule pattern.
double is_cb_kernel_norm(const Kernel& k, const sdp::SolverOptions& opts = {});

/// [[b(0,0), b(0,1)], [b(1,0), b(1,1)]] of kernels on shared labels.
struct Kernel2x2 {
  std::array<Kernel, 4> blocks;

  const Kernel& at(std::size_t a, std::size_t b) const { return blocks[a * 2 + b]; }
  Kernel& at(std::size_t a, std::size_t b) { return blocks[a * 2 + b]; }
  const std::vector<std::string>& labels() const { return blocks[0].labels(); }
  std::size_t p() const { return blocks[0].p(); }
  std::size_t q() const { return blocks[0].q(); }
};

Kernel2x2 make_2x2(Kernel k00, Kernel k01, Kernel k10, Kernel k11);
/// [[L1, k], [k*, L2]].
Kernel2x2 assemble_2x2(const Kernel& l1, const Kernel& k, const Kernel& l2);

/// The kernel x, y -> (a -> [K_ab(x,y)[a]]_ab), maps M_p -> M_2(M_q).
Kernel psi_form(const Kernel2x2& kk);
/// The kernel x, y -> ([a_ab] -> [K_ab(x,y)[a_ab]]_ab), maps M_2(M_p) -> M_2(M_q).
Kernel phi_form(const Kernel2x2& kk);

/// CP verdict of psi_form, confirmed against phi_form. Throws ConsistencyError
/// if the two disagree.
bool is_cp_2x2(const Kernel2x2& kk, double tol = kDefaultTol);

/// Blocks of S* K S for a 2x2 scalar matrix S.
Kernel2x2 conjugate_2x2(const Kernel2x2& kk, const ComplexMatrix& s);

/// [[phi00, phi01], [phi10, phi11]] acting blockwise on M_2(M_p) -> M_2(M_q).
LinMap block_map(const LinMap& phi00, const LinMap& phi01, const LinMap& phi10, const LinMap& phi11);

/// The Schur operator of phi_form(kk): M_n(M_2(M_p)) -> M_n(M_2(M_q)).
LinMap interleaved_2x2_map(const Kernel2x2& kk);
/// The same operator read on M_2(M_n(M_p)) -> M_2(M_n(M_q)), i.e.
/// [[S_00, S_01], [S_10, S_11]] with S_ab = schur_op(K_ab).
LinMap blocked_2x2_map(const Kernel2x2& kk);

/// phi : M_n(M_p') -> M_n(M_q') satisfies E_ij * phi(A) = phi(E_ij * A) on all
/// matrix units A (* the Schur product over the outer M_n).
bool bimodule_check(const LinMap& phi, std::size_t n, double tol = kDefaultTol);

}  // namespace cbk

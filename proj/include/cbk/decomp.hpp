#pragma once

#include <string>
#include <vector>

#include "cbk/kernel.hpp"

namespace cbk {

/// k(x, y)[a] = (J iota(x))* (a (x) I_m) iota(y).
///
/// The module is the space of (p*m) x q matrices with right M_q action by
/// multiplication, inner product <u, v> = v* u and left action a (x) I_m.
/// Row (u, s) of iota sits at u*m + s.
struct KolDecomp {
  std::vector<std::string> labels;
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t m = 0;
  ComplexMatrix j;                  // (p*m) square
  std::vector<ComplexMatrix> iota;  // one (p*m) x q matrix per label

  std::size_t d() const { return p * m; }
};

Kernel reconstruct(const KolDecomp& d);

/// max over matrix units E_uv of ||J (E_uv (x) I_m) - (E_uv (x) I_m) J||_F.
double module_map_residual(const ComplexMatrix& j, std::size_t p, std::size_t m);

/// J = I. Throws PreconditionError, naming the most negative Choi eigenvalue,
/// if k is not CP.
KolDecomp kolmogorov_positive(const Kernel& k, double tol = kDefaultTol);

/// Direct sum of the positive decompositions with J = I (+) -I.
KolDecomp difference_kolmogorov(const Kernel& k1, const Kernel& k2, double tol = kDefaultTol);

/// Modules side by side with J = c1 J1 (+) c2 J2.
KolDecomp direct_sum(const KolDecomp& d1, cplx c1, const KolDecomp& d2, cplx c2);

struct KernelPair {
  Kernel first;
  Kernel second;
};

/// Splits J into its positive and negative parts; both returned kernels are CP
/// and first - second = reconstruct(d). Throws PreconditionError unless J is
/// self-adjoint within tol.
KernelPair decomp_to_difference(const KolDecomp& d, double tol = kDefaultTol);

struct OffDiagonal {
  Kernel l1;
  Kernel l2;
  double t = 0.0;
};

/// CP kernels l1, l2 with [[l1, k], [k*, l2]] CP and the diagonal values
/// l_a(x, x)(1) bounded by t, which is minimal (the cb norm of schur_op(k)).
OffDiagonal offdiagonal_complete(const Kernel& k, const sdp::SolverOptions& opts = {});

/// J self-adjoint with J^2 = I. CP and anti-CP inputs skip the SDP.
KolDecomp kolmogorov_hermitian(const Kernel& k, const sdp::SolverOptions& opts = {}, double tol = kDefaultTol);

/// J = J1 (+) -i J2 from hermitian decompositions of Re k and Im k; a part
/// whose entries are all below tol/2 is dropped.
KolDecomp kolmogorov_general(const Kernel& k, const sdp::SolverOptions& opts = {}, double tol = kDefaultTol);

/// k = (c[0] - c[1]) + i (c[2] - c[3]) with every c CP.
struct FourCp {
  std::array<Kernel, 4> c;

  Kernel combine() const;
};
FourCp four_cp(const Kernel& k, const sdp::SolverOptions& opts = {}, double tol = kDefaultTol);

struct DecompReport {
  bool reconstructs = false;
  bool j_contractive = false;
  bool j_module_map = false;
  bool j_selfadjoint = false;
  bool j_psd = false;
  /// J >= 0 implies the reconstruction is CP.
  bool psd_implies_cp = false;
  /// J = J* implies the reconstruction is hermitian.
  bool selfadjoint_implies_hermitian = false;
  /// Hermitian reconstruction implies J = J*. Needs the iotas to generate the
  /// module, so it is reported but not part of passed().
  bool hermitian_implies_selfadjoint = false;
  double residual = 0.0;
  double j_norm = 0.0;
  double module_residual = 0.0;

  bool passed() const {
    return reconstructs && j_contractive && j_module_map && psd_implies_cp && selfadjoint_implies_hermitian;
  }
};

DecompReport verify_decomp(const KolDecomp& d, const Kernel& k, double tol = kDefaultTol);

}  // namespace cbk

#include "cbk/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cbk/completion.hpp"
#include "cbk/errors.hpp"

namespace cbk {

namespace {

double kernel_scale(const Kernel& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) s = std::max(s, k.at(i, j).choi().frobenius_norm());
  return s;
}

bool negligible(const Kernel& k, double tol) { return kernel_scale(k) <= 0.5 * tol; }

ComplexMatrix hermitian_part(const ComplexMatrix& h) { return 0.5 * (h + h.adjoint()); }

KolDecomp with_j(KolDecomp d, ComplexMatrix j) {
  d.j = std::move(j);
  return d;
}

void validate(const KolDecomp& d) {
  if (d.j.rows() != d.d() || d.j.cols() != d.d()) throw DimensionError("KolDecomp: J must be (p*m) square");
  if (d.iota.size() != d.labels.size()) throw DimensionError("KolDecomp: one iota per label required");
  for (const auto& x : d.iota)
    if (x.rows() != d.d() || x.cols() != d.q) throw DimensionError("KolDecomp: iota must be (p*m) x q");
}

}  // namespace

Kernel reconstruct(const KolDecomp& d) {
  validate(d);
  const std::size_t p = d.p, q = d.q, m = d.m, n = d.labels.size();
  Kernel out(d.labels, p, q);
  std::vector<ComplexMatrix> ji;
  for (const auto& x : d.iota) ji.push_back(d.j * x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = 0; jj < n; ++jj) {
      ComplexMatrix c(p * q, p * q);
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t w = 0; w < q; ++w)
          for (std::size_t v = 0; v < p; ++v)
            for (std::size_t z = 0; z < q; ++z) {
              cplx acc{};
              for (std::size_t s = 0; s < m; ++s) acc += std::conj(ji[i](u * m + s, w)) * d.iota[jj](v * m + s, z);
              c(u * q + w, v * q + z) = acc;
            }
      out.set(i, jj, LinMap(p, q, std::move(c)));
    }
  return out;
}

double module_map_residual(const ComplexMatrix& j, std::size_t p, std::size_t m) {
  if (j.rows() != p * m || j.cols() != p * m) throw DimensionError("module_map_residual: J must be (p*m) square");
  double r = 0.0;
  const ComplexMatrix id = ComplexMatrix::identity(m);
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) {
      const ComplexMatrix e = kron(ComplexMatrix::unit(p, p, u, v), id);
      r = std::max(r, distance(j * e, e * j));
    }
  return r;
}

KolDecomp kolmogorov_positive(const Kernel& k, double tol) {
  const ComplexMatrix c = kernel_choi(k);
  if (!is_cp_kernel(k, tol)) {
    std::ostringstream os;
    os << "kolmogorov_positive: kernel is not completely positive (Choi hermitian defect " << hermitian_defect(c);
    if (c.rows() > 0) os << ", smallest eigenvalue " << min_eigenvalue(hermitian_part(c));
    os << ")";
    throw PreconditionError(os.str());
  }
  const std::size_t p = k.p(), q = k.q(), n = k.n();
  KolDecomp d{k.labels(), p, q, 0, {}, {}};
  if (c.rows() == 0 || c.max_abs() == 0.0) {
    d.j = ComplexMatrix(0, 0);
    d.iota.assign(n, ComplexMatrix(0, q));
    return d;
  }
  const auto eig = eig_hermitian(hermitian_part(c));
  const double cutoff = 1e-12 * std::max(1.0, eig.values.front());
  std::size_t m = 0;
  while (m < eig.values.size() && eig.values[m] > cutoff) ++m;
  d.m = m;
  d.j = ComplexMatrix::identity(p * m);
  for (std::size_t i = 0; i < n; ++i) {
    ComplexMatrix x(p * m, q);
    for (std::size_t s = 0; s < m; ++s) {
      const double root = std::sqrt(eig.values[s]);
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t w = 0; w < q; ++w) x(u * m + s, w) = root * std::conj(eig.vectors((i * p + u) * q + w, s));
    }
    d.iota.push_back(std::move(x));
  }
  return d;
}

KolDecomp direct_sum(const KolDecomp& d1, cplx c1, const KolDecomp& d2, cplx c2) {
  validate(d1);
  validate(d2);
  if (d1.labels != d2.labels || d1.p != d2.p || d1.q != d2.q) {
    throw DimensionError("direct_sum: decompositions of kernels on different spaces");
  }
  const std::size_t p = d1.p, m1 = d1.m, m2 = d2.m, m = m1 + m2;
  KolDecomp d{d1.labels, p, d1.q, m, ComplexMatrix(p * m, p * m), {}};
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < p; ++v) {
      for (std::size_t s = 0; s < m1; ++s)
        for (std::size_t t = 0; t < m1; ++t) d.j(u * m + s, v * m + t) = c1 * d1.j(u * m1 + s, v * m1 + t);
      for (std::size_t s = 0; s < m2; ++s)
        for (std::size_t t = 0; t < m2; ++t) d.j(u * m + m1 + s, v * m + m1 + t) = c2 * d2.j(u * m2 + s, v * m2 + t);
    }
  for (std::size_t i = 0; i < d1.labels.size(); ++i) {
    ComplexMatrix x(p * m, d1.q);
    for (std::size_t u = 0; u < p; ++u)
      for (std::size_t w = 0; w < d1.q; ++w) {
        for (std::size_t s = 0; s < m1; ++s) x(u * m + s, w) = d1.iota[i](u * m1 + s, w);
        for (std::size_t s = 0; s < m2; ++s) x(u * m + m1 + s, w) = d2.iota[i](u * m2 + s, w);
      }
    d.iota.push_back(std::move(x));
  }
  return d;
}

KolDecomp difference_kolmogorov(const Kernel& k1, const Kernel& k2, double tol) {
  require_compatible(k1, k2, "difference_kolmogorov");
  return direct_sum(kolmogorov_positive(k1, tol), 1.0, kolmogorov_positive(k2, tol), -1.0);
}

KernelPair decomp_to_difference(const KolDecomp& d, double tol) {
  validate(d);
  if (hermitian_defect(d.j) > tol * std::max(1.0, d.j.max_abs())) {
    throw PreconditionError("decomp_to_difference: J is not self-adjoint (defect " +
                            std::to_string(hermitian_defect(d.j)) + ")");
  }
  auto part = [&](const ComplexMatrix& jpart) {
    KolDecomp e = with_j(d, ComplexMatrix::identity(d.d()));
    const ComplexMatrix root = psd_sqrt(jpart);
    for (auto& x : e.iota) x = root * x;
    return reconstruct(e);
  };
  if (d.d() == 0) return {reconstruct(d), reconstruct(d)};
  const auto split = jordan_split(hermitian_part(d.j));
  return {part(split.plus), part(split.minus)};
}

OffDiagonal offdiagonal_complete(const Kernel& k, const sdp::SolverOptions& opts) {
  const ComplexMatrix c = kernel_choi(k);
  if (k.n() == 0 || c.max_abs() == 0.0) return {k, k, 0.0};
  const auto res = complete_off_diagonal(c, k.n(), k.p(), k.q(), opts);
  return {from_kernel_choi(k.labels(), k.p(), k.q(), hermitian_part(res.first)),
          from_kernel_choi(k.labels(), k.p(), k.q(), hermitian_part(res.second)), std::max(0.0, res.t)};
}

KolDecomp kolmogorov_hermitian(const Kernel& k, const sdp::SolverOptions& opts, double tol) {
  const double scale = std::max(1.0, kernel_scale(k));
  const double defect = kernel_distance(k, involution(k));
  if (defect > tol * scale) {
    throw PreconditionError("kolmogorov_hermitian: kernel is not hermitian (distance to its involution " +
                            std::to_string(defect) + ")");
  }
  if (is_cp_kernel(k, tol)) return kolmogorov_positive(k, tol);
  if (is_cp_kernel(-k, tol)) {
    const KolDecomp pos = kolmogorov_positive(-k, tol);
    return with_j(pos, -1.0 * pos.j);
  }

  const OffDiagonal od = offdiagonal_complete(k, opts);
  // Swapping the two diagonal blocks of a CP 2x2 kernel over a hermitian k
  // keeps it CP, so the average of both is a valid common diagonal.
  const ComplexMatrix l = hermitian_part(0.5 * (kernel_choi(od.l1) + kernel_choi(od.l2)));
  const ComplexMatrix kc = hermitian_part(kernel_choi(k));
  ComplexMatrix plus = 0.5 * (l + kc);
  ComplexMatrix minus = 0.5 * (l - kc);
  // The solver meets the fixed off-diagonal block only to its tolerance; a
  // common diagonal shift absorbs that without changing plus - minus.
  const double lo = std::min(min_eigenvalue(plus), min_eigenvalue(minus));
  if (lo < 0.0) {
    const ComplexMatrix shift = (-lo * (1.0 + 1e-6) + 1e-14 * scale) * ComplexMatrix::identity(plus.rows());
    plus += shift;
    minus += shift;
  }
  const Kernel k1 = from_kernel_choi(k.labels(), k.p(), k.q(), plus);
  const Kernel k2 = from_kernel_choi(k.labels(), k.p(), k.q(), minus);
  if (!is_cp_2x2(assemble_2x2(k1 + k2, k1 - k2, k1 + k2), 1e-7 * scale)) {
    throw ConsistencyError("kolmogorov_hermitian: symmetrized completion is not completely positive");
  }
  return difference_kolmogorov(k1, k2, tol);
}

KolDecomp kolmogorov_general(const Kernel& k, const sdp::SolverOptions& opts, double tol) {
  const auto [re, im] = re_im(k);
  const bool drop_re = negligible(re, tol), drop_im = negligible(im, tol);
  if (drop_im && drop_re) return kolmogorov_positive(Kernel(k.labels(), k.p(), k.q()), tol);
  if (drop_im) return kolmogorov_hermitian(re, opts, tol);
  const KolDecomp d2 = kolmogorov_hermitian(im, opts, tol);
  if (drop_re) return with_j(d2, cplx(0.0, -1.0) * d2.j);
  return direct_sum(kolmogorov_hermitian(re, opts, tol), 1.0, d2, cplx(0.0, -1.0));
}

Kernel FourCp::combine() const { return (c[0] - c[1]) + cplx(0.0, 1.0) * (c[2] - c[3]); }

FourCp four_cp(const Kernel& k, const sdp::SolverOptions& opts, double tol) {
  const auto [re, im] = re_im(k);
  const Kernel zero(k.labels(), k.p(), k.q());
  FourCp out{{zero, zero, zero, zero}};
  if (!negligible(re, tol)) {
    auto pr = decomp_to_difference(kolmogorov_hermitian(re, opts, tol), tol);
    out.c[0] = std::move(pr.first);
    out.c[1] = std::move(pr.second);
  }
  if (!negligible(im, tol)) {
    auto pr = decomp_to_difference(kolmogorov_hermitian(im, opts, tol), tol);
    out.c[2] = std::move(pr.first);
    out.c[3] = std::move(pr.second);
  }
  return out;
}

DecompReport verify_decomp(const KolDecomp& d, const Kernel& k, double tol) {
  DecompReport r;
  const Kernel rec = reconstruct(d);
  const double scale = std::max(1.0, kernel_scale(k));
  r.residual = kernel_distance(rec, k);
  r.reconstructs = r.residual <= tol * scale;
  if (d.d() == 0) {
    r.j_contractive = r.j_module_map = r.j_selfadjoint = r.j_psd = true;
  } else {
    r.j_norm = operator_norm(d.j);
    r.j_contractive = r.j_norm <= 1.0 + tol;
    r.module_residual = module_map_residual(d.j, d.p, d.m);
    r.j_module_map = r.module_residual <= tol * std::max(1.0, r.j_norm);
    r.j_selfadjoint = hermitian_defect(d.j) <= tol;
    r.j_psd = r.j_selfadjoint && min_eigenvalue(hermitian_part(d.j)) >= -tol;
  }
  const double rec_tol = tol * std::max(1.0, kernel_scale(rec));
  const bool cp = is_cp_kernel(rec, rec_tol);
  const bool herm = is_hermitian_kernel(rec, rec_tol);
  r.psd_implies_cp = !r.j_psd || cp;
  r.selfadjoint_implies_hermitian = !r.j_selfadjoint || herm;
  r.hermitian_implies_selfadjoint = !herm || r.j_selfadjoint;
  return r;
}

}  // namespace cbk

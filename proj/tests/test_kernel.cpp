#include <gtest/gtest.h>

#include "cbk/errors.hpp"
#include "cbk/extension.hpp"
#include "cbk/random.hpp"
#include "oracle.hpp"

using namespace cbk;

namespace {

const cplx I(0.0, 1.0);

ComplexMatrix scalar_matrix(const Kernel& k) {
  ComplexMatrix m(k.n(), k.n());
  for (std::size_t i = 0; i < k.n(); ++i)
    for (std::size_t j = 0; j < k.n(); ++j) m(i, j) = k.at(i, j).choi()(0, 0);
  return m;
}

}  // namespace

TEST(Kernel, ConstructionChecks) {
  EXPECT_THROW(Kernel({"a", "a"}, 1, 1), PreconditionError);
  Kernel k({"a", "b"}, 2, 1);
  EXPECT_THROW(k.set(0, 0, LinMap(1, 2)), DimensionError);
  EXPECT_THROW(k.index_of("c"), PreconditionError);
  EXPECT_THROW(k + Kernel({"a", "b"}, 1, 1), DimensionError);
  EXPECT_THROW(k + Kernel({"b", "a"}, 2, 1), DimensionError);
}

TEST(Kernel, KernelChoiRoundTrip) {
  Rng rng(1);
  const Kernel k = random_kernel(rng, 3, 2, 1);
  EXPECT_EQ(kernel_distance(from_kernel_choi(k.labels(), 2, 1, kernel_choi(k)), k), 0.0);
}

TEST(Kernel, Involution) {
  Rng rng(2);
  const Kernel k = random_kernel(rng, 3, 2, 2);
  EXPECT_LT(kernel_distance(involution(involution(k)), k), 1e-15);
  const ComplexMatrix m = random_matrix(rng, 3, 3);
  const Kernel s = Kernel::scalar(default_labels(3), m);
  EXPECT_LT(distance(scalar_matrix(involution(s)), m.adjoint()), 1e-15);
  const Kernel cp = random_cp_kernel(rng, 3, 2, 2);
  ASSERT_TRUE(is_cp_kernel(cp));
  EXPECT_LT(kernel_distance(involution(cp), cp), 1e-10);
}

TEST(Kernel, RealAndImaginaryParts) {
  Rng rng(3);
  const Kernel h = random_cp_kernel(rng, 2, 2, 2);
  const Kernel herm = random_hermitian_kernel(rng, 2, 2, 2);
  const auto a = re_im(herm);
  EXPECT_LT(kernel_distance(a.re, herm), 1e-14);
  EXPECT_LT(kernel_distance(a.im, Kernel(herm.labels(), 2, 2)), 1e-14);
  const auto b = re_im(I * h);
  EXPECT_LT(kernel_distance(b.im, h), 1e-12);
  const Kernel k = random_kernel(rng, 3, 2, 2);
  const auto c = re_im(k);
  EXPECT_LT(kernel_distance(c.re + I * c.im, k), 1e-12);
  EXPECT_TRUE(is_hermitian_kernel(c.re, 1e-14));
  EXPECT_TRUE(is_hermitian_kernel(c.im, 1e-14));
}

TEST(Kernel, SchurOperator) {
  Rng rng(4);
  const Kernel one = random_kernel(rng, 1, 2, 3);
  EXPECT_EQ(schur_op(one).choi(), one.at(0, 0).choi());

  const ComplexMatrix m = random_matrix(rng, 3, 3);
  const LinMap s = schur_op(Kernel::scalar(default_labels(3), m));
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  EXPECT_LT(distance(apply(s, a), schur_product(m, a)), 1e-13);

  const Kernel ids = Kernel::constant(default_labels(3), LinMap::identity(2));
  EXPECT_EQ(schur_op(ids).choi(), LinMap::identity(6).choi());

  const Kernel k = random_kernel(rng, 2, 2, 3);
  EXPECT_TRUE(bimodule_check(schur_op(k), 2));
  // The compressed Choi matrix is the principal part of the full one.
  EXPECT_NEAR(oracle::min_eigenvalue(kernel_choi(random_cp_kernel(rng, 2, 2, 2))), 0.0, 1e-10);
}

TEST(Kernel, CpPredicate) {
  EXPECT_TRUE(is_cp_kernel(Kernel(default_labels(3), 2, 2)));
  EXPECT_TRUE(is_cp_kernel(Kernel::scalar(default_labels(2), {{1.0, 1.0}, {1.0, 1.0}})));
  EXPECT_FALSE(is_cp_kernel(Kernel::scalar(default_labels(2), {{1.0, 2.0}, {2.0, 1.0}})));
  EXPECT_TRUE(is_cp_kernel(Kernel::constant(default_labels(2), LinMap::identity(2))));
  EXPECT_FALSE(is_cp_kernel(Kernel::constant(default_labels(2), LinMap::transpose(2))));
  // The Choi test agrees with the full Schur operator's Choi matrix.
  Rng rng(5);
  for (int t = 0; t < 6; ++t) {
    const Kernel k = t % 2 ? random_hermitian_kernel(rng, 2, 2, 1) : random_cp_kernel(rng, 2, 2, 1);
    EXPECT_EQ(is_cp_kernel(k), oracle::is_psd(schur_op(k).choi(), 1e-9));
  }
}

TEST(Kernel, ConeProperty) {
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const Kernel k1 = random_cp_kernel(rng, 3, 2, 2), k2 = random_cp_kernel(rng, 3, 2, 2);
    EXPECT_TRUE(is_cp_kernel(k1 + 2.5 * k2));
  }
}

TEST(Kernel, PartialOrder) {
  Rng rng(7);
  const Kernel k = random_hermitian_kernel(rng, 2, 2, 2);
  EXPECT_TRUE(leq(k, k));
  const Kernel k1 = random_cp_kernel(rng, 3, 2, 2), k2 = random_cp_kernel(rng, 3, 2, 2);
  EXPECT_TRUE(leq(Kernel(k1.labels(), 2, 2), k1));
  EXPECT_TRUE(leq(-(k1 + k2), k1 - k2));
  EXPECT_TRUE(leq(k1 - k2, k1 + k2));
  EXPECT_THROW(leq(k, k1), DimensionError);
}

TEST(Kernel, CbNorm) {
  EXPECT_EQ(is_cb_kernel_norm(Kernel(default_labels(3), 2, 2)), 0.0);
  Kernel diag(default_labels(3), 2, 2);
  for (std::size_t i = 0; i < 3; ++i) diag.set(i, i, LinMap::identity(2));
  EXPECT_NEAR(is_cb_kernel_norm(diag), 1.0, 1e-6);
  EXPECT_NEAR(is_cb_kernel_norm(Kernel::scalar(default_labels(3), ComplexMatrix::identity(3))), 1.0, 1e-6);
}

TEST(Kernel, CbNormMatchesFullSchurOperator) {
  Rng rng(8);
  const Kernel k = random_kernel(rng, 2, 2, 1);
  EXPECT_NEAR(is_cb_kernel_norm(k), cb_norm(schur_op(k)).value, 1e-5);
  const Kernel s = random_kernel(rng, 3, 1, 1);
  EXPECT_NEAR(is_cb_kernel_norm(s), cb_norm(schur_op(s)).value, 1e-5);
}

TEST(Kernel, CbNormOfCpKernelIsNormAtIdentity) {
  Rng rng(9);
  const Kernel k = random_cp_kernel(rng, 3, 2, 2);
  const ComplexMatrix img = apply(schur_op(k), ComplexMatrix::identity(6));
  EXPECT_NEAR(is_cb_kernel_norm(k), oracle::spectral_norm(img), 1e-5);
}

TEST(Kernel, RestrictionProperties) {
  Rng rng(10);
  const Kernel cp = random_cp_kernel(rng, 4, 2, 1);
  const Kernel k = random_kernel(rng, 4, 1, 2);
  const std::vector<std::string> g{"x1", "x3"};
  EXPECT_TRUE(is_cp_kernel(restrict(cp, g)));
  EXPECT_LE(is_cb_kernel_norm(restrict(k, g)), is_cb_kernel_norm(k) + 1e-6);
}

TEST(Kernel, Assemble2x2) {
  Rng rng(11);
  const Kernel k = random_cp_kernel(rng, 2, 2, 2);
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(k, k, k)));
  const Kernel z(k.labels(), 2, 2);
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(z, z, z)));
  const Kernel g = random_kernel(rng, 2, 2, 2);
  // A large multiple of a strictly positive CP kernel dominates any k.
  const Kernel strict = from_kernel_choi(k.labels(), 2, 2, ComplexMatrix::identity(8) * 1e3);
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(strict, g, strict)));
  EXPECT_EQ(kernel_distance(assemble_2x2(z, g, z).at(1, 0), involution(g)), 0.0);
}

TEST(Kernel, Is2x2Cp) {
  Rng rng(12);
  const Kernel k = random_cp_kernel(rng, 2, 2, 2);
  const Kernel z(k.labels(), 2, 2);
  EXPECT_TRUE(is_cp_2x2(make_2x2(k, z, z, k)));
  EXPECT_FALSE(is_cp_2x2(assemble_2x2(z, k, z)));
  const Kernel h = random_hermitian_kernel(rng, 2, 2, 2);
  const OffDiagonal od = offdiagonal_complete(h);
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(od.l1, h, od.l2), 1e-7));
}

TEST(Kernel, PhiAndPsiFormsAreShuffles) {
  Rng rng(13);
  const Kernel2x2 kk = make_2x2(random_kernel(rng, 2, 2, 1), random_kernel(rng, 2, 2, 1),
                                random_kernel(rng, 2, 2, 1), random_kernel(rng, 2, 2, 1));
  // Dropping the zero rows of the phi-form leaves the psi-form up to reordering,
  // so the two spectra agree apart from zeros.
  const auto psi = eig_hermitian(0.5 * (kernel_choi(psi_form(kk)) + kernel_choi(psi_form(kk)).adjoint()));
  const auto phi = eig_hermitian(0.5 * (kernel_choi(phi_form(kk)) + kernel_choi(phi_form(kk)).adjoint()));
  EXPECT_NEAR(psi.values.front(), phi.values.front(), 1e-10);
  EXPECT_NEAR(std::min(0.0, psi.values.back()), std::min(0.0, phi.values.back()), 1e-10);
}

TEST(Kernel, InterleavedAndBlockedMapsAreShuffles) {
  Rng rng(14);
  const std::size_t n = 3, p = 2, q = 1;
  const Kernel2x2 kk = make_2x2(random_kernel(rng, n, p, q), random_kernel(rng, n, p, q),
                                random_kernel(rng, n, p, q), random_kernel(rng, n, p, q));
  const LinMap a = interleaved_2x2_map(kk), b = blocked_2x2_map(kk);
  const auto src = shuffle_permutation(n, 2, p), tgt = shuffle_permutation(n, 2, q);
  std::vector<std::size_t> perm(src.size() * tgt.size());
  for (std::size_t s = 0; s < src.size(); ++s)
    for (std::size_t t = 0; t < tgt.size(); ++t) perm[s * tgt.size() + t] = src[s] * tgt.size() + tgt[t];
  EXPECT_EQ(permute(a.choi(), perm), b.choi());
}

TEST(Kernel, Conjugate2x2) {
  Rng rng(15);
  const Kernel l1 = random_cp_kernel(rng, 2, 2, 2), l2 = random_cp_kernel(rng, 2, 2, 2);
  const Kernel k = random_kernel(rng, 2, 2, 2);
  const Kernel2x2 kk = assemble_2x2(l1, k, l2);
  const Kernel2x2 same = conjugate_2x2(kk, ComplexMatrix::identity(2));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(kernel_distance(same.at(a, b), kk.at(a, b)), 0.0);
  const Kernel2x2 w = conjugate_2x2(kk, {{1.0, 1.0}, {1.0, -1.0}});
  EXPECT_LT(kernel_distance(w.at(0, 0), l1 + l2 + k + involution(k)), 1e-13);
}

TEST(Kernel, ConjugationWitnessesGiveOrderBounds) {
  Rng rng(16);
  const Kernel h = random_hermitian_kernel(rng, 2, 2, 2);
  const OffDiagonal od = offdiagonal_complete(h);
  const Kernel2x2 kk = assemble_2x2(od.l1, h, od.l2);
  const Kernel2x2 w = conjugate_2x2(kk, {{1.0, I}, {-I, -1.0}});
  EXPECT_TRUE(is_cp_kernel(w.at(0, 0), 1e-7));
  EXPECT_TRUE(is_cp_kernel(w.at(1, 1), 1e-7));
  const Kernel half = 0.5 * (od.l1 + od.l2);
  const Kernel skew = cplx(0.0, -0.5) * (h - involution(h));
  EXPECT_TRUE(leq(-half, skew, 1e-7));
}

TEST(Kernel, BimoduleCheck) {
  EXPECT_FALSE(bimodule_check(LinMap::transpose(2), 2));
  Rng rng(17);
  EXPECT_TRUE(bimodule_check(random_linmap(rng, 2, 3), 1));
  EXPECT_FALSE(bimodule_check(random_linmap(rng, 4, 2), 2));
  EXPECT_TRUE(bimodule_check(schur_op(random_kernel(rng, 3, 1, 2)), 3));
  EXPECT_THROW(bimodule_check(random_linmap(rng, 3, 2), 2), DimensionError);
}

#include <gtest/gtest.h>

#include "cbk/errors.hpp"
#include "cbk/extension.hpp"
#include "cbk/random.hpp"

using namespace cbk;

namespace {

Kernel zero_like(const Kernel& k) { return Kernel(k.labels(), k.p(), k.q()); }

SubsetChain chain_of(std::size_t n, std::vector<std::vector<std::string>> levels) {
  return {default_labels(n), std::move(levels)};
}

}  // namespace

TEST(Extension, ChainValidation) {
  EXPECT_NO_THROW(chain_of(4, {{"x1"}, {"x0", "x1"}, {"x0", "x1", "x3"}}).validate());
  EXPECT_THROW(chain_of(4, {{"x0", "x1"}, {"x0", "x1"}}).validate(), PreconditionError);
  EXPECT_THROW(chain_of(4, {{"x1", "x0"}}).validate(), PreconditionError);
  EXPECT_THROW(chain_of(4, {{"x0"}, {"x1", "x2"}}).validate(), PreconditionError);
  EXPECT_THROW(chain_of(4, {{"y"}}).validate(), PreconditionError);
}

TEST(Extension, RestrictAndPad) {
  Rng rng(1);
  const Kernel k = random_kernel(rng, 4, 2, 1);
  EXPECT_EQ(kernel_distance(restrict(k, k.labels()), k), 0.0);
  const Kernel one = restrict(k, {"x2"});
  ASSERT_EQ(one.n(), 1u);
  EXPECT_EQ(one.at(0, 0).choi(), k.at(2, 2).choi());
  // Order follows the kernel, not the argument.
  EXPECT_EQ(restrict(k, {"x3", "x1"}).labels(), (std::vector<std::string>{"x1", "x3"}));
  EXPECT_THROW(restrict(k, {"nope"}), PreconditionError);

  const Kernel kf = restrict(k, {"x0", "x2"});
  const Kernel padded = pad(kf, k.labels());
  EXPECT_EQ(kernel_distance(restrict(padded, kf.labels()), kf), 0.0);
  EXPECT_EQ(padded.at(1, 1).choi(), ComplexMatrix(2, 2));
  EXPECT_EQ(kernel_distance(pad(k, k.labels()), k), 0.0);
  EXPECT_THROW(pad(k, {"x0"}), PreconditionError);

  const Kernel cp = random_cp_kernel(rng, 4, 2, 2);
  EXPECT_TRUE(is_cp_kernel(restrict(cp, {"x1", "x2"})));
  EXPECT_TRUE(is_cp_kernel(pad(restrict(cp, {"x1", "x2"}), cp.labels())));
}

TEST(Extension, PairKernels) {
  Rng rng(2);
  const Kernel k = random_kernel(rng, 4, 2, 2);
  const Kernel d = pair_kernel(k, "x1", "x1");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool on = i == 1 && j == 1;
      EXPECT_EQ(d.at(i, j).choi(), on ? k.at(i, j).choi() : ComplexMatrix(4, 4));
    }
  const Kernel xy = pair_kernel(k, "x0", "x2");
  EXPECT_EQ(kernel_distance(xy, pair_kernel(k, "x2", "x0")), 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool on = (i == 0 && j == 2) || (i == 2 && j == 0);
      EXPECT_EQ(xy.at(i, j).choi(), on ? k.at(i, j).choi() : ComplexMatrix(4, 4));
    }
}

TEST(Extension, HalfSumReconstructsRestriction) {
  Rng rng(3);
  const Kernel k = random_kernel(rng, 5, 2, 2);
  for (const auto& f : std::vector<std::vector<std::string>>{{"x3"}, {"x0", "x4"}, {"x0", "x1", "x2", "x3", "x4"}})
    EXPECT_LT(kernel_distance(pair_half_sum(k, f), restrict(k, f)), 1e-12);
}

TEST(Extension, PairCompletions) {
  Rng rng(4);
  const Kernel k = random_kernel(rng, 3, 2, 2);
  PairCompletionCache cache(k);
  for (const auto& [x, y] : std::vector<std::pair<std::string, std::string>>{{"x0", "x1"}, {"x2", "x2"}}) {
    const Kernel& l = cache.get(x, y);
    EXPECT_TRUE(is_cp_kernel(l));
    EXPECT_TRUE(is_cp_2x2(assemble_2x2(l, pair_kernel(k, x, y), l), 1e-7));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (k.labels()[i] != x && k.labels()[i] != y) EXPECT_EQ(l.at(i, j).choi().max_abs(), 0.0);
  }
  EXPECT_EQ(&cache.get("x1", "x0"), &cache.get("x0", "x1"));
  EXPECT_EQ(cache.size(), 2u);
}

TEST(Extension, PairCompletionExamples) {
  Kernel k = Kernel::scalar(default_labels(2), {{0.0, 1.0}, {0.0, 0.0}});
  const Kernel l = pair_completion(k, "x0", "x1");
  EXPECT_TRUE(is_cp_kernel(l));
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(l, k, l), 1e-7));
  EXPECT_GT(l.at(0, 0).choi()(0, 0).real(), 0.0);
  EXPECT_GT(l.at(1, 1).choi()(0, 0).real(), 0.0);

  const Kernel z = Kernel::scalar(default_labels(2), {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_LT(kernel_distance(pair_completion(z, "x0", "x1"), zero_like(z)), 1e-15);

  Rng rng(5);
  const Kernel cp = random_cp_kernel(rng, 2, 2, 2);
  const Kernel diag = pair_completion(cp, "x1", "x1");
  EXPECT_LT(kernel_distance(diag, pair_kernel(cp, "x1", "x1")), 1e-10);
}

TEST(Extension, L0GroundScope) {
  Rng rng(6);
  const Kernel k = random_kernel(rng, 4, 1, 2);
  PairCompletionCache cache(k);
  const std::vector<std::string> f{"x0", "x1", "x2", "x3"}, g{"x1", "x3"};
  const Kernel lf = build_L0(cache, f), lg = build_L0(cache, g);
  EXPECT_LT(kernel_distance(restrict(lf, g), lg), 1e-15);
  EXPECT_TRUE(is_cp_kernel(lf));
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(lf, k, lf), 1e-7));
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(lg, restrict(k, g), lg), 1e-7));
  EXPECT_LE(radius(cache, g), radius(cache, f) + 1e-6);

  PairCompletionCache zero(zero_like(k));
  EXPECT_EQ(kernel_distance(build_L0(zero, f), zero_like(k)), 0.0);
  EXPECT_EQ(radius(zero, f), 0.0);
}

TEST(Extension, L0SubsetScope) {
  Rng rng(7);
  const Kernel k = random_kernel(rng, 3, 1, 1);
  PairCompletionCache cache(k);
  // A single point: only the diagonal completion contributes.
  const Kernel single = build_L0(cache, {"x1"}, PairScope::subset);
  EXPECT_LT(kernel_distance(single, restrict(cache.get("x1", "x1"), {"x1"})), 1e-15);
  const Kernel full = build_L0(cache, k.labels(), PairScope::subset);
  EXPECT_TRUE(is_cp_2x2(assemble_2x2(full, k, full), 1e-7));
  // Pairs through other points add to the diagonal, so restriction does not commute.
  EXPECT_GT(kernel_distance(restrict(full, {"x1"}), single), 1e-6);
}

TEST(Extension, RadiusExamples) {
  const Kernel one = Kernel::scalar({"x"}, ComplexMatrix::identity(1));
  PairCompletionCache cache(one);
  EXPECT_NEAR(radius(cache, {"x"}), 1.0, 1e-6);
}

TEST(Extension, LocalSolutionCheck) {
  Rng rng(8);
  const Kernel k = random_kernel(rng, 3, 1, 2);
  PairCompletionCache cache(k);
  const SubsetChain chain = chain_of(3, {{"x0"}, {"x0", "x2"}, {"x0", "x1", "x2"}});
  const Kernel l0 = build_L0(cache, chain.chain.back());
  const LocalCheck ok = local_solution_check({l0, l0}, cache, chain, 1e-6);
  EXPECT_TRUE(ok.passed);
  ASSERT_EQ(ok.levels.size(), 3u);
  for (const auto& lv : ok.levels) EXPECT_TRUE(lv.passed);

  const Kernel zero = zero_like(k);
  EXPECT_FALSE(local_solution_check({zero, zero}, cache, chain, 1e-6).passed);

  const Kernel big = 10.0 * l0;
  const LocalCheck capped = local_solution_check({big, big}, cache, chain, 1e-6);
  EXPECT_FALSE(capped.passed);
  EXPECT_TRUE(capped.levels.back().assembled_cp);

  EXPECT_THROW(local_solution_check({restrict(l0, {"x0"}), restrict(l0, {"x0"})}, cache, chain, 1e-6),
               DimensionError);
}

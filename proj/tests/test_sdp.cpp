#include <gtest/gtest.h>

#include "cbk/errors.hpp"
#include "cbk/sdp.hpp"

using namespace cbk;
using namespace cbk::sdp;

TEST(Sdp, LargestEigenvalueAsSdp) {
  // minimize t s.t. t I - diag(3, -1) = S >= 0.
  SdpProblem prob;
  const auto s = prob.add_block("S", 2);
  const auto t = prob.add_block("t", 1);
  const double d[2] = {3.0, -1.0};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = i; j < 2; ++j) {
      Equality e;
      e.terms.push_back({s, i, j, 1.0});
      if (i == j) e.terms.push_back({t, 0, 0, -1.0});
      e.target = i == j ? -d[i] : 0.0;
      prob.equalities.push_back(e);
    }
  prob.objective.push_back({t, 0, 0, 1.0});
  const auto sol = solve(prob);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective_value, 3.0, 1e-6);
  EXPECT_NEAR(sol.dual_objective, 3.0, 1e-6);
}

TEST(Sdp, ComplexOffDiagonalNorm) {
  // [[t, c], [conj c, t]] >= 0 has minimal t = |c|.
  SdpProblem prob;
  const auto w = prob.add_block("W", 2);
  const cplx c(1.2, -1.6);
  prob.equalities.push_back({{{w, 0, 1, 1.0}}, c});
  prob.equalities.push_back({{{w, 0, 0, 1.0}, {w, 1, 1, -1.0}}, 0.0});
  prob.objective.push_back({w, 0, 0, 1.0});
  const auto sol = solve(prob);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective_value, 2.0, 1e-6);
  EXPECT_NEAR(std::abs(sol.blocks[w](0, 1) - c), 0.0, 1e-6);
}

TEST(Sdp, InfeasibleFixedMatrix) {
  SdpProblem prob;
  const auto w = prob.add_block("W", 2);
  const double m[2][2] = {{1.0, 2.0}, {2.0, 1.0}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = i; j < 2; ++j) prob.equalities.push_back({{{w, i, j, 1.0}}, m[i][j]});
  const auto sol = solve(prob);
  EXPECT_EQ(sol.status, Status::infeasible);
}

TEST(Sdp, ValidateRejectsOutOfRangeTerms) {
  SdpProblem prob;
  const auto w = prob.add_block("W", 2);
  prob.equalities.push_back({{{w, 2, 0, 1.0}}, 0.0});
  EXPECT_THROW(prob.validate(), DimensionError);
}

TEST(Sdp, DeadlineIsHonoured) {
  SdpProblem prob;
  const auto w = prob.add_block("W", 2);
  prob.equalities.push_back({{{w, 0, 1, 1.0}}, 1.0});
  prob.objective.push_back({w, 0, 0, 1.0});
  prob.objective.push_back({w, 1, 1, 1.0});
  SolverOptions opts;
  opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(solve(prob, opts), DeadlineExceeded);
}

TEST(Sdp, TraceCallbackSeesEveryIteration) {
  SdpProblem prob;
  const auto w = prob.add_block("W", 2);
  prob.equalities.push_back({{{w, 0, 1, 1.0}}, 1.0});
  prob.objective.push_back({w, 0, 0, 1.0});
  prob.objective.push_back({w, 1, 1, 1.0});
  int calls = 0;
  SolverOptions opts;
  opts.trace = [&](const IterationInfo&) { ++calls; };
  const auto sol = solve(prob, opts);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective_value, 2.0, 1e-6);
  EXPECT_GE(calls, sol.iterations);
}

TEST(Sdp, EmbeddingDoublesSpectrum) {
  const ComplexMatrix h{{2.0, cplx(0, 1)}, {cplx(0, -1), 2.0}};
  const ComplexMatrix y = embed_complex(h);
  ASSERT_EQ(y.rows(), 4u);
  const auto e = eig_hermitian(y);
  EXPECT_NEAR(e.values[0], 3.0, 1e-12);
  EXPECT_NEAR(e.values[1], 3.0, 1e-12);
  EXPECT_NEAR(e.values[3], 1.0, 1e-12);
}

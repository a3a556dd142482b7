#pragma once

#include "cbk/matrix.hpp"
#include "cbk/sdp.hpp"

namespace cbk {

struct CompletionResult {
  /// Pattern Choi matrices of the two completing CP maps.
  ComplexMatrix first;
  ComplexMatrix second;
  double t = 0.0;
  sdp::SdpSolution solution;
};

/// Off-diagonal completion on a bimodule pattern.
///
/// `pattern` is the (points*p*q)-square matrix indexed by (point, u, w), i.e.
/// the nonzero principal part of the Choi matrix of a Schur product operator
/// (points = 1 gives an ordinary Choi matrix). Solves
///
///   minimize t  s.t.  [[L1, pattern], [pattern*, L2]] >= 0,
///                     L_a(x_i, x_i)(1) <= t * I_q for every point i,
///
/// over pattern-supported L1, L2. Throws NumericalError on a non-optimal status.
CompletionResult complete_off_diagonal(const ComplexMatrix& pattern, std::size_t points, std::size_t p,
                                       std::size_t q, const sdp::SolverOptions& opts = {});

}  // namespace cbk

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbk/matrix.hpp"

namespace cbk::sdp {

/// One term of a linear functional: coeff * X_block(row, col).
struct Term {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  cplx coeff = 1.0;
};

/// sum(terms) == target. A complex target yields two real constraints; the
/// imaginary one is dropped when it vanishes identically on Hermitian blocks.
struct Equality {
  std::vector<Term> terms;
  cplx target = 0.0;
};

struct Block {
  std::string name;
  std::size_t size = 0;
};

/// minimize Re sum(objective) over Hermitian PSD blocks subject to equalities.
struct SdpProblem {
  std::vector<Block> blocks;
  std::vector<Equality> equalities;
  std::vector<Term> objective;

  std::size_t add_block(std::string name, std::size_t size);
  /// Throws DimensionError if a term references an entry outside its block.
  void validate() const;
};

enum class Status { optimal, infeasible, max_iter, numerical_failure };

std::string to_string(Status s);

struct IterationInfo {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct SolverOptions {
  double eps = 1e-7;
  int max_iter = 200;
  /// Reported as infeasible once the dual objective exceeds this bound.
  double divergence_bound = 1e8;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::function<void(const IterationInfo&)> trace;
  /// Optional primal starting point (one matrix per block); it is pushed into
  /// the interior before use.
  std::vector<ComplexMatrix> warm_start;
};

struct SdpSolution {
  std::vector<ComplexMatrix> blocks;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  Status status = Status::numerical_failure;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

/// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]], stored with zero
/// imaginary parts. PSD iff H is, with every eigenvalue doubled.
ComplexMatrix embed_complex(const ComplexMatrix& h);

/// Primal-dual interior-point method (HKM direction, Mehrotra predictor-corrector)
/// on the real embedding. Deterministic. Throws DeadlineExceeded when the
/// optional deadline passes.
SdpSolution solve(const SdpProblem& prob, const SolverOptions& opts = {});

}  // namespace cbk::sdp

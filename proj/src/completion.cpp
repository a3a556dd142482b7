#include "cbk/completion.hpp"

#include <sstream>

#include "cbk/errors.hpp"

namespace cbk {

CompletionResult complete_off_diagonal(const ComplexMatrix& pattern, std::size_t points, std::size_t p,
                                       std::size_t q, const sdp::SolverOptions& opts) {
  const std::size_t n = points * p * q;
  if (!pattern.square() || pattern.rows() != n) {
    throw DimensionError("complete_off_diagonal: pattern must be " + std::to_string(n) + " square");
  }
  auto idx = [&](std::size_t i, std::size_t u, std::size_t w) { return (i * p + u) * q + w; };

  sdp::SdpProblem prob;
  const auto w_block = prob.add_block("W", 2 * n);
  std::vector<std::size_t> slack[2];
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < points; ++i)
      slack[a].push_back(prob.add_block("S" + std::to_string(a + 1) + "_" + std::to_string(i), q));
  const auto t_block = prob.add_block("t", 1);

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) prob.equalities.push_back({{{w_block, r, n + c, 1.0}}, pattern(r, c)});

  for (std::size_t a = 0; a < 2; ++a) {
    const std::size_t off = a * n;
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t w = 0; w < q; ++w) {
        for (std::size_t z = w; z < q; ++z) {
          sdp::Equality eq;
          eq.terms.push_back({slack[a][i], w, z, 1.0});
          for (std::size_t u = 0; u < p; ++u) eq.terms.push_back({w_block, off + idx(i, u, w), off + idx(i, u, z), 1.0});
          if (w == z) eq.terms.push_back({t_block, 0, 0, -1.0});
          prob.equalities.push_back(std::move(eq));
        }
      }
    }
  }
  prob.objective.push_back({t_block, 0, 0, 1.0});

  CompletionResult out;
  out.solution = sdp::solve(prob, opts);
  if (out.solution.status != sdp::Status::optimal) {
    std::ostringstream os;
    os << "off-diagonal completion: solver status " << sdp::to_string(out.solution.status) << " after "
       << out.solution.iterations << " iterations (gap " << out.solution.gap << ", primal infeasibility "
       << out.solution.primal_infeasibility << ", dual infeasibility " << out.solution.dual_infeasibility << ")";
    if (!out.solution.message.empty()) os << ": " << out.solution.message;
    throw NumericalError(os.str());
  }
  const auto& w = out.solution.blocks[w_block];
  out.first = w.block(0, 0, n, n);
  out.second = w.block(n, n, n, n);
  out.t = out.solution.objective_value;
  return out;
}

}  // namespace cbk

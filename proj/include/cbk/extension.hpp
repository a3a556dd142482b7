#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "cbk/decomp.hpp"

namespace cbk {

/// Increasing finite subsets G_1 < G_2 < ... of an ordered ground set.
struct SubsetChain {
  std::vector<std::string> ground;
  std::vector<std::vector<std::string>> chain;

  /// Throws PreconditionError unless every subset lies in the ground set in
  /// ground order and each inclusion is strict.
  void validate() const;
};

struct LocalPair {
  Kernel l1;
  Kernel l2;
};

/// Entries at g x g, in the order of k's labels.
Kernel restrict(const Kernel& k, const std::vector<std::string>& g);

/// Extends k by zero to the larger label set x.
Kernel pad(const Kernel& k, const std::vector<std::string>& x);

/// The part of k living on {x, y} x {x, y} minus the diagonal entries when
/// x != y; just k(x, x) when x == y. Defined on all of k's labels.
Kernel pair_kernel(const Kernel& k, const std::string& x, const std::string& y);

/// 1/2 [sum over (x, y) in f x f of pair_kernel(x, y) + sum over x of
/// pair_kernel(x, x)], restricted to f. Equals restrict(k, f).
Kernel pair_half_sum(const Kernel& k, const std::vector<std::string>& f);

/// Write-once store of pair completions L_(x,y) for one kernel. Each unordered
/// pair is solved once, so every consumer sees identical values.
class PairCompletionCache {
 public:
  explicit PairCompletionCache(Kernel k, sdp::SolverOptions opts = {}, double tol = kDefaultTol);

  const Kernel& kernel() const { return k_; }
  /// CP kernel on all labels, supported on {x, y}, with
  /// [[L, pair_kernel(x, y)], [pair_kernel(x, y)*, L]] CP.
  const Kernel& get(const std::string& x, const std::string& y);
  std::size_t size() const;

 private:
  Kernel compute(std::size_t i, std::size_t j) const;

  Kernel k_;
  sdp::SolverOptions opts_;
  double tol_;
  mutable std::mutex mu_;
  std::map<std::pair<std::size_t, std::size_t>, Kernel> done_;
};

Kernel pair_completion(const Kernel& k, const std::string& x, const std::string& y, const sdp::SolverOptions& opts = {},
                       double tol = kDefaultTol);

/// Which pairs enter the half-sum defining L_F^0.
///  ground: all pairs of the kernel's labels, then restricted to F. Commutes
///          with restriction.
///  subset: only pairs inside F. Diagonal entries then grow with F, so the
///          result does not commute with restriction in general.
enum class PairScope { ground, subset };

Kernel build_L0(PairCompletionCache& cache, const std::vector<std::string>& f, PairScope scope = PairScope::ground);

/// cb norm of build_L0(cache, f, scope).
double radius(PairCompletionCache& cache, const std::vector<std::string>& f, PairScope scope = PairScope::ground,
              const sdp::SolverOptions& opts = {});

struct LevelCheck {
  std::vector<std::string> subset;
  bool cp1 = false;
  bool cp2 = false;
  bool assembled_cp = false;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double radius = 0.0;
  bool passed = false;
};

struct LocalCheck {
  bool passed = false;
  /// One entry per chain subset, smallest first; the last is the pair's own set.
  std::vector<LevelCheck> levels;
};

/// The pair lives on the chain's top set. At every chain level G it checks
/// L_a|G CP with cb norm at most radius(G) + eps and
/// [[L_1|G, k|G], [k|G*, L_2|G]] CP.
LocalCheck local_solution_check(const LocalPair& pair, PairCompletionCache& cache, const SubsetChain& chain,
                                double eps, PairScope scope = PairScope::ground, const sdp::SolverOptions& opts = {});

}  // namespace cbk

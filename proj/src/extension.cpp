#include "cbk/extension.hpp"

#include <algorithm>
#include <set>

#include "cbk/errors.hpp"

namespace cbk {

namespace {

/// Indices of g in k's label order, rejecting unknown or repeated labels.
std::vector<std::size_t> ordered_indices(const std::vector<std::string>& labels, const std::vector<std::string>& g,
                                         const char* what) {
  std::vector<std::size_t> idx;
  for (const auto& x : g) {
    const auto it = std::find(labels.begin(), labels.end(), x);
    if (it == labels.end()) throw PreconditionError(std::string(what) + ": unknown label '" + x + "'");
    idx.push_back(static_cast<std::size_t>(it - labels.begin()));
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw PreconditionError(std::string(what) + ": repeated label");
  }
  return idx;
}

std::vector<std::string> labels_at(const std::vector<std::string>& labels, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(labels[i]);
  return out;
}

Kernel gram_kernel(KolDecomp d) {
  d.j = ComplexMatrix::identity(d.d());
  return reconstruct(d);
}

}  // namespace

void SubsetChain::validate() const {
  if (std::set<std::string>(ground.begin(), ground.end()).size() != ground.size()) {
    throw PreconditionError("SubsetChain: ground labels must be distinct");
  }
  std::vector<std::size_t> prev;
  for (std::size_t c = 0; c < chain.size(); ++c) {
    std::vector<std::size_t> idx;
    for (const auto& x : chain[c]) {
      const auto it = std::find(ground.begin(), ground.end(), x);
      if (it == ground.end()) throw PreconditionError("SubsetChain: label '" + x + "' is not in the ground set");
      idx.push_back(static_cast<std::size_t>(it - ground.begin()));
    }
    if (idx.empty()) throw PreconditionError("SubsetChain: empty subset at position " + std::to_string(c));
    if (!std::is_sorted(idx.begin(), idx.end()) || std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
      throw PreconditionError("SubsetChain: subset " + std::to_string(c) + " does not follow the ground order");
    }
    if (c > 0) {
      if (idx.size() <= prev.size() || !std::includes(idx.begin(), idx.end(), prev.begin(), prev.end())) {
        throw PreconditionError("SubsetChain: subset " + std::to_string(c) + " does not strictly contain its predecessor");
      }
    }
    prev = std::move(idx);
  }
}

Kernel restrict(const Kernel& k, const std::vector<std::string>& g) {
  const auto idx = ordered_indices(k.labels(), g, "restrict");
  Kernel out(labels_at(k.labels(), idx), k.p(), k.q());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out.set(a, b, k.at(idx[a], idx[b]));
  return out;
}

Kernel pad(const Kernel& k, const std::vector<std::string>& x) {
  Kernel out(x, k.p(), k.q());
  std::vector<std::size_t> idx;
  for (const auto& l : k.labels()) idx.push_back(out.index_of(l));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out.set(idx[a], idx[b], k.at(a, b));
  return out;
}

Kernel pair_kernel(const Kernel& k, const std::string& x, const std::string& y) {
  const std::size_t i = k.index_of(x), j = k.index_of(y);
  Kernel out(k.labels(), k.p(), k.q());
  out.set(i, j, k.at(i, j));
  out.set(j, i, k.at(j, i));
  return out;
}

Kernel pair_half_sum(const Kernel& k, const std::vector<std::string>& f) {
  const auto idx = ordered_indices(k.labels(), f, "pair_half_sum");
  Kernel acc(k.labels(), k.p(), k.q());
  for (auto i : idx) {
    for (auto j : idx) acc += pair_kernel(k, k.labels()[i], k.labels()[j]);
    acc += pair_kernel(k, k.labels()[i], k.labels()[i]);
  }
  return restrict(0.5 * acc, f);
}

PairCompletionCache::PairCompletionCache(Kernel k, sdp::SolverOptions opts, double tol)
    : k_(std::move(k)), opts_(std::move(opts)), tol_(tol) {}

std::size_t PairCompletionCache::size() const {
  std::lock_guard lock(mu_);
  return done_.size();
}

const Kernel& PairCompletionCache::get(const std::string& x, const std::string& y) {
  std::size_t i = k_.index_of(x), j = k_.index_of(y);
  if (i > j) std::swap(i, j);
  std::lock_guard lock(mu_);
  auto it = done_.find({i, j});
  if (it == done_.end()) it = done_.emplace(std::make_pair(i, j), compute(i, j)).first;
  return it->second;
}

Kernel PairCompletionCache::compute(std::size_t i, std::size_t j) const {
  const auto& labels = k_.labels();
  std::vector<std::string> support{labels[i]};
  if (j != i) support.push_back(labels[j]);
  const Kernel local = restrict(pair_kernel(k_, labels[i], labels[j]), support);
  const KolDecomp d = (i == j && is_cp_kernel(local, tol_)) ? kolmogorov_positive(local, tol_)
                                                             : kolmogorov_general(local, opts_, tol_);
  return pad(gram_kernel(d), labels);
}

Kernel pair_completion(const Kernel& k, const std::string& x, const std::string& y, const sdp::SolverOptions& opts,
                       double tol) {
  PairCompletionCache cache(k, opts, tol);
  return cache.get(x, y);
}

Kernel build_L0(PairCompletionCache& cache, const std::vector<std::string>& f, PairScope scope) {
  const Kernel& k = cache.kernel();
  const auto idx = ordered_indices(k.labels(), f, "build_L0");
  std::vector<std::string> pairs_over = k.labels();
  if (scope == PairScope::subset) pairs_over = labels_at(k.labels(), idx);
  Kernel acc(k.labels(), k.p(), k.q());
  for (const auto& x : pairs_over) {
    for (const auto& y : pairs_over) acc += cache.get(x, y);
    acc += cache.get(x, x);
  }
  return restrict(0.5 * acc, f);
}

double radius(PairCompletionCache& cache, const std::vector<std::string>& f, PairScope scope,
              const sdp::SolverOptions& opts) {
  return is_cb_kernel_norm(build_L0(cache, f, scope), opts);
}

LocalCheck local_solution_check(const LocalPair& pair, PairCompletionCache& cache, const SubsetChain& chain,
                                double eps, PairScope scope, const sdp::SolverOptions& opts) {
  chain.validate();
  require_compatible(pair.l1, pair.l2, "local_solution_check");
  if (chain.chain.empty()) throw PreconditionError("local_solution_check: empty chain");
  const Kernel& k = cache.kernel();
  if (restrict(k, chain.chain.back()).labels() != pair.l1.labels()) {
    throw DimensionError("local_solution_check: pair is not defined on the top set of the chain");
  }
  const bool same = kernel_distance(pair.l1, pair.l2) == 0.0;

  LocalCheck out;
  out.passed = true;
  for (const auto& g : chain.chain) {
    LevelCheck lv;
    const Kernel l1 = restrict(pair.l1, g), l2 = restrict(pair.l2, g), kg = restrict(k, g);
    lv.subset = l1.labels();
    lv.cp1 = is_cp_kernel(l1, eps);
    lv.cp2 = same ? lv.cp1 : is_cp_kernel(l2, eps);
    lv.norm1 = is_cb_kernel_norm(l1, opts);
    lv.norm2 = same ? lv.norm1 : is_cb_kernel_norm(l2, opts);
    lv.radius = radius(cache, g, scope, opts);
    lv.assembled_cp = is_cp_2x2(assemble_2x2(l1, kg, l2), eps);
    lv.passed = lv.cp1 && lv.cp2 && lv.assembled_cp && lv.norm1 <= lv.radius + eps && lv.norm2 <= lv.radius + eps;
    out.passed = out.passed && lv.passed;
    out.levels.push_back(std::move(lv));
  }
  return out;
}

}  // namespace cbk

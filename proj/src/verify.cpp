#include "cbk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cbk/random.hpp"

namespace cbk {

namespace {

/// One trial: returns the worst residual seen, or records a failure.
struct Trial {
  double residual = 0.0;
  std::string failure;

  void check(bool ok, const std::string& property) {
    if (!ok && failure.empty()) failure = property;
  }
  void bound(double r, double limit, const std::string& property) {
    residual = std::max(residual, r);
    check(r <= limit, property + " (residual " + std::to_string(r) + ")");
  }
};

using TrialFn = std::function<void(Rng&, std::size_t, Trial&)>;

SuiteResult run_suite(const std::string& name, std::size_t index, const VerifyConfig& cfg, const TrialFn& fn) {
  SuiteResult r{name, 0, 0, 0.0, {}};
  Rng rng(cfg.seed * 0x100000001b3ULL + index);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Trial trial;
    try {
      fn(rng, t, trial);
    } catch (const std::exception& e) {
      trial.check(false, std::string("exception: ") + e.what());
    }
    r.worst_residual = std::max(r.worst_residual, trial.residual);
    if (trial.failure.empty()) {
      ++r.passed;
    } else {
      ++r.failed;
      r.failures.push_back("trial " + std::to_string(t) + ": " + trial.failure);
    }
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> verify_theorems(const VerifyConfig& cfg) {
  const std::size_t n = cfg.n, p = cfg.p, q = cfg.q;
  const double tol = cfg.eps;
  const auto& opts = cfg.solver;
  std::vector<SuiteResult> out;

  out.push_back(run_suite("positive_round_trip", 0, cfg, [&](Rng& rng, std::size_t t, Trial& tr) {
    Kernel k = random_cp_kernel(rng, n, p, q);
    if (cfg.inject_corruption && t == 0) k = -k;
    tr.check(is_cp_kernel(k), "generated kernel is CP");
    if (!tr.failure.empty()) return;
    tr.bound(kernel_distance(reconstruct(kolmogorov_positive(k)), k), 1e-8, "reconstruct round trip");
  }));

  out.push_back(run_suite("difference_decomposition", 1, cfg, [&](Rng& rng, std::size_t, Trial& tr) {
    const Kernel k1 = random_cp_kernel(rng, n, p, q), k2 = random_cp_kernel(rng, n, p, q);
    const Kernel k = k1 - k2, s = k1 + k2;
    tr.check(leq(-s, k) && leq(k, s), "order bounds -(k1+k2) <= k <= k1+k2");
    const KolDecomp d = difference_kolmogorov(k1, k2);
    tr.bound(hermitian_defect(d.j), 1e-10, "J self-adjoint");
    tr.bound(distance(d.j * d.j, ComplexMatrix::identity(d.d())), 1e-10, "J^2 = I");
    const auto pr = decomp_to_difference(d);
    tr.check(is_cp_kernel(pr.first) && is_cp_kernel(pr.second), "recovered kernels CP");
    tr.bound(kernel_distance(pr.first - pr.second, k), 1e-8, "recovered difference");
  }));

  out.push_back(run_suite("hermitian_iff_selfadjoint", 2, cfg, [&](Rng& rng, std::size_t t, Trial& tr) {
    const std::size_t m = 1;
    ComplexMatrix jp = kron(ComplexMatrix::identity(p), random_hermitian(rng, m));
    if (t % 2 == 1) jp += 0.1 * kron(ComplexMatrix::identity(p), random_matrix(rng, m, m));
    const KolDecomp d = random_decomp(rng, std::max<std::size_t>(n, 2), p, q, m, jp);
    const Kernel r = reconstruct(d);
    const bool herm = is_hermitian_kernel(r, 1e-9), sa = hermitian_defect(d.j) <= 1e-9;
    tr.check(herm == sa, "hermitian reconstruction iff J = J*");
  }));

  out.push_back(run_suite("offdiagonal_completion", 3, cfg, [&](Rng& rng, std::size_t, Trial& tr) {
    const Kernel k = random_hermitian_kernel(rng, n, p, q);
    const OffDiagonal od = offdiagonal_complete(k, opts);
    const Kernel2x2 kk = assemble_2x2(od.l1, k, od.l2);
    tr.check(is_cp_2x2(kk, tol), "assembled 2x2 kernel CP");
    const auto w1 = conjugate_2x2(kk, {{1.0, 1.0}, {1.0, -1.0}});
    const auto w2 = conjugate_2x2(kk, {{1.0, cplx(0, 1)}, {cplx(0, -1), -1.0}});
    for (const auto* w : {&w1, &w2})
      tr.check(is_cp_kernel(w->at(0, 0), tol) && is_cp_kernel(w->at(1, 1), tol), "conjugated diagonals CP");
    tr.bound(std::abs(od.t - is_cb_kernel_norm(k, opts)), 1e-5, "completion value equals cb norm");
  }));

  out.push_back(run_suite("haagerup_forms", 4, cfg, [&](Rng& rng, std::size_t t, Trial& tr) {
    // Alternate certified CP blocks with generic ones; is_cp_2x2 throws on disagreement.
    Kernel2x2 kk;
    if (t % 2 == 0) {
      const Kernel g = random_cp_kernel(rng, n, p, 2 * q);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
          Kernel blk(g.labels(), p, q);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              ComplexMatrix c(p * q, p * q);
              for (std::size_t u = 0; u < p; ++u)
                for (std::size_t w = 0; w < q; ++w)
                  for (std::size_t v = 0; v < p; ++v)
                    for (std::size_t z = 0; z < q; ++z)
                      c(u * q + w, v * q + z) = g.at(i, j).choi()(u * 2 * q + a * q + w, v * 2 * q + b * q + z);
              blk.set(i, j, LinMap(p, q, std::move(c)));
            }
          kk.at(a, b) = std::move(blk);
        }
      tr.check(is_cp_2x2(kk), "CP-by-construction 2x2 kernel recognised");
    } else {
      kk = make_2x2(random_kernel(rng, n, p, q), random_kernel(rng, n, p, q), random_kernel(rng, n, p, q),
                    random_kernel(rng, n, p, q));
      (void)is_cp_2x2(kk);
    }
  }));

  out.push_back(run_suite("four_cp", 5, cfg, [&](Rng& rng, std::size_t, Trial& tr) {
    const Kernel k = random_kernel(rng, n, p, q);
    const FourCp f = four_cp(k, opts);
    for (const auto& c : f.c) tr.check(is_cp_kernel(c), "component CP");
    tr.bound(kernel_distance(f.combine(), k), 1e-6, "four-CP combination");
  }));

  out.push_back(run_suite("global_local_forms", 6, cfg, [&](Rng& rng, std::size_t, Trial& tr) {
    const Kernel k = random_hermitian_kernel(rng, n, p, q);
    const OffDiagonal od = offdiagonal_complete(k, opts);
    const Kernel2x2 kk = assemble_2x2(od.l1, k, od.l2);
    const bool a = is_cp_2x2(kk, tol);
    const bool b = is_cp_map(interleaved_2x2_map(kk), tol);
    const bool c = is_cp_map(blocked_2x2_map(kk), tol);
    tr.check(a == b && b == c, "kernel, interleaved and blocked verdicts agree");
    tr.check(bimodule_check(schur_op(k), n), "Schur operator is a bimodule map");
  }));

  return out;
}

io::json verify_report(const VerifyConfig& cfg, const std::vector<SuiteResult>& suites) {
  io::json arr = io::json::array();
  bool all = true;
  for (const auto& s : suites) {
    all = all && s.failed == 0;
    arr.push_back({{"name", s.name},
                   {"passed", s.passed},
                   {"failed", s.failed},
                   {"worst_residual", s.worst_residual},
                   {"failures", s.failures}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"config",
           {{"n", cfg.n},
            {"p", cfg.p},
            {"q", cfg.q},
            {"trials", cfg.trials},
            {"seed", cfg.seed},
            {"eps", cfg.eps},
            {"inject_corruption", cfg.inject_corruption}}},
          {"suites", std::move(arr)},
          {"passed", all}};
}

}  // namespace cbk

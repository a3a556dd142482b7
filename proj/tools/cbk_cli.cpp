// cbk: generate kernels, classify them, decompose them and run the property suites.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "cbk/errors.hpp"
#include "cbk/io.hpp"
#include "cbk/random.hpp"
#include "cbk/verify.hpp"

namespace {

using cbk::io::json;

enum Exit { kOk = 0, kVerificationFailed = 1, kPrecondition = 2, kNumerical = 3 };

struct Common {
  std::size_t n = 2, p = 2, q = 2;
  std::uint64_t seed = 1;
  double eps = 1e-7;
  int max_iter = 200;
  double timeout = 0.0;
  std::string out;
  bool verbose = false;

  cbk::sdp::SolverOptions solver() const {
    cbk::sdp::SolverOptions o;
    o.eps = eps;
    o.max_iter = max_iter;
    if (timeout > 0) {
      o.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
    }
    if (verbose) {
      o.trace = [](const cbk::sdp::IterationInfo& it) {
        std::fprintf(stderr, "sdp iter %3d  pobj % .10e  dobj % .10e  gap %.2e  pinf %.2e  dinf %.2e  step %.3f/%.3f\n",
                     it.iteration, it.primal_objective, it.dual_objective, it.gap, it.primal_infeasibility,
                     it.dual_infeasibility, it.step_primal, it.step_dual);
      };
    }
    return o;
  }
};

void add_sizes(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "number of points")->check(CLI::PositiveNumber);
  app->add_option("--p", c.p, "source block size")->check(CLI::PositiveNumber);
  app->add_option("--q", c.q, "target block size")->check(CLI::PositiveNumber);
}

void add_solver(CLI::App* app, Common& c) {
  app->add_option("--eps", c.eps, "solver and positivity tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", c.max_iter, "solver iteration limit")->check(CLI::PositiveNumber);
  app->add_option("--timeout", c.timeout, "give up after this many seconds");
  app->add_flag("--verbose", c.verbose, "print solver iterations to stderr");
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    cbk::io::write_file(path, j);
  }
}

int cmd_gen(const Common& c, const std::string& kind) {
  cbk::Rng rng(c.seed);
  if (kind == "cp") {
    emit(cbk::io::to_json(cbk::random_cp_kernel(rng, c.n, c.p, c.q)), c.out);
  } else if (kind == "hermitian") {
    emit(cbk::io::to_json(cbk::random_hermitian_kernel(rng, c.n, c.p, c.q)), c.out);
  } else if (kind == "general") {
    emit(cbk::io::to_json(cbk::random_kernel(rng, c.n, c.p, c.q)), c.out);
  } else {
    const cbk::Kernel k1 = cbk::random_cp_kernel(rng, c.n, c.p, c.q);
    const cbk::Kernel k2 = cbk::random_cp_kernel(rng, c.n, c.p, c.q);
    json j = cbk::io::to_json(k1 - k2);
    j["ground_truth"] = {{"k1", cbk::io::to_json(k1)}, {"k2", cbk::io::to_json(k2)}};
    emit(j, c.out);
  }
  return kOk;
}

int cmd_check(const Common& c, const std::string& file) {
  const cbk::Kernel k = cbk::io::kernel_from_json(cbk::io::read_file(file));
  const auto od = cbk::offdiagonal_complete(k, c.solver());
  json r = {{"hermitian", cbk::is_hermitian_kernel(k, c.eps)},
            {"cp", cbk::is_cp_kernel(k, c.eps)},
            {"cb_norm", od.t},
            {"decomposable", cbk::is_cp_2x2(cbk::assemble_2x2(od.l1, k, od.l2), std::max(c.eps, 1e-7))}};
  emit(r, c.out);
  return kOk;
}

json report_json(const cbk::DecompReport& r) {
  return {{"reconstructs", r.reconstructs},
          {"J_contractive", r.j_contractive},
          {"J_module_map", r.j_module_map},
          {"J_selfadjoint", r.j_selfadjoint},
          {"J_psd", r.j_psd},
          {"psd_implies_cp", r.psd_implies_cp},
          {"selfadjoint_implies_hermitian", r.selfadjoint_implies_hermitian},
          {"hermitian_implies_selfadjoint", r.hermitian_implies_selfadjoint},
          {"residual", r.residual},
          {"J_norm", r.j_norm},
          {"module_residual", r.module_residual},
          {"passed", r.passed()}};
}

int cmd_decompose(const Common& c, const std::string& file, const std::string& mode) {
  const cbk::Kernel k = cbk::io::kernel_from_json(cbk::io::read_file(file));
  const auto opts = c.solver();
  const double tol = std::max(c.eps, 1e-9);
  if (mode == "four") {
    const auto f = cbk::four_cp(k, opts, tol);
    const double residual = cbk::kernel_distance(f.combine(), k);
    json cp = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
      cp.push_back(cbk::is_cp_kernel(f.c[i], tol));
      if (!c.out.empty()) cbk::io::write_file(c.out + ".c" + std::to_string(i + 1) + ".json", cbk::io::to_json(f.c[i]));
    }
    const bool ok = residual <= 1e-6 && std::all_of(cp.begin(), cp.end(), [](const json& b) { return b.get<bool>(); });
    json r = {{"mode", mode}, {"residual", residual}, {"components_cp", cp}, {"passed", ok}};
    if (c.out.empty()) {
      json comps = json::array();
      for (const auto& ci : f.c) comps.push_back(cbk::io::to_json(ci));
      r["components"] = std::move(comps);
    }
    std::cout << r.dump(2) << "\n";
    return ok ? kOk : kVerificationFailed;
  }

  cbk::KolDecomp d;
  if (mode == "positive") {
    d = cbk::kolmogorov_positive(k, tol);
  } else if (mode == "hermitian") {
    d = cbk::kolmogorov_hermitian(k, opts, tol);
  } else {
    d = cbk::kolmogorov_general(k, opts, tol);
  }
  // Reconstruction error is dominated by solver accuracy for the SDP-backed modes.
  const auto rep = cbk::verify_decomp(d, k, mode == "positive" ? 1e-8 : std::max(1e-6, c.eps));
  json r = {{"mode", mode}, {"report", report_json(rep)}};
  if (c.out.empty()) {
    r["decomposition"] = cbk::io::to_json(d);
  } else {
    cbk::io::write_file(c.out, cbk::io::to_json(d));
  }
  std::cout << r.dump(2) << "\n";
  return rep.passed() ? kOk : kVerificationFailed;
}

int cmd_verify(const Common& c, std::size_t trials, bool corrupt) {
  cbk::VerifyConfig cfg;
  cfg.n = c.n;
  cfg.p = c.p;
  cfg.q = c.q;
  cfg.trials = trials;
  cfg.seed = c.seed;
  cfg.eps = c.eps;
  cfg.solver = c.solver();
  cfg.inject_corruption = corrupt;
  const auto suites = cbk::verify_theorems(cfg);
  const json r = cbk::verify_report(cfg, suites);
  emit(r, c.out);
  return r["passed"].get<bool>() ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"completely bounded kernels: generation, classification and Kolmogorov decompositions"};
  app.require_subcommand(1);
  Common c;
  std::string kind = "cp", file, mode = "general";
  std::size_t trials = 5;
  bool corrupt = false;

  auto* gen = app.add_subcommand("gen", "write a random kernel");
  gen->add_option("--kind", kind, "cp, hermitian, general or difference")
      ->check(CLI::IsMember({"cp", "hermitian", "general", "difference"}));
  add_sizes(gen, c);
  gen->add_option("--seed", c.seed, "random seed");
  gen->add_option("--out", c.out, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "classify a kernel");
  check->add_option("file", file, "kernel JSON")->required();
  add_solver(check, c);
  check->add_option("--out", c.out, "report file (default stdout)");

  auto* dec = app.add_subcommand("decompose", "Kolmogorov decomposition of a kernel");
  dec->add_option("file", file, "kernel JSON")->required();
  dec->add_option("--mode", mode, "positive, hermitian, general or four")
      ->check(CLI::IsMember({"positive", "hermitian", "general", "four"}));
  add_solver(dec, c);
  dec->add_option("--out", c.out, "decomposition file (four: prefix for the component files)");

  auto* ver = app.add_subcommand("verify-theorems", "run the randomized property suites");
  add_sizes(ver, c);
  ver->add_option("--trials", trials, "trials per suite");
  ver->add_option("--seed", c.seed, "random seed");
  add_solver(ver, c);
  ver->add_flag("--inject-corruption", corrupt, "negate one instance to exercise failure reporting");
  ver->add_option("--out", c.out, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kPrecondition;
  }

  try {
    if (*gen) return cmd_gen(c, kind);
    if (*check) return cmd_check(c, file);
    if (*dec) return cmd_decompose(c, file, mode);
    return cmd_verify(c, trials, corrupt);
  } catch (const cbk::ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const cbk::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const cbk::DeadlineExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
}

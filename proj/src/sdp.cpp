#include "cbk/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "cbk/errors.hpp"

namespace cbk::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Entry of a symmetric constraint matrix, expanded so that (a, b) and (b, a)
// both appear for off-diagonal positions.
struct Entry {
  std::size_t block;
  std::size_t a;
  std::size_t b;
  double v;
};

using Functional = std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double>;

struct RealProblem {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<Entry>> cons;
  VectorXd b;
  std::vector<MatrixXd> c;
};

void add_entry(Functional& f, std::size_t block, std::size_t a, std::size_t b, double w) {
  if (w == 0.0) return;
  const auto key = std::make_tuple(block, std::min(a, b), std::max(a, b));
  f[key] += a == b ? w : 0.5 * w;
}

// Re/Im of coeff * X(r, c) as functionals of the real embedding Y of X, where
// Re X(r,c) = (Y(r,c) + Y(n+r,n+c)) / 2 and Im X(r,c) = (Y(n+r,c) - Y(r,n+c)) / 2.
void add_term(Functional& re, Functional& im, const Term& t, std::size_t n) {
  const double cr = t.coeff.real();
  const double ci = t.coeff.imag();
  auto add_re_x = [&](Functional& f, double w) {
    add_entry(f, t.block, t.row, t.col, 0.5 * w);
    add_entry(f, t.block, n + t.row, n + t.col, 0.5 * w);
  };
  auto add_im_x = [&](Functional& f, double w) {
    add_entry(f, t.block, n + t.row, t.col, 0.5 * w);
    add_entry(f, t.block, t.row, n + t.col, -0.5 * w);
  };
  add_re_x(re, cr);
  add_im_x(re, -ci);
  add_re_x(im, ci);
  add_im_x(im, cr);
}

std::vector<Entry> expand(const Functional& f) {
  double scale = 0.0;
  for (const auto& [k, v] : f) scale = std::max(scale, std::abs(v));
  std::vector<Entry> out;
  for (const auto& [k, v] : f) {
    if (std::abs(v) <= 1e-15 * scale) continue;
    const auto [block, lo, hi] = k;
    out.push_back({block, lo, hi, v});
    if (lo != hi) out.push_back({block, hi, lo, v});
  }
  return out;
}

MatrixXd embed_real(const ComplexMatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.rows());
  MatrixXd y(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx v = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      y(i, j) = v.real();
      y(n + i, n + j) = v.real();
      y(i, n + j) = -v.imag();
      y(n + i, j) = v.imag();
    }
  return y;
}

ComplexMatrix extract_complex(const MatrixXd& y) {
  const auto n = y.rows() / 2;
  ComplexMatrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      x(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          cplx(0.5 * (y(i, j) + y(n + i, n + j)), 0.5 * (y(n + i, j) - y(i, n + j)));
  return x;
}

double apply_constraint(const std::vector<Entry>& e, const std::vector<MatrixXd>& x) {
  double s = 0.0;
  for (const auto& en : e) s += en.v * x[en.block](static_cast<Eigen::Index>(en.a), static_cast<Eigen::Index>(en.b));
  return s;
}

VectorXd apply_a(const RealProblem& p, const std::vector<MatrixXd>& x) {
  VectorXd r(static_cast<Eigen::Index>(p.cons.size()));
  for (std::size_t i = 0; i < p.cons.size(); ++i) r(static_cast<Eigen::Index>(i)) = apply_constraint(p.cons[i], x);
  return r;
}

std::vector<MatrixXd> apply_at(const RealProblem& p, const VectorXd& y) {
  std::vector<MatrixXd> out;
  for (auto s : p.sizes) out.push_back(MatrixXd::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)));
  for (std::size_t i = 0; i < p.cons.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const auto& en : p.cons[i])
      out[en.block](static_cast<Eigen::Index>(en.a), static_cast<Eigen::Index>(en.b)) += yi * en.v;
  }
  return out;
}

double inner(const std::vector<MatrixXd>& a, const std::vector<MatrixXd>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double fro(const std::vector<MatrixXd>& a) { return std::sqrt(inner(a, a)); }

void symmetrize(MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

// Largest alpha with x + alpha * dx PSD (infinity when unbounded).
double max_step(const std::vector<MatrixXd>& x, const std::vector<MatrixXd>& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].size() == 0) continue;
    Eigen::LLT<MatrixXd> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    MatrixXd w = llt.matrixL().solve(dx[k]);
    w = llt.matrixL().solve(w.transpose().eval());
    symmetrize(w);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

RealProblem to_real(const SdpProblem& prob, bool& trivially_infeasible, std::string& why) {
  RealProblem rp;
  for (const auto& b : prob.blocks) rp.sizes.push_back(2 * b.size);
  std::vector<double> rhs;
  for (std::size_t e = 0; e < prob.equalities.size(); ++e) {
    const auto& eq = prob.equalities[e];
    Functional re, im;
    for (const auto& t : eq.terms) add_term(re, im, t, prob.blocks[t.block].size);
    auto ere = expand(re);
    auto eim = expand(im);
    const double scale = 1.0 + std::abs(eq.target);
    if (ere.empty()) {
      if (std::abs(eq.target.real()) > 1e-12 * scale) {
        trivially_infeasible = true;
        why = "equality " + std::to_string(e) + " has a vanishing real part but nonzero target";
      }
    } else {
      rp.cons.push_back(std::move(ere));
      rhs.push_back(eq.target.real());
    }
    if (eim.empty()) {
      if (std::abs(eq.target.imag()) > 1e-12 * scale) {
        trivially_infeasible = true;
        why = "equality " + std::to_string(e) + " has a vanishing imaginary part but nonzero target";
      }
    } else {
      rp.cons.push_back(std::move(eim));
      rhs.push_back(eq.target.imag());
    }
  }
  rp.b = Eigen::Map<VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  Functional obj, unused;
  for (const auto& t : prob.objective) add_term(obj, unused, t, prob.blocks[t.block].size);
  for (auto s : rp.sizes) rp.c.push_back(MatrixXd::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)));
  for (const auto& en : expand(obj)) rp.c[en.block](static_cast<Eigen::Index>(en.a), static_cast<Eigen::Index>(en.b)) += en.v;
  return rp;
}

// Schur complement M(i, j) = tr(A_i X A_j Z^{-1}).
MatrixXd schur_complement(const RealProblem& p, const std::vector<MatrixXd>& x, const std::vector<MatrixXd>& zinv) {
  const auto m = static_cast<Eigen::Index>(p.cons.size());
  MatrixXd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& ei = p.cons[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& ej = p.cons[static_cast<std::size_t>(j)];
      double s = 0.0;
      for (const auto& e : ei) {
        const MatrixXd& xb = x[e.block];
        const MatrixXd& zb = zinv[e.block];
        for (const auto& f : ej) {
          if (f.block != e.block) continue;
          s += e.v * f.v * xb(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(f.a)) *
               zb(static_cast<Eigen::Index>(f.b), static_cast<Eigen::Index>(e.a));
        }
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

}  // namespace

std::size_t SdpProblem::add_block(std::string name, std::size_t size) {
  blocks.push_back({std::move(name), size});
  return blocks.size() - 1;
}

void SdpProblem::validate() const {
  auto check = [&](const Term& t, const std::string& where) {
    if (t.block >= blocks.size()) throw DimensionError(where + ": unknown block " + std::to_string(t.block));
    const auto n = blocks[t.block].size;
    if (t.row >= n || t.col >= n) {
      throw DimensionError(where + ": entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                           ") outside block '" + blocks[t.block].name + "' of size " + std::to_string(n));
    }
  };
  for (std::size_t e = 0; e < equalities.size(); ++e)
    for (const auto& t : equalities[e].terms) check(t, "equality " + std::to_string(e));
  for (const auto& t : objective) check(t, "objective");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::max_iter: return "max_iter";
    case Status::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

ComplexMatrix embed_complex(const ComplexMatrix& h) {
  if (!h.square()) throw DimensionError("embed_complex: matrix is not square");
  if (hermitian_defect(h) > kDefaultTol * std::max(1.0, h.max_abs())) {
    throw PreconditionError("embed_complex: matrix is not Hermitian");
  }
  const MatrixXd y = embed_real(h);
  ComplexMatrix out(static_cast<std::size_t>(y.rows()), static_cast<std::size_t>(y.cols()));
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < y.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = y(i, j);
  return out;
}

SdpSolution solve(const SdpProblem& prob, const SolverOptions& opts) {
  if (!(opts.eps > 0.0)) throw PreconditionError("sdp::solve: eps must be positive");
  prob.validate();

  SdpSolution sol;
  bool trivially_infeasible = false;
  const RealProblem rp = to_real(prob, trivially_infeasible, sol.message);
  if (trivially_infeasible) {
    sol.status = Status::infeasible;
    for (const auto& b : prob.blocks) sol.blocks.emplace_back(b.size, b.size);
    return sol;
  }

  const auto m = static_cast<Eigen::Index>(rp.cons.size());
  std::size_t total = 0;
  for (auto s : rp.sizes) total += s;
  const double nn = static_cast<double>(std::max<std::size_t>(total, 1));

  const double norm_b = rp.b.norm();
  double norm_c = 0.0;
  for (const auto& c : rp.c) norm_c += c.squaredNorm();
  norm_c = std::sqrt(norm_c);
  double max_a = 0.0, ratio = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double na = 0.0;
    for (const auto& e : rp.cons[static_cast<std::size_t>(i)]) na += e.v * e.v;
    na = std::sqrt(na);
    max_a = std::max(max_a, na);
    ratio = std::max(ratio, (1.0 + std::abs(rp.b(i))) / (1.0 + na));
  }
  const double xi = std::max({10.0, std::sqrt(nn), std::sqrt(nn) * ratio});
  const double eta = std::max({10.0, std::sqrt(nn), norm_c, max_a});

  std::vector<MatrixXd> x, z;
  for (auto s : rp.sizes) {
    const auto n = static_cast<Eigen::Index>(s);
    x.push_back(xi * MatrixXd::Identity(n, n));
    z.push_back(eta * MatrixXd::Identity(n, n));
  }
  if (!opts.warm_start.empty()) {
    if (opts.warm_start.size() != prob.blocks.size()) throw DimensionError("sdp::solve: warm start block count");
    for (std::size_t k = 0; k < x.size(); ++k) {
      MatrixXd w = embed_real(opts.warm_start[k]);
      if (w.rows() != x[k].rows()) throw DimensionError("sdp::solve: warm start block size");
      symmetrize(w);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
      const double lmin = w.rows() > 0 ? es.eigenvalues()(0) : 0.0;
      const double shift = std::max(0.0, -lmin) + 1e-3 * (1.0 + w.norm());
      x[k] = w + shift * MatrixXd::Identity(w.rows(), w.cols());
    }
  }
  VectorXd y = VectorXd::Zero(m);

  auto finish = [&](Status st, int iter) {
    sol.status = st;
    sol.iterations = iter;
    sol.blocks.clear();
    for (const auto& xb : x) sol.blocks.push_back(extract_complex(xb));
    return sol;
  };

  int stalled = 0;
  for (int iter = 0;; ++iter) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
      throw DeadlineExceeded("sdp::solve: deadline passed after " + std::to_string(iter) + " iterations");
    }
    const VectorXd rp_res = rp.b - apply_a(rp, x);
    std::vector<MatrixXd> rd = rp.c;
    {
      const auto aty = apply_at(rp, y);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= aty[k] + z[k];
    }
    const double pobj = inner(rp.c, x);
    const double dobj = rp.b.dot(y);
    const double xz = inner(x, z);
    const double mu = xz / nn;
    const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
    sol.objective_value = pobj;
    sol.dual_objective = dobj;
    sol.gap = std::max(std::abs(pobj - dobj), std::abs(xz)) / denom;
    sol.primal_infeasibility = rp_res.norm() / (1.0 + norm_b);
    sol.dual_infeasibility = fro(rd) / (1.0 + norm_c);

    if (sol.primal_infeasibility <= opts.eps && sol.dual_infeasibility <= opts.eps && sol.gap <= opts.eps) {
      return finish(Status::optimal, iter);
    }
    if (dobj > opts.divergence_bound && sol.dual_infeasibility <= 1e-3) {
      sol.message = "dual objective diverged past " + std::to_string(opts.divergence_bound);
      return finish(Status::infeasible, iter);
    }
    if (pobj < -opts.divergence_bound && sol.primal_infeasibility <= 1e-3) {
      sol.message = "primal objective diverged below " + std::to_string(-opts.divergence_bound);
      return finish(Status::infeasible, iter);
    }
    if (iter >= opts.max_iter) {
      sol.message = "iteration limit reached";
      return finish(Status::max_iter, iter);
    }

    std::vector<MatrixXd> zinv;
    for (const auto& zb : z) {
      Eigen::LLT<MatrixXd> llt(zb);
      if (llt.info() != Eigen::Success) {
        sol.message = "dual slack lost definiteness";
        return finish(Status::numerical_failure, iter);
      }
      MatrixXd inv = llt.solve(MatrixXd::Identity(zb.rows(), zb.cols()));
      symmetrize(inv);
      zinv.push_back(std::move(inv));
    }

    MatrixXd mm = schur_complement(rp, x, zinv);
    Eigen::LLT<MatrixXd> chol(mm);
    if (chol.info() != Eigen::Success) {
      const double reg = 1e-13 * std::max(1.0, mm.diagonal().cwiseAbs().maxCoeff());
      mm.diagonal().array() += reg;
      chol.compute(mm);
      if (chol.info() != Eigen::Success) {
        sol.message = "Schur complement is singular";
        return finish(Status::numerical_failure, iter);
      }
    }

    std::vector<MatrixXd> x_rd_zinv(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) x_rd_zinv[k] = x[k] * rd[k] * zinv[k];
    const VectorXd a_xrdz = apply_a(rp, x_rd_zinv);

    // rc_zinv stands for (sigma mu I - X Z - second order) Z^{-1}.
    auto direction = [&](const std::vector<MatrixXd>& rc_zinv, std::vector<MatrixXd>& dx, VectorXd& dy,
                         std::vector<MatrixXd>& dz) {
      const VectorXd h = rp_res - apply_a(rp, rc_zinv) + a_xrdz;
      dy = chol.solve(h);
      const auto atdy = apply_at(rp, dy);
      dz.resize(x.size());
      dx.resize(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        dz[k] = rd[k] - atdy[k];
        symmetrize(dz[k]);
        dx[k] = rc_zinv[k] - x[k] * dz[k] * zinv[k];
        symmetrize(dx[k]);
      }
    };

    std::vector<MatrixXd> rc(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) rc[k] = -x[k];
    std::vector<MatrixXd> dxa, dza;
    VectorXd dya;
    direction(rc, dxa, dya, dza);
    const double ap_aff = std::min(1.0, max_step(x, dxa));
    const double ad_aff = std::min(1.0, max_step(z, dza));
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      mu_aff += (x[k] + ap_aff * dxa[k]).cwiseProduct(z[k] + ad_aff * dza[k]).sum();
    mu_aff /= nn;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    for (std::size_t k = 0; k < x.size(); ++k) rc[k] = sigma * mu * zinv[k] - x[k] - dxa[k] * dza[k] * zinv[k];
    std::vector<MatrixXd> dx, dz;
    VectorXd dy;
    direction(rc, dx, dy, dz);

    const double ap = std::min(1.0, 0.98 * max_step(x, dx));
    const double ad = std::min(1.0, 0.98 * max_step(z, dz));
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += ap * dx[k];
      z[k] += ad * dz[k];
      symmetrize(x[k]);
      symmetrize(z[k]);
    }
    y += ad * dy;

    if (opts.trace) {
      opts.trace({iter, pobj, dobj, sol.gap, sol.primal_infeasibility, sol.dual_infeasibility, ap, ad});
    }
    stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
    if (stalled >= 5) {
      sol.message = "step lengths collapsed";
      return finish(Status::numerical_failure, iter + 1);
    }
  }
}

}  // namespace cbk::sdp

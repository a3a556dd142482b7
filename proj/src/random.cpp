#include "cbk/random.hpp"

#include <cmath>

namespace cbk {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (auto& x : m.entries()) {
    const double re = g(rng);
    x = cplx(re, g(rng));
  }
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

LinMap random_linmap(Rng& rng, std::size_t p, std::size_t q) { return {p, q, random_matrix(rng, p * q, p * q)}; }

KolDecomp random_decomp(Rng& rng, std::size_t n, std::size_t p, std::size_t q, std::size_t m, ComplexMatrix j) {
  KolDecomp d{default_labels(n), p, q, m, std::move(j), {}};
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, p * m)));
  for (std::size_t i = 0; i < n; ++i) d.iota.push_back(s * random_matrix(rng, p * m, q));
  return d;
}

Kernel random_cp_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q, std::size_t m) {
  return reconstruct(random_decomp(rng, n, p, q, m, ComplexMatrix::identity(p * m)));
}

Kernel random_hermitian_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q) {
  const Kernel k1 = random_cp_kernel(rng, n, p, q);
  return k1 - random_cp_kernel(rng, n, p, q);
}

Kernel random_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q) {
  Kernel k(default_labels(n), p, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k.set(i, j, random_linmap(rng, p, q) * cplx(0.5));
  return k;
}

}  // namespace cbk

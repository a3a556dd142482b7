#pragma once

#include <cstdint>
#include <random>

#include "cbk/decomp.hpp"

namespace cbk {

using Rng = std::mt19937_64;

/// "x0", "x1", ...
std::vector<std::string> default_labels(std::size_t n);

/// Independent standard complex Gaussian entries.
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);
ComplexMatrix random_hermitian(Rng& rng, std::size_t n);
LinMap random_linmap(Rng& rng, std::size_t p, std::size_t q);

/// Random iotas of multiplicity m with the given J.
KolDecomp random_decomp(Rng& rng, std::size_t n, std::size_t p, std::size_t q, std::size_t m, ComplexMatrix j);

/// Reconstruction of a random decomposition with J = I.
Kernel random_cp_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q, std::size_t m = 2);
/// k1 - k2 for random CP kernels.
Kernel random_hermitian_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q);
/// Every entry an independent random map.
Kernel random_kernel(Rng& rng, std::size_t n, std::size_t p, std::size_t q);

}  // namespace cbk

#pragma once

#include <complex>
#include <random>

#include "colmodel/qstate.hpp"

namespace colmodel::testing {

// Random full-rank density matrix G G^dagger / Tr(G G^dagger).
inline DensityMatrix random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = cplx{g(rng), g(rng)};
  Matrix rho = m * m.adjoint();
  rho *= 1.0 / rho.trace().real();
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r + 1; c < dim; ++c) rho(c, r) = std::conj(rho(r, c));
  return DensityMatrix::from(rho);
}

inline Matrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    m(r, r) = g(rng);
    for (std::size_t c = r + 1; c < dim; ++c) {
      m(r, c) = cplx{g(rng), g(rng)};
      m(c, r) = std::conj(m(r, c));
    }
  }
  return m;
}

// Textbook Kronecker product, kept apart from the library's implementation.
inline Matrix kron_reference(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim() * b.dim();
  Matrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      out(r, c) = a(r / b.dim(), c / b.dim()) * b(r % b.dim(), c % b.dim());
  return out;
}

inline Matrix projector(std::size_t dim, std::size_t index) {
  Matrix m(dim);
  m(index, index) = 1.0;
  return m;
}

}  // namespace colmodel::testing

// qstate.hpp
// Dense complex matrices over small qubit registers: density matrices,
// unitaries, tensor products, gate embedding, partial traces and
// Hermitian eigenvalues.
//
// Basis convention: qubit 0 is the most significant bit of a basis index,
// so the two-qubit basis is ordered |00>, |01>, |10>, |11>.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "colmodel/errors.hpp"

namespace colmodel {

using cplx = std::complex<double>;

inline constexpr std::size_t max_qubits = 10;
inline constexpr std::size_t max_dim = std::size_t{1} << max_qubits;

// Tolerances for the density-matrix invariants.
inline constexpr double herm_tol = 1e-10;
inline constexpr double trace_tol = 1e-10;
inline constexpr double psd_tol = 1e-10;
inline constexpr double unitary_tol = 1e-12;
// Trace drift beyond this is renormalized away after each conjugation.
inline constexpr double renorm_threshold = 1e-13;

// Square, row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  Matrix(std::initializer_list<std::initializer_list<cplx>> rows)
      : dim_(rows.size()), a_() {
    a_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw dimension_error("Matrix: rows must form a square");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  std::span<const cplx> data() const noexcept { return a_; }
  std::span<cplx> data() noexcept { return a_; }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.require_same(b);
    const std::size_t n = a.dim_;
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        const cplx* brow = &b.a_[k * n];
        cplx* orow = &out.a_[i * n];
        for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void require_same(const Matrix& o) const {
    if (o.dim_ != dim_)
      throw dimension_error("Matrix: dimension mismatch " + std::to_string(dim_) +
                            " vs " + std::to_string(o.dim_));
  }

  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

// Largest entrywise modulus of a - b.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw dimension_error("max_abs_diff: dimension mismatch");
  double m = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

inline double hermiticity_defect(const Matrix& m) {
  double d = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c)
      d = std::max(d, std::abs(m(r, c) - std::conj(m(c, r))));
  return d;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t qubit_count(std::size_t dim) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < dim) ++k;
  return k;
}

namespace detail {

inline void require_register_dim(std::size_t dim, const char* who) {
  if (!is_power_of_two(dim))
    throw dimension_error(std::string(who) + ": dimension " + std::to_string(dim) +
                          " is not a power of two");
  if (dim > max_dim)
    throw capacity_error(std::string(who) + ": dimension " + std::to_string(dim) +
                         " exceeds the 2^10 register cap");
}

// Bit of `index` that belongs to qubit q in a k-qubit register.
inline std::size_t qubit_bit(std::size_t k, std::size_t q) { return k - 1 - q; }

struct trusted_t {};
inline constexpr trusted_t trusted{};

}  // namespace detail

// ---------------------------------------------------------------------------
// Hermitian eigensolver

struct EigenSystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector of values[j]
};

// Backed by Eigen's tridiagonal QR solver; only the lower triangle is read.
inline EigenSystem hermitian_eigensystem(const Matrix& m) {
  const std::size_t n = m.dim();
  if (hermiticity_defect(m) > herm_tol)
    throw domain_error("hermitian_eigensystem: input is not Hermitian");

  using EMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto idx = static_cast<Eigen::Index>(n);
  const Eigen::Map<const EMatrix> view(m.data().data(), idx, idx);
  const Eigen::SelfAdjointEigenSolver<EMatrix> solver(view, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw domain_error("hermitian_eigensystem: solver did not converge");

  EigenSystem out{std::vector<double>(n), Matrix(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.values[j] = solver.eigenvalues()(jj);
    for (std::size_t k = 0; k < n; ++k)
      out.vectors(k, j) = solver.eigenvectors()(static_cast<Eigen::Index>(k), jj);
  }
  return out;
}

// Real eigenvalues of a Hermitian matrix, ascending. 2x2 inputs use the
// closed-form discriminant.
inline std::vector<double> hermitian_eigenvalues(const Matrix& m) {
  if (hermiticity_defect(m) > herm_tol)
    throw domain_error("hermitian_eigenvalues: input is not Hermitian");
  if (m.dim() == 0) return {};
  if (m.dim() == 1) return {m(0, 0).real()};
  if (m.dim() == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double rad = std::sqrt(half * half + std::norm(m(0, 1)));
    return {mean - rad, mean + rad};
  }
  return hermitian_eigensystem(m).values;
}

// ---------------------------------------------------------------------------
// State and operator types

class UnitaryMatrix;

// Density matrix over a register of at most ten qubits. Values are
// immutable; every operation returns a new one.
class DensityMatrix {
 public:
  // Validates every density-matrix invariant; throws
  // integrity_error (step 0) on violation.
  static DensityMatrix from(Matrix m);

  DensityMatrix(Matrix m, detail::trusted_t) : m_(std::move(m)) {}

  std::size_t dim() const noexcept { return m_.dim(); }
  std::size_t qubits() const { return qubit_count(m_.dim()); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

class UnitaryMatrix {
 public:
  // Checks U U^dagger = I to within unitary_tol (max entry deviation).
  static UnitaryMatrix from(Matrix m) {
    if (!is_power_of_two(m.dim()))
      throw dimension_error("UnitaryMatrix: dimension is not a power of two");
    const double dev = max_abs_diff(m * m.adjoint(), Matrix::identity(m.dim()));
    if (dev > unitary_tol)
      throw domain_error("UnitaryMatrix: U U^dagger deviates from identity by " +
                         std::to_string(dev));
    return UnitaryMatrix(std::move(m), detail::trusted);
  }

  UnitaryMatrix(Matrix m, detail::trusted_t) : m_(std::move(m)) {}

  static UnitaryMatrix identity(std::size_t dim) {
    return UnitaryMatrix(Matrix::identity(dim), detail::trusted);
  }

  std::size_t dim() const noexcept { return m_.dim(); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

// Diagnostic of the three density-matrix invariants.
struct StateCheck {
  double hermiticity = 0.0;  // max |a_ij - conj(a_ji)|
  double trace_error = 0.0;  // |Tr - 1|
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermiticity <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -psd_tol;
  }
  std::string describe() const {
    return "hermiticity defect " + std::to_string(hermiticity) + ", trace error " +
           std::to_string(trace_error) + ", min eigenvalue " + std::to_string(min_eigenvalue);
  }
};

// Without `positivity`, only the cheap checks run and min_eigenvalue is 0.
inline StateCheck check_state(const Matrix& m, bool positivity = true) {
  StateCheck c;
  c.hermiticity = hermiticity_defect(m);
  c.trace_error = std::abs(m.trace() - 1.0);
  if (positivity && c.hermiticity <= herm_tol) {
    const auto ev = hermitian_eigenvalues(m);
    c.min_eigenvalue = ev.empty() ? 0.0 : ev.front();
  }
  return c;
}

inline DensityMatrix DensityMatrix::from(Matrix m) {
  detail::require_register_dim(m.dim(), "DensityMatrix");
  const StateCheck c = check_state(m);
  if (!c.ok()) throw integrity_error("DensityMatrix: invalid state: " + c.describe(), 0);
  return DensityMatrix(std::move(m), detail::trusted);
}

// ---------------------------------------------------------------------------
// Register operations

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  Matrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

// (rho + rho^dagger) / 2, then trace renormalization when it drifted.
inline Matrix tidy(Matrix m) {
  const std::size_t n = m.dim();
  for (std::size_t r = 0; r < n; ++r) {
    m(r, r) = m(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const cplx z = 0.5 * (m(r, c) + std::conj(m(c, r)));
      m(r, c) = z;
      m(c, r) = std::conj(z);
    }
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > renorm_threshold && tr > 0.0) m *= 1.0 / tr;
  return m;
}

inline void require_pair(std::size_t k, std::size_t i, std::size_t j, const char* who) {
  if (i >= k || j >= k)
    throw index_error(std::string(who) + ": qubit index out of range for a " +
                      std::to_string(k) + "-qubit register");
  if (i == j) throw index_error(std::string(who) + ": qubit indices must differ");
}

// Basis index with qubits i and j set to the two bits of `local`
// (bit 1 of local -> qubit i, bit 0 -> qubit j).
inline std::size_t with_pair_bits(std::size_t base, std::size_t bi, std::size_t bj,
                                  std::size_t local) {
  std::size_t idx = base & ~((std::size_t{1} << bi) | (std::size_t{1} << bj));
  if (local & 2) idx |= std::size_t{1} << bi;
  if (local & 1) idx |= std::size_t{1} << bj;
  return idx;
}

}  // namespace detail

// Kronecker product; the left factor owns the most significant qubits.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const std::size_t dim = a.dim() * b.dim();
  if (dim > max_dim)
    throw capacity_error("tensor: result of dimension " + std::to_string(dim) +
                         " exceeds the 2^10 register cap");
  return DensityMatrix(detail::kron(a.matrix(), b.matrix()), detail::trusted);
}

// Lifts a 4x4 unitary onto qubits (i, j) of a k-qubit register; qubit i
// plays the role of the more significant qubit of u.
inline UnitaryMatrix embed_two_qubit(const UnitaryMatrix& u, std::size_t k, std::size_t i,
                                     std::size_t j) {
  if (u.dim() != 4) throw dimension_error("embed_two_qubit: gate must be 4x4");
  if (k > max_qubits) throw capacity_error("embed_two_qubit: register exceeds 10 qubits");
  detail::require_pair(k, i, j, "embed_two_qubit");
  const std::size_t dim = std::size_t{1} << k;
  const std::size_t bi = detail::qubit_bit(k, i);
  const std::size_t bj = detail::qubit_bit(k, j);
  Matrix out(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t lc = (((c >> bi) & 1) << 1) | ((c >> bj) & 1);
    for (std::size_t lr = 0; lr < 4; ++lr) {
      const cplx val = u(lr, lc);
      if (val == cplx{}) continue;
      out(detail::with_pair_bits(c, bi, bj, lr), c) = val;
    }
  }
  return UnitaryMatrix(std::move(out), detail::trusted);
}

// u rho u^dagger, re-Hermitized.
inline DensityMatrix conjugate(const DensityMatrix& rho, const UnitaryMatrix& u) {
  if (rho.dim() != u.dim())
    throw dimension_error("conjugate: state is " + std::to_string(rho.dim()) +
                          "-dimensional, unitary is " + std::to_string(u.dim()));
  return DensityMatrix(detail::tidy(u.matrix() * rho.matrix() * u.matrix().adjoint()),
                       detail::trusted);
}

// Equivalent to conjugate(rho, embed_two_qubit(u, k, i, j)) without
// forming the 2^k x 2^k operator.
inline DensityMatrix apply_two_qubit(const DensityMatrix& rho, const UnitaryMatrix& u,
                                     std::size_t i, std::size_t j) {
  if (u.dim() != 4) throw dimension_error("apply_two_qubit: gate must be 4x4");
  const std::size_t dim = rho.dim();
  const std::size_t k = rho.qubits();
  detail::require_pair(k, i, j, "apply_two_qubit");
  const std::size_t bi = detail::qubit_bit(k, i);
  const std::size_t bj = detail::qubit_bit(k, j);
  const std::size_t mask = (std::size_t{1} << bi) | (std::size_t{1} << bj);

  // left: M = U rho
  Matrix m(dim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    std::size_t idx[4];
    for (std::size_t l = 0; l < 4; ++l) idx[l] = detail::with_pair_bits(base, bi, bj, l);
    for (std::size_t c = 0; c < dim; ++c) {
      cplx in[4];
      for (std::size_t l = 0; l < 4; ++l) in[l] = rho(idx[l], c);
      for (std::size_t r = 0; r < 4; ++r) {
        cplx acc = 0.0;
        for (std::size_t l = 0; l < 4; ++l) acc += u(r, l) * in[l];
        m(idx[r], c) = acc;
      }
    }
  }
  // right: M U^dagger
  Matrix out(dim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    std::size_t idx[4];
    for (std::size_t l = 0; l < 4; ++l) idx[l] = detail::with_pair_bits(base, bi, bj, l);
    for (std::size_t r = 0; r < dim; ++r) {
      cplx in[4];
      for (std::size_t l = 0; l < 4; ++l) in[l] = m(r, idx[l]);
      for (std::size_t c = 0; c < 4; ++c) {
        cplx acc = 0.0;
        for (std::size_t l = 0; l < 4; ++l) acc += in[l] * std::conj(u(c, l));
        out(r, idx[c]) = acc;
      }
    }
  }
  return DensityMatrix(detail::tidy(std::move(out)), detail::trusted);
}

// Traces out qubit `drop` of a k-qubit register.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t k, std::size_t drop) {
  if (k < 2) throw index_error("partial_trace: register needs at least two qubits");
  if (k > max_qubits) throw capacity_error("partial_trace: register exceeds 10 qubits");
  if (rho.dim() != (std::size_t{1} << k))
    throw dimension_error("partial_trace: state dimension does not match register size");
  if (drop >= k) throw index_error("partial_trace: qubit index out of range");

  const std::size_t b = detail::qubit_bit(k, drop);
  const std::size_t low = (std::size_t{1} << b) - 1;
  const std::size_t out_dim = rho.dim() / 2;
  auto expand = [&](std::size_t idx, std::size_t bit) {
    return ((idx & ~low) << 1) | (bit << b) | (idx & low);
  };
  Matrix out(out_dim);
  for (std::size_t r = 0; r < out_dim; ++r)
    for (std::size_t c = 0; c < out_dim; ++c)
      out(r, c) = rho(expand(r, 0), expand(c, 0)) + rho(expand(r, 1), expand(c, 1));
  return DensityMatrix(std::move(out), detail::trusted);
}

// Single-qubit marginal of qubit q, summing every other qubit directly.
inline DensityMatrix reduce_to_qubit(const DensityMatrix& rho, std::size_t q) {
  const std::size_t k = rho.qubits();
  if (q >= k) throw index_error("reduce_to_qubit: qubit index out of range");
  const std::size_t b = detail::qubit_bit(k, q);
  const std::size_t bit = std::size_t{1} << b;
  Matrix out(2);
  for (std::size_t idx = 0; idx < rho.dim(); ++idx) {
    if (idx & bit) continue;
    out(0, 0) += rho(idx, idx);
    out(0, 1) += rho(idx, idx | bit);
    out(1, 0) += rho(idx | bit, idx);
    out(1, 1) += rho(idx | bit, idx | bit);
  }
  return DensityMatrix(std::move(out), detail::trusted);
}

// Common single-qubit states.
inline DensityMatrix ket0() { return DensityMatrix(Matrix{{1.0, 0.0}, {0.0, 0.0}}, detail::trusted); }
inline DensityMatrix ket1() { return DensityMatrix(Matrix{{0.0, 0.0}, {0.0, 1.0}}, detail::trusted); }
inline DensityMatrix maximally_mixed(std::size_t dim) {
  detail::require_register_dim(dim, "maximally_mixed");
  return DensityMatrix(Matrix::identity(dim) * (1.0 / static_cast<double>(dim)), detail::trusted);
}

}  // namespace colmodel

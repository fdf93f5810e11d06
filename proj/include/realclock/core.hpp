#pragma once

// Dense complex linear algebra with the invariants of quantum states and
// observables. Natural units (hbar = c = 1) throughout.

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "realclock/errors.hpp"

namespace realclock {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kTolHermitian = 1e-12;
inline constexpr double kTolTrace = 1e-10;
inline constexpr double kTolPsd = 1e-9;
inline constexpr double kTolIdempotent = 1e-10;
inline constexpr double kTolUnitary = 1e-10;

/// Largest entry modulus, the norm used for every entrywise tolerance.
double max_abs(const ComplexMatrix& m);

/// max |m - m^dagger| entrywise.
double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const ComplexMatrix& m);

/// Complex Hermitian matrix: Hamiltonians, observables, conserved quantities.
class HermitianOperator {
 public:
  /// Throws ValidationError naming the first entry that breaks Hermiticity.
  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator diagonal(std::span<const double> entries);
  static HermitianOperator identity(Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  complex operator()(Index i, Index j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

struct Interval {
  double center = 0.0;
  double halfwidth = 0.0;

  double lower() const noexcept { return center - halfwidth; }
  double upper() const noexcept { return center + halfwidth; }
};

/// Orthogonal projector onto the eigenspaces of an operator inside an interval.
class Projector {
 public:
  /// Validates idempotence and Hermiticity.
  Projector(ComplexMatrix m, Interval interval);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Interval& interval() const noexcept { return interval_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
  Interval interval_;
};

/// Spectral decomposition H = V diag(omega) V^dagger, eigenvalues ascending.
struct EnergyDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  /// omega_nm = omega_n - omega_m.
  RealMatrix bohr_frequencies() const;

  /// Largest |omega_n|, the operator norm of H.
  double spectral_norm() const;

  ComplexMatrix to_eigenbasis(const ComplexMatrix& m) const;
  ComplexMatrix from_eigenbasis(const ComplexMatrix& m) const;
};

EnergyDecomposition eigendecompose(const HermitianOperator& h);

/// Sum of eigenprojectors of `a` whose eigenvalues lie in
/// [center - halfwidth, center + halfwidth). Numerically degenerate
/// eigenvalues are grouped and selected together.
Projector build_projector(const HermitianOperator& a, double center, double halfwidth);
Projector build_projector(const EnergyDecomposition& spectrum, double center, double halfwidth);

/// U rho U^dagger with U = exp(-i H t).
DensityMatrix unitary_evolve(const DensityMatrix& rho, const HermitianOperator& h, double t);
DensityMatrix unitary_evolve(const DensityMatrix& rho, const EnergyDecomposition& spectrum, double t);

/// exp(-i H t) from the spectral decomposition.
ComplexMatrix propagator(const EnergyDecomposition& spectrum, double t);

double purity(const DensityMatrix& rho);

/// Tr(o rho), real part.
double expectation(const ComplexMatrix& o, const DensityMatrix& rho);

/// Trace over the second tensor factor of a (d1*d2)x(d1*d2) matrix, with the
/// first factor as the most significant index.
ComplexMatrix partial_trace_second(const ComplexMatrix& m, Index dim_first, Index dim_second);

}  // namespace realclock

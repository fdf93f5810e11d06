#include "realclock/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace realclock {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

// Locates the worst Hermiticity violation and reports it if above tolerance.
void require_hermitian(const ComplexMatrix& m, const char* what) {
  double worst = 0.0;
  Index wi = 0;
  Index wj = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > kTolHermitian) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": not Hermitian at entry (" << wi << "," << wj << "): |m(" << wi << "," << wj
       << ") - conj(m(" << wj << "," << wi << "))| = " << worst;
    throw ValidationError(os.str());
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "HermitianOperator");
  require_hermitian(m_, "HermitianOperator");
  m_ = hermitian_part(m_);
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(entries.size()),
                                        static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m(static_cast<Index>(i), static_cast<Index>(i)) = entries[i];
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  require_hermitian(m_, "DensityMatrix");
  m_ = hermitian_part(m_);
  const complex tr = m_.trace();
  if (std::abs(tr - 1.0) > kTolTrace) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
       << "i differs from 1";
    throw ValidationError(os.str());
  }
  const double lo = min_eigenvalue(m_);
  if (lo < -kTolPsd) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (psi.size() == 0 || std::abs(n - 1.0) > kTolTrace) {
    throw ValidationError("DensityMatrix::pure: state vector is not normalized");
  }
  return DensityMatrix(psi * psi.adjoint());
}

Projector::Projector(ComplexMatrix m, Interval interval) : m_(std::move(m)), interval_(interval) {
  require_square(m_, "Projector");
  require_hermitian(m_, "Projector");
  m_ = hermitian_part(m_);
  const double defect = max_abs(m_ * m_ - m_);
  if (defect > kTolIdempotent) {
    std::ostringstream os;
    os << "Projector: P*P - P has entry of modulus " << defect;
    throw ValidationError(os.str());
  }
}

RealMatrix EnergyDecomposition::bohr_frequencies() const {
  const Index n = eigenvalues.size();
  RealMatrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      w(i, j) = eigenvalues(i) - eigenvalues(j);
    }
  }
  return w;
}

double EnergyDecomposition::spectral_norm() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

ComplexMatrix EnergyDecomposition::to_eigenbasis(const ComplexMatrix& m) const {
  return eigenvectors.adjoint() * m * eigenvectors;
}

ComplexMatrix EnergyDecomposition::from_eigenbasis(const ComplexMatrix& m) const {
  return eigenvectors * m * eigenvectors.adjoint();
}

EnergyDecomposition eigendecompose(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigendecompose: eigensolver did not converge");
  }
  return EnergyDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

Projector build_projector(const HermitianOperator& a, double center, double halfwidth) {
  return build_projector(eigendecompose(a), center, halfwidth);
}

Projector build_projector(const EnergyDecomposition& spectrum, double center, double halfwidth) {
  if (!(halfwidth > 0.0) || !std::isfinite(center)) {
    throw ValidationError("build_projector: halfwidth must be positive and center finite");
  }
  const Interval interval{center, halfwidth};
  const auto& w = spectrum.eigenvalues;
  const auto& v = spectrum.eigenvectors;
  const Index n = w.size();
  const double degeneracy_tol = 1e-10 * std::max(1.0, spectrum.spectral_norm());

  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  // Eigenvalues are ascending; walk clusters of numerically equal values and
  // decide membership once per cluster using its mean.
  Index begin = 0;
  while (begin < n) {
    Index end = begin + 1;
    while (end < n && w(end) - w(end - 1) <= degeneracy_tol) {
      ++end;
    }
    const double mean = w.segment(begin, end - begin).mean();
    if (mean >= interval.lower() && mean < interval.upper()) {
      const auto block = v.middleCols(begin, end - begin);
      p += block * block.adjoint();
    }
    begin = end;
  }
  return Projector(std::move(p), interval);
}

ComplexMatrix propagator(const EnergyDecomposition& spectrum, double t) {
  const Index n = spectrum.eigenvalues.size();
  ComplexVector phases(n);
  for (Index i = 0; i < n; ++i) {
    phases(i) = std::polar(1.0, -spectrum.eigenvalues(i) * t);
  }
  return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

DensityMatrix unitary_evolve(const DensityMatrix& rho, const HermitianOperator& h, double t) {
  if (rho.dim() != h.dim()) {
    throw ValidationError("unitary_evolve: state and Hamiltonian dimensions differ");
  }
  return unitary_evolve(rho, eigendecompose(h), t);
}

DensityMatrix unitary_evolve(const DensityMatrix& rho, const EnergyDecomposition& spectrum, double t) {
  if (rho.dim() != spectrum.eigenvalues.size()) {
    throw ValidationError("unitary_evolve: state and Hamiltonian dimensions differ");
  }
  if (t == 0.0) {
    return rho;
  }
  const ComplexMatrix u = propagator(spectrum, t);
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

double purity(const DensityMatrix& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

double expectation(const ComplexMatrix& o, const DensityMatrix& rho) {
  return (o * rho.matrix()).trace().real();
}

ComplexMatrix partial_trace_second(const ComplexMatrix& m, Index dim_first, Index dim_second) {
  if (m.rows() != dim_first * dim_second || m.cols() != m.rows()) {
    throw ValidationError("partial_trace_second: dimensions do not factor");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_first, dim_first);
  for (Index i = 0; i < dim_first; ++i) {
    for (Index j = 0; j < dim_first; ++j) {
      complex acc = 0.0;
      for (Index e = 0; e < dim_second; ++e) {
        acc += m(i * dim_second + e, j * dim_second + e);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace realclock

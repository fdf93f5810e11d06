#include <algorithm>
#include <cmath>
#include <sstream>

#include "realclock/evolution.hpp"
#include "realclock/kernels.hpp"

namespace realclock {

namespace {

constexpr int kMaxDoublings = 6;
constexpr double kDropTol = 1e-14;

// Tr(O rho(t)) = sum_c coef_c |A_c^T phi(t)|^2 in the energy basis of H.
struct TraceFactors {
  RealVector energies;
  ComplexMatrix columns;
  std::vector<double> coefficients;
};

TraceFactors factor_trace(const EnergyDecomposition& spectrum, const ComplexMatrix& o,
                          const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> os(spectrum.to_eigenbasis(o));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rs(spectrum.to_eigenbasis(rho));
  const double o_scale = std::max(os.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const double r_scale = std::max(rs.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);

  std::vector<Index> keep_o;
  std::vector<Index> keep_r;
  for (Index j = 0; j < os.eigenvalues().size(); ++j) {
    if (std::abs(os.eigenvalues()(j)) > kDropTol * o_scale) {
      keep_o.push_back(j);
    }
  }
  for (Index k = 0; k < rs.eigenvalues().size(); ++k) {
    if (rs.eigenvalues()(k) > kDropTol * r_scale) {
      keep_r.push_back(k);
    }
  }

  TraceFactors f;
  f.energies = spectrum.eigenvalues;
  const Index d = spectrum.eigenvalues.size();
  f.columns.resize(d, static_cast<Index>(keep_o.size() * keep_r.size()));
  Index c = 0;
  for (Index j : keep_o) {
    const ComplexVector u = os.eigenvectors().col(j).conjugate();
    for (Index k : keep_r) {
      f.columns.col(c++) = u.cwiseProduct(rs.eigenvectors().col(k));
      f.coefficients.push_back(os.eigenvalues()(j) * rs.eigenvalues()(k));
    }
  }
  return f;
}

std::vector<double> series(const TraceFactors& f, const std::vector<double>& times) {
  std::vector<double> out(times.size());
  kernels::omp::trace_series({f.energies.data(), static_cast<std::size_t>(f.energies.size())},
                             f.columns, f.coefficients, times, out);
  return out;
}

double integrate(const std::vector<double>& w, const std::vector<double>& a,
                 const std::vector<double>* b = nullptr) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * a[i] * (b ? (*b)[i] : 1.0);
  }
  return acc;
}

void check_monotone(const std::vector<double>& mean, const std::vector<double>& times) {
  if (mean.size() < 2) {
    return;
  }
  const bool rising = mean.back() > mean.front();
  for (std::size_t i = 1; i < mean.size(); ++i) {
    const double step = mean[i] - mean[i - 1];
    if (rising ? !(step > 0.0) : !(step < 0.0)) {
      std::ostringstream os;
      os << "conditional_probability: clock expectation <T>(t) turns near t = " << times[i]
         << "; the clock reads the same value twice on the grid";
      throw ClockFoldingError(os.str());
    }
  }
}

// Ratio of integrals on one grid; `clock_weight` supplies c(t) on the grid.
template <class ClockWeight>
double ratio_on(const TimeGrid& grid, const TraceFactors& sys, ClockWeight&& clock_weight,
                double tol) {
  const std::vector<double> times = grid.points();
  const SimpsonWeights w = simpson_weights(grid);
  const std::vector<double> c = clock_weight(times);
  const std::vector<double> s = series(sys, times);
  const double den = integrate(w.fine, c);
  if (!(den > 0.0)) {
    throw DegenerateState(
        "conditional_probability: the clock never shows the queried reading on the grid");
  }
  const double rich = std::abs(richardson_error(w, c));
  if (rich > tol * den) {
    std::ostringstream os;
    os << "conditional_probability: clock-weight quadrature error " << rich / den
       << " exceeds " << tol << "; refine the grid";
    throw InsufficientGrid(os.str());
  }
  return integrate(w.fine, c, &s) / den;
}

template <class ClockWeight>
double converge(const TimeGrid& start, const TraceFactors& sys, ClockWeight&& clock_weight,
                double tol) {
  TimeGrid grid = start;
  double prev = ratio_on(grid, sys, clock_weight, tol);
  for (int k = 0; k < kMaxDoublings; ++k) {
    grid = grid.enlarged();
    const double next = ratio_on(grid, sys, clock_weight, tol);
    if (std::abs(next - prev) <= tol * std::max(std::abs(next), 1.0)) {
      return next;
    }
    prev = next;
  }
  std::ostringstream os;
  os << "conditional_probability: no convergence after " << kMaxDoublings
     << " grid doublings (last span [" << grid.t_min << ", " << grid.t_max << "])";
  throw ConvergenceError(os.str());
}

void require_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << "conditional_probability: " << what << " dimension mismatch (" << a << " vs " << b
       << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

double conditional_probability(const DensityMatrix& rho_clock, const DensityMatrix& rho_sys,
                               const HermitianOperator& h_clock, const HermitianOperator& h_sys,
                               const ConditionalQuery& query, const EvolutionConfig& cfg) {
  cfg.validate();
  require_dim(rho_clock.dim(), h_clock.dim(), "clock state/Hamiltonian");
  require_dim(rho_clock.dim(), query.clock_operator.dim(), "clock operator");
  require_dim(rho_sys.dim(), h_sys.dim(), "system state/Hamiltonian");
  require_dim(rho_sys.dim(), query.observable.dim(), "observable");
  if (!(query.t_halfwidth > 0.0) || !(query.o_halfwidth > 0.0)) {
    throw ValidationError("conditional_probability: query halfwidths must be positive");
  }
  const double span = cfg.grid.t_max - cfg.grid.t_min;
  if (!(query.t_halfwidth < 0.01 * span)) {
    std::ostringstream os;
    os << "conditional_probability: clock window halfwidth " << query.t_halfwidth
       << " must be below 1% of the time grid span " << span;
    throw ValidationError(os.str());
  }

  const Projector p_o = build_projector(query.observable, query.o_center, query.o_halfwidth);
  const Projector p_t =
      build_projector(query.clock_operator, query.t_center, query.t_halfwidth);
  const EnergyDecomposition clock_spectrum = eigendecompose(h_clock);
  const TraceFactors sys = factor_trace(eigendecompose(h_sys), p_o.matrix(), rho_sys.matrix());
  const TraceFactors window = factor_trace(clock_spectrum, p_t.matrix(), rho_clock.matrix());
  const TraceFactors reading =
      factor_trace(clock_spectrum, query.clock_operator.matrix(), rho_clock.matrix());

  const std::vector<double> times = cfg.grid.points();
  check_monotone(series(reading, times), times);

  auto clock_weight = [&](const std::vector<double>& ts) { return series(window, ts); };
  return converge(cfg.grid, sys, clock_weight, cfg.quad_tol) / rho_sys.matrix().trace().real();
}

double conditional_probability(const DensityMatrix& rho_sys, const HermitianOperator& h_sys,
                               const ClockModel& clock, double reading,
                               const HermitianOperator& observable, double o_center,
                               double o_halfwidth, const EvolutionConfig& cfg) {
  cfg.validate();
  require_dim(rho_sys.dim(), h_sys.dim(), "system state/Hamiltonian");
  require_dim(rho_sys.dim(), observable.dim(), "observable");
  if (!clock.holds<IdealClock>() && !clock.holds<GaussianClock>()) {
    throw UnsupportedKind("conditional_probability: clock has no pointwise reading density");
  }
  const Projector p_o = build_projector(observable, o_center, o_halfwidth);
  if (clock.holds<IdealClock>() || pdf(clock, reading, cfg.grid.at(0)).is_delta) {
    const double t = clock.peak_map().inverse(reading, cfg.grid.t_min, cfg.grid.t_max);
    return ordinary_probability(unitary_evolve(rho_sys, h_sys, t), p_o);
  }
  const TraceFactors sys = factor_trace(eigendecompose(h_sys), p_o.matrix(), rho_sys.matrix());
  auto clock_weight = [&](const std::vector<double>& times) {
    std::vector<double> c(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      c[i] = pdf(clock, reading, times[i]).value;
    }
    return c;
  };
  return converge(cfg.grid, sys, clock_weight, cfg.quad_tol);
}

}  // namespace realclock

#include "realclock/quadrature.hpp"

#include <cmath>

#include "realclock/errors.hpp"

namespace realclock {

void TimeGrid::validate() const {
  if (!(t_min < t_max) || !std::isfinite(t_min) || !std::isfinite(t_max)) {
    throw ValidationError("time grid: requires finite t_min < t_max");
  }
  if (n_points < 3) {
    throw ValidationError("time grid: requires at least 3 points");
  }
}

std::size_t TimeGrid::size() const noexcept {
  const std::size_t intervals = n_points < 5 ? 4 : n_points - 1;
  return ((intervals + 3) / 4) * 4 + 1;
}

double TimeGrid::spacing() const noexcept {
  return (t_max - t_min) / static_cast<double>(size() - 1);
}

double TimeGrid::at(std::size_t i) const noexcept {
  return t_min + static_cast<double>(i) * spacing();
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = at(i);
  }
  return t;
}

TimeGrid TimeGrid::enlarged() const {
  const double half = 0.5 * (t_max - t_min);
  const double mid = 0.5 * (t_max + t_min);
  return TimeGrid{mid - 2.0 * half, mid + 2.0 * half, 2 * (size() - 1) + 1};
}

SimpsonWeights simpson_weights(const TimeGrid& grid) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  SimpsonWeights w{std::vector<double>(n), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w.fine[i] = c * h / 3.0;
  }
  const std::size_t m = (n - 1) / 2;  // coarse intervals
  for (std::size_t j = 0; j <= m; ++j) {
    const double c = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    w.coarse[2 * j] = c * 2.0 * h / 3.0;
  }
  return w;
}

double richardson_error(const SimpsonWeights& w, const std::vector<double>& samples) {
  double fine = 0.0;
  double coarse = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    fine += w.fine[i] * samples[i];
    coarse += w.coarse[i] * samples[i];
  }
  return (fine - coarse) / 15.0;
}

}  // namespace realclock

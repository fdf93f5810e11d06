#pragma once

#include <cstddef>
#include <vector>

namespace realclock {

/// Uniform grid on [t_min, t_max]. Composite Simpson with a Richardson check
/// needs a point count of the form 4k+1, so the count is rounded up to that.
struct TimeGrid {
  double t_min = -10.0;
  double t_max = 10.0;
  std::size_t n_points = 2001;

  void validate() const;
  std::size_t size() const noexcept;
  double spacing() const noexcept;
  double at(std::size_t i) const noexcept;
  std::vector<double> points() const;

  /// Same spacing, twice the span, same center.
  TimeGrid enlarged() const;
};

struct SimpsonWeights {
  std::vector<double> fine;    ///< spacing h over every point
  std::vector<double> coarse;  ///< spacing 2h over even points, zero on odd ones
};

SimpsonWeights simpson_weights(const TimeGrid& grid);

/// (S_h - S_2h) / 15 for a scalar sampled on the grid.
double richardson_error(const SimpsonWeights& w, const std::vector<double>& samples);

}  // namespace realclock

#pragma once

#include <optional>
#include <vector>

#include "monfermi/params.hpp"

namespace monfermi::analysis {

struct Curve {
  std::vector<double> x;     // strictly increasing abscissa
  std::vector<double> y;
  std::vector<double> yerr;  // may be empty (unweighted)

  void validate() const;
};

struct PowerFit {
  double exponent = 0.0;
  double exponent_err = 0.0;
  double amplitude = 0.0;  // y ~ amplitude * x^exponent
  int n_points = 0;
};

// Weighted least squares on (ln x, ln y) over the window; requires y > 0
// there and at least 3 points. Errors from the fit covariance.
PowerFit power_law_fit(const Curve& curve, double x_lo, double x_hi);

struct CrossoverResult {
  bool found = false;       // false: no crossover in range ("beyond window")
  double scale = 0.0;       // smallest abscissa with persistent >10% deviation
  double tangent_x = 0.0;   // tangency point of the slope -2 line
  double tangent_amp = 0.0; // line is tangent_amp * x^-2
};

// Crossover scale of a |C| curve on a chord-length abscissa: fit the slope -2
// tangent line in log-log space (max-intercept line touching the data over
// the pre-crossover window [window_lo, max x]), then return the smallest
// abscissa where the data falls short of the line by more than `threshold`
// and stays short for `persistence` consecutive points.
CrossoverResult crossover_scale(const Curve& curve, double window_lo, double threshold = 0.10,
                                int persistence = 3);

struct MaximumResult {
  bool interior = false;  // false: argmax on the boundary
  double x_max = 0.0;
  double y_max = 0.0;
  double x_err = 0.0;
  double y_err = 0.0;
};

// Parabolic interpolation through the three points around the grid argmax in
// (ln x, y); errors by resampling y within yerr (fixed-seed bootstrap).
MaximumResult locate_maximum(const Curve& curve, int n_bootstrap = 200);

}  // namespace monfermi::analysis

#include "monfermi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monfermi/rng.hpp"

namespace monfermi::analysis {

void Curve::validate() const {
  if (x.size() != y.size()) throw InvalidParameter("curve: x/y length mismatch");
  if (!yerr.empty() && yerr.size() != x.size())
    throw InvalidParameter("curve: yerr length mismatch");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw InvalidParameter("curve: x must be strictly increasing");
}

PowerFit power_law_fit(const Curve& curve, double x_lo, double x_hi) {
  curve.validate();
  // WLS of ln y = a + b ln x with weights 1/sigma_lny^2, sigma_lny = yerr/y.
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] < x_lo || curve.x[i] > x_hi) continue;
    if (!(curve.y[i] > 0)) throw InvalidParameter("power_law_fit: non-positive y in window");
    const double lx = std::log(curve.x[i]);
    const double ly = std::log(curve.y[i]);
    double w = 1.0;
    if (!curve.yerr.empty() && curve.yerr[i] > 0) {
      const double s = curve.yerr[i] / curve.y[i];
      w = 1.0 / (s * s);
    }
    sw += w;
    swx += w * lx;
    swy += w * ly;
    swxx += w * lx * lx;
    swxy += w * lx * ly;
    ++n;
  }
  if (n < 3) throw InvalidParameter("power_law_fit: fewer than 3 points in window");
  const double det = sw * swxx - swx * swx;
  PowerFit fit;
  fit.exponent = (sw * swxy - swx * swy) / det;
  fit.amplitude = std::exp((swxx * swy - swx * swxy) / det);
  fit.exponent_err = std::sqrt(sw / det);
  fit.n_points = n;
  return fit;
}

CrossoverResult crossover_scale(const Curve& curve, double window_lo, double threshold,
                                int persistence) {
  curve.validate();
  if (curve.x.size() < 4) throw InvalidParameter("crossover_scale: curve too short");
  CrossoverResult res;
  // Tangent line of slope -2 in log-log space: b = max over the window of
  // ln|y| + 2 ln x, so the line lies on or above the data and touches it at
  // the point where the local slope passes through -2.
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] < window_lo || !(curve.y[i] > 0)) continue;
    const double b = std::log(curve.y[i]) + 2.0 * std::log(curve.x[i]);
    if (b > best) {
      best = b;
      res.tangent_x = curve.x[i];
    }
  }
  if (!std::isfinite(best)) throw InvalidParameter("crossover_scale: empty window");
  res.tangent_amp = std::exp(best);

  int run = 0;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] <= res.tangent_x) continue;
    const double line = res.tangent_amp / (curve.x[i] * curve.x[i]);
    const double dev = 1.0 - curve.y[i] / line;
    if (dev > threshold) {
      if (run == 0) res.scale = curve.x[i];
      ++run;
      if (run >= persistence) {
        res.found = true;
        return res;
      }
    } else {
      run = 0;
    }
  }
  res.found = false;  // sentinel: beyond the data window
  res.scale = 0.0;
  return res;
}

namespace {

struct ParabolaPeak {
  bool interior;
  double lx;
  double y;
};

}  // namespace

MaximumResult locate_maximum(const Curve& curve, int n_bootstrap) {
  curve.validate();
  if (curve.x.size() < 3) throw InvalidParameter("locate_maximum: need at least 3 points");

  // Parabola through the three points around the grid argmax, in (ln x, y).
  const auto peak = [&](const std::vector<double>& y) -> ParabolaPeak {
    std::size_t im = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
      if (y[i] > y[im]) im = i;
    if (im == 0 || im + 1 == y.size())
      return {false, std::log(curve.x[im]), y[im]};
    const double x0 = std::log(curve.x[im - 1]), x1 = std::log(curve.x[im]),
                 x2 = std::log(curve.x[im + 1]);
    const double y0 = y[im - 1], y1 = y[im], y2 = y[im + 1];
    const double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
    const double c2 = (d2 - d1) / (x2 - x0);
    if (c2 >= 0) return {true, x1, y1};  // degenerate: keep the grid point
    const double lx = 0.5 * (x0 + x1) - d1 / (2.0 * c2);
    const double yv = y0 + d1 * (lx - x0) + c2 * (lx - x0) * (lx - x1);
    return {true, lx, yv};
  };

  const ParabolaPeak central = peak(curve.y);
  MaximumResult res;
  res.interior = central.interior;
  res.x_max = std::exp(central.lx);
  res.y_max = central.y;
  if (!central.interior || curve.yerr.empty() || n_bootstrap < 2) return res;

  Rng rng(0x10ca73u);
  double sx = 0, sxx = 0, sy = 0, syy = 0;
  int n = 0;
  std::vector<double> yb(curve.y.size());
  for (int rep = 0; rep < n_bootstrap; ++rep) {
    for (std::size_t i = 0; i < yb.size(); ++i) {
      // Box-Muller normal perturbation within the quoted errors
      const double u1 = std::max(rng.uniform(), 1e-300);
      const double u2 = rng.uniform();
      const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      yb[i] = curve.y[i] + curve.yerr[i] * g;
    }
    const ParabolaPeak p = peak(yb);
    if (!p.interior) continue;
    const double xv = std::exp(p.lx);
    sx += xv;
    sxx += xv * xv;
    sy += p.y;
    syy += p.y * p.y;
    ++n;
  }
  if (n > 1) {
    res.x_err = std::sqrt(std::max(0.0, sxx / n - (sx / n) * (sx / n)));
    res.y_err = std::sqrt(std::max(0.0, syy / n - (sy / n) * (sy / n)));
  }
  return res;
}

}  // namespace monfermi::analysis

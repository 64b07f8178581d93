#include "monfermi/temporal.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "monfermi/analysis.hpp"

namespace monfermi::temporal {

AutocorrelationEstimator::AutocorrelationEstimator(int n_samples, double dt,
                                                   double max_lag_fraction)
    : n_samples_(n_samples), dt_(dt) {
  if (n_samples < 2) throw InvalidParameter("autocorrelation: need at least 2 samples");
  n_lags_ = std::max(2, static_cast<int>(n_samples * max_lag_fraction) + 1);
  n_lags_ = std::min(n_lags_, n_samples);
}

Eigen::VectorXd raw_autocorrelation(const Eigen::MatrixXd& z, int n_lags) {
  const int n = static_cast<int>(z.rows());
  const int L = static_cast<int>(z.cols());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_lags);
  for (int k = 0; k < n_lags; ++k) {
    const int n_orig = n - k;
    double sum = 0.0;
    for (int i = 0; i < n_orig; ++i) sum += z.row(i + k).dot(z.row(i));
    acc(k) = sum / (static_cast<double>(n_orig) * L);
  }
  return acc;
}

Eigen::VectorXd raw_telegraph(
    const Eigen::MatrixXd& z,
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts, int n_lags) {
  const int n = static_cast<int>(z.rows());
  const int L = static_cast<int>(z.cols());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_lags);
  for (int k = 0; k < n_lags; ++k) {
    const int n_orig = n - k;
    double sum = 0.0;
    for (int i = 0; i < n_orig; ++i)
      for (int l = 0; l < L; ++l) {
        const auto dn = counts(i + k, l) - counts(i, l);
        const double sign = (dn & 1) ? -1.0 : 1.0;
        sum += z(i + k, l) * sign * z(i, l);
      }
    acc(k) = sum / (static_cast<double>(n_orig) * L);
  }
  return acc;
}

void AutocorrelationEstimator::accumulate(
    const Eigen::MatrixXd& z,
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>* counts) {
  if (z.rows() != n_samples_) throw InvalidParameter("autocorrelation: grid mismatch");
  raw_.push_back(counts ? raw_telegraph(z, *counts, n_lags_)
                        : raw_autocorrelation(z, n_lags_));
  zbar_.push_back(z.mean());
}

void AutocorrelationEstimator::add_trajectory(const ZSeries& traj) {
  if (telegraph_ && !raw_.empty())
    throw InvalidParameter("autocorrelation: mixing K and Q accumulation");
  accumulate(traj.z, nullptr);
}

void AutocorrelationEstimator::add_trajectory_telegraph(const SampledTrajectory& traj) {
  if (traj.jump_counts.size() == 0)
    throw InvalidParameter("telegraph_reduced: trajectory lacks jump counts");
  telegraph_ = true;
  accumulate(traj.z, &traj.jump_counts);
}

namespace {
LagCurve reduce(const std::vector<Eigen::VectorXd>& raw, int n_lags, double dt,
                double subtract) {
  LagCurve out;
  out.n_traj = static_cast<long>(raw.size());
  if (raw.empty()) throw InvalidParameter("autocorrelation: empty snapshot set");
  for (int k = 0; k < n_lags; ++k) {
    double m = 0.0;
    for (const auto& r : raw) m += r(k);
    m /= static_cast<double>(raw.size());
    double var = 0.0;
    for (const auto& r : raw) var += (r(k) - m) * (r(k) - m);
    const double se = raw.size() > 1
                          ? std::sqrt(var / (static_cast<double>(raw.size()) *
                                             (static_cast<double>(raw.size()) - 1)))
                          : 0.0;
    out.lag.push_back(k * dt);
    out.mean.push_back(m - subtract);
    out.stderr_.push_back(se);
  }
  return out;
}
}  // namespace

LagCurve AutocorrelationEstimator::k_curve() const {
  if (telegraph_) throw InvalidParameter("k_curve: estimator holds telegraph data");
  double zb = 0.0;
  for (const double z : zbar_) zb += z;
  zb /= zbar_.empty() ? 1.0 : static_cast<double>(zbar_.size());
  return reduce(raw_, n_lags_, dt_, zb * zb);
}

LagCurve AutocorrelationEstimator::q_curve() const {
  if (!telegraph_) throw InvalidParameter("q_curve: estimator holds plain K data");
  return reduce(raw_, n_lags_, dt_, 0.0);
}

double unconditional_c0_fc(int l, double t, double J, double gamma) {
  const double n = 0.5;
  const double tau0 = n / gamma;
  const double bj = boost::math::cyl_bessel_j(l, 2.0 * J * std::abs(t));
  return 0.25 * std::exp(-std::abs(t) / tau0) * bj * bj;
}

double unconditional_c0_om(double l, double t, double n, double J, double gamma) {
  if (t == 0.0) throw InvalidParameter("unconditional_c0_om: asymptotic form undefined at t=0");
  const double nu = 2.0 * n * J * J / gamma;
  const double denom = 4.0 * nu * std::abs(t);
  return n * (1.0 - n) * std::exp(-l * l / denom) / std::sqrt(M_PI * denom);
}

ZSeries ssep_simulate(int L, int N, double rate, const SampleGrid& grid, Rng& rng,
                      bool random_initial) {
  if (!(rate > 0)) throw InvalidParameter("ssep_simulate: rate must be positive");
  if (N < 0 || N > L) throw InvalidParameter("ssep_simulate: N out of range");
  std::vector<std::uint8_t> occ(L, 0);
  std::vector<int> pos(N);
  if (random_initial) {
    std::vector<int> sites(L);
    for (int i = 0; i < L; ++i) sites[i] = i;
    for (int i = 0; i < N; ++i) {
      const auto j = i + rng.uniform_int(L - i);
      std::swap(sites[i], sites[j]);
      pos[i] = sites[i];
      occ[sites[i]] = 1;
    }
  } else {
    for (int i = 0; i < N; ++i) {
      pos[i] = 2 * i;
      occ[2 * i] = 1;
    }
  }

  ZSeries out;
  out.dt = grid.dt;
  out.z.resize(grid.n, L);
  const double total_rate = N * rate;
  double t = 0.0;
  int next = 0;
  while (next < grid.n) {
    const double t_event = N > 0 ? t + rng.exponential(total_rate)
                                 : std::numeric_limits<double>::infinity();
    while (next < grid.n && grid.t(next) <= t_event) {
      for (int l = 0; l < L; ++l) out.z(next, l) = occ[l] ? 1.0 : -1.0;
      ++next;
    }
    if (next >= grid.n) break;
    t = t_event;
    // one uniform for the particle, one for the direction
    const int p = static_cast<int>(rng.uniform_int(N));
    const int dir = rng.uniform() < 0.5 ? -1 : 1;
    const int target = (pos[p] + dir + L) % L;
    if (!occ[target]) {
      occ[pos[p]] = 0;
      occ[target] = 1;
      pos[p] = target;
    }
  }
  return out;
}

PowerLawFit ssep_autocorrelation_fit(const LagCurve& k, double tau_lo, double tau_hi) {
  analysis::Curve c;
  for (std::size_t i = 0; i < k.lag.size(); ++i) {
    if (k.lag[i] < tau_lo || k.lag[i] > tau_hi || k.lag[i] <= 0) continue;
    if (k.mean[i] <= 0)
      throw InvalidParameter("ssep_autocorrelation_fit: non-positive K in window");
    c.x.push_back(k.lag[i]);
    c.y.push_back(k.mean[i]);
    c.yerr.push_back(k.stderr_[i]);
  }
  const auto fit = analysis::power_law_fit(c, tau_lo, tau_hi);
  PowerLawFit out;
  out.exponent = -fit.exponent;  // K ~ tau^-alpha
  out.exponent_err = fit.exponent_err;
  out.amplitude = fit.amplitude;
  return out;
}

}  // namespace monfermi::temporal

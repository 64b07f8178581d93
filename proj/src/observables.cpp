#include "monfermi/observables.hpp"

#include <algorithm>
#include <cmath>

namespace monfermi::obs {

namespace {
constexpr double kEigClamp = 1e-12;

std::vector<int> contiguous(int origin, int len, int L) {
  std::vector<int> out(len);
  for (int i = 0; i < len; ++i) out[i] = (origin + i) % L;
  return out;
}
}  // namespace

void TrajectoryAccumulator::reset(int dim) {
  mean_ = Eigen::VectorXd::Zero(dim);
  m2_ = Eigen::VectorXd::Zero(dim);
  n_ = 0;
}

void TrajectoryAccumulator::add(const Eigen::VectorXd& x) {
  if (x.size() != mean_.size()) reset(static_cast<int>(x.size()));
  ++n_;
  const Eigen::VectorXd delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta.cwiseProduct(x - mean_);
}

EnsembleStatistic TrajectoryAccumulator::stat(int i) const {
  EnsembleStatistic s;
  s.mean = mean_(i);
  s.n_samples = n_;
  s.stderr_ = n_ > 1 ? std::sqrt(m2_(i) / (static_cast<double>(n_) * (n_ - 1))) : 0.0;
  return s;
}

Eigen::VectorXd TrajectoryAccumulator::stderrs() const {
  if (n_ < 2) return Eigen::VectorXd::Zero(mean_.size());
  return (m2_ / (static_cast<double>(n_) * (n_ - 1))).cwiseSqrt();
}

void TrajectoryAccumulator::restore(const Eigen::VectorXd& mean, const Eigen::VectorXd& m2,
                                    long n) {
  mean_ = mean;
  m2_ = m2;
  n_ = n;
}

void SegmentLayout::validate() const {
  if (L < 2) throw InvalidParameter("layout: L must be >= 2");
  if (ell_a < 0 || ell_b < 0 || ell_c < 0) throw InvalidParameter("layout: negative segment");
  if (ell_a + ell_b + ell_c > L) throw InvalidParameter("layout: segments exceed L");
  if (origin < 0 || origin >= L) throw InvalidParameter("layout: origin out of range");
}

std::vector<int> SegmentLayout::sites_a() const { return contiguous(origin, ell_a, L); }
std::vector<int> SegmentLayout::sites_b() const { return contiguous(origin + ell_a, ell_b, L); }
std::vector<int> SegmentLayout::sites_c() const {
  return contiguous(origin + ell_a + ell_b, ell_c, L);
}
std::vector<int> SegmentLayout::sites_ab() const { return contiguous(origin, ell_a + ell_b, L); }
std::vector<int> SegmentLayout::sites_bc() const {
  return contiguous(origin + ell_a, ell_b + ell_c, L);
}
std::vector<int> SegmentLayout::sites_abc() const {
  return contiguous(origin, ell_a + ell_b + ell_c, L);
}
std::vector<int> SegmentLayout::sites_ac() const {
  auto a = sites_a();
  const auto c = sites_c();
  a.insert(a.end(), c.begin(), c.end());
  return a;
}

Eigen::VectorXd correlation_profile(const Matrix& d) {
  const int L = static_cast<int>(d.rows());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(L / 2 + 1);
  for (int l0 = 0; l0 < L; ++l0)
    for (int l = 0; l <= L / 2; ++l) c(l) += std::norm(d((l0 + l) % L, l0));
  c /= -static_cast<double>(L);
  c(0) += 0.5;
  return c;
}

double subsystem_entropy(const Matrix& d, std::span<const int> sites) {
  const int m = static_cast<int>(sites.size());
  if (m == 0) throw InvalidParameter("subsystem_entropy: empty segment");
  Matrix sub(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sub(i, j) = d(sites[i], sites[j]);
  if ((sub - sub.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidParameter("subsystem_entropy: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lam = std::clamp(es.eigenvalues()(i), kEigClamp, 1.0 - kEigClamp);
    s -= lam * std::log(lam) + (1.0 - lam) * std::log(1.0 - lam);
  }
  return s;
}

double second_cumulant(const Matrix& d, std::span<const int> sites) {
  double c = 0.0;
  for (const int l : sites) c += d(l, l).real();
  for (const int l : sites)
    for (const int lp : sites) c -= std::norm(d(l, lp));
  return c;
}

double chord_length(double ell, int L) { return L / M_PI * std::sin(M_PI * ell / L); }

std::vector<int> build_ell_grid(int L, int n_ell) {
  if (L < 2 || L % 2 != 0) throw InvalidParameter("build_ell_grid: L must be even");
  if (n_ell < 2) throw InvalidParameter("build_ell_grid: need at least 2 points");
  const double lo = chord_length(1, L);
  const double hi = chord_length(L / 2, L);
  std::vector<int> grid;
  for (int i = 0; i < n_ell; ++i) {
    const double target = lo * std::pow(hi / lo, static_cast<double>(i) / (n_ell - 1));
    // invert the chord map on [1, L/2]
    double ell = L / M_PI * std::asin(std::clamp(M_PI * target / L, 0.0, 1.0));
    int e = static_cast<int>(std::lround(ell));
    e = std::clamp(e, 1, L / 2);
    if (grid.empty() || e > grid.back()) grid.push_back(e);
  }
  if (grid.back() != L / 2) grid.push_back(L / 2);
  return grid;
}

std::vector<CentralChargePoint> effective_central_charge(std::span<const double> entropy,
                                                         std::span<const int> ell, int L) {
  if (entropy.size() != ell.size() || ell.size() < 2)
    throw InvalidParameter("effective_central_charge: grid mismatch");
  std::vector<CentralChargePoint> out;
  out.reserve(ell.size() - 1);
  for (std::size_t i = 0; i + 1 < ell.size(); ++i) {
    const double ch0 = chord_length(ell[i], L);
    const double ch1 = chord_length(ell[i + 1], L);
    const double dln = std::log(ch1 / ch0);
    if (dln == 0.0) throw InvalidParameter("effective_central_charge: zero chord ratio");
    out.push_back({std::sqrt(ch0 * ch1), 3.0 * (entropy[i + 1] - entropy[i]) / dln});
  }
  return out;
}

double mutual_information_i2(const Matrix& d, const SegmentLayout& layout) {
  layout.validate();
  if (layout.ell_a == 0 || layout.ell_c == 0)
    throw InvalidParameter("mutual_information_i2: empty A or C");
  return subsystem_entropy(d, layout.sites_a()) + subsystem_entropy(d, layout.sites_c()) -
         subsystem_entropy(d, layout.sites_ac());
}

double tripartite_i3(const Matrix& d, const SegmentLayout& layout) {
  layout.validate();
  if (layout.ell_a == 0 || layout.ell_b == 0 || layout.ell_c == 0)
    throw InvalidParameter("tripartite_i3: empty segment");
  return subsystem_entropy(d, layout.sites_a()) + subsystem_entropy(d, layout.sites_b()) +
         subsystem_entropy(d, layout.sites_c()) + subsystem_entropy(d, layout.sites_abc()) -
         subsystem_entropy(d, layout.sites_ab()) - subsystem_entropy(d, layout.sites_bc()) -
         subsystem_entropy(d, layout.sites_ac());
}

double cross_ratio(const SegmentLayout& layout) {
  layout.validate();
  const double ca = chord_length(layout.ell_a, layout.L);
  const double cc = chord_length(layout.ell_c, layout.L);
  const double cab = chord_length(layout.ell_a + layout.ell_b, layout.L);
  const double cbc = chord_length(layout.ell_b + layout.ell_c, layout.L);
  if (ca == 0 || cc == 0 || cab == 0 || cbc == 0)
    throw InvalidParameter("cross_ratio: degenerate interval");
  return ca * cc / (cab * cbc);
}

CftResidualSummary cft_collapse_check(std::span<const double> i2, std::span<const double> i3,
                                      std::span<const double> x, std::span<const double> probe,
                                      double c, double window_lo, double window_hi) {
  if (i2.size() != i3.size() || i2.size() != x.size() || i2.size() != probe.size())
    throw InvalidParameter("cft_collapse_check: array length mismatch");
  CftResidualSummary out;
  for (std::size_t i = 0; i < i2.size(); ++i) {
    if (x[i] >= 1.0) throw InvalidParameter("cft_collapse_check: cross ratio >= 1");
    const double cft = c / 3.0 * std::log(1.0 / (1.0 - x[i]));
    const double r = (i2[i] - i3[i]) - cft;
    out.residual.push_back(r);
    out.relative_residual.push_back(cft != 0.0 ? r / cft : 0.0);
    if (probe[i] >= window_lo && probe[i] <= window_hi) {
      out.max_relative_in_window =
          std::max(out.max_relative_in_window, std::abs(out.relative_residual.back()));
      ++out.n_in_window;
    }
  }
  return out;
}

}  // namespace monfermi::obs

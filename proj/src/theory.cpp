#include "monfermi/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monfermi::theory {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kQuadTol = 1e-10;

double integrate(const std::function<double(double)>& f, double a, double b) {
  return GK::integrate(f, a, b, 12, kQuadTol);
}

// Integrand of the half-filling kernel, Eq.-(56) form.
double kernel_half(double u, double v) {
  const std::complex<double> b = b_kernel(2.0 * u, v);
  const double re = b.real();
  const double m2 = std::norm(b);
  const double den = 1.0 - re;
  if (den <= 0) return 0.0;  // only at u = 0, v = 0 where the limit is 0
  return (re - m2) / den;
}

struct GeneralKernel {
  double n;
  double f;  // 1 - 2n
  double u;

  double num(double v) const {
    const std::complex<double> b = b_kernel(2.0 * u, v);
    return 2.0 * n * b.real() - std::norm(b);
  }
  double den(double v) const {
    const std::complex<double> b = b_kernel(2.0 * u, v);
    return 4.0 * n * n * (1.0 - b.real()) - f * std::norm(b);
  }
  double operator()(double v) const { return num(v) / den(v); }
};

// For n < 1/2 the denominator of the generalized kernel crosses zero at one
// v* > 0 when u is small; the integral is then a principal value (which is
// also what makes c~(0) = 0 at every filling). Returns v* or -1.
double find_pole(const GeneralKernel& k) {
  if (k.f <= 0) return -1.0;
  double lo = 0.0, hi = 1.0;
  double dlo = k.den(lo);
  if (dlo >= 0) return -1.0;
  while (k.den(hi) < 0) {
    hi *= 2;
    if (hi > 1e6) throw std::runtime_error("tilde_c: denominator never turns positive");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (k.den(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double integrate_tail(const std::function<double(double)>& f, double a) {
  // substitute v = a + tan(theta); integrand decays ~ 1/v^2
  return GK::integrate([&](double th) { const double c = std::cos(th);
                                        const double v = a + std::sin(th) / c;
                                        return f(v) / (c * c); },
                       0.0, M_PI / 2, 12, kQuadTol);
}

double tilde_c_half(double u) {
  if (u == 0) return 0.0;
  const auto f = [u](double v) { return kernel_half(u, v); };
  // The integrand has a width-u feature near v = 0.
  const double a = std::min(8.0 * u, 1.0);
  const double b = std::max(1.0, 8.0 * u);
  double total = integrate(f, 0.0, a);
  if (b > a) total += integrate(f, a, b);
  total += integrate_tail(f, b);
  return 2.0 / M_PI * total;
}

}  // namespace

void TheoryParams::validate() const {
  if (!(n > 0) || !(n < 1)) throw InvalidParameter("theory: filling must be in (0,1)");
  if (!(gamma > 0) || J < 0) throw InvalidParameter("theory: bad rates");
  if (beta != 0.5 && beta != 1.0) throw InvalidParameter("theory: beta must be 1/2 or 1");
}

std::complex<double> b_kernel(double u, double v) {
  const std::complex<double> one_miv(1.0, -v);
  const std::complex<double> radicand = one_miv * one_miv + 2.0 * u * u;
  return 1.0 / std::sqrt(radicand);
}

double tilde_c_general(double u, double n) {
  if (u == 0) return 0.0;
  GeneralKernel k{n, 1.0 - 2.0 * n, u};
  const double vstar = find_pole(k);
  const double a = std::min(8.0 * u, 1.0);
  const double b = std::max(1.0, 8.0 * u);

  double total = 0.0;
  if (vstar < 0) {
    total += integrate(k, 0.0, a);
    if (b > a) total += integrate(k, a, b);
    total += integrate_tail(k, b);
  } else {
    // Principal value around the simple pole: subtract r/(v - v*) on a
    // symmetric window (whose PV vanishes) and integrate the regular rest.
    const double h = 1e-6;
    const double r = k.num(vstar) / ((k.den(vstar + h) - k.den(vstar - h)) / (2.0 * h));
    const double delta = std::min({0.5 * vstar, 0.25});
    const auto reg = [&](double v) { return k(v) - r / (v - vstar); };
    total += integrate(k, 0.0, vstar - delta);
    total += integrate(reg, vstar - delta, vstar + delta);
    const double far = std::max(b, vstar + delta);
    if (far > vstar + delta) total += integrate(k, vstar + delta, far);
    total += integrate_tail(k, far);
  }
  return 4.0 * n / M_PI * total;
}

double tilde_c(double u, double n) {
  if (u < 0) throw InvalidParameter("tilde_c: u must be >= 0");
  if (std::abs(n - 0.5) < 1e-14) return tilde_c_half(u);
  return tilde_c_general(u, n);
}

double gaussian_cq(double q, const TheoryParams& p) {
  p.validate();
  return p.n * (1.0 - p.n) * tilde_c(q * p.l0(), p.n);
}

namespace {

// (1/pi) int_0^pi dq cq(q) cos(q l), panel-split at the cosine periods.
template <typename Cq>
double inverse_transform(double l, const Cq& cq) {
  const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(l))));
  const double dq = M_PI / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    total += GK::integrate([&](double q) { return cq(q) * std::cos(q * l); }, i * dq,
                           (i + 1) * dq, 10, 1e-11);
  }
  return total / M_PI;
}

// (2 pi/3) int_0^pi dq/q^2 cq(q) (1 - cos(q ell)) + zone-edge tail.
template <typename Cq>
double entropy_transform(double ell, const Cq& cq) {
  const int panels = std::max(4, static_cast<int>(std::ceil(ell)));
  const double dq = M_PI / panels;
  const auto f = [&](double q) {
    if (q < 1e-12) return 0.0;
    const double s = std::sin(0.5 * q * ell);
    return cq(q) * 2.0 * s * s / (q * q);
  };
  double total = 0.0;
  for (int i = 0; i < panels; ++i) total += GK::integrate(f, i * dq, (i + 1) * dq, 10, 1e-11);
  total += cq(M_PI) / M_PI;  // constant tail estimate beyond the zone edge
  return 2.0 * M_PI / 3.0 * total;
}

}  // namespace

double gaussian_cl(double l, const TheoryParams& p) {
  p.validate();
  return inverse_transform(l, [&](double q) { return gaussian_cq(q, p); });
}

double gaussian_cl(double l, const CachedCq& cq) { return inverse_transform(l, cq); }

std::vector<double> gaussian_cl_lattice(int L, const TheoryParams& p) {
  p.validate();
  if (L < 2) throw InvalidParameter("gaussian_cl_lattice: L must be >= 2");
  std::vector<double> cq(L);
  for (int k = 0; k < L; ++k) {
    const double q = 2.0 * M_PI * k / L;
    cq[k] = gaussian_cq(q <= M_PI ? q : 2.0 * M_PI - q, p);
  }
  std::vector<double> cl(L, 0.0);
  for (int l = 0; l < L; ++l) {
    double acc = 0.0;
    for (int k = 0; k < L; ++k) acc += cq[k] * std::cos(2.0 * M_PI * k * l / L);
    cl[l] = acc / L;
  }
  return cl;
}

double gaussian_entropy(double ell, const TheoryParams& p) {
  p.validate();
  if (ell < 1) throw InvalidParameter("gaussian_entropy: ell must be >= 1");
  return entropy_transform(ell, [&](double q) { return gaussian_cq(q, p); });
}

double gaussian_entropy(double ell, const CachedCq& cq) {
  if (ell < 1) throw InvalidParameter("gaussian_entropy: ell must be >= 1");
  return entropy_transform(ell, cq);
}

double renormalized_cq_ratio(double q, const TheoryParams& p) {
  p.validate();
  const double ql0 = q * p.l0();
  return 1.0 - 2.0 * ql0 + std::log(ql0) / (4.0 * M_PI * p.beta * p.g0());
}

Scales scales(const TheoryParams& p) {
  p.validate();
  Scales s;
  s.l0 = p.l0();
  s.tau0 = p.tau0();
  s.nu = p.nu();
  s.g0 = p.g0();
  s.v0 = p.v0();
  s.l_star = s.l0 * std::exp(4.0 * M_PI * p.beta * s.g0);
  s.q_c = 1.0 / (8.0 * M_PI * p.beta * s.g0 * s.l0);
  s.l_c = 1.0 / s.q_c;
  s.ell_max_c = 2.0 * std::sqrt(14.0 * M_PI * p.beta) * std::pow(s.l0, 1.5);
  return s;
}

double ell_max_i2(const TheoryParams& p, double x) {
  p.validate();
  if (!(x > 0) || !(x < 1)) throw InvalidParameter("ell_max_i2: x must be in (0,1)");
  const double lg = std::log(1.0 / (1.0 - x));
  return 2.0 * std::sqrt(14.0 * M_PI * p.beta * (3.0 - x)) / std::sqrt(lg) * x /
         std::abs(1.0 - x) * std::pow(p.l0(), 1.5);
}

double predicted_entropy(double ell, const TheoryParams& p, double s0) {
  p.validate();
  const double lg = std::log(ell / p.l0());
  const double r = p.l0() / ell;
  return 2.0 * M_PI * p.g0() / 3.0 *
         (lg + s0 + 7.0 * r * r - lg * lg / (8.0 * M_PI * p.beta * p.g0()));
}

double predicted_c_ell(double ell, const TheoryParams& p) {
  p.validate();
  const double r = p.l0() / ell;
  return 2.0 * M_PI * p.g0() *
         (1.0 - 14.0 * r * r - std::log(ell / p.l0()) / (4.0 * M_PI * p.beta * p.g0()));
}

double predicted_i2(double ell, double x, const TheoryParams& p) {
  p.validate();
  if (!(x > 0) || !(x < 1)) throw InvalidParameter("predicted_i2: x must be in (0,1)");
  const double lg1mx = std::log(1.0 / (1.0 - x));
  const double r = p.l0() / ell;
  return 2.0 * M_PI * p.g0() / 3.0 *
         (lg1mx * (1.0 - std::log(ell / p.l0()) / (4.0 * M_PI * p.beta * p.g0())) -
          14.0 * (3.0 - x) * x * x * r * r / ((1.0 - x) * (1.0 - x)));
}

CachedCq::CachedCq(const TheoryParams& p, int n_nodes) : p_(p) {
  p.validate();
  const double umax = std::max(M_PI * p.l0(), 1e-6) * (1.0 + 1e-12);
  // denser nodes on [0, min(1, umax)] where the kernel bends hardest
  const double split = std::min(1.0, umax);
  const int n1 = n_nodes / 2, n2 = n_nodes - n1;
  nodes_.reserve(n1 + n2 + 1);
  for (int i = 0; i <= n1; ++i) nodes_.push_back(split * i / n1);
  if (umax > split)
    for (int i = 1; i <= n2; ++i) nodes_.push_back(split + (umax - split) * i / n2);
  vals_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) vals_[i] = tilde_c(nodes_[i], p.n);
  // three-point finite-difference slopes for the cubic Hermite pieces
  slopes_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == nodes_.size() ? i : i + 1;
    slopes_[i] = (vals_[b] - vals_[a]) / (nodes_[b] - nodes_[a]);
  }
  du_ = nodes_[1] - nodes_[0];
}

double CachedCq::cq(double q) const {
  const double u = std::clamp(q * p_.l0(), 0.0, nodes_.back());
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (u - nodes_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double val = (2 * t3 - 3 * t2 + 1) * vals_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
                     (-2 * t3 + 3 * t2) * vals_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
  return p_.n * (1.0 - p_.n) * val;
}

}  // namespace monfermi::theory

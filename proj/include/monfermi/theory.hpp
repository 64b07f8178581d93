#pragma once

#include <complex>
#include <vector>

#include "monfermi/params.hpp"

namespace monfermi::theory {

// Parameters of the effective field theory. beta is the symmetry-class
// constant of the one-loop RG correction: 1/2 with particle-hole symmetry
// (the nearest-neighbor chain), 1 without.
struct TheoryParams {
  double n = 0.5;      // filling fraction
  double J = 1.0;      // hopping
  double gamma = 1.0;  // jump rate
  double beta = 0.5;

  void validate() const;

  double tau0() const { return n / gamma; }                       // mean free time
  double l0() const { return std::sqrt(2.0) * J * n / gamma; }    // mean free path
  double nu() const { return 2.0 * n * J * J / gamma; }           // diffusion constant
  double g0() const { return l0() * n * std::sqrt(2.0 * (1.0 - n)); }
  double v0() const { return l0() / tau0() * std::sqrt(2.0 * (1.0 - n)); }
};

struct Scales {
  double l0, tau0, nu, g0, v0;
  double l_star;     // l0 exp(4 pi beta g0), onset of area-law entanglement
  double q_c;        // maximum of the rescaled correlation, 1/(8 pi beta g0 l0)
  double l_c;        // 1/q_c, upper edge of the critical range
  double ell_max_c;  // 2 sqrt(14 pi beta) l0^{3/2}
};

Scales scales(const TheoryParams& p);
double ell_max_i2(const TheoryParams& p, double x);

// b(u, v) = [(1 - i v)^2 + 2 u^2]^{-1/2}, principal branch. The radicand
// never touches the branch cut for real arguments.
std::complex<double> b_kernel(double u, double v);

// Dimensionless correlation kernel c~(u): the v-integral evaluated by
// adaptive Gauss-Kronrod quadrature (abs tol 1e-8) with the half-filling
// form for n = 1/2 and the generalized form (f = 1 - 2n) otherwise. The
// integrand develops a width-u feature at small v, so the integration is
// split at v ~ u before the tan-substituted tail.
double tilde_c(double u, double n);

// General-filling route kept callable at n = 1/2 so the two printed forms can
// be checked against each other. For n < 1/2 the kernel has a simple real
// pole at small u; the integral is taken as a principal value, which also
// enforces c~(0) = 0 at every filling.
double tilde_c_general(double u, double n);

// C_q = n (1 - n) c~(q l0) for q in [0, pi].
double gaussian_cq(double q, const TheoryParams& p);

// Lattice inverse transform C_l = (1/pi) int_0^pi dq C_q cos(q l); decays as
// -n(1-n) 2 l0 / (pi l^2) for l >> l0.
double gaussian_cl(double l, const TheoryParams& p);

// Full DFT counterpart on an L-site ring (aliased images of gaussian_cl);
// satisfies sum_l C_l = C_{q=0} = 0 exactly up to quadrature error.
std::vector<double> gaussian_cl_lattice(int L, const TheoryParams& p);

// Gaussian entanglement entropy S_ell = (2 pi / 3) int dq/q^2 C_q (1 - cos q ell),
// truncated at the zone edge q = pi with the constant tail estimate
// C_q(pi)/pi added (the neglected oscillatory remainder is O(1/ell)).
double gaussian_entropy(double ell, const TheoryParams& p);

// Rescaled RG-corrected correlation C_q/(g0 q) = 1 - 2 q l0 + ln(q l0)/(4 pi beta g0),
// valid for q l0 < 1.
double renormalized_cq_ratio(double q, const TheoryParams& p);

// Closed-form RG-corrected predictions (asymptotic in ell >> l0). s0 is a
// fit constant the theory does not determine.
double predicted_entropy(double ell, const TheoryParams& p, double s0);
double predicted_c_ell(double ell, const TheoryParams& p);
double predicted_i2(double ell, double x, const TheoryParams& p);

// Tabulated c~(q l0) on a dense grid with monotone-cubic interpolation; used
// by the quadrature-heavy entropy/correlation scans. Interpolation error is
// well below the 1e-6 level of the downstream checks.
class CachedCq {
 public:
  explicit CachedCq(const TheoryParams& p, int n_nodes = 4096);
  double cq(double q) const;  // q in [0, pi]
  double operator()(double q) const { return cq(q); }
  const TheoryParams& params() const { return p_; }

 private:
  TheoryParams p_;
  double du_;
  std::vector<double> nodes_;
  std::vector<double> vals_;
  std::vector<double> slopes_;
};

double gaussian_cl(double l, const CachedCq& cq);
double gaussian_entropy(double ell, const CachedCq& cq);

}  // namespace monfermi::theory

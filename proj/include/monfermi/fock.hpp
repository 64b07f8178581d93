#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "monfermi/gaussian_state.hpp"
#include "monfermi/params.hpp"

namespace monfermi::fock {

inline constexpr int kMaxSites = 10;

enum class JumpKind { Loss, Gain, Occupation };

// Exact many-body state on the full 2^L Fock space, used as ground truth for
// the Gaussian engine at small L. Basis convention: bit l of the index is the
// occupation of site l (site 0 = least significant bit); fermionic operators
// carry the Jordan-Wigner string over sites below l,
//   psi_l |n> = (-1)^{sum_{k<l} n_k} n_l |n - e_l>.
struct FockState {
  Eigen::VectorXcd amp;
  double time = 0.0;

  int sites() const;
  double norm() const { return amp.norm(); }
};

FockState fock_from_bits(int L, std::uint32_t bits);
FockState fock_neel(int L);

// Many-body Slater determinant of N orthonormal single-particle orbitals
// (columns of `orbitals`): amp(S) = det(orbitals[S, :]) over the occupied
// site set S in increasing order, matching the bit convention above.
FockState fock_from_orbitals(int L, const Matrix& orbitals);

// Many-body propagator exp(-i H tau) for the PBC hopping chain, via a cached
// dense eigendecomposition of the 2^L x 2^L Hamiltonian (built once per L at
// J = 1; H scales linearly in J).
void oracle_evolve(FockState& s, double tau, double J);

// Applies the bare operator psi_m / psi†_m / n_m, renormalizes, and returns
// the pre-normalization squared norm (the Born weight). Throws DegenerateJump
// when the weight is ~0 (e.g. gain on an occupied site).
double oracle_apply_jump(FockState& s, JumpKind kind, int m);

// D_{l,l'} = <psi†_{l'} psi_l> with fermionic signs.
Matrix oracle_density_matrix(const FockState& s);

// Von Neumann entropy of the reduced density matrix of the first ell sites
// (prefix blocks only: the Jordan-Wigner string of any operator inside the
// block then stays inside the block, so qubit and fermionic reduced spectra
// coincide).
double oracle_subsystem_entropy(const FockState& s, int ell);

}  // namespace monfermi::fock

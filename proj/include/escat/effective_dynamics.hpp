// effective_dynamics.hpp — Ground-manifold effective generators and the slow
// master equation obtained by adiabatic elimination of the excited manifold.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "escat/scattering.hpp"

namespace escat {

struct ExcitationOperator {
    Eigen::MatrixXcd matrix; // M_e x M_g, entries dipole . drive
};

struct EffectiveHamiltonian {
    Eigen::MatrixXcd matrix; // M_g x M_g, Hermitian
};

struct EffectiveLindblad {
    std::string label;       // originating jump channel
    Eigen::MatrixXcd matrix; // M_g x M_g
};

struct GroundDensity {
    Eigen::MatrixXcd rho; // M_g x M_g, Hermitian, unit trace
    double time{0.0};

    void validate() const; // trace to 1e-9, Hermiticity 1e-12, eigs >= -1e-9
};

ExcitationOperator build_excitation(const SystemSpec& spec, const ManifoldBasis& basis,
                                    const Medium& medium, const InputField& field);

// H_eff(g,g') = ground energies + hc_ground on the diagonal, minus the
// symmetrized drive term (1/2) A^dag [inv + inv^dag] A with the detuned
// inverse taken per initial ground state. Hermitian by construction.
EffectiveHamiltonian build_effective_hamiltonian(const NonHermitianHamiltonian& h,
                                                 const ExcitationOperator& exc,
                                                 const ManifoldBasis& basis, double omega);

// L^k = c^k inv A per jump channel, column g' formed with the inverse detuned
// to that initial ground energy.
std::vector<EffectiveLindblad> build_effective_lindblads(const JumpBasis& jumps,
                                                         const NonHermitianHamiltonian& h,
                                                         const ExcitationOperator& exc,
                                                         const ManifoldBasis& basis, double omega);

// Fixed-step RK4 Lindblad propagation, hermitized each step; samples every
// `sample_every` steps (always includes t0 and the final time). Throws
// StepTooLarge when dt times the generator magnitude reaches 0.1.
std::vector<GroundDensity> evolve(const GroundDensity& initial, const EffectiveHamiltonian& h,
                                  const std::vector<EffectiveLindblad>& lindblads, double t_final,
                                  double dt, int sample_every = 1);

// Dense matrix-exponential propagation of the vectorized Liouvillian;
// accuracy referee for evolve(). Throws TooLarge above |M_g| = 16.
GroundDensity evolve_exact(const GroundDensity& initial, const EffectiveHamiltonian& h,
                           const std::vector<EffectiveLindblad>& lindblads, double t_final);

// Vectorized generator (column-major), shared by the exact path and tests.
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& hamiltonian,
                             const std::vector<Eigen::MatrixXcd>& jumps);

} // namespace escat

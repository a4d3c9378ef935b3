// oracle.hpp — Brute-force references: a full tensor-product Lindblad
// simulator (no excited-manifold elimination) and a 1D single-excitation
// transfer-matrix solver. Test-facing; shares only the model types and medium
// coefficients with the engine.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "escat/scattering.hpp"

namespace escat {
namespace oracle {

struct FullStateSpace {
    const SystemSpec* spec{nullptr};
    Eigen::Index dim{0};
    Eigen::MatrixXcd hamiltonian;         // drive rotating frame
    std::vector<Eigen::MatrixXcd> jumps;  // leg-space spectral factorization
    std::vector<Eigen::Index> strides;    // mixed-radix full-space indexing

    // lowering operator for one transition leg embedded in the full space
    Eigen::MatrixXcd lowering(int emitter, int transition) const;
    // full-space indices of the collective ground states, basis order
    std::vector<Eigen::Index> ground_indices(const ManifoldBasis& basis) const;
    Eigen::MatrixXcd ground_block(const Eigen::MatrixXcd& rho, const ManifoldBasis& basis) const;
};

// Builds the un-eliminated model: all product levels (multiply-excited states
// included), RWA drive, exchange couplings, and jump operators from the
// leg Gram factorization. Dimension > 4096 -> TooLarge.
FullStateSpace build_full_space(const SystemSpec& spec, const InputField& field);

struct FullSample {
    double time{0.0};
    Eigen::MatrixXcd rho;
};

// Independent fixed-step RK4 Lindblad integrator over the full space.
std::vector<FullSample> full_lindblad_evolve(const FullStateSpace& space,
                                             const Eigen::MatrixXcd& rho0, double t_final,
                                             double dt, int sample_every = 1);

// Liouvillian nullspace steady state (dim <= 64); residual check 1e-10.
Eigen::MatrixXcd steady_state(const FullStateSpace& space);

// Steady channel amplitude s_ch + i<C_ch>, normalized to the largest incident
// channel amplitude; comparable with the engine's channel coefficients.
Complex steady_output_amplitude(const SystemSpec& spec, const InputField& field,
                                const std::string& channel);

// Exact one-photon reflection/transmission for chains of symmetric two-level
// emitters in a 1D waveguide, via transfer matrices.
std::pair<Complex, Complex> single_excitation_scattering(const SystemSpec& spec, double omega);

} // namespace oracle
} // namespace escat

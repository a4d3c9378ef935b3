// scattering.hpp — Non-Hermitian Hamiltonian assembly, detuned inversion,
// weak-field coherences, and input-output spectra.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "escat/core_model.hpp"
#include "escat/green_media.hpp"

namespace escat {

// Excited-manifold generator. `matrix` holds the frequency-independent part:
// diagonal collective energies + hc_excited + exchange shift - (i/2) decay.
// The drive frequency and initial ground energy are subtracted on inversion.
struct NonHermitianHamiltonian {
    Eigen::MatrixXcd matrix; // over M_e
};

// Coherent drive. Channel amplitudes address 1D waveguide movers; envelopes
// give the complex Rabi 3-vector at each emitter directly (an entry of the
// excitation operator is then orientation . envelope, no conjugation).
struct InputField {
    double omega{0.0}; // detuning of the drive carrier, units Gamma0
    std::map<std::string, Complex> channel_amplitudes;
    Vec3c polarization{0.0, 0.0, 1.0};
    std::vector<Vec3c> envelopes; // per emitter; empty = none
};

// Coefficient of rho_{g',g} in the detector amplitude, per Cartesian
// component: amplitude_c = Tr(component[c] * rho). For channel detectors the
// incident pass-through sits on the diagonal; position detectors report the
// scattered field only (global radiation constant not tracked).
struct ScatteringOperator {
    std::string detector;
    std::array<Eigen::MatrixXcd, 3> components; // each M_g x M_g

    // Projection onto the drive polarization: coeff(g,g') with
    // amplitude = Tr(coeff * rho).
    Eigen::MatrixXcd projected(const Vec3c& polarization) const;
};

using Detector = std::variant<std::string, Vec3>; // channel id or position

// matrix = diag(excited energies) + hc_excited + shift - (i/2) decay.
// Verifies that i(H - H^dag) = decay is PSD to 1e-12.
NonHermitianHamiltonian build_nonhermitian(const SystemSpec& spec, const ManifoldBasis& basis,
                                           const DecayMatrix& decay, const ShiftMatrix& shift);

// [H_nh - (omega + E_g) I]^-1 with residual check < 1e-10; throws
// SingularAtFrequency when singular or the condition estimate exceeds 1e14.
Eigen::MatrixXcd detuned_inverse(const NonHermitianHamiltonian& h, double omega, double e_ground);

// Excitation operator A (M_e x M_g): A_{eg} = sum of channel drives coupled
// through the medium plus direct envelope terms.
Eigen::MatrixXcd build_drive(const SystemSpec& spec, const ManifoldBasis& basis,
                             const Medium& medium, const InputField& field);

// max |A| / min nonzero |eig(H_nh - omega)|; the weak-drive approximation is
// trustworthy below ~0.1.
double weak_drive_ratio(const NonHermitianHamiltonian& h, const Eigen::MatrixXcd& drive,
                        double omega);

// Steady coherences: column g' holds sigma_{e,g'} = -inv(omega + E_g') * A e_{g'}
// ... concretely inv * A with the per-initial-ground detuned inverse.
Eigen::MatrixXcd solve_coherence(const NonHermitianHamiltonian& h, const ManifoldBasis& basis,
                                 const Eigen::MatrixXcd& drive, double omega);

ScatteringOperator scattering_operator(const SystemSpec& spec, const ManifoldBasis& basis,
                                       const NonHermitianHamiltonian& h, const Medium& medium,
                                       const InputField& field, const Detector& detector);

struct SpectrumRow {
    double omega{0.0};
    std::string detector;
    Eigen::Index g{0}, g_prime{0}; // g = g_prime = -1: expectation over rho
    Complex value{0.0};
    bool singular{false}; // SingularAtFrequency at this grid point
};

// Batch frequency sweep; rows ordered (omega, detector, g, g'), the
// rho-weighted expectation row appended per (omega, detector). `threads` <= 1
// runs serially.
std::vector<SpectrumRow> spectrum_sweep(const SystemSpec& spec, const ManifoldBasis& basis,
                                        const std::vector<Detector>& detectors,
                                        const std::vector<double>& omega_grid,
                                        const InputField& field_template,
                                        const Eigen::MatrixXcd& ground_density, int threads = 1);

std::string detector_name(const Detector& d);

} // namespace escat

// green_media.hpp — Medium models: dyadic Green response, collective decay and
// shift matrices, and the jump-channel factorization.
//
// All responses are normalized so that the induced single-emitter decay equals
// the declared per-channel rate. The exchange shift is the Hermitian part that
// enters the non-Hermitian Hamiltonian additively: H_rad = shift - (i/2)*decay.

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "escat/core_model.hpp"

namespace escat {

// One dipole transition leg placed in space; the medium reads per-channel
// couplings from the transition it references.
struct DipoleLeg {
    Vec3c orientation;
    const Transition* transition{nullptr};
    Vec3 position{0.0, 0.0, 0.0};
};

class Medium {
public:
    virtual ~Medium() = default;

    virtual std::vector<std::string> channel_ids() const = 0;

    // Hermitian-pair radiative entries between two legs at frequency offset
    // `omega` (in Gamma0 units from the carrier). decay_entry is the Gram
    // element; shift_entry the exchange element (caller zeroes same-emitter
    // shifts).
    virtual Complex decay_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const = 0;
    virtual Complex shift_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const = 0;

    // Normalized frequency-domain dyadic Green response.
    virtual Eigen::Matrix3cd green_dyadic(const Vec3& r, const Vec3& rp, double omega) const = 0;

    // Explicit physical jump channels (1D movers); media without them return
    // an empty list and the caller falls back to a spectral factorization.
    // A channel entry is the scalar coupling of one leg into that channel.
    struct ExplicitChannel {
        std::string label;
    };
    virtual std::vector<ExplicitChannel> explicit_channels() const { return {}; }
    virtual Complex channel_amplitude(size_t channel, const DipoleLeg& leg, double omega) const;

    // Per-leg excitation amplitude of a plane-wave channel drive with unit
    // amplitude in `channel_id` and given polarization (1D media only).
    virtual Complex drive_amplitude(const std::string& channel_id, const DipoleLeg& leg,
                                    const Vec3c& polarization, double omega) const;

    virtual bool is_waveguide() const { return false; }
};

std::unique_ptr<Medium> make_medium(const GreenMediumSpec& spec);

struct DecayMatrix {
    Eigen::MatrixXcd matrix; // over M_e, Hermitian PSD
};

struct ShiftMatrix {
    Eigen::MatrixXcd matrix; // over M_e, Hermitian, zero same-emitter block
};

struct JumpBasis {
    struct Channel {
        std::string label;
        Eigen::MatrixXcd op; // M_g x M_e, entries c_{ge}
    };
    std::vector<Channel> channels;

    Eigen::MatrixXcd gram() const; // sum_k c^k'dag c^k over M_e
};

DecayMatrix decay_matrix(const SystemSpec& spec, const ManifoldBasis& basis, double omega_ref = 0.0);
ShiftMatrix shift_matrix(const SystemSpec& spec, const ManifoldBasis& basis, double omega_ref = 0.0);

// Factorizes Gamma = sum_k c^k'dag c^k. Waveguide members emit the physical
// right/left movers; other members a spectral factorization over transition
// legs (eigenvalues below 1e-12 truncated). Throws NotPositiveSemidefinite
// when a negative eigenvalue beyond -1e-10 appears.
JumpBasis jump_basis(const DecayMatrix& decay, const SystemSpec& spec, const ManifoldBasis& basis,
                     double omega_ref = 0.0);

// Pairs of emitters closer than 0.1 wavelength in a 3D medium (the rotating
// wave dipole-dipole form is unreliable there); callers warn on non-empty.
std::vector<std::pair<int, int>> rwa_violations(const SystemSpec& spec);

} // namespace escat

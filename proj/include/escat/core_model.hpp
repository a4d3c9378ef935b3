// core_model.hpp — Emitters, level structure, dipole transitions, and the
// collective ground / single-excitation manifolds.
//
// Units: hbar = 1, all rates and energies in units of a reference rate Gamma0,
// positions in units of the carrier wavelength (axial phase = 2*pi*x). Excited
// level energies are detunings from the global carrier; ground energies are
// absolute splittings.

#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "escat/errors.hpp"
#include "escat/medium_spec.hpp"

namespace escat {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;

enum class LevelKind { Ground, Excited };

struct Level {
    std::string label;
    double energy{0.0};
    LevelKind kind{LevelKind::Ground};
};

struct Transition {
    std::string excited_label;
    std::string ground_label;
    Vec3c orientation{0.0, 0.0, 1.0}; // unit complex 3-vector
    std::map<std::string, double> couplings; // medium channel id -> partial rate

    double total_rate() const;
    double coupling(const std::string& channel) const; // 0 if absent
};

struct EmitterSpec {
    std::string id;
    std::vector<Level> levels;
    std::vector<Transition> transitions;
    Vec3 position{0.0, 0.0, 0.0};

    std::vector<int> ground_levels() const;  // indices into levels, declaration order
    std::vector<int> excited_levels() const;
    int level_index(const std::string& label) const; // -1 if missing
    // declared transition between these level labels, -1 if none
    int transition_index(const std::string& excited, const std::string& ground) const;
    void validate() const;
};

struct SystemSpec {
    std::vector<EmitterSpec> emitters;
    GreenMediumSpec medium;
    Eigen::MatrixXcd hc_excited; // over M_e (empty = zero); Hermitian
    Eigen::VectorXd hc_ground;   // extra diagonal over M_g (empty = zero)

    void validate() const; // manifold-independent checks
};

// One collective ground state: the ground-level choice of every emitter,
// as indices into EmitterSpec::ground_levels().
struct CollectiveGround {
    std::vector<int> ground_choice;
};

// One collective single-excitation state: emitter `emitter` sits in excited
// level `excited_choice` (index into excited_levels()); every other emitter
// holds the ground choice recorded in `spectators` (entry at `emitter` is -1).
struct CollectiveExcited {
    int emitter{0};
    int excited_choice{0};
    std::vector<int> spectators;
};

class ManifoldBasis {
public:
    ManifoldBasis() = default;

    Eigen::Index n_ground() const { return static_cast<Eigen::Index>(ground_states_.size()); }
    Eigen::Index n_excited() const { return static_cast<Eigen::Index>(excited_states_.size()); }

    const CollectiveGround& ground(Eigen::Index g) const { return ground_states_[static_cast<size_t>(g)]; }
    const CollectiveExcited& excited(Eigen::Index e) const { return excited_states_[static_cast<size_t>(e)]; }

    Eigen::Index ground_index(const std::vector<int>& choice) const;
    Eigen::Index excited_index(int emitter, int excited_choice, const std::vector<int>& spectators) const;

    // Human-readable labels, e.g. "g1,g2" / "A:e|g2"
    std::string ground_label(Eigen::Index g) const;
    std::string excited_label(Eigen::Index e) const;

    // Emitter transition connecting collective excited e to collective ground g
    // by de-exciting exactly one emitter: (emitter index, transition index), or
    // nullopt when no declared dipole path exists.
    std::optional<std::pair<int, int>> connecting_leg(Eigen::Index e, Eigen::Index g) const;

    // Collective ground energy: sum of the emitters' ground level energies plus
    // any extra hc_ground diagonal.
    double ground_energy(Eigen::Index g) const;
    // Collective excited diagonal energy: excited detuning plus spectator
    // ground energies.
    double excited_energy(Eigen::Index e) const;

    const SystemSpec& spec() const { return *spec_; }

    friend ManifoldBasis build_manifolds(const SystemSpec& spec);

private:
    const SystemSpec* spec_{nullptr};
    std::vector<CollectiveGround> ground_states_;
    std::vector<CollectiveExcited> excited_states_;
    std::map<std::vector<int>, Eigen::Index> ground_lookup_;
    std::map<std::tuple<int, int, std::vector<int>>, Eigen::Index> excited_lookup_;
};

// Enumerates M_g and the single-excitation M_e deterministically (emitter index
// first, then level declaration order). The caller keeps `spec` alive for the
// lifetime of the basis.
ManifoldBasis build_manifolds(const SystemSpec& spec);

// sqrt(partial rate) * orientation when collective states e and g differ only
// by emitter j's level through a declared transition carrying `channel`;
// zero vector otherwise.
Vec3c collective_dipole(const ManifoldBasis& basis, Eigen::Index e, Eigen::Index g,
                        int emitter, const std::string& channel);

} // namespace escat

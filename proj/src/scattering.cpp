// scattering.cpp — Weak-field scattering engine

#include "escat/scattering.hpp"

#include <cmath>
#include <sstream>
#include <thread>

namespace escat {

namespace {

constexpr Complex kI{0.0, 1.0};

DipoleLeg leg_of(const SystemSpec& spec, const std::pair<int, int>& leg) {
    const auto& em = spec.emitters[static_cast<size_t>(leg.first)];
    const auto& t = em.transitions[static_cast<size_t>(leg.second)];
    return DipoleLeg{t.orientation, &t, em.position};
}

} // namespace

Eigen::MatrixXcd ScatteringOperator::projected(const Vec3c& polarization) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(components[0].rows(), components[0].cols());
    for (int c = 0; c < 3; ++c) out += std::conj(polarization(c)) * components[c];
    return out;
}

NonHermitianHamiltonian build_nonhermitian(const SystemSpec& spec, const ManifoldBasis& basis,
                                           const DecayMatrix& decay, const ShiftMatrix& shift) {
    const Eigen::Index ne = basis.n_excited();
    if (decay.matrix.rows() != ne || shift.matrix.rows() != ne)
        throw InvalidSpec("decay/shift matrices do not match the excited manifold");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ne, ne);
    for (Eigen::Index e = 0; e < ne; ++e) h(e, e) = basis.excited_energy(e);
    if (spec.hc_excited.size() > 0) h += spec.hc_excited;
    h += shift.matrix;
    h -= 0.5 * kI * decay.matrix;

    const Eigen::MatrixXcd anti = kI * (h - h.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(anti);
    if (ne > 0 && es.eigenvalues().minCoeff() < -1e-12)
        throw NotPositiveSemidefinite("non-Hermitian Hamiltonian has gain: eigenvalue " +
                                      std::to_string(es.eigenvalues().minCoeff()));
    return NonHermitianHamiltonian{std::move(h)};
}

Eigen::MatrixXcd detuned_inverse(const NonHermitianHamiltonian& h, double omega, double e_ground) {
    const Eigen::Index n = h.matrix.rows();
    Eigen::MatrixXcd shifted = h.matrix - (omega + e_ground) * Eigen::MatrixXcd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    Eigen::MatrixXcd inv = lu.inverse();
    if (!inv.allFinite() || shifted.norm() * inv.norm() > 1e14)
        throw SingularAtFrequency("detuned Hamiltonian is singular near omega = " +
                                  std::to_string(omega));
    const double residual = (shifted * inv - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw SingularAtFrequency("inverse residual " + std::to_string(residual) + " at omega = " +
                                  std::to_string(omega));
    return inv;
}

Eigen::MatrixXcd build_drive(const SystemSpec& spec, const ManifoldBasis& basis,
                             const Medium& medium, const InputField& field) {
    if (!field.envelopes.empty() && field.envelopes.size() != spec.emitters.size())
        throw InvalidSpec("envelope drive must list one 3-vector per emitter");
    Eigen::MatrixXcd drive = Eigen::MatrixXcd::Zero(basis.n_excited(), basis.n_ground());
    for (Eigen::Index e = 0; e < basis.n_excited(); ++e)
        for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
            const auto leg = basis.connecting_leg(e, g);
            if (!leg) continue;
            const DipoleLeg dl = leg_of(spec, *leg);
            Complex a = 0.0;
            for (const auto& [ch, amp] : field.channel_amplitudes) {
                if (amp == 0.0) continue;
                a += amp * medium.drive_amplitude(ch, dl, field.polarization, field.omega);
            }
            if (!field.envelopes.empty())
                a += (dl.orientation.transpose() *
                      field.envelopes[static_cast<size_t>(leg->first)])
                         .value();
            drive(e, g) = a;
        }
    return drive;
}

double weak_drive_ratio(const NonHermitianHamiltonian& h, const Eigen::MatrixXcd& drive,
                        double omega) {
    const double amax = drive.size() > 0 ? drive.cwiseAbs().maxCoeff() : 0.0;
    if (amax == 0.0) return 0.0;
    const Eigen::Index n = h.matrix.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
        h.matrix - omega * Eigen::MatrixXcd::Identity(n, n));
    double emin = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = std::abs(es.eigenvalues()(i));
        if (m > 1e-14 && (emin == 0.0 || m < emin)) emin = m;
    }
    return emin > 0.0 ? amax / emin : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXcd solve_coherence(const NonHermitianHamiltonian& h, const ManifoldBasis& basis,
                                 const Eigen::MatrixXcd& drive, double omega) {
    Eigen::MatrixXcd sigma(basis.n_excited(), basis.n_ground());
    std::map<double, Eigen::MatrixXcd> cache; // inverse per initial ground energy
    for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
        const double eg = basis.ground_energy(g);
        auto it = cache.find(eg);
        if (it == cache.end()) it = cache.emplace(eg, detuned_inverse(h, omega, eg)).first;
        sigma.col(g) = it->second * drive.col(g);
    }
    return sigma;
}

std::string detector_name(const Detector& d) {
    if (std::holds_alternative<std::string>(d)) return std::get<std::string>(d);
    const Vec3& r = std::get<Vec3>(d);
    std::ostringstream os;
    os << "pos(" << r.x() << "," << r.y() << "," << r.z() << ")";
    return os.str();
}

namespace {

// Reference incident amplitude used to normalize channel outputs.
Complex incident_norm(const InputField& field) {
    Complex best = 0.0;
    for (const auto& [ch, amp] : field.channel_amplitudes)
        if (std::abs(amp) > std::abs(best)) best = amp;
    return best == 0.0 ? Complex{1.0, 0.0} : best;
}

ScatteringOperator channel_operator(const SystemSpec& spec, const ManifoldBasis& basis,
                                    const Medium& medium, const InputField& field,
                                    const Eigen::MatrixXcd& sigma, const std::string& channel) {
    const auto explicit_ch = medium.explicit_channels();
    if (explicit_ch.empty())
        throw InvalidSpec("channel detector '" + channel + "' requires a waveguide medium");
    const Complex norm = incident_norm(field);
    Complex s_det = 0.0;
    if (auto it = field.channel_amplitudes.find(channel); it != field.channel_amplitudes.end())
        s_det = it->second;

    ScatteringOperator out;
    out.detector = channel;
    const Eigen::Index ng = basis.n_ground();
    static const char* comp_name[3] = {"x", "y", "z"};
    for (int c = 0; c < 3; ++c) {
        Eigen::MatrixXcd coeff =
            (s_det / norm) * field.polarization(c) * Eigen::MatrixXcd::Identity(ng, ng);
        const std::string label = channel + ":" + comp_name[c];
        for (size_t k = 0; k < explicit_ch.size(); ++k) {
            if (explicit_ch[k].label != label) continue;
            Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(ng, basis.n_excited());
            for (Eigen::Index e = 0; e < basis.n_excited(); ++e)
                for (Eigen::Index g = 0; g < ng; ++g) {
                    const auto leg = basis.connecting_leg(e, g);
                    if (!leg) continue;
                    op(g, e) = medium.channel_amplitude(k, leg_of(spec, *leg), field.omega);
                }
            coeff += (kI / norm) * (op * sigma);
        }
        out.components[static_cast<size_t>(c)] = std::move(coeff);
    }
    return out;
}

ScatteringOperator position_operator(const SystemSpec& spec, const ManifoldBasis& basis,
                                     const Medium& medium, const InputField& field,
                                     const Eigen::MatrixXcd& sigma, const Vec3& r_det) {
    ScatteringOperator out;
    out.detector = detector_name(Detector{r_det});
    const Eigen::Index ng = basis.n_ground();
    for (int c = 0; c < 3; ++c)
        out.components[static_cast<size_t>(c)] = Eigen::MatrixXcd::Zero(ng, ng);
    for (Eigen::Index g = 0; g < ng; ++g)
        for (Eigen::Index gp = 0; gp < ng; ++gp) {
            const double omega_out =
                field.omega - (basis.ground_energy(g) - basis.ground_energy(gp));
            Vec3c amp = Vec3c::Zero();
            for (Eigen::Index e = 0; e < basis.n_excited(); ++e) {
                const auto leg = basis.connecting_leg(e, g);
                if (!leg) continue;
                const DipoleLeg dl = leg_of(spec, *leg);
                const Vec3c dipole =
                    std::sqrt(dl.transition->total_rate()) * dl.orientation.conjugate();
                amp += medium.green_dyadic(r_det, dl.position, omega_out) * dipole * sigma(e, gp);
            }
            for (int c = 0; c < 3; ++c) out.components[static_cast<size_t>(c)](g, gp) = kI * amp(c);
        }
    return out;
}

} // namespace

ScatteringOperator scattering_operator(const SystemSpec& spec, const ManifoldBasis& basis,
                                       const NonHermitianHamiltonian& h, const Medium& medium,
                                       const InputField& field, const Detector& detector) {
    const Eigen::MatrixXcd drive = build_drive(spec, basis, medium, field);
    const Eigen::MatrixXcd sigma = solve_coherence(h, basis, drive, field.omega);
    if (std::holds_alternative<std::string>(detector))
        return channel_operator(spec, basis, medium, field, sigma, std::get<std::string>(detector));
    return position_operator(spec, basis, medium, field, sigma, std::get<Vec3>(detector));
}

std::vector<SpectrumRow> spectrum_sweep(const SystemSpec& spec, const ManifoldBasis& basis,
                                        const std::vector<Detector>& detectors,
                                        const std::vector<double>& omega_grid,
                                        const InputField& field_template,
                                        const Eigen::MatrixXcd& ground_density, int threads) {
    const auto medium = make_medium(spec.medium);
    const DecayMatrix decay = decay_matrix(spec, basis);
    const ShiftMatrix shift = shift_matrix(spec, basis);
    const NonHermitianHamiltonian h = build_nonhermitian(spec, basis, decay, shift);
    const Eigen::Index ng = basis.n_ground();

    std::vector<std::vector<SpectrumRow>> blocks(omega_grid.size());
    auto worker = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < omega_grid.size(); i += stride) {
            InputField field = field_template;
            field.omega = omega_grid[i];
            auto& rows = blocks[i];
            for (const auto& det : detectors) {
                bool singular = false;
                Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(ng, ng);
                try {
                    coeff = scattering_operator(spec, basis, h, *medium, field, det)
                                .projected(field.polarization);
                } catch (const SingularAtFrequency&) {
                    singular = true;
                }
                const std::string name = detector_name(det);
                for (Eigen::Index g = 0; g < ng; ++g)
                    for (Eigen::Index gp = 0; gp < ng; ++gp)
                        rows.push_back({field.omega, name, g, gp, coeff(g, gp), singular});
                rows.push_back({field.omega, name, -1, -1, (coeff * ground_density).trace(),
                                singular});
            }
        }
    };

    const size_t nthreads = threads > 1 ? static_cast<size_t>(threads) : 1;
    if (nthreads <= 1 || omega_grid.size() < 2) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
        for (auto& th : pool) th.join();
    }

    std::vector<SpectrumRow> out;
    for (auto& b : blocks)
        for (auto& r : b) out.push_back(std::move(r));
    return out;
}

} // namespace escat

// oracle.cpp — Full-space Lindblad and transfer-matrix references

#include "escat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace escat {
namespace oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Leg {
    int emitter;
    int transition;
};

DipoleLeg make_leg(const SystemSpec& spec, const Leg& leg) {
    const auto& em = spec.emitters[static_cast<size_t>(leg.emitter)];
    const auto& t = em.transitions[static_cast<size_t>(leg.transition)];
    return DipoleLeg{t.orientation, &t, em.position};
}

std::vector<Leg> all_legs(const SystemSpec& spec) {
    std::vector<Leg> legs;
    for (int j = 0; j < static_cast<int>(spec.emitters.size()); ++j) {
        const auto& em = spec.emitters[static_cast<size_t>(j)];
        for (int t = 0; t < static_cast<int>(em.transitions.size()); ++t)
            if (em.transitions[static_cast<size_t>(t)].total_rate() > 0.0)
                legs.push_back({j, t});
    }
    return legs;
}

Complex leg_drive(const Medium& medium, const SystemSpec& spec, const Leg& leg,
                  const InputField& field) {
    const DipoleLeg dl = make_leg(spec, leg);
    Complex a = 0.0;
    for (const auto& [ch, amp] : field.channel_amplitudes) {
        if (amp == 0.0) continue;
        a += amp * medium.drive_amplitude(ch, dl, field.polarization, field.omega);
    }
    if (!field.envelopes.empty()) {
        if (field.envelopes.size() != spec.emitters.size())
            throw InvalidSpec("envelope drive must list one 3-vector per emitter");
        a += (dl.orientation.transpose() * field.envelopes[static_cast<size_t>(leg.emitter)])
                 .value();
    }
    return a;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

Eigen::MatrixXcd FullStateSpace::lowering(int emitter, int transition) const {
    const auto& em = spec->emitters[static_cast<size_t>(emitter)];
    const auto& t = em.transitions[static_cast<size_t>(transition)];
    const Eigen::Index e_idx = em.level_index(t.excited_label);
    const Eigen::Index g_idx = em.level_index(t.ground_label);
    const Eigen::Index stride = strides[static_cast<size_t>(emitter)];
    const auto n = static_cast<Eigen::Index>(em.levels.size());
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index digit = (i / stride) % n;
        if (digit != e_idx) continue;
        op(i + (g_idx - e_idx) * stride, i) = 1.0;
    }
    return op;
}

std::vector<Eigen::Index> FullStateSpace::ground_indices(const ManifoldBasis& basis) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
        const auto& st = basis.ground(g);
        Eigen::Index idx = 0;
        for (size_t j = 0; j < spec->emitters.size(); ++j) {
            const auto& em = spec->emitters[j];
            const auto level =
                em.ground_levels()[static_cast<size_t>(st.ground_choice[j])];
            idx += strides[j] * static_cast<Eigen::Index>(level);
        }
        out.push_back(idx);
    }
    return out;
}

Eigen::MatrixXcd FullStateSpace::ground_block(const Eigen::MatrixXcd& rho,
                                              const ManifoldBasis& basis) const {
    const auto idx = ground_indices(basis);
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            out(a, b) = rho(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    return out;
}

FullStateSpace build_full_space(const SystemSpec& spec, const InputField& field) {
    spec.validate();
    if (spec.hc_excited.size() > 0 || spec.hc_ground.size() > 0)
        throw InvalidSpec("the full-space reference does not model hc terms");

    FullStateSpace space;
    space.spec = &spec;
    const size_t n_em = spec.emitters.size();
    space.strides.assign(n_em, 1);
    Eigen::Index dim = 1;
    for (size_t j = n_em; j-- > 0;) {
        space.strides[j] = dim;
        dim *= static_cast<Eigen::Index>(spec.emitters[j].levels.size());
        if (dim > 4096) throw TooLarge("full state space exceeds 4096 dimensions");
    }
    space.dim = dim;

    const auto medium = make_medium(spec.medium);
    const auto legs = all_legs(spec);

    // Diagonal level energies in the frame rotating at the drive carrier.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double energy = 0.0;
        for (size_t j = 0; j < n_em; ++j) {
            const auto& em = spec.emitters[j];
            const auto n = static_cast<Eigen::Index>(em.levels.size());
            const auto& level = em.levels[static_cast<size_t>((i / space.strides[j]) % n)];
            energy += level.energy - (level.kind == LevelKind::Excited ? field.omega : 0.0);
        }
        h(i, i) = energy;
    }

    // RWA drive and exchange couplings.
    std::vector<Eigen::MatrixXcd> sigma_minus;
    sigma_minus.reserve(legs.size());
    for (const auto& leg : legs) sigma_minus.push_back(space.lowering(leg.emitter, leg.transition));
    for (size_t a = 0; a < legs.size(); ++a) {
        const Complex drive = leg_drive(*medium, spec, legs[a], field);
        h -= drive * sigma_minus[a].adjoint() + std::conj(drive) * sigma_minus[a];
        for (size_t b = 0; b < legs.size(); ++b) {
            if (legs[a].emitter == legs[b].emitter) continue;
            const Complex s = medium->shift_entry(make_leg(spec, legs[a]), make_leg(spec, legs[b]),
                                                  field.omega);
            if (s != 0.0) h += s * (sigma_minus[a].adjoint() * sigma_minus[b]);
        }
    }
    space.hamiltonian = std::move(h);

    // Leg-Gram spectral factorization of the total decay.
    if (!legs.empty()) {
        const auto nl = static_cast<Eigen::Index>(legs.size());
        Eigen::MatrixXcd gram(nl, nl);
        for (Eigen::Index a = 0; a < nl; ++a)
            for (Eigen::Index b = 0; b < nl; ++b)
                gram(a, b) = medium->decay_entry(make_leg(spec, legs[static_cast<size_t>(a)]),
                                                 make_leg(spec, legs[static_cast<size_t>(b)]),
                                                 field.omega);
        gram = 0.5 * (gram + gram.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        for (Eigen::Index k = 0; k < nl; ++k) {
            const double lambda = es.eigenvalues()(k);
            if (lambda < -1e-10)
                throw NotPositiveSemidefinite("leg decay matrix has eigenvalue " +
                                              std::to_string(lambda));
            if (lambda < 1e-12) continue;
            Eigen::MatrixXcd jump = Eigen::MatrixXcd::Zero(dim, dim);
            for (Eigen::Index l = 0; l < nl; ++l)
                jump += std::sqrt(lambda) * std::conj(es.eigenvectors()(l, k)) *
                        sigma_minus[static_cast<size_t>(l)];
            space.jumps.push_back(std::move(jump));
        }
    }
    return space;
}

namespace {

Eigen::MatrixXcd full_rhs(const FullStateSpace& space, const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd out = -kI * (space.hamiltonian * rho - rho * space.hamiltonian);
    for (const auto& l : space.jumps) {
        const Eigen::MatrixXcd ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

} // namespace

std::vector<FullSample> full_lindblad_evolve(const FullStateSpace& space,
                                             const Eigen::MatrixXcd& rho0, double t_final,
                                             double dt, int sample_every) {
    if (dt <= 0.0 || t_final < 0.0) throw InvalidSpec("evolve needs dt > 0 and t_final >= 0");
    if (sample_every < 1) sample_every = 1;
    double scale = 2.0 * space.hamiltonian.norm();
    for (const auto& l : space.jumps) scale += 2.0 * l.squaredNorm();
    if (dt * scale >= 0.5) throw StepTooLarge("oracle step too large for the full generator");

    const auto steps = static_cast<long>(std::llround(t_final / dt));
    std::vector<FullSample> traj;
    traj.push_back({0.0, rho0});
    Eigen::MatrixXcd rho = rho0;
    for (long s = 1; s <= steps; ++s) {
        const Eigen::MatrixXcd k1 = full_rhs(space, rho);
        const Eigen::MatrixXcd k2 = full_rhs(space, rho + 0.5 * dt * k1);
        const Eigen::MatrixXcd k3 = full_rhs(space, rho + 0.5 * dt * k2);
        const Eigen::MatrixXcd k4 = full_rhs(space, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        if (s % sample_every == 0 || s == steps)
            traj.push_back({dt * static_cast<double>(s), rho});
    }
    return traj;
}

Eigen::MatrixXcd steady_state(const FullStateSpace& space) {
    const Eigen::Index n = space.dim;
    if (n * n > 4096) throw TooLarge("steady-state solve limited to 64 dimensions");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd gen = -kI * (kron(id, space.hamiltonian) -
                                  kron(space.hamiltonian.transpose(), id));
    for (const auto& l : space.jumps) {
        const Eigen::MatrixXcd ldl = l.adjoint() * l;
        gen += kron(l.conjugate(), l) - 0.5 * (kron(id, ldl) + kron(ldl.transpose(), id));
    }
    Eigen::MatrixXcd sys = gen;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    sys.row(0).setZero();
    for (Eigen::Index i = 0; i < n; ++i) sys(0, i * n + i) = 1.0; // trace constraint
    rhs(0) = 1.0;
    const Eigen::VectorXcd v = sys.fullPivLu().solve(rhs);
    if (!v.allFinite() || (gen * v).lpNorm<Eigen::Infinity>() > 1e-9)
        throw NoSteadyState("Liouvillian nullspace solve did not converge");
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
    return 0.5 * (rho + rho.adjoint().eval());
}

Complex steady_output_amplitude(const SystemSpec& spec, const InputField& field,
                                const std::string& channel) {
    const auto medium = make_medium(spec.medium);
    const auto explicit_ch = medium->explicit_channels();
    if (explicit_ch.empty())
        throw InvalidSpec("output amplitudes require a waveguide channel '" + channel + "'");
    const FullStateSpace space = build_full_space(spec, field);
    const Eigen::MatrixXcd rho = steady_state(space);

    Complex norm = 0.0;
    for (const auto& [ch, amp] : field.channel_amplitudes)
        if (std::abs(amp) > std::abs(norm)) norm = amp;
    if (norm == 0.0) norm = 1.0;
    Complex s_det = 0.0;
    if (auto it = field.channel_amplitudes.find(channel); it != field.channel_amplitudes.end())
        s_det = it->second;

    const auto legs = all_legs(spec);
    static const char* comp_name[3] = {"x", "y", "z"};
    Complex amp = s_det;
    for (int c = 0; c < 3; ++c) {
        const std::string label = channel + ":" + comp_name[c];
        for (size_t k = 0; k < explicit_ch.size(); ++k) {
            if (explicit_ch[k].label != label) continue;
            Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(space.dim, space.dim);
            for (const auto& leg : legs)
                op += medium->channel_amplitude(k, make_leg(spec, leg), field.omega) *
                      space.lowering(leg.emitter, leg.transition);
            amp += kI * std::conj(field.polarization(c)) * (op * rho).trace();
        }
    }
    return amp / norm;
}

std::pair<Complex, Complex> single_excitation_scattering(const SystemSpec& spec, double omega) {
    const Waveguide1DSpec* wg = nullptr;
    if (spec.medium.variant == MediumVariant::Waveguide1D) wg = &spec.medium.waveguide;
    if (spec.medium.variant == MediumVariant::Composite)
        for (const auto& m : spec.medium.members)
            if (m.variant == MediumVariant::Waveguide1D) wg = &m.waveguide;
    if (!wg) throw InvalidSpec("transfer-matrix solver needs a 1D waveguide");
    const double k = wg->carrier_frequency > 0.0
                         ? 2.0 * std::numbers::pi * (1.0 + omega / wg->carrier_frequency)
                         : 2.0 * std::numbers::pi;

    struct Element {
        double x;
        Complex t, r;
    };
    std::vector<Element> elements;
    for (const auto& em : spec.emitters) {
        if (em.ground_levels().size() != 1 || em.excited_levels().size() != 1 ||
            em.transitions.size() != 1)
            throw InvalidSpec("transfer-matrix solver handles two-level emitters only");
        const auto& t = em.transitions.front();
        const double gr = t.coupling(wg->right_channel);
        const double gl = t.coupling(wg->left_channel);
        if (std::abs(gr - gl) > 1e-12)
            throw InvalidSpec("transfer-matrix solver assumes symmetric waveguide coupling");
        const double e_exc = em.levels[static_cast<size_t>(em.excited_levels().front())].energy;
        const double e_gnd = em.levels[static_cast<size_t>(em.ground_levels().front())].energy;
        const Complex denom = (omega - (e_exc - e_gnd)) + 0.5 * kI * t.total_rate();
        elements.push_back({em.position.x(), 1.0 - kI * gr / denom, -kI * gr / denom});
    }
    std::sort(elements.begin(), elements.end(),
              [](const Element& a, const Element& b) { return a.x < b.x; });

    // Scattering-matrix (Redheffer) composition; regular even at t = 0.
    struct SMat {
        Complex rl{0.0}, rr{0.0}, t{1.0};
    };
    SMat total;
    for (const auto& el : elements) {
        const Complex ph = std::exp(2.0 * kI * (k * el.x));
        const SMat s{el.r * ph, el.r / ph, el.t};
        const Complex denom = 1.0 - total.rr * s.rl;
        SMat next;
        next.t = total.t * s.t / denom;
        next.rl = total.rl + total.t * total.t * s.rl / denom;
        next.rr = s.rr + s.t * s.t * total.rr / denom;
        total = next;
    }
    return {total.rl, total.t};
}

} // namespace oracle
} // namespace escat

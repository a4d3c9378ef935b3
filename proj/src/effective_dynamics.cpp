// effective_dynamics.cpp — Effective ground-state generators and propagation

#include "escat/effective_dynamics.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace escat {

namespace {

constexpr Complex kI{0.0, 1.0};

// Detuned inverses keyed by initial ground energy.
std::vector<Eigen::MatrixXcd> per_ground_inverses(const NonHermitianHamiltonian& h,
                                                  const ManifoldBasis& basis, double omega) {
    std::vector<Eigen::MatrixXcd> out;
    std::map<double, size_t> cache;
    out.reserve(static_cast<size_t>(basis.n_ground()));
    std::vector<size_t> index;
    for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
        const double eg = basis.ground_energy(g);
        auto it = cache.find(eg);
        if (it == cache.end()) {
            cache.emplace(eg, out.size());
            out.push_back(detuned_inverse(h, omega, eg));
            index.push_back(out.size() - 1);
        } else {
            index.push_back(it->second);
        }
    }
    std::vector<Eigen::MatrixXcd> expanded;
    expanded.reserve(index.size());
    for (size_t i : index) expanded.push_back(out[i]);
    return expanded;
}

} // namespace

void GroundDensity::validate() const {
    if (rho.rows() != rho.cols()) throw InvalidSpec("ground density must be square");
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-9)
        throw InvalidSpec("ground density trace deviates from 1");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidSpec("ground density is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw NotPositiveSemidefinite("ground density has negative population");
}

ExcitationOperator build_excitation(const SystemSpec& spec, const ManifoldBasis& basis,
                                    const Medium& medium, const InputField& field) {
    return ExcitationOperator{build_drive(spec, basis, medium, field)};
}

EffectiveHamiltonian build_effective_hamiltonian(const NonHermitianHamiltonian& h,
                                                 const ExcitationOperator& exc,
                                                 const ManifoldBasis& basis, double omega) {
    const Eigen::Index ng = basis.n_ground();
    const auto invs = per_ground_inverses(h, basis, omega);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ng, ng);
    for (Eigen::Index g = 0; g < ng; ++g) out(g, g) = basis.ground_energy(g);
    for (Eigen::Index g = 0; g < ng; ++g)
        for (Eigen::Index gp = 0; gp < ng; ++gp) {
            const Complex forward = (exc.matrix.col(g).adjoint() *
                                     (invs[static_cast<size_t>(gp)] * exc.matrix.col(gp)))
                                        .value();
            const Complex backward =
                (exc.matrix.col(g).adjoint() *
                 (invs[static_cast<size_t>(g)].adjoint() * exc.matrix.col(gp)))
                    .value();
            out(g, gp) -= 0.5 * (forward + backward);
        }
    if ((out - out.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("effective Hamiltonian failed the Hermiticity check");
    return EffectiveHamiltonian{std::move(out)};
}

std::vector<EffectiveLindblad> build_effective_lindblads(const JumpBasis& jumps,
                                                         const NonHermitianHamiltonian& h,
                                                         const ExcitationOperator& exc,
                                                         const ManifoldBasis& basis, double omega) {
    const auto invs = per_ground_inverses(h, basis, omega);
    std::vector<EffectiveLindblad> out;
    out.reserve(jumps.channels.size());
    for (const auto& ch : jumps.channels) {
        Eigen::MatrixXcd l(basis.n_ground(), basis.n_ground());
        for (Eigen::Index g = 0; g < basis.n_ground(); ++g)
            l.col(g) = ch.op * (invs[static_cast<size_t>(g)] * exc.matrix.col(g));
        out.push_back({ch.label, std::move(l)});
    }
    return out;
}

namespace {

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h,
                              const std::vector<EffectiveLindblad>& ls) {
    Eigen::MatrixXcd out = -kI * (h * rho - rho * h);
    for (const auto& l : ls) {
        const Eigen::MatrixXcd ldl = l.matrix.adjoint() * l.matrix;
        out += l.matrix * rho * l.matrix.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

double generator_scale(const Eigen::MatrixXcd& h, const std::vector<EffectiveLindblad>& ls) {
    double scale = 2.0 * h.norm();
    for (const auto& l : ls) scale += 2.0 * l.matrix.squaredNorm();
    return scale;
}

} // namespace

std::vector<GroundDensity> evolve(const GroundDensity& initial, const EffectiveHamiltonian& h,
                                  const std::vector<EffectiveLindblad>& lindblads, double t_final,
                                  double dt, int sample_every) {
    initial.validate();
    if (dt <= 0.0 || t_final < 0.0) throw InvalidSpec("evolve needs dt > 0 and t_final >= 0");
    if (sample_every < 1) sample_every = 1;
    if (dt * generator_scale(h.matrix, lindblads) >= 0.1)
        throw StepTooLarge("dt * generator magnitude >= 0.1; reduce the step");

    const auto steps = static_cast<long>(std::llround(t_final / dt));
    std::vector<GroundDensity> traj;
    traj.push_back(initial);
    Eigen::MatrixXcd rho = initial.rho;
    for (long s = 1; s <= steps; ++s) {
        const Eigen::MatrixXcd k1 = lindblad_rhs(rho, h.matrix, lindblads);
        const Eigen::MatrixXcd k2 = lindblad_rhs(rho + 0.5 * dt * k1, h.matrix, lindblads);
        const Eigen::MatrixXcd k3 = lindblad_rhs(rho + 0.5 * dt * k2, h.matrix, lindblads);
        const Eigen::MatrixXcd k4 = lindblad_rhs(rho + dt * k3, h.matrix, lindblads);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        if (s % sample_every == 0 || s == steps)
            traj.push_back({rho, initial.time + dt * static_cast<double>(s)});
    }
    return traj;
}

Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& hamiltonian,
                             const std::vector<Eigen::MatrixXcd>& jumps) {
    const Eigen::Index n = hamiltonian.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    // column-major vec: vec(A X B) = (B^T kron A) vec(X)
    Eigen::MatrixXcd gen = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    for (const auto& l : jumps) {
        const Eigen::MatrixXcd ldl = l.adjoint() * l;
        gen += kron(l.conjugate(), l);
        gen -= 0.5 * (kron(id, ldl) + kron(ldl.transpose(), id));
    }
    return gen;
}

GroundDensity evolve_exact(const GroundDensity& initial, const EffectiveHamiltonian& h,
                           const std::vector<EffectiveLindblad>& lindblads, double t_final) {
    initial.validate();
    const Eigen::Index n = initial.rho.rows();
    if (n > 16) throw TooLarge("exact propagation limited to 16 ground states");
    std::vector<Eigen::MatrixXcd> js;
    js.reserve(lindblads.size());
    for (const auto& l : lindblads) js.push_back(l.matrix);
    const Eigen::MatrixXcd gen = liouvillian(h.matrix, js);
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(initial.rho.data(), n * n);
    v = (t_final * gen).exp() * v;
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
    rho = 0.5 * (rho + rho.adjoint().eval());
    return {rho, initial.time + t_final};
}

} // namespace escat

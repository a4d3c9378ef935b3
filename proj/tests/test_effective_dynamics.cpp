// test_effective_dynamics.cpp — Effective generators and propagation

#include <doctest.h>

#include <cmath>
#include <random>

#include "escat/effective_dynamics.hpp"
#include "helpers.hpp"

using namespace escat;
using namespace escat::testing;

namespace {

struct Setup {
    SystemSpec spec;
    ManifoldBasis basis;
    std::unique_ptr<Medium> medium;
    NonHermitianHamiltonian h;
    JumpBasis jumps;

    explicit Setup(SystemSpec s) : spec(std::move(s)), basis(build_manifolds(spec)) {
        medium = make_medium(spec.medium);
        const DecayMatrix decay = decay_matrix(spec, basis);
        h = build_nonhermitian(spec, basis, decay, shift_matrix(spec, basis));
        jumps = jump_basis(decay, spec, basis);
    }

    std::pair<EffectiveHamiltonian, std::vector<EffectiveLindblad>> generators(
        const InputField& field) {
        const ExcitationOperator exc = build_excitation(spec, basis, *medium, field);
        return {build_effective_hamiltonian(h, exc, basis, field.omega),
                build_effective_lindblads(jumps, h, exc, basis, field.omega)};
    }
};

InputField envelope_drive(double amplitude, double omega = 0.0) {
    InputField f;
    f.omega = omega;
    f.envelopes = {Vec3c{0.0, 0.0, amplitude}};
    return f;
}

double pump_rate(const std::vector<EffectiveLindblad>& ls, Eigen::Index to, Eigen::Index from) {
    double rate = 0.0;
    for (const auto& l : ls) rate += std::norm(l.matrix(to, from));
    return rate;
}

// Lambda emitter whose second leg only couples to the left mover, so a
// right-mover drive addresses leg 1 alone (clean one-way optical pumping).
EmitterSpec one_way_lambda() {
    EmitterSpec em = lambda_emitter("A", 0.0, 0.6, 0.4);
    em.transitions[1].couplings["right"] = 0.0;
    em.transitions[1].couplings["left"] = 0.4;
    return em;
}

} // namespace

TEST_CASE("excitation operator") {
    SUBCASE("zero field and direct product entries") {
        Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5)}));
        CHECK(build_excitation(s.spec, s.basis, *s.medium, InputField{})
                  .matrix.cwiseAbs()
                  .maxCoeff() == 0.0);
        const auto exc = build_excitation(s.spec, s.basis, *s.medium, envelope_drive(0.05));
        CHECK(std::abs(exc.matrix(0, 0) - Complex{0.05, 0.0}) < 1e-16);
    }
    SUBCASE("half-wave separation flips the drive phase") {
        Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5), two_level("B", 0.5, 0.5, 0.5)}));
        InputField f;
        f.channel_amplitudes["right"] = 0.02;
        const auto exc = build_excitation(s.spec, s.basis, *s.medium, f);
        CHECK(std::abs(exc.matrix(1, 0) + exc.matrix(0, 0)) < 1e-15);
    }
}

TEST_CASE("effective Hamiltonian closed forms") {
    Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5)}));
    SUBCASE("two-level light shift") {
        for (double delta : {-2.0, -0.3, 0.8, 4.0}) {
            const auto [heff, ls] = s.generators(envelope_drive(0.05, delta));
            const double expected = 0.05 * 0.05 * delta / (delta * delta + 0.25);
            CHECK(std::abs(heff.matrix(0, 0) - expected) < 1e-14);
        }
    }
    SUBCASE("zero shift on resonance") {
        const auto [heff, ls] = s.generators(envelope_drive(0.05, 0.0));
        CHECK(std::abs(heff.matrix(0, 0)) < 1e-16);
    }
    SUBCASE("lambda system with both legs driven has a Raman coupling") {
        Setup lam(waveguide_system({lambda_emitter("A", 0.0, 0.6, 0.4)}));
        InputField f;
        f.omega = 2.0;
        f.channel_amplitudes["right"] = 0.05;
        const auto [heff, ls] = lam.generators(f);
        CHECK((heff.matrix - heff.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::abs(heff.matrix(0, 1)) > 1e-6);
    }
}

TEST_CASE("effective Lindblad closed forms") {
    SUBCASE("two-level scattering rate") {
        Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5)}));
        for (double delta : {-1.5, 0.0, 0.6}) {
            const auto [heff, ls] = s.generators(envelope_drive(0.05, delta));
            const double expected = 1.0 * 0.05 * 0.05 / (delta * delta + 0.25);
            CHECK(std::abs(pump_rate(ls, 0, 0) - expected) < 1e-14);
        }
    }
    SUBCASE("zero drive gives zero operators") {
        Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5)}));
        const auto [heff, ls] = s.generators(InputField{});
        for (const auto& l : ls) CHECK(l.matrix.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("lambda pumping path and rate") {
        Setup lam(waveguide_system({one_way_lambda()}));
        InputField f;
        f.channel_amplitudes["right"] = 0.05 / std::sqrt(0.3); // leg-1 drive A = 0.05
        const auto [heff, ls] = lam.generators(f);
        const Eigen::Index g1 = lam.basis.ground_index({0});
        const Eigen::Index g2 = lam.basis.ground_index({1});
        // optical pumping g1 -> g2 at Gamma_2 |A|^2 / (Gamma^2/4)
        const double expected = 0.4 * 0.05 * 0.05 / 0.25;
        CHECK(std::abs(pump_rate(ls, g2, g1) - expected) < 1e-12);
        CHECK(pump_rate(ls, g1, g2) == 0.0); // leg 2 is not driven
    }
    SUBCASE("drive scaling is second order") {
        Setup lam(waveguide_system({lambda_emitter("A", 0.0, 0.6, 0.4)}));
        const Eigen::Index g1 = lam.basis.ground_index({0});
        const Eigen::Index g2 = lam.basis.ground_index({1});
        InputField f;
        f.omega = 1.3; // off resonance so the light shift is nonzero
        f.channel_amplitudes["right"] = 0.01;
        const auto [h1, l1] = lam.generators(f);
        const double base = pump_rate(l1, g2, g1);
        for (double scale : {2.0, 4.0}) {
            InputField fs = f;
            fs.channel_amplitudes["right"] = 0.01 * scale;
            const auto [hs, lss] = lam.generators(fs);
            CHECK(std::abs(pump_rate(lss, g2, g1) / base - scale * scale) < 1e-9);
            CHECK(std::abs(hs.matrix(0, 0) / h1.matrix(0, 0) - scale * scale) < 1e-9);
        }
    }
}

TEST_CASE("evolution") {
    SUBCASE("zero drive only rotates ground coherences") {
        Setup s(waveguide_system(
            {lambda_emitter("A", 0.0, 0.6, 0.4, /*splitting=*/0.3)}));
        const auto [heff, ls] = s.generators(InputField{});
        GroundDensity rho0;
        rho0.rho = Eigen::MatrixXcd::Constant(2, 2, 0.5);
        const auto traj = evolve(rho0, heff, ls, 5.0, 0.005, 200);
        for (const auto& st : traj) {
            CHECK(std::abs(st.rho(0, 0) - 0.5) < 1e-12);
            CHECK(std::abs(st.rho(1, 1) - 0.5) < 1e-12);
            const Complex expected = 0.5 * std::exp(Complex{0.0, 0.3 * st.time});
            CHECK(std::abs(st.rho(0, 1) - expected) < 1e-10);
        }
    }
    SUBCASE("lambda population pumps into the undriven ground state") {
        Setup lam(waveguide_system({one_way_lambda()}));
        InputField f;
        f.channel_amplitudes["right"] = 0.05 / std::sqrt(0.3);
        const auto [heff, ls] = lam.generators(f);
        GroundDensity rho0;
        rho0.rho = Eigen::MatrixXcd::Zero(2, 2);
        rho0.rho(0, 0) = 1.0;
        const double rate = 0.4 * 0.05 * 0.05 / 0.25;
        const double horizon = 16.0 / rate;
        const auto traj = evolve(rho0, heff, ls, horizon, 0.02, 5000);
        CHECK(traj.back().rho(1, 1).real() > 1.0 - 1e-6);
        // exponential approach at the closed-form rate
        for (const auto& st : traj) {
            const double expected = 1.0 - std::exp(-rate * st.time);
            CHECK(std::abs(st.rho(1, 1).real() - expected) < 1e-4);
        }
    }
    SUBCASE("trajectory invariants hold") {
        Setup lam(waveguide_system({lambda_emitter("A", 0.0, 0.5, 0.5, 0.2)}));
        InputField f;
        f.omega = 0.4;
        f.channel_amplitudes["right"] = 0.08;
        const auto [heff, ls] = lam.generators(f);
        GroundDensity rho0;
        rho0.rho = Eigen::MatrixXcd::Zero(2, 2);
        rho0.rho(0, 0) = 0.7;
        rho0.rho(1, 1) = 0.3;
        for (const auto& st : evolve(rho0, heff, ls, 50.0, 0.01, 100)) {
            CHECK(std::abs(st.rho.trace() - Complex{1.0, 0.0}) < 1e-9);
            CHECK((st.rho - st.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(st.rho);
            CHECK(es.eigenvalues().minCoeff() > -1e-7);
        }
    }
    SUBCASE("oversized steps are rejected") {
        Setup s(waveguide_system({two_level("A", 0.0, 0.5, 0.5)}));
        const auto [heff, ls] = s.generators(envelope_drive(0.5, 0.0));
        GroundDensity rho0;
        rho0.rho = Eigen::MatrixXcd::Identity(1, 1);
        CHECK_THROWS_AS(evolve(rho0, heff, ls, 1.0, 1e4, 1), StepTooLarge);
    }
}

TEST_CASE("RK4 agrees with the dense exponential on random systems") {
    std::mt19937 rng(17);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 5; ++trial) {
        const int dim = 4;
        Eigen::MatrixXcd hm(dim, dim), lm(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                hm(i, j) = 0.3 * Complex{n(rng), n(rng)};
                lm(i, j) = 0.3 * Complex{n(rng), n(rng)};
            }
        EffectiveHamiltonian heff{(hm + hm.adjoint()).eval()};
        std::vector<EffectiveLindblad> ls{{"rand", lm}};
        GroundDensity rho0;
        rho0.rho = Eigen::MatrixXcd::Zero(dim, dim);
        rho0.rho(0, 0) = 0.5;
        rho0.rho(1, 1) = 0.5;
        const auto traj = evolve(rho0, heff, ls, 10.0, 0.002, 500);
        for (const auto& st : traj) {
            const GroundDensity ref = evolve_exact(rho0, heff, ls, st.time);
            // trace distance = half the nuclear norm of the difference
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(st.rho - ref.rho);
            CHECK(0.5 * es.eigenvalues().cwiseAbs().sum() < 1e-8);
        }
    }
}

TEST_CASE("RK4 convergence order from dt halving") {
    Setup lam(waveguide_system({lambda_emitter("A", 0.0, 0.6, 0.4, 0.1)}));
    InputField f;
    f.omega = 0.2;
    f.channel_amplitudes["right"] = 0.3; // strong enough that truncation error is visible
    const auto [heff, ls] = lam.generators(f);
    GroundDensity rho0;
    rho0.rho = Eigen::MatrixXcd::Zero(2, 2);
    rho0.rho(0, 0) = 1.0;
    const GroundDensity exact = evolve_exact(rho0, heff, ls, 10.0);
    auto error_at = [&](double dt) {
        const auto traj = evolve(rho0, heff, ls, 10.0, dt, 1 << 30);
        return (traj.back().rho - exact.rho).cwiseAbs().maxCoeff();
    };
    const double e1 = error_at(0.08), e2 = error_at(0.04);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.8);
}

TEST_CASE("exact path dimension guard") {
    EffectiveHamiltonian heff{Eigen::MatrixXcd::Zero(17, 17)};
    GroundDensity rho0;
    rho0.rho = Eigen::MatrixXcd::Zero(17, 17);
    rho0.rho(0, 0) = 1.0;
    CHECK_THROWS_AS(evolve_exact(rho0, heff, {}, 1.0), TooLarge);
}

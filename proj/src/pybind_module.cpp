// pybind_module.cpp — Python bindings for the configuration and task layer

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "escat/config.hpp"
#include "escat/effective_dynamics.hpp"
#include "escat/oracle.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace escat;

namespace {

Eigen::MatrixXcd initial_ground(const RunConfig& config, const ManifoldBasis& basis) {
    if (config.evolve.initial.size() > 0) return config.evolve.initial;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(basis.n_ground(), basis.n_ground());
    rho(0, 0) = 1.0;
    return rho;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak-field photon scattering from multi-level emitters in dielectric media";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SchemaError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const InvalidSpec& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    m.def(
        "canonical_config",
        [](const std::string& text) { return emit_config(parse_config(text)); }, "config"_a,
        "Parse a JSON configuration and return its canonical form.");

    m.def(
        "config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        "config"_a, "Deterministic hex hash of the canonical configuration.");

    m.def(
        "spectrum",
        [](const std::string& text, int threads) {
            RunConfig config = parse_config(text);
            const ManifoldBasis basis = build_manifolds(config.system);
            if (config.detectors.empty())
                for (const auto& ch : config.system.medium.channel_ids())
                    config.detectors.emplace_back(ch);
            const auto rows =
                spectrum_sweep(config.system, basis, config.detectors, config.sweep.values(),
                               config.drive, initial_ground(config, basis), threads);
            py::list out;
            for (const auto& r : rows)
                out.append(py::dict("omega"_a = r.omega, "detector"_a = r.detector, "g"_a = r.g,
                                    "g_prime"_a = r.g_prime, "value"_a = r.value,
                                    "singular"_a = r.singular));
            return out;
        },
        "config"_a, "threads"_a = 1,
        "Frequency sweep of detector amplitude coefficients; rows as dicts.");

    m.def(
        "evolve",
        [](const std::string& text) {
            const RunConfig config = parse_config(text);
            const ManifoldBasis basis = build_manifolds(config.system);
            const auto medium = make_medium(config.system.medium);
            const DecayMatrix decay = decay_matrix(config.system, basis);
            const NonHermitianHamiltonian h =
                build_nonhermitian(config.system, basis, decay, shift_matrix(config.system, basis));
            const ExcitationOperator exc =
                build_excitation(config.system, basis, *medium, config.drive);
            const EffectiveHamiltonian heff =
                build_effective_hamiltonian(h, exc, basis, config.drive.omega);
            const auto ls = build_effective_lindblads(jump_basis(decay, config.system, basis), h,
                                                      exc, basis, config.drive.omega);
            GroundDensity rho0;
            rho0.rho = initial_ground(config, basis);
            const auto traj = evolve(rho0, heff, ls, config.evolve.t_final, config.evolve.dt,
                                     config.evolve.sample_every);
            py::list out;
            for (const auto& s : traj) out.append(py::make_tuple(s.time, s.rho));
            return out;
        },
        "config"_a, "Ground-manifold master-equation trajectory as (t, rho) tuples.");

    m.def(
        "single_excitation_rt",
        [](const std::string& text, double omega) {
            return oracle::single_excitation_scattering(parse_config(text).system, omega);
        },
        "config"_a, "omega"_a,
        "Exact one-photon (r, t) for symmetric two-level chains in a 1D waveguide.");

    m.def(
        "run",
        [](const std::string& text, const std::string& out_dir, const std::string& task,
           int threads) {
            std::string err;
            const int code = run(parse_config(text), out_dir, threads, task, &err);
            if (code != 0) throw std::runtime_error(err.empty() ? "task failed" : err);
        },
        "config"_a, "out_dir"_a, "task"_a = "", "threads"_a = 1,
        "Execute the configured task, writing CSV and metadata files.");
}

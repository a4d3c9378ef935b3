// helpers.hpp — Shared builders for the test systems

#pragma once

#include <random>

#include "escat/core_model.hpp"

namespace escat::testing {

// Two-level emitter with waveguide couplings g_right/g_left and optional extra
// loss into a 3D "rad" channel; detuning = excited level energy.
inline EmitterSpec two_level(const std::string& id, double x, double g_right, double g_left,
                             double loss = 0.0, double detuning = 0.0) {
    EmitterSpec em;
    em.id = id;
    em.position = Vec3{x, 0.0, 0.0};
    em.levels = {{"g", 0.0, LevelKind::Ground}, {"e", detuning, LevelKind::Excited}};
    Transition t;
    t.excited_label = "e";
    t.ground_label = "g";
    t.orientation = Vec3c{0.0, 0.0, 1.0};
    if (g_right > 0.0) t.couplings["right"] = g_right;
    if (g_left > 0.0) t.couplings["left"] = g_left;
    if (loss > 0.0) t.couplings["rad"] = loss;
    em.transitions = {t};
    return em;
}

// Lambda emitter: one excited level, grounds g1/g2 split by `splitting`, legs
// with waveguide rates (gr1, gl1) and (gr2, gl2).
inline EmitterSpec lambda_emitter(const std::string& id, double x, double g1_rate, double g2_rate,
                                  double splitting = 0.0, double detuning = 0.0) {
    EmitterSpec em;
    em.id = id;
    em.position = Vec3{x, 0.0, 0.0};
    em.levels = {{"g1", 0.0, LevelKind::Ground},
                 {"g2", splitting, LevelKind::Ground},
                 {"e", detuning, LevelKind::Excited}};
    Transition t1;
    t1.excited_label = "e";
    t1.ground_label = "g1";
    t1.orientation = Vec3c{0.0, 0.0, 1.0};
    t1.couplings["right"] = 0.5 * g1_rate;
    t1.couplings["left"] = 0.5 * g1_rate;
    Transition t2 = t1;
    t2.ground_label = "g2";
    t2.couplings["right"] = 0.5 * g2_rate;
    t2.couplings["left"] = 0.5 * g2_rate;
    em.transitions = {t1, t2};
    return em;
}

inline SystemSpec waveguide_system(std::vector<EmitterSpec> emitters, bool with_loss = false) {
    SystemSpec spec;
    spec.emitters = std::move(emitters);
    if (with_loss)
        spec.medium = GreenMediumSpec::composite(
            {GreenMediumSpec::waveguide1d(), GreenMediumSpec::freespace3d("rad")});
    else
        spec.medium = GreenMediumSpec::waveguide1d();
    return spec;
}

inline SystemSpec freespace_system(std::vector<EmitterSpec> emitters) {
    SystemSpec spec;
    spec.emitters = std::move(emitters);
    spec.medium = GreenMediumSpec::freespace3d();
    return spec;
}

inline Vec3c random_orientation(std::mt19937& rng) {
    std::normal_distribution<double> n;
    Vec3c v;
    for (int i = 0; i < 3; ++i) v(i) = Complex{n(rng), n(rng)};
    return v / v.norm();
}

} // namespace escat::testing

// core_model.cpp — Manifold enumeration and collective dipole elements

#include "escat/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace escat {

double Transition::total_rate() const {
    double sum = 0.0;
    for (const auto& [ch, rate] : couplings) sum += rate;
    return sum;
}

double Transition::coupling(const std::string& channel) const {
    auto it = couplings.find(channel);
    return it == couplings.end() ? 0.0 : it->second;
}

std::vector<int> EmitterSpec::ground_levels() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(levels.size()); ++i)
        if (levels[static_cast<size_t>(i)].kind == LevelKind::Ground) out.push_back(i);
    return out;
}

std::vector<int> EmitterSpec::excited_levels() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(levels.size()); ++i)
        if (levels[static_cast<size_t>(i)].kind == LevelKind::Excited) out.push_back(i);
    return out;
}

int EmitterSpec::level_index(const std::string& label) const {
    for (int i = 0; i < static_cast<int>(levels.size()); ++i)
        if (levels[static_cast<size_t>(i)].label == label) return i;
    return -1;
}

int EmitterSpec::transition_index(const std::string& excited, const std::string& ground) const {
    for (int i = 0; i < static_cast<int>(transitions.size()); ++i) {
        const auto& t = transitions[static_cast<size_t>(i)];
        if (t.excited_label == excited && t.ground_label == ground) return i;
    }
    return -1;
}

void EmitterSpec::validate() const {
    if (levels.empty()) throw InvalidSpec("emitter '" + id + "' has no levels");
    for (size_t i = 0; i < levels.size(); ++i)
        for (size_t j = i + 1; j < levels.size(); ++j)
            if (levels[i].label == levels[j].label)
                throw InvalidSpec("emitter '" + id + "' has duplicate level label '" + levels[i].label + "'");
    if (ground_levels().empty())
        throw InvalidSpec("emitter '" + id + "' has no ground level");
    if (excited_levels().empty())
        throw InvalidSpec("emitter '" + id + "' has no excited level");

    std::vector<std::pair<std::string, std::string>> seen;
    for (const auto& t : transitions) {
        const int ei = level_index(t.excited_label);
        const int gi = level_index(t.ground_label);
        if (ei < 0 || levels[static_cast<size_t>(ei)].kind != LevelKind::Excited)
            throw InvalidSpec("emitter '" + id + "': transition excited label '" + t.excited_label +
                              "' is not an excited level");
        if (gi < 0 || levels[static_cast<size_t>(gi)].kind != LevelKind::Ground)
            throw InvalidSpec("emitter '" + id + "': transition ground label '" + t.ground_label +
                              "' is not a ground level");
        auto key = std::make_pair(t.excited_label, t.ground_label);
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw InvalidSpec("emitter '" + id + "': duplicate transition " + t.excited_label + "->" +
                              t.ground_label);
        seen.push_back(key);
        const double norm = t.orientation.norm();
        if (std::abs(norm - 1.0) > 1e-9)
            throw InvalidSpec("emitter '" + id + "': transition " + t.excited_label + "->" +
                              t.ground_label + " orientation is not unit norm");
        for (const auto& [ch, rate] : t.couplings)
            if (rate < 0.0)
                throw InvalidSpec("emitter '" + id + "': negative coupling rate on channel '" + ch + "'");
    }
}

void SystemSpec::validate() const {
    if (emitters.empty()) throw InvalidSpec("system has no emitters");
    for (const auto& em : emitters) em.validate();
    for (size_t i = 0; i < emitters.size(); ++i)
        for (size_t j = i + 1; j < emitters.size(); ++j)
            if (emitters[i].id == emitters[j].id)
                throw InvalidSpec("duplicate emitter id '" + emitters[i].id + "'");
    medium.validate();
    if (hc_excited.size() > 0) {
        if (hc_excited.rows() != hc_excited.cols())
            throw InvalidSpec("hc_excited must be square");
        if ((hc_excited - hc_excited.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidSpec("hc_excited is not Hermitian to 1e-12");
    }
}

Eigen::Index ManifoldBasis::ground_index(const std::vector<int>& choice) const {
    auto it = ground_lookup_.find(choice);
    if (it == ground_lookup_.end()) throw InvalidSpec("unknown collective ground state");
    return it->second;
}

Eigen::Index ManifoldBasis::excited_index(int emitter, int excited_choice,
                                          const std::vector<int>& spectators) const {
    auto it = excited_lookup_.find(std::make_tuple(emitter, excited_choice, spectators));
    if (it == excited_lookup_.end()) throw InvalidSpec("unknown collective excited state");
    return it->second;
}

std::string ManifoldBasis::ground_label(Eigen::Index g) const {
    const auto& st = ground(g);
    std::ostringstream os;
    for (size_t j = 0; j < spec_->emitters.size(); ++j) {
        const auto& em = spec_->emitters[j];
        if (j) os << ",";
        os << em.levels[static_cast<size_t>(em.ground_levels()[static_cast<size_t>(st.ground_choice[j])])].label;
    }
    return os.str();
}

std::string ManifoldBasis::excited_label(Eigen::Index e) const {
    const auto& st = excited(e);
    std::ostringstream os;
    for (size_t j = 0; j < spec_->emitters.size(); ++j) {
        const auto& em = spec_->emitters[j];
        if (j) os << ",";
        if (static_cast<int>(j) == st.emitter)
            os << em.levels[static_cast<size_t>(em.excited_levels()[static_cast<size_t>(st.excited_choice)])].label;
        else
            os << em.levels[static_cast<size_t>(em.ground_levels()[static_cast<size_t>(st.spectators[j])])].label;
    }
    return os.str();
}

std::optional<std::pair<int, int>> ManifoldBasis::connecting_leg(Eigen::Index e, Eigen::Index g) const {
    const auto& es = excited(e);
    const auto& gs = ground(g);
    const int j = es.emitter;
    for (size_t m = 0; m < spec_->emitters.size(); ++m) {
        if (static_cast<int>(m) == j) continue;
        if (es.spectators[m] != gs.ground_choice[m]) return std::nullopt;
    }
    const auto& em = spec_->emitters[static_cast<size_t>(j)];
    const auto& elabel = em.levels[static_cast<size_t>(em.excited_levels()[static_cast<size_t>(es.excited_choice)])].label;
    const auto& glabel = em.levels[static_cast<size_t>(em.ground_levels()[static_cast<size_t>(gs.ground_choice[static_cast<size_t>(j)])])].label;
    const int ti = em.transition_index(elabel, glabel);
    if (ti < 0) return std::nullopt;
    return std::make_pair(j, ti);
}

double ManifoldBasis::ground_energy(Eigen::Index g) const {
    const auto& st = ground(g);
    double sum = 0.0;
    for (size_t j = 0; j < spec_->emitters.size(); ++j) {
        const auto& em = spec_->emitters[j];
        sum += em.levels[static_cast<size_t>(em.ground_levels()[static_cast<size_t>(st.ground_choice[j])])].energy;
    }
    if (spec_->hc_ground.size() > 0) sum += spec_->hc_ground(g);
    return sum;
}

double ManifoldBasis::excited_energy(Eigen::Index e) const {
    const auto& st = excited(e);
    double sum = 0.0;
    for (size_t j = 0; j < spec_->emitters.size(); ++j) {
        const auto& em = spec_->emitters[j];
        if (static_cast<int>(j) == st.emitter)
            sum += em.levels[static_cast<size_t>(em.excited_levels()[static_cast<size_t>(st.excited_choice)])].energy;
        else
            sum += em.levels[static_cast<size_t>(em.ground_levels()[static_cast<size_t>(st.spectators[j])])].energy;
    }
    return sum;
}

namespace {

// Mixed-radix enumeration over per-emitter ground choices, emitter 0 slowest.
void enumerate_ground_configs(const std::vector<int>& radix,
                              const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> digits(radix.size(), 0);
    while (true) {
        fn(digits);
        int pos = static_cast<int>(radix.size()) - 1;
        while (pos >= 0) {
            if (++digits[static_cast<size_t>(pos)] < radix[static_cast<size_t>(pos)]) break;
            digits[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

} // namespace

ManifoldBasis build_manifolds(const SystemSpec& spec) {
    spec.validate();
    ManifoldBasis basis;
    basis.spec_ = &spec;

    const size_t n = spec.emitters.size();
    std::vector<int> ground_radix(n);
    for (size_t j = 0; j < n; ++j)
        ground_radix[j] = static_cast<int>(spec.emitters[j].ground_levels().size());

    enumerate_ground_configs(ground_radix, [&](const std::vector<int>& cfg) {
        basis.ground_lookup_[cfg] = basis.n_ground();
        basis.ground_states_.push_back(CollectiveGround{cfg});
    });

    for (size_t j = 0; j < n; ++j) {
        const int n_exc = static_cast<int>(spec.emitters[j].excited_levels().size());
        std::vector<int> spect_radix = ground_radix;
        spect_radix[j] = 1; // placeholder digit, remapped to -1 below
        for (int x = 0; x < n_exc; ++x) {
            enumerate_ground_configs(spect_radix, [&](const std::vector<int>& cfg) {
                std::vector<int> spect = cfg;
                spect[j] = -1;
                basis.excited_lookup_[std::make_tuple(static_cast<int>(j), x, spect)] = basis.n_excited();
                basis.excited_states_.push_back(CollectiveExcited{static_cast<int>(j), x, spect});
            });
        }
    }

    if (spec.hc_excited.size() > 0 && spec.hc_excited.rows() != basis.n_excited())
        throw InvalidSpec("hc_excited dimension does not match |M_e|");
    if (spec.hc_ground.size() > 0 && spec.hc_ground.size() != basis.n_ground())
        throw InvalidSpec("hc_ground dimension does not match |M_g|");
    return basis;
}

Vec3c collective_dipole(const ManifoldBasis& basis, Eigen::Index e, Eigen::Index g,
                        int emitter, const std::string& channel) {
    const auto leg = basis.connecting_leg(e, g);
    if (!leg || leg->first != emitter) return Vec3c::Zero();
    const auto& t = basis.spec().emitters[static_cast<size_t>(leg->first)]
                        .transitions[static_cast<size_t>(leg->second)];
    return std::sqrt(t.coupling(channel)) * t.orientation;
}

} // namespace escat

// green_media.cpp — Waveguide, free-space, and composite medium responses

#include "escat/green_media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace escat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// sum_a o_a * conj(o'_a)
Complex orientation_overlap(const Vec3c& a, const Vec3c& b) {
    return b.dot(a); // Eigen dot conjugates its first argument
}

double sqrt_rate_pair(const DipoleLeg& a, const DipoleLeg& b, const std::string& channel) {
    return std::sqrt(a.transition->coupling(channel) * b.transition->coupling(channel));
}

struct Leg {
    int emitter;
    int transition;
};

DipoleLeg make_leg(const SystemSpec& spec, int emitter, int transition) {
    const auto& em = spec.emitters[static_cast<size_t>(emitter)];
    const auto& t = em.transitions[static_cast<size_t>(transition)];
    return DipoleLeg{t.orientation, &t, em.position};
}

// All transition legs with nonzero coupling to any of the given channels.
std::vector<Leg> coupled_legs(const SystemSpec& spec, const std::vector<std::string>& channels) {
    std::vector<Leg> legs;
    for (int j = 0; j < static_cast<int>(spec.emitters.size()); ++j) {
        const auto& em = spec.emitters[static_cast<size_t>(j)];
        for (int t = 0; t < static_cast<int>(em.transitions.size()); ++t) {
            const auto& tr = em.transitions[static_cast<size_t>(t)];
            bool coupled = false;
            for (const auto& ch : channels)
                if (tr.coupling(ch) > 0.0) { coupled = true; break; }
            if (coupled) legs.push_back(Leg{j, t});
        }
    }
    return legs;
}

// Spectral factorization of the leg-space Gram matrix into jump channels.
void append_spectral_channels(const Medium& medium, const SystemSpec& spec,
                              const ManifoldBasis& basis, double omega,
                              const std::string& label_prefix, JumpBasis& out) {
    const auto legs = coupled_legs(spec, medium.channel_ids());
    if (legs.empty()) return;
    const Eigen::Index nl = static_cast<Eigen::Index>(legs.size());
    Eigen::MatrixXcd gram(nl, nl);
    for (Eigen::Index i = 0; i < nl; ++i)
        for (Eigen::Index j = 0; j < nl; ++j)
            gram(i, j) = medium.decay_entry(make_leg(spec, legs[static_cast<size_t>(i)].emitter,
                                                     legs[static_cast<size_t>(i)].transition),
                                            make_leg(spec, legs[static_cast<size_t>(j)].emitter,
                                                     legs[static_cast<size_t>(j)].transition),
                                            omega);
    gram = 0.5 * (gram + gram.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) throw Error("jump_basis: eigensolver failed");
    for (Eigen::Index k = 0; k < nl; ++k) {
        const double lambda = es.eigenvalues()(k);
        if (lambda < -1e-10)
            throw NotPositiveSemidefinite("leg decay matrix has eigenvalue " + std::to_string(lambda));
        if (lambda < 1e-12) continue;
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.n_ground(), basis.n_excited());
        for (Eigen::Index e = 0; e < basis.n_excited(); ++e)
            for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
                const auto leg = basis.connecting_leg(e, g);
                if (!leg) continue;
                for (Eigen::Index l = 0; l < nl; ++l)
                    if (legs[static_cast<size_t>(l)].emitter == leg->first &&
                        legs[static_cast<size_t>(l)].transition == leg->second)
                        op(g, e) = std::sqrt(lambda) * std::conj(es.eigenvectors()(l, k));
            }
        if (op.norm() < 1e-15) continue;
        out.channels.push_back({label_prefix + ":" + std::to_string(k), std::move(op)});
    }
}

} // namespace

Complex Medium::channel_amplitude(size_t, const DipoleLeg&, double) const {
    throw Error("medium has no explicit jump channels");
}

Complex Medium::drive_amplitude(const std::string& channel_id, const DipoleLeg&, const Vec3c&,
                                double) const {
    throw InvalidSpec("channel drive through '" + channel_id + "' is not supported by this medium");
}

// ---------------------------------------------------------------------------
// 1D waveguide: guided right/left movers, axial phase 2*pi*x.

class Waveguide1D final : public Medium {
public:
    explicit Waveguide1D(const Waveguide1DSpec& spec) : spec_(spec) {}

    std::vector<std::string> channel_ids() const override {
        return {spec_.right_channel, spec_.left_channel};
    }

    double wavenumber(double omega) const {
        if (spec_.carrier_frequency > 0.0)
            return 2.0 * kPi * (1.0 + omega / spec_.carrier_frequency);
        return 2.0 * kPi;
    }

    // Directional (cascaded) radiative pair element h with H_rad = h; the
    // Hermitian/anti-Hermitian split below recovers shift and decay.
    Complex pair_element(const DipoleLeg& a, const DipoleLeg& b, double omega) const {
        const double k = wavenumber(omega);
        const double dx = a.position.x() - b.position.x();
        const Complex odot = orientation_overlap(a.orientation, b.orientation);
        const double rr = sqrt_rate_pair(a, b, spec_.right_channel);
        const double ll = sqrt_rate_pair(a, b, spec_.left_channel);
        if (dx > 0.0) return -kI * rr * std::exp(kI * (k * dx)) * odot;
        if (dx < 0.0) return -kI * ll * std::exp(-kI * (k * dx)) * odot;
        return -0.5 * kI * (rr + ll) * odot;
    }

    Complex decay_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        return kI * (pair_element(a, b, omega) - std::conj(pair_element(b, a, omega)));
    }

    Complex shift_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        return 0.5 * (pair_element(a, b, omega) + std::conj(pair_element(b, a, omega)));
    }

    Eigen::Matrix3cd green_dyadic(const Vec3& r, const Vec3& rp, double omega) const override {
        const double k = wavenumber(omega);
        const Complex g = 0.5 * kI * std::exp(kI * (k * std::abs(r.x() - rp.x())));
        return g * Eigen::Matrix3cd::Identity();
    }

    std::vector<ExplicitChannel> explicit_channels() const override {
        static const char* comp[3] = {"x", "y", "z"};
        std::vector<ExplicitChannel> out;
        for (int c = 0; c < 3; ++c) out.push_back({spec_.right_channel + ":" + comp[c]});
        for (int c = 0; c < 3; ++c) out.push_back({spec_.left_channel + ":" + comp[c]});
        return out;
    }

    Complex channel_amplitude(size_t channel, const DipoleLeg& leg, double omega) const override {
        const double k = wavenumber(omega);
        const bool right = channel < 3;
        const int comp = static_cast<int>(channel % 3);
        const double g = leg.transition->coupling(right ? spec_.right_channel : spec_.left_channel);
        const Complex phase = std::exp(kI * (right ? -k : k) * leg.position.x());
        return std::sqrt(g) * phase * std::conj(leg.orientation(comp));
    }

    Complex drive_amplitude(const std::string& channel_id, const DipoleLeg& leg,
                            const Vec3c& polarization, double omega) const override {
        const double k = wavenumber(omega);
        const Complex odot = (leg.orientation.transpose() * polarization).value(); // no conjugation
        if (channel_id == spec_.right_channel)
            return std::sqrt(leg.transition->coupling(channel_id)) *
                   std::exp(kI * (k * leg.position.x())) * odot;
        if (channel_id == spec_.left_channel)
            return std::sqrt(leg.transition->coupling(channel_id)) *
                   std::exp(-kI * (k * leg.position.x())) * odot;
        throw InvalidSpec("unknown waveguide channel '" + channel_id + "'");
    }

    bool is_waveguide() const override { return true; }

private:
    Waveguide1DSpec spec_;
};

// ---------------------------------------------------------------------------
// 3D free space: closed-form dyadic with near, intermediate, and far terms.

class FreeSpace3D final : public Medium {
public:
    explicit FreeSpace3D(const FreeSpace3DSpec& spec) : spec_(spec) {}

    std::vector<std::string> channel_ids() const override { return {spec_.channel}; }

    double wavenumber(double omega) const {
        if (spec_.carrier_frequency > 0.0)
            return 2.0 * kPi * (1.0 + omega / spec_.carrier_frequency);
        return 2.0 * kPi;
    }

    Eigen::Matrix3cd green_dyadic(const Vec3& r, const Vec3& rp, double omega) const override {
        const double k = wavenumber(omega);
        const Vec3 d = r - rp;
        const double R = d.norm();
        if (R < 1e-12) throw SingularSelfTerm("free-space Green tensor at coincident points");
        const double kR = k * R;
        const Vec3 n = d / R;
        const Complex pre = std::exp(kI * kR) / (4.0 * kPi * R);
        const Complex a = 1.0 + kI / kR - 1.0 / (kR * kR);
        const Complex b = -1.0 - 3.0 * kI / kR + 3.0 / (kR * kR);
        Eigen::Matrix3cd G = pre * (a * Eigen::Matrix3cd::Identity() +
                                    b * (n * n.transpose()).cast<Complex>());
        return G;
    }

    Complex decay_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        const double rate = sqrt_rate_pair(a, b, spec_.channel);
        if (rate == 0.0) return 0.0;
        const double R = (a.position - b.position).norm();
        if (R < 1e-12) return rate * orientation_overlap(a.orientation, b.orientation);
        const double k = wavenumber(omega);
        const Eigen::Matrix3d im = green_dyadic(a.position, b.position, omega).imag();
        const Complex proj = (a.orientation.transpose() * im.cast<Complex>() *
                              b.orientation.conjugate())
                                 .value();
        return rate * (6.0 * kPi / k) * proj;
    }

    Complex shift_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        const double rate = sqrt_rate_pair(a, b, spec_.channel);
        if (rate == 0.0) return 0.0;
        const double R = (a.position - b.position).norm();
        if (R < 1e-12)
            throw SingularSelfTerm("free-space dipolar shift diverges at coincident emitters");
        const double k = wavenumber(omega);
        const Eigen::Matrix3d re = green_dyadic(a.position, b.position, omega).real();
        const Complex proj = (a.orientation.transpose() * re.cast<Complex>() *
                              b.orientation.conjugate())
                                 .value();
        return -rate * (3.0 * kPi / k) * proj;
    }

private:
    FreeSpace3DSpec spec_;
};

// ---------------------------------------------------------------------------
// Composite: disjoint channel groups summed.

class CompositeMedium final : public Medium {
public:
    explicit CompositeMedium(const GreenMediumSpec& spec) {
        for (const auto& m : spec.members) members_.push_back(make_medium(m));
    }

    std::vector<std::string> channel_ids() const override {
        std::vector<std::string> out;
        for (const auto& m : members_)
            for (auto& id : m->channel_ids()) out.push_back(id);
        return out;
    }

    Complex decay_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        Complex sum = 0.0;
        for (const auto& m : members_) sum += m->decay_entry(a, b, omega);
        return sum;
    }

    Complex shift_entry(const DipoleLeg& a, const DipoleLeg& b, double omega) const override {
        Complex sum = 0.0;
        for (const auto& m : members_) sum += m->shift_entry(a, b, omega);
        return sum;
    }

    Eigen::Matrix3cd green_dyadic(const Vec3& r, const Vec3& rp, double omega) const override {
        Eigen::Matrix3cd sum = Eigen::Matrix3cd::Zero();
        for (const auto& m : members_) sum += m->green_dyadic(r, rp, omega);
        return sum;
    }

    std::vector<ExplicitChannel> explicit_channels() const override {
        std::vector<ExplicitChannel> out;
        channel_owner_.clear();
        for (size_t mi = 0; mi < members_.size(); ++mi) {
            auto ch = members_[mi]->explicit_channels();
            for (size_t c = 0; c < ch.size(); ++c) {
                channel_owner_.emplace_back(mi, c);
                out.push_back(ch[c]);
            }
        }
        return out;
    }

    Complex channel_amplitude(size_t channel, const DipoleLeg& leg, double omega) const override {
        if (channel_owner_.empty()) explicit_channels();
        const auto& [mi, local] = channel_owner_.at(channel);
        return members_[mi]->channel_amplitude(local, leg, omega);
    }

    Complex drive_amplitude(const std::string& channel_id, const DipoleLeg& leg,
                            const Vec3c& polarization, double omega) const override {
        for (const auto& m : members_) {
            auto ids = m->channel_ids();
            if (std::find(ids.begin(), ids.end(), channel_id) != ids.end())
                return m->drive_amplitude(channel_id, leg, polarization, omega);
        }
        throw InvalidSpec("no medium member owns channel '" + channel_id + "'");
    }

    bool is_waveguide() const override {
        for (const auto& m : members_)
            if (m->is_waveguide()) return true;
        return false;
    }

    const std::vector<std::unique_ptr<Medium>>& members() const { return members_; }

private:
    std::vector<std::unique_ptr<Medium>> members_;
    mutable std::vector<std::pair<size_t, size_t>> channel_owner_;
};

std::unique_ptr<Medium> make_medium(const GreenMediumSpec& spec) {
    spec.validate();
    switch (spec.variant) {
        case MediumVariant::Waveguide1D: return std::make_unique<Waveguide1D>(spec.waveguide);
        case MediumVariant::FreeSpace3D: return std::make_unique<FreeSpace3D>(spec.freespace);
        case MediumVariant::Composite: return std::make_unique<CompositeMedium>(spec);
    }
    throw InvalidSpec("unknown medium variant");
}

// ---------------------------------------------------------------------------
// GreenMediumSpec

std::vector<std::string> GreenMediumSpec::channel_ids() const {
    switch (variant) {
        case MediumVariant::Waveguide1D:
            return {waveguide.right_channel, waveguide.left_channel};
        case MediumVariant::FreeSpace3D:
            return {freespace.channel};
        case MediumVariant::Composite: {
            std::vector<std::string> out;
            for (const auto& m : members)
                for (auto& id : m.channel_ids()) out.push_back(id);
            return out;
        }
    }
    return {};
}

void GreenMediumSpec::validate() const {
    if (variant == MediumVariant::Waveguide1D &&
        waveguide.right_channel == waveguide.left_channel)
        throw InvalidSpec("waveguide right/left channel ids must differ");
    if (variant == MediumVariant::Composite) {
        if (members.empty()) throw InvalidSpec("composite medium has no members");
        for (const auto& m : members) m.validate();
    }
    auto ids = channel_ids();
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw InvalidSpec("duplicate medium channel id");
}

// ---------------------------------------------------------------------------
// Collective matrices over M_e

namespace {

template <typename EntryFn>
Eigen::MatrixXcd assemble(const SystemSpec& spec, const ManifoldBasis& basis, EntryFn&& entry) {
    const Eigen::Index ne = basis.n_excited();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ne, ne);
    for (Eigen::Index e = 0; e < ne; ++e)
        for (Eigen::Index ep = e; ep < ne; ++ep) {
            Complex sum = 0.0;
            for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
                const auto la = basis.connecting_leg(e, g);
                if (!la) continue;
                const auto lb = basis.connecting_leg(ep, g);
                if (!lb) continue;
                sum += entry(make_leg(spec, la->first, la->second),
                             make_leg(spec, lb->first, lb->second), la->first, lb->first);
            }
            out(e, ep) = sum;
            out(ep, e) = std::conj(sum);
        }
    return out;
}

} // namespace

DecayMatrix decay_matrix(const SystemSpec& spec, const ManifoldBasis& basis, double omega_ref) {
    auto medium = make_medium(spec.medium);
    auto m = assemble(spec, basis, [&](const DipoleLeg& a, const DipoleLeg& b, int, int) {
        return medium->decay_entry(a, b, omega_ref);
    });
    return DecayMatrix{std::move(m)};
}

ShiftMatrix shift_matrix(const SystemSpec& spec, const ManifoldBasis& basis, double omega_ref) {
    auto medium = make_medium(spec.medium);
    auto m = assemble(spec, basis, [&](const DipoleLeg& a, const DipoleLeg& b, int ja, int jb) {
        if (ja == jb) return Complex{0.0, 0.0}; // single-emitter Lamb shifts absorbed
        return medium->shift_entry(a, b, omega_ref);
    });
    return ShiftMatrix{std::move(m)};
}

Eigen::MatrixXcd JumpBasis::gram() const {
    if (channels.empty()) return Eigen::MatrixXcd();
    Eigen::MatrixXcd sum =
        Eigen::MatrixXcd::Zero(channels.front().op.cols(), channels.front().op.cols());
    for (const auto& ch : channels) sum += ch.op.adjoint() * ch.op;
    return sum;
}

namespace {

void collect_channels(const Medium& medium, const SystemSpec& spec, const ManifoldBasis& basis,
                      double omega, JumpBasis& out) {
    if (const auto* comp = dynamic_cast<const CompositeMedium*>(&medium)) {
        for (const auto& m : comp->members()) collect_channels(*m, spec, basis, omega, out);
        return;
    }
    const auto explicit_ch = medium.explicit_channels();
    if (explicit_ch.empty()) {
        append_spectral_channels(medium, spec, basis, omega, medium.channel_ids().front(), out);
        return;
    }
    for (size_t k = 0; k < explicit_ch.size(); ++k) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.n_ground(), basis.n_excited());
        for (Eigen::Index e = 0; e < basis.n_excited(); ++e)
            for (Eigen::Index g = 0; g < basis.n_ground(); ++g) {
                const auto leg = basis.connecting_leg(e, g);
                if (!leg) continue;
                op(g, e) = medium.channel_amplitude(k, make_leg(spec, leg->first, leg->second), omega);
            }
        if (op.norm() < 1e-15) continue;
        out.channels.push_back({explicit_ch[k].label, std::move(op)});
    }
}

} // namespace

JumpBasis jump_basis(const DecayMatrix& decay, const SystemSpec& spec, const ManifoldBasis& basis,
                     double omega_ref) {
    if (decay.matrix.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(decay.matrix);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NotPositiveSemidefinite("decay matrix has eigenvalue " +
                                          std::to_string(es.eigenvalues().minCoeff()));
    }
    auto medium = make_medium(spec.medium);
    JumpBasis out;
    collect_channels(*medium, spec, basis, omega_ref, out);
    return out;
}

std::vector<std::pair<int, int>> rwa_violations(const SystemSpec& spec) {
    bool has_3d = spec.medium.variant == MediumVariant::FreeSpace3D;
    if (spec.medium.variant == MediumVariant::Composite)
        for (const auto& m : spec.medium.members)
            if (m.variant == MediumVariant::FreeSpace3D) has_3d = true;
    std::vector<std::pair<int, int>> out;
    if (!has_3d) return out;
    for (int i = 0; i < static_cast<int>(spec.emitters.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(spec.emitters.size()); ++j)
            if ((spec.emitters[static_cast<size_t>(i)].position -
                 spec.emitters[static_cast<size_t>(j)].position).norm() < 0.1)
                out.emplace_back(i, j);
    return out;
}

} // namespace escat

// config.cpp — JSON schema handling and task orchestration

#include "escat/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "escat/effective_dynamics.hpp"
#include "escat/oracle.hpp"

namespace escat {

namespace {

using nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void expect_object(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
}

void reject_unknown(const ordered_json& j, const std::string& path,
                    std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (key == k) { known = true; break; }
        if (!known) throw SchemaError(join(path, key), "unknown key");
    }
}

const ordered_json& require(const ordered_json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(join(path, key), "required key missing");
    return *it;
}

double as_number(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

Complex as_complex(const ordered_json& j, const std::string& path) {
    if (j.is_number()) return Complex{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex{j[0].get<double>(), j[1].get<double>()};
    throw SchemaError(path, "expected a number or [re, im] pair");
}

Vec3 as_vec3(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 numbers");
    return Vec3{as_number(j[0], index_path(path, 0)), as_number(j[1], index_path(path, 1)),
                as_number(j[2], index_path(path, 2))};
}

Vec3c as_vec3c(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 complex entries");
    Vec3c v;
    for (size_t i = 0; i < 3; ++i)
        v(static_cast<Eigen::Index>(i)) = as_complex(j[i], index_path(path, i));
    return v;
}

GreenMediumSpec parse_medium(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    const std::string type = as_string(require(j, path, "type"), join(path, "type"));
    GreenMediumSpec spec;
    if (type == "waveguide1d") {
        reject_unknown(j, path, {"type", "right_channel", "left_channel", "carrier_frequency"});
        spec.variant = MediumVariant::Waveguide1D;
        if (j.contains("right_channel"))
            spec.waveguide.right_channel = as_string(j["right_channel"], join(path, "right_channel"));
        if (j.contains("left_channel"))
            spec.waveguide.left_channel = as_string(j["left_channel"], join(path, "left_channel"));
        if (j.contains("carrier_frequency"))
            spec.waveguide.carrier_frequency =
                as_number(j["carrier_frequency"], join(path, "carrier_frequency"));
    } else if (type == "freespace3d") {
        reject_unknown(j, path, {"type", "channel", "carrier_frequency"});
        spec.variant = MediumVariant::FreeSpace3D;
        if (j.contains("channel")) spec.freespace.channel = as_string(j["channel"], join(path, "channel"));
        if (j.contains("carrier_frequency"))
            spec.freespace.carrier_frequency =
                as_number(j["carrier_frequency"], join(path, "carrier_frequency"));
    } else if (type == "composite") {
        reject_unknown(j, path, {"type", "members"});
        spec.variant = MediumVariant::Composite;
        const auto& members = require(j, path, "members");
        if (!members.is_array() || members.empty())
            throw SchemaError(join(path, "members"), "expected a non-empty array");
        for (size_t i = 0; i < members.size(); ++i)
            spec.members.push_back(parse_medium(members[i], index_path(join(path, "members"), i)));
    } else {
        throw SchemaError(join(path, "type"),
                          "expected waveguide1d, freespace3d, or composite");
    }
    return spec;
}

EmitterSpec parse_emitter(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"id", "position", "levels", "transitions"});
    EmitterSpec em;
    em.id = as_string(require(j, path, "id"), join(path, "id"));
    if (j.contains("position")) em.position = as_vec3(j["position"], join(path, "position"));

    const auto& levels = require(j, path, "levels");
    if (!levels.is_array()) throw SchemaError(join(path, "levels"), "expected an array");
    for (size_t i = 0; i < levels.size(); ++i) {
        const std::string lp = index_path(join(path, "levels"), i);
        expect_object(levels[i], lp);
        reject_unknown(levels[i], lp, {"label", "energy", "kind"});
        Level level;
        level.label = as_string(require(levels[i], lp, "label"), join(lp, "label"));
        if (levels[i].contains("energy")) level.energy = as_number(levels[i]["energy"], join(lp, "energy"));
        const std::string kind = as_string(require(levels[i], lp, "kind"), join(lp, "kind"));
        if (kind == "ground") level.kind = LevelKind::Ground;
        else if (kind == "excited") level.kind = LevelKind::Excited;
        else throw SchemaError(join(lp, "kind"), "expected ground or excited");
        em.levels.push_back(std::move(level));
    }

    const auto& transitions = require(j, path, "transitions");
    if (!transitions.is_array()) throw SchemaError(join(path, "transitions"), "expected an array");
    for (size_t i = 0; i < transitions.size(); ++i) {
        const std::string tp = index_path(join(path, "transitions"), i);
        expect_object(transitions[i], tp);
        reject_unknown(transitions[i], tp, {"excited", "ground", "orientation", "couplings"});
        Transition t;
        t.excited_label = as_string(require(transitions[i], tp, "excited"), join(tp, "excited"));
        t.ground_label = as_string(require(transitions[i], tp, "ground"), join(tp, "ground"));
        if (transitions[i].contains("orientation"))
            t.orientation = as_vec3c(transitions[i]["orientation"], join(tp, "orientation"));
        const auto& couplings = require(transitions[i], tp, "couplings");
        expect_object(couplings, join(tp, "couplings"));
        for (const auto& [ch, rate] : couplings.items()) {
            const double r = as_number(rate, join(join(tp, "couplings"), ch));
            if (r < 0.0) throw SchemaError(join(tp, "couplings"), "negative rate on channel " + ch);
            t.couplings[ch] = r;
        }
        em.transitions.push_back(std::move(t));
    }
    return em;
}

Eigen::MatrixXcd parse_matrix(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty matrix");
    const size_t rows = j.size();
    Eigen::MatrixXcd m;
    for (size_t r = 0; r < rows; ++r) {
        const auto& row = j[r];
        const std::string rp = index_path(path, r);
        if (!row.is_array()) throw SchemaError(rp, "expected a matrix row");
        if (r == 0) m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row.size()));
        if (row.size() != static_cast<size_t>(m.cols()))
            throw SchemaError(rp, "ragged matrix rows");
        for (size_t c = 0; c < row.size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                as_complex(row[c], index_path(rp, c));
    }
    return m;
}

} // namespace

std::vector<double> SweepGrid::values() const {
    if (points < 1) throw InvalidSpec("sweep needs at least one point");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(points));
    if (points == 1) {
        out.push_back(min);
        return out;
    }
    for (int i = 0; i < points; ++i)
        out.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1));
    return out;
}

RunConfig parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    expect_object(j, "");
    reject_unknown(j, "", {"units", "medium", "emitters", "hc_excited", "hc_ground", "task",
                           "drive", "sweep", "detectors", "evolve", "output", "tolerances"});

    const auto& units = require(j, "", "units");
    expect_object(units, "units");
    reject_unknown(units, "units", {"rate", "length"});
    if (as_string(require(units, "units", "rate"), "units.rate") != "Gamma0")
        throw SchemaError("units.rate", "only Gamma0 rate units are supported");
    if (as_string(require(units, "units", "length"), "units.length") != "wavelength")
        throw SchemaError("units.length", "only wavelength length units are supported");

    RunConfig config;
    config.system.medium = parse_medium(require(j, "", "medium"), "medium");

    const auto& emitters = require(j, "", "emitters");
    if (!emitters.is_array() || emitters.empty())
        throw SchemaError("emitters", "expected a non-empty array");
    for (size_t i = 0; i < emitters.size(); ++i)
        config.system.emitters.push_back(parse_emitter(emitters[i], index_path("emitters", i)));

    if (j.contains("hc_excited")) config.system.hc_excited = parse_matrix(j["hc_excited"], "hc_excited");
    if (j.contains("hc_ground")) {
        const auto& hg = j["hc_ground"];
        if (!hg.is_array()) throw SchemaError("hc_ground", "expected an array of numbers");
        config.system.hc_ground.resize(static_cast<Eigen::Index>(hg.size()));
        for (size_t i = 0; i < hg.size(); ++i)
            config.system.hc_ground(static_cast<Eigen::Index>(i)) =
                as_number(hg[i], index_path("hc_ground", i));
    }

    if (j.contains("task")) {
        config.task = as_string(j["task"], "task");
        if (config.task != "spectrum" && config.task != "evolve" && config.task != "mint-golden")
            throw SchemaError("task", "expected spectrum, evolve, or mint-golden");
    }

    if (j.contains("drive")) {
        const auto& d = j["drive"];
        expect_object(d, "drive");
        reject_unknown(d, "drive", {"omega", "channels", "polarization", "envelopes"});
        if (d.contains("omega")) config.drive.omega = as_number(d["omega"], "drive.omega");
        if (d.contains("channels")) {
            expect_object(d["channels"], "drive.channels");
            for (const auto& [ch, amp] : d["channels"].items())
                config.drive.channel_amplitudes[ch] = as_complex(amp, join("drive.channels", ch));
        }
        if (d.contains("polarization"))
            config.drive.polarization = as_vec3c(d["polarization"], "drive.polarization");
        if (d.contains("envelopes")) {
            const auto& env = d["envelopes"];
            if (!env.is_array()) throw SchemaError("drive.envelopes", "expected an array");
            for (size_t i = 0; i < env.size(); ++i)
                config.drive.envelopes.push_back(
                    as_vec3c(env[i], index_path("drive.envelopes", i)));
        }
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        expect_object(s, "sweep");
        reject_unknown(s, "sweep", {"min", "max", "points"});
        if (s.contains("min")) config.sweep.min = as_number(s["min"], "sweep.min");
        if (s.contains("max")) config.sweep.max = as_number(s["max"], "sweep.max");
        if (s.contains("points")) {
            config.sweep.points = static_cast<int>(as_number(s["points"], "sweep.points"));
            if (config.sweep.points < 1) throw SchemaError("sweep.points", "must be >= 1");
        }
    }

    if (j.contains("detectors")) {
        const auto& dets = j["detectors"];
        if (!dets.is_array()) throw SchemaError("detectors", "expected an array");
        for (size_t i = 0; i < dets.size(); ++i) {
            const std::string dp = index_path("detectors", i);
            if (dets[i].is_string()) {
                config.detectors.emplace_back(dets[i].get<std::string>());
            } else if (dets[i].is_object()) {
                reject_unknown(dets[i], dp, {"position"});
                config.detectors.emplace_back(as_vec3(require(dets[i], dp, "position"),
                                                      join(dp, "position")));
            } else {
                throw SchemaError(dp, "expected a channel id or {position: [x,y,z]}");
            }
        }
    }

    if (j.contains("evolve")) {
        const auto& e = j["evolve"];
        expect_object(e, "evolve");
        reject_unknown(e, "evolve", {"t_final", "dt", "sample_every", "initial"});
        if (e.contains("t_final")) config.evolve.t_final = as_number(e["t_final"], "evolve.t_final");
        if (e.contains("dt")) config.evolve.dt = as_number(e["dt"], "evolve.dt");
        if (e.contains("sample_every"))
            config.evolve.sample_every = static_cast<int>(as_number(e["sample_every"], "evolve.sample_every"));
        if (e.contains("initial")) config.evolve.initial = parse_matrix(e["initial"], "evolve.initial");
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        expect_object(o, "output");
        reject_unknown(o, "output", {"prefix"});
        if (o.contains("prefix")) config.output_prefix = as_string(o["prefix"], "output.prefix");
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        expect_object(t, "tolerances");
        reject_unknown(t, "tolerances", {"weak_drive_warn"});
        if (t.contains("weak_drive_warn"))
            config.weak_drive_warn = as_number(t["weak_drive_warn"], "tolerances.weak_drive_warn");
    }

    try {
        config.system.validate();
    } catch (const InvalidSpec& e) {
        throw SchemaError("system", e.what());
    }
    return config;
}

namespace {

ordered_json emit_complex(const Complex& c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json emit_vec3c(const Vec3c& v) {
    return ordered_json::array({emit_complex(v(0)), emit_complex(v(1)), emit_complex(v(2))});
}

ordered_json emit_medium(const GreenMediumSpec& spec) {
    ordered_json j;
    switch (spec.variant) {
        case MediumVariant::Waveguide1D:
            j["type"] = "waveguide1d";
            j["right_channel"] = spec.waveguide.right_channel;
            j["left_channel"] = spec.waveguide.left_channel;
            j["carrier_frequency"] = spec.waveguide.carrier_frequency;
            break;
        case MediumVariant::FreeSpace3D:
            j["type"] = "freespace3d";
            j["channel"] = spec.freespace.channel;
            j["carrier_frequency"] = spec.freespace.carrier_frequency;
            break;
        case MediumVariant::Composite:
            j["type"] = "composite";
            j["members"] = ordered_json::array();
            for (const auto& m : spec.members) j["members"].push_back(emit_medium(m));
            break;
    }
    return j;
}

ordered_json emit_matrix(const Eigen::MatrixXcd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(emit_complex(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string emit_config(const RunConfig& config) {
    ordered_json j;
    j["units"] = {{"rate", "Gamma0"}, {"length", "wavelength"}};
    j["medium"] = emit_medium(config.system.medium);
    j["emitters"] = ordered_json::array();
    for (const auto& em : config.system.emitters) {
        ordered_json je;
        je["id"] = em.id;
        je["position"] = {em.position.x(), em.position.y(), em.position.z()};
        je["levels"] = ordered_json::array();
        for (const auto& l : em.levels)
            je["levels"].push_back({{"label", l.label},
                                    {"energy", l.energy},
                                    {"kind", l.kind == LevelKind::Ground ? "ground" : "excited"}});
        je["transitions"] = ordered_json::array();
        for (const auto& t : em.transitions) {
            ordered_json jt;
            jt["excited"] = t.excited_label;
            jt["ground"] = t.ground_label;
            jt["orientation"] = emit_vec3c(t.orientation);
            jt["couplings"] = ordered_json::object();
            for (const auto& [ch, rate] : t.couplings) jt["couplings"][ch] = rate;
            je["transitions"].push_back(std::move(jt));
        }
        j["emitters"].push_back(std::move(je));
    }
    if (config.system.hc_excited.size() > 0) j["hc_excited"] = emit_matrix(config.system.hc_excited);
    if (config.system.hc_ground.size() > 0) {
        ordered_json hg = ordered_json::array();
        for (Eigen::Index i = 0; i < config.system.hc_ground.size(); ++i)
            hg.push_back(config.system.hc_ground(i));
        j["hc_ground"] = std::move(hg);
    }
    j["task"] = config.task;
    ordered_json jd;
    jd["omega"] = config.drive.omega;
    jd["channels"] = ordered_json::object();
    for (const auto& [ch, amp] : config.drive.channel_amplitudes)
        jd["channels"][ch] = emit_complex(amp);
    jd["polarization"] = emit_vec3c(config.drive.polarization);
    if (!config.drive.envelopes.empty()) {
        jd["envelopes"] = ordered_json::array();
        for (const auto& e : config.drive.envelopes) jd["envelopes"].push_back(emit_vec3c(e));
    }
    j["drive"] = std::move(jd);
    j["sweep"] = {{"min", config.sweep.min}, {"max", config.sweep.max}, {"points", config.sweep.points}};
    j["detectors"] = ordered_json::array();
    for (const auto& d : config.detectors) {
        if (std::holds_alternative<std::string>(d)) {
            j["detectors"].push_back(std::get<std::string>(d));
        } else {
            const Vec3& r = std::get<Vec3>(d);
            j["detectors"].push_back({{"position", {r.x(), r.y(), r.z()}}});
        }
    }
    ordered_json je;
    je["t_final"] = config.evolve.t_final;
    je["dt"] = config.evolve.dt;
    je["sample_every"] = config.evolve.sample_every;
    if (config.evolve.initial.size() > 0) je["initial"] = emit_matrix(config.evolve.initial);
    j["evolve"] = std::move(je);
    j["output"] = {{"prefix", config.output_prefix}};
    j["tolerances"] = {{"weak_drive_warn", config.weak_drive_warn}};
    return j.dump(2);
}

std::string config_hash(const RunConfig& config) {
    const std::string canon = emit_config(config);
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_metadata(const std::filesystem::path& path, const RunConfig& config,
                    const std::string& task, double weak_ratio) {
    ordered_json meta;
    meta["spec_hash"] = config_hash(config);
    meta["version"] = "0.1.0";
    meta["task"] = task;
    meta["grid"] = {{"min", config.sweep.min}, {"max", config.sweep.max},
                    {"points", config.sweep.points}};
    meta["detectors"] = ordered_json::array();
    for (const auto& d : config.detectors) meta["detectors"].push_back(detector_name(d));
    meta["weak_drive_ratio"] = weak_ratio;
    meta["conventions"] = {
        {"detuning", "omega_drive - omega_transition"},
        {"units", "rates in Gamma0, positions in wavelengths, hbar = 1"},
        {"csv", "RFC 4180, full-precision scientific notation"},
    };
    std::ofstream out(path);
    out << meta.dump(2) << "\n";
}

int run_spectrum(const RunConfig& config, const std::filesystem::path& dir, int threads) {
    const ManifoldBasis basis = build_manifolds(config.system);
    RunConfig cfg = config;
    if (cfg.detectors.empty())
        for (const auto& ch : cfg.system.medium.channel_ids()) cfg.detectors.emplace_back(ch);

    Eigen::MatrixXcd rho = cfg.evolve.initial;
    if (rho.size() == 0) {
        rho = Eigen::MatrixXcd::Zero(basis.n_ground(), basis.n_ground());
        rho(0, 0) = 1.0;
    }
    if (rho.rows() != basis.n_ground() || rho.cols() != basis.n_ground())
        throw InvalidSpec("initial density does not match the ground manifold");

    const auto grid = cfg.sweep.values();
    const auto rows = spectrum_sweep(cfg.system, basis, cfg.detectors, grid, cfg.drive, rho, threads);

    const auto medium = make_medium(cfg.system.medium);
    const DecayMatrix decay = decay_matrix(cfg.system, basis);
    const ShiftMatrix shift = shift_matrix(cfg.system, basis);
    const NonHermitianHamiltonian h = build_nonhermitian(cfg.system, basis, decay, shift);
    InputField center = cfg.drive;
    center.omega = 0.5 * (cfg.sweep.min + cfg.sweep.max);
    const double ratio =
        weak_drive_ratio(h, build_drive(cfg.system, basis, *medium, center), center.omega);
    if (ratio > cfg.weak_drive_warn)
        std::fprintf(stderr, "warning: weak-drive ratio %.3g exceeds %.3g\n", ratio,
                     cfg.weak_drive_warn);
    for (const auto& pair : rwa_violations(cfg.system))
        std::fprintf(stderr, "warning: emitters %d and %d closer than 0.1 wavelength\n",
                     pair.first, pair.second);

    std::ofstream csv(dir / (cfg.output_prefix + "_spectrum.csv"));
    csv << "omega,detector,g,g_prime,re,im,abs2\n";
    for (const auto& r : rows) {
        csv << fmt(r.omega) << ",\"" << r.detector << "\"," << r.g << "," << r.g_prime << ",";
        if (r.singular) {
            csv << "nan,nan,nan\n"; // SingularAtFrequency at this grid point
        } else {
            csv << fmt(r.value.real()) << "," << fmt(r.value.imag()) << ","
                << fmt(std::norm(r.value)) << "\n";
        }
    }
    csv.close();
    write_metadata(dir / (cfg.output_prefix + "_spectrum.meta.json"), cfg, "spectrum", ratio);
    return 0;
}

int run_evolve(const RunConfig& config, const std::filesystem::path& dir) {
    const ManifoldBasis basis = build_manifolds(config.system);
    const auto medium = make_medium(config.system.medium);
    const DecayMatrix decay = decay_matrix(config.system, basis);
    const ShiftMatrix shift = shift_matrix(config.system, basis);
    const NonHermitianHamiltonian h = build_nonhermitian(config.system, basis, decay, shift);
    const JumpBasis jumps = jump_basis(decay, config.system, basis);
    const ExcitationOperator exc =
        build_excitation(config.system, basis, *medium, config.drive);
    const EffectiveHamiltonian heff =
        build_effective_hamiltonian(h, exc, basis, config.drive.omega);
    const auto ls = build_effective_lindblads(jumps, h, exc, basis, config.drive.omega);

    GroundDensity initial;
    if (config.evolve.initial.size() > 0) {
        initial.rho = config.evolve.initial;
    } else {
        initial.rho = Eigen::MatrixXcd::Zero(basis.n_ground(), basis.n_ground());
        initial.rho(0, 0) = 1.0;
    }
    const auto traj = evolve(initial, heff, ls, config.evolve.t_final, config.evolve.dt,
                             config.evolve.sample_every);

    std::ofstream csv(dir / (config.output_prefix + "_evolve.csv"));
    csv << "t";
    for (Eigen::Index r = 0; r < basis.n_ground(); ++r)
        for (Eigen::Index c = 0; c < basis.n_ground(); ++c)
            csv << ",rho_" << r << "_" << c << "_re,rho_" << r << "_" << c << "_im";
    csv << "\n";
    for (const auto& s : traj) {
        csv << fmt(s.time);
        for (Eigen::Index r = 0; r < basis.n_ground(); ++r)
            for (Eigen::Index c = 0; c < basis.n_ground(); ++c)
                csv << "," << fmt(s.rho(r, c).real()) << "," << fmt(s.rho(r, c).imag());
        csv << "\n";
    }
    csv.close();
    write_metadata(dir / (config.output_prefix + "_evolve.meta.json"), config, "evolve", 0.0);
    return 0;
}

int run_mint_golden(const RunConfig& config, const std::filesystem::path& dir) {
    std::ofstream csv(dir / (config.output_prefix + "_golden.csv"));
    csv << "omega,r_re,r_im,t_re,t_im\n";
    for (double w : config.sweep.values()) {
        const auto [r, t] = oracle::single_excitation_scattering(config.system, w);
        csv << fmt(w) << "," << fmt(r.real()) << "," << fmt(r.imag()) << "," << fmt(t.real())
            << "," << fmt(t.imag()) << "\n";
    }
    csv.close();
    write_metadata(dir / (config.output_prefix + "_golden.meta.json"), config, "mint-golden", 0.0);
    return 0;
}

ordered_json error_json(const char* kind, const std::string& message, const std::string& path = "") {
    ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    if (!path.empty()) j["path"] = path;
    return j;
}

} // namespace

int run(const RunConfig& config, const std::string& out_dir, int threads,
        const std::string& task_override, std::string* error_out) {
    const std::string task = task_override.empty() ? config.task : task_override;
    try {
        const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
        std::filesystem::create_directories(dir);
        if (task == "spectrum") return run_spectrum(config, dir, threads);
        if (task == "evolve") return run_evolve(config, dir);
        if (task == "mint-golden") return run_mint_golden(config, dir);
        if (error_out) *error_out = error_json("user", "unknown task '" + task + "'").dump();
        return 1;
    } catch (const SchemaError& e) {
        if (error_out) *error_out = error_json("schema", e.what(), e.path).dump();
        return 1;
    } catch (const InvalidSpec& e) {
        if (error_out) *error_out = error_json("user", e.what()).dump();
        return 1;
    } catch (const Error& e) {
        if (error_out) *error_out = error_json("internal", e.what()).dump();
        return 2;
    } catch (const std::exception& e) {
        if (error_out) *error_out = error_json("internal", e.what()).dump();
        return 2;
    }
}

} // namespace escat

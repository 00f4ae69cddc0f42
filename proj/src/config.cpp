#include "dcemon/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "dcemon/errors.hpp"
#include "dcemon/spectral.hpp"

namespace dcemon {

using nlohmann::json;

namespace {

// Typed access to one JSON object; records located problems and unknown keys.
class Section {
public:
    Section(const json* node, std::string path, std::vector<std::string>& problems)
        : node_(node), path_(std::move(path)), problems_(problems)
    {
        if (node_ && !node_->is_object()) {
            fail("", "expected an object");
            node_ = nullptr;
        }
    }

    ~Section()
    {
        if (!node_)
            return;
        for (const auto& item : node_->items())
            if (!seen_.count(item.key()))
                fail(item.key(), "unknown key");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return node_ && node_->contains(key) && !(*node_)[key].is_null();
    }

    const json* child(const std::string& key)
    {
        return has(key) ? &(*node_)[key] : nullptr;
    }

    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void fail(const std::string& key, const std::string& message)
    {
        problems_.push_back((key.empty() ? path_ : path(key)) + ": " + message);
    }

    template <class T>
    std::optional<T> get(const std::string& key)
    {
        if (!has(key))
            return std::nullopt;
        const json& v = (*node_)[key];
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number())
                    throw std::invalid_argument("expected a number");
                const double x = v.get<double>();
                if (!std::isfinite(x))
                    throw std::invalid_argument("must be finite");
                return x;
            } else if constexpr (std::is_same_v<T, int>) {
                if (!v.is_number_integer())
                    throw std::invalid_argument("expected an integer");
                return v.get<int>();
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                    throw std::invalid_argument("expected a non-negative integer");
                return v.get<std::uint64_t>();
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean())
                    throw std::invalid_argument("expected true or false");
                return v.get<bool>();
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string())
                    throw std::invalid_argument("expected a string");
                return v.get<std::string>();
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                if (!v.is_array())
                    throw std::invalid_argument("expected a list of numbers");
                std::vector<double> out;
                for (const auto& x : v) {
                    if (!x.is_number())
                        throw std::invalid_argument("expected a list of numbers");
                    out.push_back(x.get<double>());
                }
                return out;
            }
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
        return std::nullopt;
    }

private:
    const json* node_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

template <class T>
void assign(Section& s, const std::string& key, T& target)
{
    if (auto v = s.get<T>(key))
        target = *v;
}

DetectorSpec parse_detector(const json* node, const ModulationSpec& mod, std::vector<std::string>& problems)
{
    Section s(node, "detector", problems);
    DetectorSpec det;
    const auto kind = s.get<std::string>("kind");
    if (!node || !kind) {
        if (node && node->size() > 0 && !kind)
            s.fail("kind", "required when the detector section is not empty");
        return det;
    }
    if (*kind == "none") {
        det.kind = DetectorKind::none;
    } else if (*kind == "ladder") {
        det.kind = DetectorKind::ladder;
        auto energies = s.get<std::vector<double>>("energies");
        auto detunings = s.get<std::vector<double>>("detunings");
        auto couplings = s.get<std::vector<double>>("couplings");
        auto levels = s.get<int>("levels");
        auto g = s.get<double>("g");
        auto law = s.get<std::string>("coupling_law");
        if (energies && detunings)
            s.fail("energies", "give either energies or detunings, not both");
        int n = 0;
        if (energies)
            n = int(energies->size());
        else if (couplings)
            n = int(couplings->size()) + 1;
        else if (levels)
            n = *levels;
        if (levels && n != *levels)
            s.fail("levels", "inconsistent with the listed energies or couplings");
        if (n < 1) {
            s.fail("levels", "ladder needs at least one level");
            return det;
        }
        if (couplings) {
            if (g || law)
                s.fail("couplings", "give either couplings or g with coupling_law, not both");
            det.couplings = *couplings;
        } else if (g) {
            const std::string rule = law.value_or("uniform");
            for (int l = 1; l < n; ++l) {
                if (rule == "uniform")
                    det.couplings.push_back(*g);
                else if (rule == "harmonic")
                    det.couplings.push_back(*g * std::sqrt(double(l)));
                else {
                    s.fail("coupling_law", "expected \"uniform\" or \"harmonic\"");
                    break;
                }
            }
        } else if (n > 1) {
            s.fail("couplings", "required (or g with coupling_law)");
        }
        if (energies) {
            det.energies = *energies;
        } else {
            std::vector<double> d = detunings.value_or(std::vector<double>{});
            if (int(d.size()) > n - 1)
                s.fail("detunings", "more detunings than transitions");
            d.resize(std::max(n - 1, 0), 0.0);
            det.energies.assign(1, 0.0);
            for (int l = 1; l < n; ++l)
                det.energies.push_back(det.energies.back() + mod.omega0 - d[l - 1]);
        }
    } else if (*kind == "harmonic_oscillator") {
        det.kind = DetectorKind::harmonic_oscillator;
        det.omega = mod.omega0;
        assign(s, "omega", det.omega);
        if (!s.has("g"))
            s.fail("g", "required");
        assign(s, "g", det.g);
        assign(s, "levels", det.ho_levels);
    } else if (*kind == "dicke_network") {
        det.kind = DetectorKind::dicke_network;
        det.omega = mod.omega0;
        if (!s.has("atoms"))
            s.fail("atoms", "required");
        assign(s, "atoms", det.atoms);
        assign(s, "omega", det.omega);
        if (!s.has("g"))
            s.fail("g", "required");
        assign(s, "g", det.g);
        assign(s, "atom_omegas", det.atom_omegas);
        assign(s, "atom_couplings", det.atom_couplings);
    } else {
        s.fail("kind", "expected none, ladder, harmonic_oscillator or dicke_network");
    }
    return det;
}

Frame parse_frame(const std::string& name, Section& s)
{
    if (name == "rwa_interaction")
        return Frame::rwa_interaction;
    if (name == "lab")
        return Frame::lab;
    if (name == "two_level_rotated")
        return Frame::two_level_rotated;
    s.fail("frame", "expected rwa_interaction, lab or two_level_rotated");
    return Frame::rwa_interaction;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("<document>: ") + e.what()});
    }
    std::vector<std::string> problems;
    ExperimentConfig cfg;
    {
        Section top(&root, "", problems);
        const json* det_node = top.child("detector");
        const json* mod_node = top.child("modulation");
        const json* evo_node = top.child("evolution");
        const json* mon_node = top.child("monitor");
        const json* out_node = top.child("output");

        auto& mod = cfg.modulation;
        std::optional<int> branch;
        {
            Section s(mod_node, "modulation", problems);
            if (!mod_node || !s.has("epsilon"))
                s.fail("epsilon", "required");
            assign(s, "omega0", mod.omega0);
            assign(s, "epsilon", mod.epsilon);
            assign(s, "y", mod.y);
            const bool has_r = s.has("r");
            assign(s, "r", mod.r);
            if (auto b = s.get<int>("resonance_branch")) {
                if (*b != 1 && *b != -1)
                    s.fail("resonance_branch", "expected +1 or -1");
                else if (has_r)
                    s.fail("resonance_branch", "give either r or resonance_branch, not both");
                else
                    branch = *b;
            }
            if (auto form = s.get<std::string>("chi_form")) {
                if (*form == "approximate")
                    mod.chi_form = ChiForm::approximate;
                else if (*form == "exact")
                    mod.chi_form = ChiForm::exact;
                else
                    s.fail("chi_form", "expected approximate or exact");
            }
            try {
                mod.validate();
            } catch (const PhysicsError& e) {
                s.fail("epsilon", e.what());
            }
        }

        cfg.detector = parse_detector(det_node, mod, problems);
        try {
            cfg.detector.validate();
        } catch (const PhysicsError& e) {
            problems.push_back(std::string("detector: ") + e.what());
        }

        if (branch) {
            const auto& det = cfg.detector;
            if (det.kind != DetectorKind::ladder || det.energies.size() != 2) {
                problems.push_back("modulation.resonance_branch: needs a two-level ladder detector");
            } else {
                const double delta1 = mod.omega0 - (det.energies[1] - det.energies[0]);
                mod.r = two_level_resonance_shift(det.couplings[0], delta1, *branch, mod.y);
            }
        }

        auto& evo = cfg.evolution;
        // all times in the evolution and monitor sections share this unit
        std::string unit = "dimensionless";
        double scale = 1.0;
        {
            Section s(evo_node, "evolution", problems);
            if (auto frame = s.get<std::string>("frame"))
                evo.frame = parse_frame(*frame, s);
            assign(s, "n_max", evo.n_max);
            if (evo.n_max < 2)
                s.fail("n_max", "must be at least 2");
            assign(s, "time_unit", unit);
            if (unit == "dimensionless") {
                if (mod.epsilon == 0.0)
                    s.fail("time_unit", "dimensionless times need epsilon != 0");
                else
                    scale = 1.0 / std::abs(mod.epsilon);
            } else if (unit != "absolute") {
                s.fail("time_unit", "expected dimensionless or absolute");
            }
            if (!evo_node || !s.has("t_end"))
                s.fail("t_end", "required");
            assign(s, "t_end", evo.t_end);
            evo.t_end *= scale;
            if (!(evo.t_end > 0.0))
                s.fail("t_end", "must be positive");
            assign(s, "dt", evo.dt);
            evo.dt *= scale;
            if (evo.dt < 0.0)
                s.fail("dt", "must be non-negative (0 selects the default)");
            assign(s, "samples", evo.samples);
            if (evo.samples < 1)
                s.fail("samples", "must be at least 1");
            assign(s, "sample_times", evo.sample_times);
            assign(s, "snapshots", evo.snapshot_times);
            for (double& t : evo.sample_times)
                t *= scale;
            for (double& t : evo.snapshot_times)
                t *= scale;
            for (double t : evo.snapshot_times)
                if (t < 0.0 || t > evo.t_end * (1.0 + 1e-12))
                    s.fail("snapshots", "time outside [0, t_end]");
            for (double t : evo.sample_times)
                if (t < 0.0 || t > evo.t_end * (1.0 + 1e-12))
                    s.fail("sample_times", "time outside [0, t_end]");
            assign(s, "renorm_tol", evo.renorm_tol);
            assign(s, "truncation_tol", evo.truncation_tol);
            assign(s, "margin_layers", evo.margin_layers);
            assign(s, "counter_rotating", evo.counter_rotating);
            if (const json* init = s.child("initial")) {
                if (!init->is_array() || init->empty()) {
                    s.fail("initial", "expected a non-empty list of {level, photons, re, im}");
                } else {
                    evo.initial.terms.clear();
                    for (std::size_t i = 0; i < init->size(); ++i) {
                        Section t(&(*init)[i], "evolution.initial[" + std::to_string(i) + "]", problems);
                        InitialTerm term{1, 0, 0.0};
                        double re = 1.0, im = 0.0;
                        assign(t, "level", term.level);
                        assign(t, "photons", term.photons);
                        assign(t, "re", re);
                        assign(t, "im", im);
                        term.amplitude = cplx(re, im);
                        const int levels = cfg.detector.level_count(evo.n_max);
                        if (term.level < 1 || term.level > levels)
                            t.fail("level", "out of range 1.." + std::to_string(levels));
                        if (term.photons < 0 || term.photons > evo.n_max)
                            t.fail("photons", "out of range 0.." + std::to_string(evo.n_max));
                        evo.initial.terms.push_back(term);
                    }
                }
            }
            const int levels = cfg.detector.kind == DetectorKind::none ? 1 : cfg.detector.level_count(evo.n_max);
            if (evo.frame == Frame::two_level_rotated && levels != 2)
                s.fail("frame", "two_level_rotated needs a two-level detector");
        }

        auto& mon = cfg.monitor;
        {
            Section s(mon_node, "monitor", problems);
            assign(s, "enabled", mon.enabled);
            if (auto rate = s.get<double>("rate"))
                mon.rates = {*rate};
            if (auto rates = s.get<std::vector<double>>("rates")) {
                if (!mon.rates.empty())
                    s.fail("rates", "give either rate or rates, not both");
                mon.rates = *rates;
            }
            for (double r : mon.rates)
                if (r < 0.0)
                    s.fail("rates", "read-out rates must be non-negative");
            assign(s, "trajectories", mon.trajectories);
            if (mon.trajectories < 1)
                s.fail("trajectories", "must be at least 1");
            assign(s, "seed", mon.seed);
            assign(s, "dt", mon.dt);
            mon.dt *= scale;
            if (mon.dt < 0.0)
                s.fail("dt", "must be non-negative");
            assign(s, "max_clicks", mon.max_clicks);
            const int levels = cfg.detector.level_count(evo.n_max);
            if (mon.enabled) {
                if (levels < 2)
                    s.fail("enabled", "read-out needs a detector with at least two levels");
                if (mon.rates.empty())
                    s.fail("rates", "required when monitoring is enabled");
            }
            if (mon.rates.size() > 1 && int(mon.rates.size()) != levels - 1)
                s.fail("rates", "need one rate per adjacent transition (" + std::to_string(levels - 1) + ")");
        }

        auto& out = cfg.output;
        {
            Section s(out_node, "output", problems);
            if (auto axis = s.get<std::string>("time_axis")) {
                if (*axis == "absolute")
                    out.absolute_time = true;
                else if (*axis != "dimensionless")
                    s.fail("time_axis", "expected dimensionless or absolute");
            }
            assign(s, "oracle", out.oracle);
            assign(s, "precision", out.precision);
            if (out.precision < 1 || out.precision > 17)
                s.fail("precision", "must be in 1..17");
            assign(s, "series", out.series);
            assign(s, "snapshot_prefix", out.snapshot_prefix);
        }
    }
    if (!problems.empty())
        throw ConfigError(problems);
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

json to_json(const ExperimentConfig& c)
{
    json det = json::object();
    const auto& d = c.detector;
    det["kind"] = to_string(d.kind);
    switch (d.kind) {
    case DetectorKind::none:
        break;
    case DetectorKind::ladder:
        det["energies"] = d.energies;
        det["couplings"] = d.couplings;
        break;
    case DetectorKind::harmonic_oscillator:
        det["omega"] = d.omega;
        det["g"] = d.g;
        det["levels"] = d.ho_levels;
        break;
    case DetectorKind::dicke_network:
        det["atoms"] = d.atoms;
        det["omega"] = d.omega;
        det["g"] = d.g;
        if (!d.atom_omegas.empty())
            det["atom_omegas"] = d.atom_omegas;
        if (!d.atom_couplings.empty())
            det["atom_couplings"] = d.atom_couplings;
        break;
    }
    const auto& m = c.modulation;
    json mod = {{"omega0", m.omega0},
                {"epsilon", m.epsilon},
                {"r", m.r},
                {"y", m.y},
                {"chi_form", m.chi_form == ChiForm::exact ? "exact" : "approximate"}};
    const auto& e = c.evolution;
    json initial = json::array();
    for (const auto& t : e.initial.terms)
        initial.push_back({{"level", t.level}, {"photons", t.photons},
                           {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
    json evo = {{"frame", to_string(e.frame)},
                {"n_max", e.n_max},
                {"time_unit", "absolute"},
                {"t_end", e.t_end},
                {"dt", e.dt},
                {"samples", e.samples},
                {"sample_times", e.sample_times},
                {"snapshots", e.snapshot_times},
                {"renorm_tol", e.renorm_tol},
                {"truncation_tol", e.truncation_tol},
                {"margin_layers", e.margin_layers},
                {"counter_rotating", e.counter_rotating},
                {"initial", initial}};
    const auto& mo = c.monitor;
    json mon = {{"enabled", mo.enabled},
                {"rates", mo.rates},
                {"trajectories", mo.trajectories},
                {"seed", mo.seed},
                {"dt", mo.dt},
                {"max_clicks", mo.max_clicks}};
    const auto& o = c.output;
    json out = {{"time_axis", o.absolute_time ? "absolute" : "dimensionless"},
                {"oracle", o.oracle},
                {"precision", o.precision},
                {"series", o.series},
                {"snapshot_prefix", o.snapshot_prefix}};
    return {{"detector", det}, {"modulation", mod}, {"evolution", evo}, {"monitor", mon}, {"output", out}};
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const
{
    return to_json(*this) == to_json(other);
}

std::string config_hash(const ExperimentConfig& config)
{
    const std::string text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dcemon

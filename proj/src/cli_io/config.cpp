#include "nudgelab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nudgelab/checkpoint.hpp"
#include "nudgelab/random_fields.hpp"

namespace nudge {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x))
        throw ConfigError("key '" + key + "': '" + v + "' is not a finite number");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return x;
}

double positive(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (!(x > 0.0)) throw ConfigError("key '" + key + "' must be positive");
    return x;
}

double nonnegative(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x < 0.0) throw ConfigError("key '" + key + "' must be nonnegative");
    return x;
}

int positive_int(const std::string& key, const std::string& v) {
    const long long x = to_int(key, v);
    if (x < 1 || x > (1 << 20)) throw ConfigError("key '" + key + "' must be a positive integer");
    return static_cast<int>(x);
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class F>
auto convert(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

}  // namespace

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "model") c.model = convert(key, [&] { return model_from_string(v); });
    else if (key == "geometry") {
        if (v == "torus") c.geometry = Geometry::Torus;
        else if (v == "channel") c.geometry = Geometry::Channel;
        else throw ConfigError("key 'geometry': expected torus or channel");
    } else if (key == "resolution") {
        c.resolution.clear();
        for (const auto& w : words(v)) c.resolution.push_back(positive_int(key, w));
        if (c.resolution.empty() || c.resolution.size() > 3) throw ConfigError("key 'resolution' needs 1 to 3 values");
    } else if (key == "length") {
        c.lengths.clear();
        if (v != "auto")
            for (const auto& w : words(v)) c.lengths.push_back(positive(key, w));
    } else if (key == "nu") c.nu = positive(key, v);
    else if (key == "kappa") c.kappa = positive(key, v);
    else if (key == "force_energy") c.force_energy = nonnegative(key, v);
    else if (key == "force_kmax") c.force_kmax = positive(key, v);
    else if (key == "c") c.c = positive(key, v);
    else if (key == "C") c.C = positive(key, v);
    else if (key == "C_cell") {
        if (v == "auto") c.C_cell.reset();
        else c.C_cell = positive(key, v);
    }
    else if (key == "interpolant") c.interpolant = convert(key, [&] { return interpolant_kind_from_string(v); });
    else if (key == "modes") c.modes = positive_int(key, v);
    else if (key == "cells") {
        const auto w = words(v);
        if (w.empty() || w.size() > 3) throw ConfigError("key 'cells' needs 1 to 3 values");
        c.cells = {1, 1, 1};
        for (std::size_t i = 0; i < w.size(); ++i) c.cells[i] = positive_int(key, w[i]);
    } else if (key == "mu") {
        if (v == "auto") c.mu.reset();
        else c.mu = nonnegative(key, v);
    } else if (key == "variant") c.variant = convert(key, [&] { return condition_variant_from_string(v); });
    else if (key == "p") c.p = positive(key, v);
    else if (key == "tau0") c.tau0 = positive(key, v);
    else if (key == "dt") c.dt = positive(key, v);
    else if (key == "T") c.T = nonnegative(key, v);
    else if (key == "record_every") c.record_every = positive_int(key, v);
    else if (key == "seed") {
        const long long s = to_int(key, v);
        if (s < 0) throw ConfigError("key 'seed' must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "energy") c.energy = nonnegative(key, v);
    else if (key == "init_kmax") {
        if (v == "auto") c.init_kmax.reset();
        else c.init_kmax = positive(key, v);
    } else if (key == "decay_target") c.decay_target = positive(key, v);
    else if (key == "out") {
        if (v.empty()) throw ConfigError("key 'out' must not be empty");
        c.out = v;
    } else if (key == "stream") {
        if (v.empty()) c.stream.reset();
        else c.stream = v;
    } else if (key == "restart") {
        if (v.empty()) c.restart.reset();
        else c.restart = v;
    } else if (key == "sweep_key") {
        if (v == "sweep_key" || v == "sweep_values") throw ConfigError("sweep_key cannot name a sweep key");
        c.sweep_key = v;
    } else if (key == "sweep_values") c.sweep_values = words(v);
    else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (seen.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        seen[key] = lineno;
        set_config_value(c, key, line.substr(eq + 1));
    }
    if (!c.lengths.empty() && c.lengths.size() != c.resolution.size() &&
        !(c.geometry == Geometry::Channel && c.lengths.size() == 1))
        throw ConfigError("'length' must give one value per resolution axis");
    if (c.geometry == Geometry::Channel && c.resolution.size() != 2)
        throw ConfigError("the channel geometry is two-dimensional");
    if (c.model == Model::Boussinesq && c.force_energy > 0.0)
        throw ConfigError("a body force is only supported for the nse model");
    if (!c.sweep_key.empty() && c.sweep_values.empty()) throw ConfigError("sweep_key needs sweep_values");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in);
}

std::string to_text(const ExperimentConfig& c) {
    std::ostringstream o;
    auto list = [](const auto& xs, auto f) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : " ") + f(x);
        return s;
    };
    o << "model = " << to_string(c.model) << "\n";
    o << "geometry = " << (c.geometry == Geometry::Torus ? "torus" : "channel") << "\n";
    o << "resolution = " << list(c.resolution, [](int x) { return std::to_string(x); }) << "\n";
    o << "length = " << (c.lengths.empty() ? std::string("auto") : list(c.lengths, num)) << "\n";
    o << "nu = " << num(c.nu) << "\nkappa = " << num(c.kappa) << "\n";
    o << "force_energy = " << num(c.force_energy) << "\nforce_kmax = " << num(c.force_kmax) << "\n";
    o << "c = " << num(c.c) << "\nC = " << num(c.C) << "\nC_cell = " << (c.C_cell ? num(*c.C_cell) : std::string("auto")) << "\n";
    o << "interpolant = " << to_string(c.interpolant) << "\n";
    o << "modes = " << c.modes << "\n";
    o << "cells = " << c.cells[0] << " " << c.cells[1] << " " << c.cells[2] << "\n";
    o << "mu = " << (c.mu ? num(*c.mu) : std::string("auto")) << "\n";
    o << "variant = " << to_string(c.variant) << "\n";
    o << "p = " << num(c.p) << "\ntau0 = " << num(c.tau0) << "\n";
    o << "dt = " << num(c.dt) << "\nT = " << num(c.T) << "\nrecord_every = " << c.record_every << "\n";
    o << "seed = " << c.seed << "\nenergy = " << num(c.energy) << "\n";
    o << "init_kmax = " << (c.init_kmax ? num(*c.init_kmax) : std::string("auto")) << "\n";
    o << "decay_target = " << num(c.decay_target) << "\n";
    o << "out = " << c.out << "\n";
    if (c.stream) o << "stream = " << *c.stream << "\n";
    if (c.restart) o << "restart = " << *c.restart << "\n";
    if (!c.sweep_key.empty()) {
        o << "sweep_key = " << c.sweep_key << "\n";
        o << "sweep_values = " << list(c.sweep_values, [](const std::string& s) { return s; }) << "\n";
    }
    return o.str();
}

GridPtr ExperimentConfig::make_grid() const {
    const double L = std::sqrt(2.0) / 4.0;
    if (geometry == Geometry::Channel) {
        if (resolution.size() != 2) throw ConfigError("the channel geometry is two-dimensional");
        return Grid::channel(resolution[0], resolution[1], lengths.empty() ? L : lengths[0]);
    }
    std::vector<double> len = lengths.empty() ? std::vector<double>(resolution.size(), L) : lengths;
    if (len.size() != resolution.size()) throw ConfigError("'length' must give one value per resolution axis");
    return convert("resolution", [&] { return Grid::torus(resolution, len); });
}

Params ExperimentConfig::params(const GridPtr& grid) const {
    Params p;
    p.model = model;
    p.nu = nu;
    p.kappa = kappa;
    p.c_interp = c;
    p.C_sob = C;
    p.C_cell = C_cell;
    if (model == Model::NavierStokes && force_energy > 0.0) {
        RandomSpectrum spec;
        spec.kmax = force_kmax;
        spec.energy = force_energy;
        p.f = random_velocity(grid, seed + 2, spec);
    }
    p.validate();
    return p;
}

std::shared_ptr<const Interpolant> ExperimentConfig::make_interpolant(const GridPtr& grid) const {
    return convert("interpolant", [&] {
        switch (interpolant) {
            case InterpolantKind::Modal: return std::make_shared<const Interpolant>(Interpolant::modal(grid, modes));
            case InterpolantKind::Volume: return std::make_shared<const Interpolant>(Interpolant::volume(grid, cells));
            case InterpolantKind::SmoothedVolume:
                return std::make_shared<const Interpolant>(Interpolant::smoothed_volume(grid, cells));
        }
        throw ConfigError("unsupported interpolant");
    });
}

FlowState ExperimentConfig::initial_state(const GridPtr& grid) const {
    if (restart) {
        Checkpoint ck = load_checkpoint(*restart);
        if (!ck.state.u.grid().same_as(*grid)) throw KindMismatchError("restart checkpoint grid differs from the config");
        if (ck.model != model) throw KindMismatchError("restart checkpoint model differs from the config");
        return std::move(ck.state);
    }
    FlowState s = FlowState::zero(grid);
    if (energy == 0.0) return s;
    RandomSpectrum spec;
    spec.kmax = init_kmax ? *init_kmax : grid->resolution(0) / 8.0;
    spec.energy = energy;
    s.u = random_velocity(grid, seed, spec);
    if (model == Model::Boussinesq) s.theta = random_scalar(grid, seed + 1, spec);
    return s;
}

ConditionExtras ExperimentConfig::extras() const {
    ConditionExtras ex;
    ex.p = p;
    ex.tau0 = tau0;
    return ex;
}

}  // namespace nudge

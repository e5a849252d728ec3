#include "nudgelab/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"

namespace nudge {

namespace {

json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

void append_number(std::string& s, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    s += buf;
}

double parse_cell(const std::string& cell, std::size_t row) {
    double x = 0.0;
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    auto [ptr, ec] = std::from_chars(b, e, x);
    if (b == e || ec != std::errc() || ptr != e)
        throw FormatError("row " + std::to_string(row) + ": '" + cell + "' is not a number");
    return x;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string to_csv(const Series& s) {
    std::string out = "t";
    for (const auto& c : s.channels()) out += "," + c;
    out += "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        append_number(out, s.times()[i]);
        for (const auto& c : s.channels()) {
            out += ",";
            append_number(out, s.column(c)[i]);
        }
        out += "\n";
    }
    return out;
}

void write_csv(const Series& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << to_csv(s);
    if (!out) throw Error("write failed for '" + path + "'");
}

Series parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.find_first_not_of(" \t\r") == std::string::npos)
        throw FormatError("empty CSV");
    auto header = split(line);
    if (header.empty() || header[0] != "t") throw FormatError("CSV header must start with 't'");
    std::vector<std::string> names(header.begin() + 1, header.end());
    for (const auto& n : names)
        if (n.empty()) throw FormatError("CSV header has an empty channel name");
    Series s(names);
    std::size_t row = 1;
    std::vector<double> values(names.size());
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw FormatError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        const double t = parse_cell(cells[0], row);
        if (!s.empty() && !(t > s.times().back())) throw FormatError("row " + std::to_string(row) + ": time is not increasing");
        for (std::size_t j = 0; j < names.size(); ++j) values[j] = parse_cell(cells[j + 1], row);
        s.append(t, values);
    }
    return s;
}

Series read_csv(const std::string& path) { return parse_csv(slurp(path)); }

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw Error("write failed for '" + path + "'");
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

json to_json(const ConditionReport& r) {
    json h0 = json::object();
    for (const auto& [k, v] : r.h0_variants) h0[k] = number(v);
    json j = {
        {"variant", to_string(r.variant)},
        {"h", number(r.h)},
        {"h0", number(r.h0)},
        {"h0_variants", h0},
        {"M_h", number(r.Mh)},
        {"K_h", number(r.Kh)},
        {"tau0", number(r.tau0)},
        {"p", number(r.p)},
        {"q", number(r.q)},
        {"mu_interval",
         {{"lo", number(r.mu_interval.lo)}, {"hi", number(r.mu_interval.hi)}, {"empty", r.mu_interval.empty}}},
        {"mu_selected", number(r.mu_selected)},
        {"mu_overridden", r.mu_overridden},
        {"mu_in_interval", r.mu_in_interval},
        {"alpha", number(r.alpha)},
        {"condition_dai_satisfied", r.satisfied},
        {"violated", r.violated},
        {"constants_used",
         {{"c", number(r.c_used)}, {"C", number(r.C_used)}, {"S2", number(r.S2)}, {"M0", number(r.M0)},
          {"M0_measured", r.M0_measured}}},
        {"rho", number(r.rho)},
        {"lambda1", number(r.lambda1)},
        {"c_max", number(r.c_max)},
        {"C_max", number(r.C_max)},
    };
    j["regularity_verdict"] = r.regularity_verdict ? json(*r.regularity_verdict) : json(nullptr);
    return j;
}

json to_json(const DecayFit& f) {
    return {{"rate", number(f.rate)},         {"window", {number(f.t0), number(f.t1)}},
            {"residual", number(f.residual)}, {"floor", number(f.floor)},
            {"samples", f.samples}};
}

json to_json(const EnergyResiduals& r) {
    return {{"max_rel_u", number(r.max_rel_u)},
            {"max_rel_theta", number(r.max_rel_theta)},
            {"max_rel_w", number(r.max_rel_w)},
            {"max_rel_eta", number(r.max_rel_eta)},
            {"max_rel", number(r.max_rel())}};
}

json to_json(const SpaceNorms& n) {
    return {{"x_norm", number(n.x_norm)},   {"z_sup_l2sq", number(n.z_sup_l2sq)},
            {"z_window_sup", number(n.z_window_sup)}, {"z_norm", number(n.z_norm)},
            {"p_sup", number(n.p_sup)},     {"p_terminal", number(n.p_terminal)}};
}

json to_json(const InterpolantSpec& s) {
    return {{"kind", to_string(s.kind)}, {"modes", s.modes}, {"cells", s.cells}};
}

InterpolantSpec spec_from_json(const json& j) {
    try {
        InterpolantSpec s;
        s.kind = interpolant_kind_from_string(j.at("kind").get<std::string>());
        s.modes = j.at("modes").get<int>();
        s.cells = j.at("cells").get<std::array<int, 3>>();
        return s;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad interpolant spec: ") + e.what());
    } catch (const ConfigError& e) {
        throw FormatError(e.what());
    }
}

void save_stream(const ObservationStream& s, const std::string& path) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path + "'");
        binio::put_magic(out, "NDGO");
        binio::put<std::uint32_t>(out, kStreamVersion);
        binio::put<std::uint64_t>(out, s.size());
        for (const auto& o : s.records()) {
            binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(o.kind));
            binio::put<double>(out, o.t);
            binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(o.components));
            binio::put<std::uint64_t>(out, o.payload.size());
            for (double v : o.payload) binio::put<double>(out, v);
        }
        if (!out) throw Error("write failed for '" + path + "'");
    }
    json side = {{"format", "NDGO"}, {"version", kStreamVersion}, {"interpolant", to_json(s.spec())}};
    side["M0"] = s.M0 ? json(*s.M0) : json(nullptr);
    write_json(side, path + ".json");
}

ObservationStream load_stream(const std::string& path) {
    const json side = read_json(path + ".json");
    if (!side.contains("version") || !side["version"].is_number_unsigned() ||
        side["version"].get<std::uint32_t>() > kStreamVersion)
        throw FormatError("stream sidecar has an unsupported version");
    if (!side.contains("interpolant")) throw FormatError("stream sidecar lacks the interpolant spec");
    ObservationStream s(spec_from_json(side["interpolant"]));
    if (side.contains("M0") && side["M0"].is_number()) s.M0 = side["M0"].get<double>();

    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    binio::expect_magic(in, "NDGO");
    binio::expect_version(in, kStreamVersion);
    const auto n = binio::get<std::uint64_t>(in, "record count");
    for (std::uint64_t i = 0; i < n; ++i) {
        Observation o;
        const auto kind = binio::get<std::uint32_t>(in, "record kind");
        if (kind > 2) throw FormatError("unknown observation kind " + std::to_string(kind));
        o.kind = static_cast<InterpolantKind>(kind);
        o.t = binio::get<double>(in, "record time");
        o.components = static_cast<int>(binio::get<std::uint32_t>(in, "record components"));
        const auto len = binio::get<std::uint64_t>(in, "record length");
        if (len > (std::uint64_t(1) << 32)) throw FormatError("implausible record length");
        o.payload.resize(len);
        for (auto& v : o.payload) v = binio::get<double>(in, "record payload");
        try {
            s.append(std::move(o));
        } catch (const DomainError& e) {
            throw FormatError(std::string("stream records: ") + e.what());
        }
    }
    binio::expect_end(in);
    return s;
}

}  // namespace nudge

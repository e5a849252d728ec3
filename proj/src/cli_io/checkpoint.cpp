#include "nudgelab/checkpoint.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace nudge {

namespace {

void put_field(std::ostream& out, const SpectralField& f) {
    binio::put<std::uint32_t>(out, f.empty() ? 0u : static_cast<std::uint32_t>(f.components()));
    if (f.empty()) return;
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(f.kind()));
    for (const cplx& z : f.raw()) {
        binio::put<double>(out, z.real());
        binio::put<double>(out, z.imag());
    }
}

SpectralField get_field(std::istream& in, const GridPtr& grid) {
    const auto ncomp = binio::get<std::uint32_t>(in, "field components");
    if (ncomp == 0) return {};
    if (ncomp > 3) throw FormatError("implausible component count");
    const auto kind = binio::get<std::uint32_t>(in, "field kind");
    if (kind > 2) throw FormatError("unknown field kind");
    SpectralField f(grid, static_cast<int>(ncomp), static_cast<FieldKind>(kind));
    for (cplx& z : f.raw()) {
        const double re = binio::get<double>(in, "coefficients");
        const double im = binio::get<double>(in, "coefficients");
        z = {re, im};
    }
    return f;
}

}  // namespace

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    const SpectralField& u = c.state.u;
    if (u.empty()) throw PreconditionError("checkpoint needs a velocity field");
    const Grid& g = u.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    binio::put_magic(out, "NDGL");
    binio::put<std::uint32_t>(out, kCheckpointVersion);
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.geometry()));
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) binio::put<std::int32_t>(out, g.resolution(a));
    for (int a = 0; a < g.dim(); ++a) binio::put<double>(out, g.length(a));
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(c.model));
    binio::put<double>(out, c.state.t);
    put_field(out, u);
    put_field(out, c.state.theta);
    const Ab2History& h = c.state.history;
    binio::put<std::uint8_t>(out, h.valid ? 1 : 0);
    binio::put<double>(out, h.dt);
    put_field(out, h.nl_u);
    put_field(out, h.nl_theta);
    if (!out) throw Error("write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    binio::expect_magic(in, "NDGL");
    binio::expect_version(in, kCheckpointVersion);
    const auto geom = binio::get<std::uint32_t>(in, "geometry");
    const auto dim = binio::get<std::uint32_t>(in, "dimension");
    if (geom > 1 || dim < 1 || dim > 3) throw FormatError("bad grid descriptor");
    std::vector<int> res(dim);
    std::vector<double> len(dim);
    for (auto& r : res) r = binio::get<std::int32_t>(in, "resolution");
    for (auto& l : len) l = binio::get<double>(in, "length");
    GridPtr grid;
    try {
        grid = geom == 0 ? Grid::torus(res, len) : Grid::channel(res.at(0), res.at(1), len.at(0));
    } catch (const std::exception& e) {
        throw FormatError(std::string("bad grid descriptor: ") + e.what());
    }
    Checkpoint c;
    const auto model = binio::get<std::uint32_t>(in, "model");
    if (model > 1) throw FormatError("unknown model tag");
    c.model = static_cast<Model>(model);
    c.state.t = binio::get<double>(in, "time");
    c.state.u = get_field(in, grid);
    c.state.theta = get_field(in, grid);
    if (c.state.u.empty()) throw FormatError("checkpoint lacks a velocity field");
    c.state.history.valid = binio::get<std::uint8_t>(in, "history flag") != 0;
    c.state.history.dt = binio::get<double>(in, "history dt");
    c.state.history.nl_u = get_field(in, grid);
    c.state.history.nl_theta = get_field(in, grid);
    binio::expect_end(in);
    return c;
}

}  // namespace nudge

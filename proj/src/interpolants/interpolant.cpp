#include "nudgelab/interpolant.hpp"

#include <algorithm>
#include <cmath>

#include "nudgelab/kernels.hpp"

namespace nudge {

std::string to_string(InterpolantKind k) {
    switch (k) {
        case InterpolantKind::Modal: return "modal";
        case InterpolantKind::Volume: return "volume";
        case InterpolantKind::SmoothedVolume: return "smoothed_volume";
    }
    return "unknown";
}

InterpolantKind interpolant_kind_from_string(const std::string& s) {
    if (s == "modal") return InterpolantKind::Modal;
    if (s == "volume") return InterpolantKind::Volume;
    if (s == "smoothed_volume") return InterpolantKind::SmoothedVolume;
    throw ConfigError("unknown interpolant kind '" + s + "'");
}

std::array<int, 3> Partition::cell_index(std::size_t alpha) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(alpha % static_cast<std::size_t>(cells[a]));
        alpha /= static_cast<std::size_t>(cells[a]);
    }
    return idx;
}

std::size_t Partition::cell_of_sample(const std::array<int, 3>& s) const {
    std::size_t alpha = 0;
    for (int a = 0; a < dim; ++a) alpha = alpha * cells[a] + static_cast<std::size_t>(s[a] / samples_per_cell[a]);
    return alpha;
}

namespace {

bool is_nyquist_slot(const Grid& g, std::size_t i) {
    const auto idx = g.multi_index(i);
    for (int a = 0; a < g.dim(); ++a) {
        if (g.geometry() == Geometry::Channel && a == 1) {
            if (idx[a] == g.resolution(1)) return true;
        } else if (idx[a] == g.resolution(a) / 2) {
            return true;
        }
    }
    return false;
}

std::array<int, 3> wavevector(const Grid& g, std::size_t i) {
    return {g.kint(0)[i], g.kint(1)[i], g.dim() == 3 ? g.kint(2)[i] : 0};
}

// Representative of {k, -k}: first nonzero component positive.
std::array<int, 3> canonical(std::array<int, 3> k) {
    for (int a = 0; a < 3; ++a) {
        if (k[a] > 0) return k;
        if (k[a] < 0) return {-k[0], -k[1], -k[2]};
    }
    return k;
}

struct Candidate {
    std::size_t slot;
    double k2;
    std::array<int, 3> key;
    int multiplicity;
};

// Row-major iteration over the samples of one cell.
template <class F>
void for_each_sample(const Grid& g, const Partition& p, std::size_t alpha, F&& f) {
    const auto c = p.cell_index(alpha);
    const int m0 = p.samples_per_cell[0], m1 = p.samples_per_cell[1], m2 = p.dim == 3 ? p.samples_per_cell[2] : 1;
    const std::size_t n1 = g.resolution(1), n2 = p.dim == 3 ? g.resolution(2) : 1;
    for (int i = c[0] * m0; i < (c[0] + 1) * m0; ++i)
        for (int j = c[1] * m1; j < (c[1] + 1) * m1; ++j)
            for (int k = c[2] * m2; k < (c[2] + 1) * m2; ++k)
                f((static_cast<std::size_t>(i) * n1 + j) * n2 + k);
}

}  // namespace

Interpolant Interpolant::modal(GridPtr grid, int modes) {
    if (modes < 1) throw DomainError("modal interpolant needs at least one mode");
    const Grid& g = *grid;
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.k2()[i] == 0.0 || is_nyquist_slot(g, i)) continue;
        const auto k = wavevector(g, i);
        if (g.geometry() == Geometry::Torus) {
            if (g.self_conjugate_plane(i) && canonical(k) != k) continue;
            cand.push_back({i, g.k2()[i], canonical(k), 2});
        } else {
            cand.push_back({i, g.k2()[i], k, g.kint(0)[i] > 0 ? 2 : 1});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
        const double tol = 1e-12 * std::max(a.k2, b.k2);
        if (std::abs(a.k2 - b.k2) > tol) return a.k2 < b.k2;
        return a.key < b.key;
    });
    int total = 0;
    for (const auto& c : cand) total += c.multiplicity;
    if (modes > total) throw DomainError("modal interpolant asks for more modes than the grid holds");

    Interpolant ip;
    ip.kind_ = InterpolantKind::Modal;
    ip.grid_ = grid;
    ip.requested_ = modes;
    ip.mask_.assign(g.spectral_size(), 0.0);
    for (const auto& c : cand) {
        if (ip.realized_ >= modes) break;
        ip.slots_.push_back(c.slot);
        ip.mask_[c.slot] = 1.0;
        if (g.self_conjugate_plane(c.slot)) ip.mask_[g.mirror(c.slot)] = 1.0;
        ip.realized_ += c.multiplicity;
        ip.lambda_n_ = c.k2;
    }
    ip.h_ = 1.0 / std::sqrt(ip.lambda_n_);
    return ip;
}

Interpolant Interpolant::volume(GridPtr grid, const std::array<int, 3>& cells) {
    Interpolant ip;
    ip.kind_ = InterpolantKind::Volume;
    ip.grid_ = std::move(grid);
    ip.build_volume(cells, false);
    return ip;
}

Interpolant Interpolant::smoothed_volume(GridPtr grid, const std::array<int, 3>& cells) {
    Interpolant ip;
    ip.kind_ = InterpolantKind::SmoothedVolume;
    ip.grid_ = std::move(grid);
    ip.build_volume(cells, true);
    return ip;
}

Interpolant Interpolant::volume_h(GridPtr grid, double h, bool smoothed) {
    if (!(h > 0.0)) throw DomainError("cell diameter must be positive");
    const Grid& g = *grid;
    const double side = h / std::sqrt(static_cast<double>(g.dim()));
    std::array<int, 3> cells{1, 1, 1};
    for (int a = 0; a < g.dim(); ++a) {
        const double n = g.length(a) / side;
        cells[a] = static_cast<int>(std::lround(n));
        if (cells[a] < 1 || std::abs(n - cells[a]) > 1e-9 * n)
            throw DomainError("no uniform partition of the domain has cell diameter " + std::to_string(h));
    }
    return smoothed ? smoothed_volume(std::move(grid), cells) : volume(std::move(grid), cells);
}

void Interpolant::build_volume(const std::array<int, 3>& cells, bool smoothed) {
    const Grid& g = *grid_;
    Partition& p = partition_;
    p.dim = g.dim();
    std::size_t count = 1;
    double d2 = 0.0;
    p.measure = 1.0;
    for (int a = 0; a < g.dim(); ++a) {
        if (cells[a] < 1 || g.resolution(a) % cells[a] != 0)
            throw DomainError("cell count per axis must divide the grid resolution");
        p.cells[a] = cells[a];
        p.samples_per_cell[a] = g.resolution(a) / cells[a];
        p.side[a] = g.length(a) / cells[a];
        const bool wall = g.geometry() == Geometry::Channel && a == 1;
        p.origin[a] = wall ? 0.0 : -0.5 * g.spacing(a);
        d2 += p.side[a] * p.side[a];
        p.measure *= p.side[a];
        count *= static_cast<std::size_t>(cells[a]);
    }
    p.diameter = std::sqrt(d2);
    h_ = p.diameter;
    p.boundary.assign(count, 0);
    if (g.geometry() == Geometry::Channel) {
        for (std::size_t alpha = 0; alpha < count; ++alpha) {
            const int ay = p.cell_index(alpha)[1];
            p.boundary[alpha] = (ay == 0 || ay == p.cells[1] - 1) ? 1 : 0;
        }
    }
    support_.assign(g.physical_size(), 1);
    if (!smoothed) return;

    epsilon_ = h_ / 10.0;
    if (g.geometry() == Geometry::Channel) {
        // strip-shrunk indicators: wall cells lose the samples within epsilon of the wall
        for (int i = 0; i < g.resolution(0); ++i)
            for (int j = 0; j < g.resolution(1); ++j) {
                const double y = g.coordinate(1, j);
                if (y <= epsilon_ || y >= g.length(1) - epsilon_)
                    support_[static_cast<std::size_t>(i) * g.resolution(1) + j] = 0;
            }
    }
    std::array<int, 3> reach{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) reach[a] = static_cast<int>(std::ceil(epsilon_ / g.spacing(a)));
    double mass = 0.0;
    for (int di = -reach[0]; di <= reach[0]; ++di)
        for (int dj = -reach[1]; dj <= reach[1]; ++dj)
            for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
                const double x = di * g.spacing(0), y = dj * g.spacing(1), z = g.dim() == 3 ? dk * g.spacing(2) : 0.0;
                const double w = mollifier_rho(std::sqrt(x * x + y * y + z * z), epsilon_, g.dim());
                if (w <= 0.0) continue;
                taps_.push_back({di, dj, dk, w});
                mass += w;
            }
    for (auto& t : taps_) t.w /= mass;

    if (g.geometry() == Geometry::Torus) {
        PhysicalField ker(grid_, 1);
        const int n0 = g.resolution(0), n1 = g.resolution(1), n2 = g.dim() == 3 ? g.resolution(2) : 1;
        for (const auto& t : taps_) {
            const int i = ((t.di % n0) + n0) % n0, j = ((t.dj % n1) + n1) % n1, k = ((t.dk % n2) + n2) % n2;
            ker.values[(static_cast<std::size_t>(i) * n1 + j) * n2 + k] += t.w;
        }
        SpectralField kh = to_spectral(ker, FieldKind::Scalar);
        kernel_hat_.resize(g.spectral_size());
        const double n = static_cast<double>(g.physical_size());
        for (std::size_t s = 0; s < g.spectral_size(); ++s) kernel_hat_[s] = n * kh.data(0)[s].real();
    }
}

std::size_t Interpolant::rank() const {
    if (kind_ == InterpolantKind::Modal) return 2 * slots_.size();
    return partition_.count();
}

Observation observe(const SpectralField& f, const Interpolant& ip, double t) {
    if (!f.grid().same_as(ip.grid())) throw ShapeError("field and interpolant live on different grids");
    Observation obs;
    obs.kind = ip.kind();
    obs.t = t;
    obs.components = f.components();
    const std::size_t r = ip.rank();
    obs.payload.assign(r * static_cast<std::size_t>(f.components()), 0.0);
    if (ip.kind() == InterpolantKind::Modal) {
        for (int c = 0; c < f.components(); ++c) {
            const cplx* d = f.data(c);
            double* out = obs.payload.data() + c * r;
            for (std::size_t s = 0; s < ip.modal_slots().size(); ++s) {
                out[2 * s] = d[ip.modal_slots()[s]].real();
                out[2 * s + 1] = d[ip.modal_slots()[s]].imag();
            }
        }
        return obs;
    }
    const Grid& g = f.grid();
    const Partition& p = ip.partition();
    PhysicalField phys(f.grid_ptr(), f.components());
    for (int c = 0; c < f.components(); ++c) g.inverse(f.data(c), phys.data(c), f.parity(c));
    const double inv = 1.0 / static_cast<double>(g.physical_size() / p.count());
    for (int c = 0; c < f.components(); ++c) {
        const double* d = phys.data(c);
        double* out = obs.payload.data() + c * r;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t alpha = 0; alpha < static_cast<std::ptrdiff_t>(p.count()); ++alpha) {
            double s = 0.0;
            for_each_sample(g, p, alpha, [&](std::size_t i) { s += d[i]; });
            out[alpha] = s * inv;
        }
    }
    return obs;
}

SpectralField reconstruct(const Observation& obs, const Interpolant& ip, FieldKind kind) {
    if (obs.kind != ip.kind())
        throw KindMismatchError("observation kind " + to_string(obs.kind) + " does not match interpolant " +
                                to_string(ip.kind()));
    const std::size_t r = ip.rank();
    if (obs.payload.size() != r * static_cast<std::size_t>(obs.components))
        throw ShapeError("observation payload size does not match the interpolant rank");
    const Grid& g = ip.grid();
    SpectralField out(ip.grid_ptr(), obs.components, kind);
    if (ip.kind() == InterpolantKind::Modal) {
        for (int c = 0; c < obs.components; ++c) {
            cplx* d = out.data(c);
            const double* in = obs.payload.data() + c * r;
            for (std::size_t s = 0; s < ip.modal_slots().size(); ++s) {
                const std::size_t slot = ip.modal_slots()[s];
                d[slot] = cplx(in[2 * s], in[2 * s + 1]);
                if (!g.self_conjugate_plane(slot)) continue;
                const std::size_t m = g.mirror(slot);
                if (m != slot) d[m] = std::conj(d[slot]);
            }
        }
        return out;
    }
    const Partition& p = ip.partition();
    const bool smoothed = ip.kind() == InterpolantKind::SmoothedVolume;
    PhysicalField phys(ip.grid_ptr(), obs.components);
    for (int c = 0; c < obs.components; ++c) {
        double* d = phys.data(c);
        const double* in = obs.payload.data() + c * r;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t alpha = 0; alpha < static_cast<std::ptrdiff_t>(p.count()); ++alpha) {
            const double v = in[alpha];
            for_each_sample(g, p, alpha, [&](std::size_t i) { d[i] = v * ip.support_[i]; });
        }
    }
    if (smoothed && g.geometry() == Geometry::Channel) {
        // direct convolution: periodic in x, zero outside the walls in y
        const int nx = g.resolution(0), ny = g.resolution(1);
        PhysicalField conv(ip.grid_ptr(), obs.components);
        for (int c = 0; c < obs.components; ++c) {
            const double* src = phys.data(c);
            double* dst = conv.data(c);
#pragma omp parallel for schedule(static)
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    double s = 0.0;
                    for (const auto& t : ip.taps_) {
                        const int jj = j - t.dj;
                        if (jj < 0 || jj >= ny) continue;
                        const int ii = ((i - t.di) % nx + nx) % nx;
                        s += t.w * src[static_cast<std::size_t>(ii) * ny + jj];
                    }
                    dst[static_cast<std::size_t>(i) * ny + j] = s;
                }
        }
        phys = std::move(conv);
    }
    for (int c = 0; c < obs.components; ++c) g.forward(phys.data(c), out.data(c), out.parity(c));
    if (smoothed && g.geometry() == Geometry::Torus) {
        const auto& K = kernels::active();
        for (int c = 0; c < obs.components; ++c) K.scale(out.data(c), out.data(c), ip.kernel_hat_.data(), g.spectral_size());
    }
    return out;
}

SpectralField apply(const SpectralField& f, const Interpolant& ip) {
    return reconstruct(observe(f, ip), ip, f.kind());
}

double cell_energy(const Observation& obs) {
    double s = 0.0;
    for (double v : obs.payload) s += v * v;
    return s;
}

}  // namespace nudge

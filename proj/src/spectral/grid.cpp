#include "nudgelab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace nudge {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

struct Grid::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    // channel only
    fftw_plan dct_fwd = nullptr;
    fftw_plan dst_fwd = nullptr;
    fftw_plan dct_inv = nullptr;
    fftw_plan dst_inv = nullptr;

    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (fftw_plan p : {r2c, c2r, dct_fwd, dst_fwd, dct_inv, dst_inv})
            if (p) fftw_destroy_plan(p);
    }
};

Grid::~Grid() = default;

GridPtr Grid::torus(const std::vector<int>& resolution, const std::vector<double>& lengths) {
    if (resolution.size() < 2 || resolution.size() > 3)
        throw ShapeError("torus grid must be 2D or 3D");
    if (lengths.size() != resolution.size())
        throw ShapeError("one length per axis is required");
    auto g = std::shared_ptr<Grid>(new Grid());
    g->dim_ = static_cast<int>(resolution.size());
    g->geometry_ = Geometry::Torus;
    for (int a = 0; a < g->dim_; ++a) {
        if (resolution[a] < 8 || resolution[a] % 2 != 0)
            throw ShapeError("resolution per axis must be even and >= 8");
        if (!(lengths[a] > 0.0)) throw DomainError("axis length must be positive");
        g->res_[a] = resolution[a];
        g->len_[a] = lengths[a];
        g->ext_[a] = resolution[a];
    }
    g->half_axis_ = g->dim_ - 1;
    g->ext_[g->half_axis_] = g->res_[g->half_axis_] / 2 + 1;
    g->build_tables();
    g->build_plans();
    return g;
}

GridPtr Grid::channel(int nx, int ny, double lx) {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
        throw ShapeError("resolution per axis must be even and >= 8");
    if (!(lx > 0.0)) throw DomainError("channel period must be positive");
    auto g = std::shared_ptr<Grid>(new Grid());
    g->dim_ = 2;
    g->geometry_ = Geometry::Channel;
    g->res_ = {nx, ny, 1};
    g->len_ = {lx, 1.0, 1.0};
    g->half_axis_ = 0;
    g->ext_ = {nx / 2 + 1, ny + 1, 1};
    g->build_tables();
    g->build_plans();
    return g;
}

double Grid::coordinate(int axis, int j) const {
    if (geometry_ == Geometry::Channel && axis == 1) return (j + 0.5) / res_[1];
    return j * spacing(axis);
}

void Grid::build_tables() {
    nphys_ = 1;
    nspec_ = 1;
    volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) {
        nphys_ *= static_cast<std::size_t>(res_[a]);
        nspec_ *= static_cast<std::size_t>(ext_[a]);
        volume_ *= len_[a];
    }
    k2_.assign(nspec_, 0.0);
    weight_.assign(nspec_, 0.0);
    dealias_.assign(nspec_, 0.0);
    for (int a = 0; a < 3; ++a) {
        kderiv_[a].assign(nspec_, 0.0);
        kint_[a].assign(nspec_, 0);
    }
    const double pi = std::numbers::pi;
    for (std::size_t f = 0; f < nspec_; ++f) {
        auto idx = multi_index(f);
        double k2 = 0.0;
        bool keep = true;
        double mult = 1.0;
        for (int a = 0; a < dim_; ++a) {
            const int n = res_[a];
            int m = 0;
            double k = 0.0;
            bool nyquist = false;
            if (geometry_ == Geometry::Channel && a == 1) {
                m = idx[a];
                k = m * pi / len_[1];
                nyquist = (m == n);
                if (m > (2 * n - 1) / 3) keep = false;
                mult *= (m == 0 || m == n) ? 1.0 : 0.5;
            } else if (a == half_axis_) {
                m = idx[a];
                k = 2.0 * pi * m / len_[a];
                nyquist = (m == n / 2);
                if (m > (n - 1) / 3) keep = false;
                mult *= (m == 0 || m == n / 2) ? 1.0 : 2.0;
            } else {
                m = signed_mode(idx[a], n);
                k = 2.0 * pi * m / len_[a];
                nyquist = (idx[a] == n / 2);
                if (std::abs(m) > (n - 1) / 3) keep = false;
            }
            kint_[a][f] = m;
            kderiv_[a][f] = nyquist ? 0.0 : k;
            k2 += k * k;
        }
        k2_[f] = k2;
        weight_[f] = volume_ * mult;
        dealias_[f] = keep ? 1.0 : 0.0;
    }
    if (geometry_ == Geometry::Torus) {
        double lmin = len_[0];
        for (int a = 1; a < dim_; ++a) lmin = std::min(lmin, len_[a]);
        lambda1_ = std::pow(2.0 * pi / lmin, 2);
    } else {
        // shear mode u_x = cos(pi y) and temperature sin(pi y) both sit at kx = 0, n = 1
        lambda1_ = std::pow(pi / len_[1], 2);
    }
}

void Grid::build_plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plans_ = std::make_unique<Plans>();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (geometry_ == Geometry::Torus) {
        RVec r(nphys_);
        CVec c(nspec_);
        auto* cp = reinterpret_cast<fftw_complex*>(c.data());
        plans_->r2c = fftw_plan_dft_r2c(dim_, res_.data(), r.data(), cp, flags);
        plans_->c2r = fftw_plan_dft_c2r(dim_, res_.data(), cp, r.data(), flags | FFTW_DESTROY_INPUT);
    } else {
        const int nx = res_[0], ny = res_[1];
        RVec a(static_cast<std::size_t>(nx) * ny), b(a.size());
        RVec t(static_cast<std::size_t>(nx) * (ny + 1));
        CVec c(nspec_);
        auto* cp = reinterpret_cast<fftw_complex*>(c.data());
        int n1[1] = {ny};
        fftw_r2r_kind k;
        k = FFTW_REDFT10;
        plans_->dct_fwd = fftw_plan_many_r2r(1, n1, nx, a.data(), nullptr, 1, ny, b.data(), nullptr, 1, ny, &k, flags);
        k = FFTW_RODFT10;
        plans_->dst_fwd = fftw_plan_many_r2r(1, n1, nx, a.data(), nullptr, 1, ny, b.data(), nullptr, 1, ny, &k, flags);
        k = FFTW_REDFT01;
        plans_->dct_inv = fftw_plan_many_r2r(1, n1, nx, a.data(), nullptr, 1, ny, b.data(), nullptr, 1, ny, &k, flags);
        k = FFTW_RODFT01;
        plans_->dst_inv = fftw_plan_many_r2r(1, n1, nx, a.data(), nullptr, 1, ny, b.data(), nullptr, 1, ny, &k, flags);
        int n0[1] = {nx};
        plans_->r2c = fftw_plan_many_dft_r2c(1, n0, ny + 1, t.data(), nullptr, ny + 1, 1, cp, nullptr, ny + 1, 1, flags);
        plans_->c2r = fftw_plan_many_dft_c2r(1, n0, ny + 1, cp, nullptr, ny + 1, 1, t.data(), nullptr, ny + 1, 1,
                                             flags | FFTW_DESTROY_INPUT);
    }
    if (!plans_->r2c || !plans_->c2r) throw Error("FFTW planning failed");
}

std::size_t Grid::flat_index(const std::array<int, 3>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < dim_; ++a) f = f * static_cast<std::size_t>(ext_[a]) + static_cast<std::size_t>(idx[a]);
    return f;
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(ext_[a]));
        flat /= static_cast<std::size_t>(ext_[a]);
    }
    return idx;
}

std::size_t Grid::mirror(std::size_t flat) const {
    if (geometry_ == Geometry::Channel) return flat;
    auto idx = multi_index(flat);
    for (int a = 0; a < dim_; ++a) {
        if (a == half_axis_) continue;
        idx[a] = (res_[a] - idx[a]) % res_[a];
    }
    return flat_index(idx);
}

bool Grid::self_conjugate_plane(std::size_t flat) const {
    const int i = multi_index(flat)[half_axis_];
    return i == 0 || i == res_[half_axis_] / 2;
}

bool Grid::same_as(const Grid& o) const {
    if (this == &o) return true;
    return dim_ == o.dim_ && geometry_ == o.geometry_ && res_ == o.res_ && len_ == o.len_;
}

void Grid::forward(const double* phys, cplx* spec, Parity parity) const {
    auto* out = reinterpret_cast<fftw_complex*>(spec);
    if (geometry_ == Geometry::Torus) {
        fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(phys), out);
        const double s = 1.0 / static_cast<double>(nphys_);
        for (std::size_t i = 0; i < nspec_; ++i) spec[i] *= s;
        return;
    }
    const int nx = res_[0], ny = res_[1];
    thread_local RVec r, t;
    r.resize(static_cast<std::size_t>(nx) * ny);
    t.resize(static_cast<std::size_t>(nx) * (ny + 1));
    if (parity == Parity::Odd)
        fftw_execute_r2r(plans_->dst_fwd, const_cast<double*>(phys), r.data());
    else
        fftw_execute_r2r(plans_->dct_fwd, const_cast<double*>(phys), r.data());
    const double s = 1.0 / (static_cast<double>(ny) * nx);
    for (int ix = 0; ix < nx; ++ix) {
        const double* row = r.data() + static_cast<std::size_t>(ix) * ny;
        double* dst = t.data() + static_cast<std::size_t>(ix) * (ny + 1);
        if (parity == Parity::Odd) {
            dst[0] = 0.0;
            for (int n = 1; n < ny; ++n) dst[n] = row[n - 1] * s;
            dst[ny] = 0.5 * row[ny - 1] * s;
        } else {
            dst[0] = 0.5 * row[0] * s;
            for (int n = 1; n < ny; ++n) dst[n] = row[n] * s;
            dst[ny] = 0.0;
        }
    }
    fftw_execute_dft_r2c(plans_->r2c, t.data(), out);
}

void Grid::inverse(const cplx* spec, double* phys, Parity parity) const {
    thread_local CVec scratch;
    scratch.assign(spec, spec + nspec_);
    auto* in = reinterpret_cast<fftw_complex*>(scratch.data());
    if (geometry_ == Geometry::Torus) {
        fftw_execute_dft_c2r(plans_->c2r, in, phys);
        return;
    }
    const int nx = res_[0], ny = res_[1];
    thread_local RVec t, z;
    t.resize(static_cast<std::size_t>(nx) * (ny + 1));
    z.resize(static_cast<std::size_t>(nx) * ny);
    fftw_execute_dft_c2r(plans_->c2r, in, t.data());
    for (int ix = 0; ix < nx; ++ix) {
        const double* src = t.data() + static_cast<std::size_t>(ix) * (ny + 1);
        double* row = z.data() + static_cast<std::size_t>(ix) * ny;
        if (parity == Parity::Odd) {
            for (int k = 0; k < ny - 1; ++k) row[k] = 0.5 * src[k + 1];
            row[ny - 1] = src[ny];
        } else {
            row[0] = src[0];
            for (int k = 1; k < ny; ++k) row[k] = 0.5 * src[k];
        }
    }
    if (parity == Parity::Odd)
        fftw_execute_r2r(plans_->dst_inv, z.data(), phys);
    else
        fftw_execute_r2r(plans_->dct_inv, z.data(), phys);
}

}  // namespace nudge

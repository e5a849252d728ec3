#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

#include "nudgelab/interpolant.hpp"

namespace nudge {

namespace {

double bump(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
    }
    throw DomainError("mollifier supports dimensions 1 to 3");
}

double compute_K0(int dim) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [dim](double r) { return std::pow(r, dim - 1) * bump(r); };
    const double radial = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-15);
    return 1.0 / (sphere_area(dim) * radial);
}

}  // namespace

double mollifier_K0(int dim) {
    static const double k[3] = {compute_K0(1), compute_K0(2), compute_K0(3)};
    if (dim < 1 || dim > 3) throw DomainError("mollifier supports dimensions 1 to 3");
    return k[dim - 1];
}

double mollifier_rho(double r, double epsilon, int dim) {
    if (!(epsilon > 0.0)) throw DomainError("mollifier width must be positive");
    const double x = std::abs(r) / epsilon;
    if (x >= 1.0) return 0.0;
    return mollifier_K0(dim) * bump(x) / std::pow(epsilon, dim);
}

double mollifier_gradient_constant(int dim) {
    const double k0 = mollifier_K0(dim);
    // |rho'(r)| = K0 exp(-1/(1-r^2)) 2r/(1-r^2)^2; the axis direction attains the max of each partial
    auto neg_slope = [k0](double r) {
        const double s = 1.0 - r * r;
        return -k0 * bump(r) * 2.0 * r / (s * s);
    };
    auto best = boost::math::tools::brent_find_minima(neg_slope, 0.0, 0.999, 50);
    const double g = -best.second;
    return dim * g * g;
}

}  // namespace nudge

#include "ndsg/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ndsg {

void ModelParams::validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(A))
        throw std::invalid_argument("ModelParams: non-finite parameter");
    if (lambda < 0.0)
        throw std::invalid_argument("ModelParams: lambda must be >= 0");
}

void PhysicalParams::validate() const {
    if (!(lambda_L > 0.0) || !(L > 0.0) || !(d > 0.0) || !(lambda_J > 0.0))
        throw std::domain_error("PhysicalParams: all lengths must be positive");
}

double nonlinearity(double phi, const ModelParams& p) {
    return std::sin(phi) + 2.0 * p.A * std::sin(2.0 * phi);
}

double potential(double phi, const ModelParams& p) {
    return (1.0 - std::cos(phi)) + p.A * (1.0 - std::cos(2.0 * phi));
}

namespace {
void require_kink_params(double v, double A) {
    if (A <= -0.25)
        throw std::domain_error("local DSG kink requires A > -1/4");
    if (!(v * v < 1.0))
        throw std::domain_error("kink velocity requires v^2 < 1");
}
}  // namespace

double local_dsg_kink(double xi, double v, double A) {
    require_kink_params(v, A);
    const double c = std::sqrt(1.0 + 4.0 * A);
    const double b = c / std::sqrt(1.0 - v * v);
    return M_PI + 2.0 * std::atan(std::sinh(b * xi) / c);
}

double local_dsg_kink_deriv(double xi, double v, double A) {
    require_kink_params(v, A);
    const double c = std::sqrt(1.0 + 4.0 * A);
    const double b = c / std::sqrt(1.0 - v * v);
    const double ch = std::cosh(b * xi);
    // d/dxi [2 atan(sinh(b xi)/c)] = 2 b c cosh / (c^2 + sinh^2)
    return 2.0 * b * c * ch / (c * c - 1.0 + ch * ch);
}

double sg_like_excitation(double xi, double v, double gamma) {
    if (!(v * v < 1.0))
        throw std::domain_error("sg-like excitation requires v^2 < 1");
    if (!(gamma > 0.0))
        throw std::domain_error("sg-like excitation requires gamma > 0");
    return 4.0 * std::atan(std::exp(gamma * xi / std::sqrt(1.0 - v * v)));
}

double sg_like_excitation_deriv(double xi, double v, double gamma) {
    if (!(v * v < 1.0))
        throw std::domain_error("sg-like excitation requires v^2 < 1");
    if (!(gamma > 0.0))
        throw std::domain_error("sg-like excitation requires gamma > 0");
    const double g = gamma / std::sqrt(1.0 - v * v);
    return 2.0 * g / std::cosh(g * xi);
}

double dispersion_residual(const ModelParams& p, double v, double k) {
    const double k2 = k * k;
    return v * v * k2 - k2 / (1.0 + p.lambda * p.lambda * k2) - (1.0 + 4.0 * p.A);
}

DispersionRoots dispersion_roots(const ModelParams& p, double v) {
    p.validate();
    if (!(v * v < 1.0))
        throw std::domain_error("dispersion_roots requires v^2 < 1");
    if (!p.real_linearization())
        throw std::domain_error("dispersion_roots requires 1 + 4A > 0");

    DispersionRoots out;
    const double B = 1.0 + 4.0 * p.A;
    const double l2 = p.lambda * p.lambda;

    if (p.lambda == 0.0 || v == 0.0) {
        // lambda = 0:  k^2 (v^2 - 1) = B has no real k for v^2 < 1.
        // v = 0:       -k^2/(1 + l^2 k^2) = B likewise.
        return out;
    }

    // u = k^2:  v^2 l^2 u^2 - (1 - v^2 + B l^2) u - B = 0.
    const double a = v * v * l2;
    const double b = -(1.0 - v * v + B * l2);
    const double c = -B;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;

    // Stable quadratic roots (avoid cancellation in the small root).
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    const double u1 = qq / a;
    const double u2 = c / qq;
    for (double u : {u1, u2}) {
        if (u > 0.0) {
            out.k.push_back(std::sqrt(u));
            out.multiple.push_back(disc == 0.0);
        }
    }
    if (out.k.size() == 2 && out.k[0] > out.k[1]) {
        std::swap(out.k[0], out.k[1]);
        std::swap(out.multiple[0], out.multiple[1]);
    }
    for (double k : out.k)
        out.residual = std::max(out.residual, std::abs(dispersion_residual(p, v, k)));
    return out;
}

ScaleReport physical_to_dimensionless(const PhysicalParams& phys) {
    phys.validate();
    ScaleReport r;
    const double lL = phys.lambda_L, L = phys.L, d = phys.d, lJ = phys.lambda_J;
    r.lambda = std::sqrt(L) * lL / (lJ * std::sqrt(lL + d));
    r.lambda_eff = lL * std::sqrt(L / (L + d));
    r.zeta_per_x = std::sqrt((L + d) / (lL + d)) / lJ;
    r.big_lambda = (lL + d) * lJ * lJ / (2.0 * lL * std::sqrt((L + d) * L));
    r.energy_geometry = std::sqrt((lL + d) / (L + d));
    r.tau_scale = "omega_J = 4*pi*sqrt(c*j_c*d/(phi_0*eps))";
    r.energy_prefactor =
        "phi_0*j_c*lambda_J/(2*pi*c) * sqrt((lambda_L+d)/(L+d))";
    if (phys.j_c && phys.J2 && *phys.j_c != 0.0) {
        r.A = *phys.J2 / (2.0 * *phys.j_c);
        r.has_A = true;
    }
    return r;
}

double thin_layer_factor(const PhysicalParams& phys, double k) {
    phys.validate();
    return 2.0 * phys.L * std::sqrt(1.0 / (phys.lambda_L * phys.lambda_L) + k * k);
}

}  // namespace ndsg

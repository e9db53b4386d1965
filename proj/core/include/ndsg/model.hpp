#pragma once

// Dimensionless nonlocal double sine-Gordon model.
//
// The governing equation in dimensionless variables (zeta, tau) is
//
//   sin(phi) + 2A sin(2 phi) + phi_tt = L phi,
//
// where L is the Kac-Baker nonlocal operator
//
//   (L phi)(z) = (1/2 lambda) d/dz  Int  exp(-|z - z'|/lambda) phi_z'(z') dz'
//
// with Fourier symbol  -k^2 / (1 + lambda^2 k^2).  Two parameters govern
// everything: the screening length lambda >= 0 and the second-harmonic
// amplitude A of the current-phase relation.  lambda = 0 recovers the local
// double sine-Gordon equation.

#include <optional>
#include <string>
#include <vector>

namespace ndsg {

struct ModelParams {
    double lambda = 0.0;  // nonlocality parameter, >= 0
    double A = 0.0;       // second-harmonic amplitude, A = J2 / (2 Jc)

    // Throws std::invalid_argument on lambda < 0 or non-finite fields.
    void validate() const;

    // 1 + 4A > 0: the linearization frequency about phi = 0 is real.
    bool real_linearization() const { return 1.0 + 4.0 * A > 0.0; }
};

// Geometry and material scales of the layered structure, all lengths in one
// common (arbitrary) unit.  2L is the superconducting layer thickness, 2d the
// tunnel layer thickness.
struct PhysicalParams {
    double lambda_L = 0.0;  // London penetration depth
    double L = 0.0;         // superconducting half-thickness
    double d = 0.0;         // tunnel half-thickness
    double lambda_J = 0.0;  // Josephson length
    std::optional<double> j_c;  // critical current density (only echoed)
    std::optional<double> J2;   // second-harmonic current density

    void validate() const;  // all lengths strictly positive
};

// Conversion report.  Dimensional scales that need constants we do not model
// (flux quantum, light speed, permittivity) are carried as formula strings;
// only the dimensionless ratios feed downstream computations.
struct ScaleReport {
    double lambda = 0.0;       // dimensionless nonlocality parameter
    double A = 0.0;            // J2 / (2 j_c) when both currents given, else 0
    double lambda_eff = 0.0;   // lambda_L * sqrt(L / (L + d)), same unit as inputs
    double zeta_per_x = 0.0;   // zeta = zeta_per_x * x; equals sqrt((L+d)/(lambda_L+d))/lambda_J
    double big_lambda = 0.0;   // (lambda_L+d) lambda_J^2 / (2 lambda_L sqrt((L+d) L))
    double energy_geometry = 0.0;     // sqrt((lambda_L+d)/(L+d)) factor of the energy scale
    std::string tau_scale;            // Josephson plasma frequency, as a formula
    std::string energy_prefactor;     // energy unit, as a formula
    bool has_A = false;
};

// sin(phi) + 2A sin(2 phi); the derivative of `potential` below.
double nonlinearity(double phi, const ModelParams& p);

// 1 - cos(phi) + A (1 - cos(2 phi))
double potential(double phi, const ModelParams& p);

// Exact 2pi-kink of the local (lambda = 0) double sine-Gordon equation,
//   phi(xi) = pi + 2 atan( sinh(b xi) / sqrt(1+4A) ),  b = sqrt(1+4A)/sqrt(1-v^2).
// Requires A > -1/4 and v^2 < 1 (throws std::domain_error otherwise).
double local_dsg_kink(double xi, double v, double A);

// d/dxi of local_dsg_kink, in closed form.
double local_dsg_kink_deriv(double xi, double v, double A);

// Sine-Gordon-like initial excitation 4 atan(exp(gamma xi / sqrt(1-v^2))).
// Requires v^2 < 1 and gamma > 0.
double sg_like_excitation(double xi, double v, double gamma);
double sg_like_excitation_deriv(double xi, double v, double gamma);

struct DispersionRoots {
    std::vector<double> k;            // nonnegative real roots, increasing
    std::vector<bool> multiple;       // double-root flags, aligned with k
    double residual = 0.0;            // worst |relation residual| over roots
};

// Real wavenumbers resonant with a traveling 2pi-front:  phi ~ exp(ik xi)
// inserted into the linearized traveling-wave equation gives
//
//   v^2 k^2 - k^2/(1 + lambda^2 k^2) = 1 + 4A.
//
// Solved through the quadratic in u = k^2 and filtered for u > 0; every root
// is residual-checked.  For lambda > 0, A > -1/4, 0 < v^2 < 1 there is exactly
// one positive root.  For lambda = 0 the set is empty (no resonance).
DispersionRoots dispersion_roots(const ModelParams& p, double v);

// Evaluate the dispersion relation defect at wavenumber k (diagnostic).
double dispersion_residual(const ModelParams& p, double v, double k);

// lambda = sqrt(L) lambda_L / (lambda_J sqrt(lambda_L + d)), plus the full
// scale report.  Throws std::domain_error on nonpositive lengths.
ScaleReport physical_to_dimensionless(const PhysicalParams& phys);

// Thin-layer validity factor 2L sqrt(lambda_L^-2 + k^2) for a user-supplied
// inverse length scale k; the reduction assumes this is << 1.
double thin_layer_factor(const PhysicalParams& phys, double k);

}  // namespace ndsg

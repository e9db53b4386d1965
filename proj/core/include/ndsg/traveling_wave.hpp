#pragma once

// Radiationless 2pi-kink velocities by shooting on the equivalent 4D system.
//
// Writing q = S_lambda phi_xi (so -lambda^2 q'' + q = phi') turns the
// traveling-wave equation into the first-order system
//
//   phi' = p
//   p'   = (r - sin phi - 2A sin 2phi) / v^2        (r = q')
//   q'   = r
//   r'   = (q - p) / lambda^2
//
// whose origin is a saddle-center: one real pair +-mu0 and one imaginary
// pair +-i k0, k0 being the resonant radiation wavenumber.  The system is
// reversible under  S: (phi, p, q, r)(xi) -> (2pi - phi, p, q, -r)(-xi);
// a kink symmetric under S crosses the section phi = pi with q' = 0.  The
// shooting mismatch is therefore
//
//   R = q'  at the first phi = pi upcrossing of the unstable-manifold orbit,
//
// and radiationless velocities are the zeros of R(v).  The same machinery,
// with state (phi, phi', phi'', phi''') and mismatch phi'' at phi = pi,
// handles the fourth-order model  phi'' + delta^2 phi'''' = sin phi + 2A sin 2phi
// valid near (lambda -> 0, v -> 1).

#include "ndsg/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ndsg {

struct EigenStructure {
    double mu0 = 0.0;   // positive real exponent (unstable direction)
    double k0 = 0.0;    // center-pair wavenumber; matches dispersion_roots
    std::array<double, 4> unstable_dir{};  // eigenvector, phi-component 1
    bool degenerate = false;               // |mu0| or k0 below 1e-8
};

// Characteristic exponents of the linearized system at (0,0,0,0).
// Requires 1 + 4A > 0, 0 < v < 1, lambda > 0.
EigenStructure linearize_at_origin(const ModelParams& p, double v);

// Same for the fourth-order model at a given delta > 0.
EigenStructure linearize_fourth(double A, double delta);

enum class ShootStatus { ok, no_crossing, blow_up };

struct ShootControls {
    double eps = 1e-7;        // offset along the unstable eigenvector
    double rtol = 1e-10;
    double atol = 1e-12;
    double xi_cap_factor = 100.0;  // cap = factor * max(1, lambda)
    bool richardson = false;  // repeat at eps/2 and extrapolate the O(eps^2) term
    double h_init = 1e-3;
};

struct ShootResult {
    ShootStatus status = ShootStatus::no_crossing;
    double R = 0.0;          // reversor defect at the section
    double xi_cross = 0.0;   // event location
    std::array<double, 4> state_at_section{};
    double richardson_gap = 0.0;  // |R(eps) - R(eps/2)|, when enabled
};

// Mismatch of the full nonlocal model at velocity v.
ShootResult shoot_mismatch(const ModelParams& p, double v, const ShootControls& c = {});

// Mismatch of the fourth-order model at parameter delta.
ShootResult shoot_mismatch_fourth(double A, double delta, const ShootControls& c = {});

enum class SpectrumKind { velocity, lambda, delta };

struct SpectrumEntry {
    int n = 0;            // branch index, 1 = largest parameter value
    double value = 0.0;   // v_n, lambda_n or delta_n
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double R_lo = 0.0, R_hi = 0.0;   // mismatch at the bracket ends
    double residual = 0.0;           // |R| at the refined zero
    bool tangent = false;            // double zero: |R| small, no sign change
};

// |R| dipped below the reporting threshold without a sign change: either an
// unresolved zero (noise-floor) or a tangency.  Reported, never asserted.
struct SuspectedZero {
    double where = 0.0;
    double abs_R = 0.0;
    std::string reason;
};

struct ScanControls {
    int grid_points = 2000;
    double refine_tol = 1e-8;        // bisection width target
    double verify_tol = 1e-6;        // |R| required at an accepted zero
    double dip_factor = 10.0;        // dips below dip_factor * atol are reported
    ShootControls shoot;
    int max_entries = 64;
};

struct VelocitySpectrum {
    SpectrumKind kind = SpectrumKind::velocity;
    ModelParams params;
    double fixed_v = 0.0;  // for lambda scans
    std::vector<SpectrumEntry> entries;      // decreasing in value
    std::vector<SuspectedZero> suspected;
    int scan_points = 0;
    int no_crossing_points = 0;
};

// Zeros of R(v) over v_range (subset of (0,1)), largest first.
VelocitySpectrum find_velocity_spectrum(const ModelParams& p, double v_lo, double v_hi,
                                        int n_max, const ScanControls& c = {});

// Zeros of R(lambda) at fixed v, largest first.  A > 0, v in (0,1).
VelocitySpectrum find_lambda_spectrum(double A, double v, double lambda_lo, double lambda_hi,
                                      int n_max, const ScanControls& c = {});

// Zeros of the fourth-order mismatch over delta, largest first.  A > -1/4.
VelocitySpectrum fourth_order_spectrum(double A, double delta_lo, double delta_hi, int n_max,
                                       const ScanControls& c = {});

struct KinkProfile {
    double v = 0.0;
    double lambda = 0.0, A = 0.0;
    int branch = 0;
    std::vector<double> xi;    // uniform, symmetric about 0, phi(0) = pi
    std::vector<double> phi, dphi, q, dq;
    double energy = 0.0;       // conserved functional of the evolution problem
    double energy_potential = 0.0, energy_kinetic = 0.0, energy_nonlocal = 0.0;
    double residual = 0.0;     // max traveling-wave defect, independent route
    double section_defect = 0.0;  // |q'| at the section before reflection
};

// Integrate the half-orbit to the symmetric section, reflect through the
// reversor, and sample the full profile on a uniform grid (target spacing
// h_target).  Energy uses phi_tau = -v phi_xi.  |R(v_n)| should already be
// below the verification tolerance.
KinkProfile assemble_kink(const ModelParams& p, double v_n, double h_target = 0.01,
                          const ShootControls& c = {});

// Predicted small-lambda velocity of branch n given the fourth-order value
// delta_n: the scalings delta = lambda v/(1-v^2) inverted for v in (0,1).
double velocity_from_delta(double lambda, double delta_n);

}  // namespace ndsg

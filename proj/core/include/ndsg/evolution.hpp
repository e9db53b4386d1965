#pragma once

// Time evolution of  phi_tt = L phi - sin phi - 2A sin 2phi - sigma(z) phi_t
// on a finite grid with absorbing sponge zones at both edges, plus the
// conserved energy functional, front tracking and the launched-kink
// experiments.  Time stepping is classical RK4; since the nonlocal symbol is
// bounded by 1/lambda^2 the stable step is set by the parameters, not by h.

#include "ndsg/grid.hpp"
#include "ndsg/model.hpp"
#include "ndsg/traveling_wave.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndsg {

struct StabilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LostFrontError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpongeConfig {
    double fraction = 0.10;   // per-side share of the domain, in [0.05, 0.2]
    double sigma_max = 1.0;   // peak damping at the boundary
    void validate() const;
};

struct FieldState {
    Grid grid;
    std::vector<double> phi;
    std::vector<double> phi_dot;
    std::vector<double> sigma;  // damping profile, zero outside sponge zones
    double tau = 0.0;
    Boundary boundary = Boundary::decaying;

    void validate() const;
};

// Smoothstep damping ramp peaking at the boundaries.
std::vector<double> sponge_profile(const Grid& grid, const SpongeConfig& sponge);

struct EnergyReport {
    double total = 0.0;
    double potential = 0.0;  // 1 - cos phi + A (1 - cos 2phi)
    double kinetic = 0.0;    // phi_tau^2 / 2
    double nonlocal = 0.0;   // phi_z S_lambda phi_z / 2
    double window_lo = 0.0, window_hi = 0.0;
};

// Energy over [window_lo, window_hi]; defaults to the full grid.
EnergyReport energy(const FieldState& state, const ModelParams& p,
                    std::optional<double> window_lo = {},
                    std::optional<double> window_hi = {});

// Largest stable time step c_safe / omega_max for the RK4 scheme, with
// omega_max^2 = 1/lambda^2 + 1 + 4|A| (discrete stencil bound when lambda=0).
double stability_limit(const ModelParams& p, double h, double c_safe = 1.0);

// One RK4 step; throws StabilityViolation when dt exceeds the limit and
// BlowUpError when non-finite values appear.
FieldState step(const FieldState& state, const ModelParams& p, double dt);

struct FrontRecord {
    double tau = 0.0;
    double zeta = 0.0;      // interpolated phi = pi crossing
    double v_raw = 0.0;     // adjacent-record difference quotient
    double v_smooth = 0.0;  // centered slope over the smoothing window
};

struct FrontTrace {
    std::vector<FrontRecord> records;
    int window = 5;
};

// Velocity series from sampled front positions.  `window` is the half-width
// (in records) of the centered smoothing slope.
FrontTrace make_front_trace(const std::vector<double>& tau, const std::vector<double>& zeta,
                            int window = 5);

// Interpolated phi = pi crossing nearest to `previous` (continuity of
// tracking); throws LostFrontError when none exists nearby.
double locate_front(const FieldState& state, std::optional<double> previous = {});

enum class InitialKind { traveling, sg_like, local_dsg };

struct InitialCondition {
    InitialKind kind = InitialKind::sg_like;
    double v = 0.0;       // launch velocity (phi_tau = -v phi_z)
    double gamma = 1.0;   // slope of the sg-like excitation
    int branch = 1;       // traveling kind: spectrum branch
    double center = 0.0;  // front position at tau = 0
};

struct RunConfig {
    std::string name = "run";
    ModelParams model;
    double zeta_min = -100.0, zeta_max = 250.0, h = 0.05;
    double dt = 0.01, tau_final = 100.0, record_dt = 0.5;
    InitialCondition initial;
    SpongeConfig sponge;
    std::vector<double> snapshot_times;
    std::string output_dir = ".";
    unsigned long seed = 0;  // reserved; no randomness is used

    Grid make_grid() const;
    void validate() const;  // every physical precondition, before any work
};

// Builds the initial state: phi from the chosen profile family, rigid-boost
// phi_tau = -v phi_z, front centered at initial.center.  The traveling kind
// resamples `profile` (cubic Hermite; required non-null).  Throws
// std::domain_error when the profile tails exceed 1e-6 at the sponge edges.
FieldState make_initial_state(const RunConfig& config, const KinkProfile* profile = nullptr);

struct EnergyRecord {
    double tau = 0.0;
    EnergyReport report;
};

struct Snapshot {
    double tau = 0.0;
    std::vector<double> phi, phi_dot;
};

struct TerminalVelocity {
    double mean = 0.0;
    double stddev = 0.0;
    double window_from = 0.0;  // averaged over tau >= this
};

struct RunArtifacts {
    FrontTrace front;
    std::vector<EnergyRecord> energy_series;
    std::vector<Snapshot> snapshots;
    TerminalVelocity terminal;
    FieldState final_state;
    bool completed = false;
    std::string abort_reason;
};

// Execute the experiment described by `config`.  Partial artifacts are
// returned (completed = false) when stepping aborts.
RunArtifacts run(const RunConfig& config, const KinkProfile* profile = nullptr);

}  // namespace ndsg

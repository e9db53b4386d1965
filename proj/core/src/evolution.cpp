#include "ndsg/evolution.hpp"

#include "ndsg/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ndsg {

namespace {
constexpr double pi = std::numbers::pi;
}

void SpongeConfig::validate() const {
    if (!(fraction >= 0.05) || !(fraction <= 0.20))
        throw std::invalid_argument("SpongeConfig: fraction must lie in [0.05, 0.20]");
    if (!(sigma_max >= 0.0))
        throw std::invalid_argument("SpongeConfig: sigma_max must be >= 0");
}

void FieldState::validate() const {
    grid.validate();
    if (phi.size() != grid.n || phi_dot.size() != grid.n || sigma.size() != grid.n)
        throw std::invalid_argument("FieldState: array sizes disagree with the grid");
}

std::vector<double> sponge_profile(const Grid& grid, const SpongeConfig& sponge) {
    sponge.validate();
    const double len = grid.length();
    const double w = sponge.fraction * len;
    std::vector<double> sigma(grid.n, 0.0);
    const double lo = grid.x0, hi = grid.x0 + len;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double z = grid.x(i);
        double u = 0.0;
        if (z < lo + w) u = (lo + w - z) / w;
        if (z > hi - w) u = std::max(u, (z - (hi - w)) / w);
        u = std::clamp(u, 0.0, 1.0);
        sigma[i] = sponge.sigma_max * u * u * (3.0 - 2.0 * u);
    }
    return sigma;
}

EnergyReport energy(const FieldState& state, const ModelParams& p,
                    std::optional<double> window_lo, std::optional<double> window_hi) {
    state.validate();
    p.validate();
    const Grid& g = state.grid;
    EnergyReport rep;
    rep.window_lo = window_lo.value_or(g.x0);
    rep.window_hi = window_hi.value_or(g.x0 + g.length());

    SampledField phif{g, state.phi, state.boundary};
    const auto dphi = fd_derivative(phif);
    std::vector<double> q;
    if (p.lambda > 0.0) {
        SampledField df{g, dphi, state.boundary};
        q = convolve_exponential(df, p.lambda).values;
    } else {
        q = dphi;  // local limit: the kernel is a delta
    }

    std::vector<double> pot, kin, nl;
    pot.reserve(g.n);
    std::size_t i0 = g.n, i1 = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double z = g.x(i);
        if (z < rep.window_lo - 1e-12 || z > rep.window_hi + 1e-12) continue;
        i0 = std::min(i0, i);
        i1 = std::max(i1, i);
    }
    if (i0 >= i1) throw std::invalid_argument("energy: empty window");
    for (std::size_t i = i0; i <= i1; ++i) {
        pot.push_back(potential(state.phi[i], p));
        kin.push_back(0.5 * state.phi_dot[i] * state.phi_dot[i]);
        nl.push_back(0.5 * dphi[i] * q[i]);
    }
    rep.potential = trapezoid(pot, g.h);
    rep.kinetic = trapezoid(kin, g.h);
    rep.nonlocal = trapezoid(nl, g.h);
    rep.total = rep.potential + rep.kinetic + rep.nonlocal;
    return rep;
}

double stability_limit(const ModelParams& p, double h, double c_safe) {
    p.validate();
    const double b = 1.0 + 4.0 * std::abs(p.A);
    double op_bound;
    if (p.lambda > 0.0)
        op_bound = 1.0 / (p.lambda * p.lambda);
    else
        op_bound = 16.0 / (3.0 * h * h);  // 4th-order stencil amplification cap
    return c_safe / std::sqrt(op_bound + b);
}

namespace {

// d^2 phi/dtau^2 for the damped NDSG flow.
void acceleration(const FieldState& state, const ModelParams& p,
                  const std::vector<double>& phi, const std::vector<double>& psi,
                  std::vector<double>& out) {
    SampledField phif{state.grid, phi, state.boundary};
    const auto Lphi = apply_nonlocal_term(phif, p.lambda);
    const std::size_t n = state.grid.n;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = Lphi.values[i] - std::sin(phi[i]) - 2.0 * p.A * std::sin(2.0 * phi[i]) -
                 state.sigma[i] * psi[i];
}

}  // namespace

FieldState step(const FieldState& state, const ModelParams& p, double dt) {
    state.validate();
    p.validate();
    const double limit = stability_limit(p, state.grid.h, 1.0);
    if (!(dt > 0.0) || dt > limit)
        throw StabilityViolation("step: dt exceeds the stability bound " + std::to_string(limit));

    const std::size_t n = state.grid.n;
    const auto& phi = state.phi;
    const auto& psi = state.phi_dot;
    std::vector<double> a1, a2, a3, a4;
    std::vector<double> tp(n), tv(n);

    acceleration(state, p, phi, psi, a1);
    for (std::size_t i = 0; i < n; ++i) {
        tp[i] = phi[i] + 0.5 * dt * psi[i];
        tv[i] = psi[i] + 0.5 * dt * a1[i];
    }
    acceleration(state, p, tp, tv, a2);
    std::vector<double> tv2(n);
    for (std::size_t i = 0; i < n; ++i) {
        tp[i] = phi[i] + 0.5 * dt * (psi[i] + 0.5 * dt * a1[i]);
        tv2[i] = psi[i] + 0.5 * dt * a2[i];
    }
    acceleration(state, p, tp, tv2, a3);
    std::vector<double> tv3(n);
    for (std::size_t i = 0; i < n; ++i) {
        tp[i] = phi[i] + dt * (psi[i] + 0.5 * dt * a2[i]);
        tv3[i] = psi[i] + dt * a3[i];
    }
    acceleration(state, p, tp, tv3, a4);

    FieldState out = state;
    out.tau = state.tau + dt;
    for (std::size_t i = 0; i < n; ++i) {
        out.phi[i] = phi[i] + dt * psi[i] +
                     dt * dt / 6.0 * (a1[i] + a2[i] + a3[i]);
        out.phi_dot[i] = psi[i] + dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        if (!std::isfinite(out.phi[i]) || !std::isfinite(out.phi_dot[i]))
            throw BlowUpError("step: non-finite field at tau = " + std::to_string(out.tau));
    }
    return out;
}

FrontTrace make_front_trace(const std::vector<double>& tau, const std::vector<double>& zeta,
                            int window) {
    if (tau.size() != zeta.size())
        throw std::invalid_argument("make_front_trace: size mismatch");
    FrontTrace t;
    t.window = window;
    const int n = static_cast<int>(tau.size());
    for (int i = 0; i < n; ++i) {
        FrontRecord r;
        r.tau = tau[static_cast<std::size_t>(i)];
        r.zeta = zeta[static_cast<std::size_t>(i)];
        const int il = std::max(0, i - 1), ir = std::min(n - 1, i + 1);
        r.v_raw = ir > il ? (zeta[ir] - zeta[il]) / (tau[ir] - tau[il]) : 0.0;
        const int jl = std::max(0, i - window), jr = std::min(n - 1, i + window);
        r.v_smooth = jr > jl ? (zeta[jr] - zeta[jl]) / (tau[jr] - tau[jl]) : 0.0;
        t.records.push_back(r);
    }
    return t;
}

double locate_front(const FieldState& state, std::optional<double> previous) {
    state.validate();
    const Grid& g = state.grid;
    double best = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i + 1 < g.n; ++i) {
        const double a = state.phi[i] - pi, b = state.phi[i + 1] - pi;
        if (a == 0.0 || a * b < 0.0) {
            const double z = g.x(i) + g.h * (pi - state.phi[i]) / (state.phi[i + 1] - state.phi[i]);
            const double dist = previous ? std::abs(z - *previous) : 0.0;
            if (!found || dist < best_dist) {
                best = z;
                best_dist = dist;
                found = true;
            }
            if (!previous) break;  // take the first crossing when untracked
        }
    }
    if (!found) throw LostFrontError("locate_front: no phi = pi crossing");
    if (previous && best_dist > 0.2 * g.length())
        throw LostFrontError("locate_front: crossing jumped outside the continuity neighborhood");
    return best;
}

Grid RunConfig::make_grid() const {
    const auto n = static_cast<std::size_t>(std::llround((zeta_max - zeta_min) / h)) + 1;
    return Grid{h, n, zeta_min};
}

void RunConfig::validate() const {
    model.validate();
    if (!model.real_linearization())
        throw std::invalid_argument("RunConfig: requires 1 + 4A > 0");
    if (!(zeta_max > zeta_min)) throw std::invalid_argument("RunConfig: empty domain");
    if (!(h > 0.0)) throw std::invalid_argument("RunConfig: h must be > 0");
    make_grid().validate();
    if (!(dt > 0.0) || !(tau_final > 0.0) || !(record_dt > 0.0))
        throw std::invalid_argument("RunConfig: time settings must be positive");
    if (dt > stability_limit(model, h, 1.0))
        throw std::invalid_argument("RunConfig: dt exceeds the stability bound");
    sponge.validate();
    if (initial.kind == InitialKind::sg_like && !(initial.gamma > 0.0))
        throw std::invalid_argument("RunConfig: sg-like excitation needs gamma > 0");
    if (!(initial.v * initial.v < 1.0))
        throw std::invalid_argument("RunConfig: launch velocity needs v^2 < 1");
    if (initial.kind == InitialKind::traveling && initial.branch < 1)
        throw std::invalid_argument("RunConfig: traveling kind needs branch >= 1");
    const double len = zeta_max - zeta_min;
    if (initial.center < zeta_min + sponge.fraction * len ||
        initial.center > zeta_max - sponge.fraction * len)
        throw std::invalid_argument("RunConfig: initial center must lie inside the sponge-free interior");
    for (double t : snapshot_times)
        if (t < 0.0 || t > tau_final)
            throw std::invalid_argument("RunConfig: snapshot time outside [0, tau_final]");
}

namespace {

// Cubic Hermite resampling of a kink profile (values and slopes at uniform
// nodes), constant-extended by 0 / 2pi outside its window.
struct ProfileInterp {
    const KinkProfile& k;
    double value(double xi) const {
        if (xi <= k.xi.front()) return k.phi.front();
        if (xi >= k.xi.back()) return k.phi.back();
        return hermite(xi, k.phi, k.dphi);
    }
    double slope(double xi) const {
        if (xi <= k.xi.front() || xi >= k.xi.back()) return 0.0;
        // second derivative from the traveling-wave system closes the Hermite data
        return hermite(xi, k.dphi, curvature());
    }
    std::vector<double> curvature() const {
        std::vector<double> c(k.xi.size());
        const ModelParams p{k.lambda, k.A};
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = (k.dq[i] - nonlinearity(k.phi[i], p)) / (k.v * k.v);
        return c;
    }
    double hermite(double xi, const std::vector<double>& f, const std::vector<double>& df) const {
        const double h = k.xi[1] - k.xi[0];
        auto j = static_cast<std::size_t>((xi - k.xi.front()) / h);
        j = std::min(j, k.xi.size() - 2);
        const double t = (xi - k.xi[j]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * f[j] + (t3 - 2 * t2 + t) * h * df[j] +
               (-2 * t3 + 3 * t2) * f[j + 1] + (t3 - t2) * h * df[j + 1];
    }
};

}  // namespace

FieldState make_initial_state(const RunConfig& config, const KinkProfile* profile) {
    config.validate();
    const Grid g = config.make_grid();
    FieldState s;
    s.grid = g;
    s.boundary = Boundary::decaying;
    s.sigma = sponge_profile(g, config.sponge);
    s.phi.resize(g.n);
    s.phi_dot.resize(g.n);
    s.tau = 0.0;

    const auto& ic = config.initial;
    const double v = ic.v;
    if (ic.kind == InitialKind::traveling) {
        if (profile == nullptr)
            throw std::invalid_argument("make_initial_state: traveling kind needs a profile");
        ProfileInterp interp{*profile};
        for (std::size_t i = 0; i < g.n; ++i) {
            const double xi = g.x(i) - ic.center;
            s.phi[i] = interp.value(xi);
            s.phi_dot[i] = -v * interp.slope(xi);
        }
    } else {
        for (std::size_t i = 0; i < g.n; ++i) {
            const double xi = g.x(i) - ic.center;
            if (ic.kind == InitialKind::sg_like) {
                s.phi[i] = sg_like_excitation(xi, v, ic.gamma);
                s.phi_dot[i] = -v * sg_like_excitation_deriv(xi, v, ic.gamma);
            } else {
                s.phi[i] = local_dsg_kink(xi, v, config.model.A);
                s.phi_dot[i] = -v * local_dsg_kink_deriv(xi, v, config.model.A);
            }
        }
    }

    // Tails must be flat before the sponge starts.
    const double len = g.length();
    const double tol = 1e-6;
    const double left_edge = g.x0 + config.sponge.fraction * len;
    const double right_edge = g.x0 + len - config.sponge.fraction * len;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double z = g.x(i);
        if (z <= left_edge && std::abs(s.phi[i]) > tol)
            throw std::domain_error("make_initial_state: left tail exceeds tolerance at the sponge");
        if (z >= right_edge && std::abs(s.phi[i] - 2.0 * pi) > tol)
            throw std::domain_error("make_initial_state: right tail exceeds tolerance at the sponge");
    }
    return s;
}

RunArtifacts run(const RunConfig& config, const KinkProfile* profile) {
    RunArtifacts art;
    FieldState state = make_initial_state(config, profile);
    const ModelParams& p = config.model;
    const double len = config.zeta_max - config.zeta_min;
    const double win_lo = config.zeta_min + config.sponge.fraction * len;
    const double win_hi = config.zeta_max - config.sponge.fraction * len;

    std::vector<double> taus, fronts;
    auto record = [&](const FieldState& st) {
        const std::optional<double> prev =
            fronts.empty() ? std::optional<double>{} : std::optional<double>{fronts.back()};
        const double zf = locate_front(st, prev);
        taus.push_back(st.tau);
        fronts.push_back(zf);
        art.energy_series.push_back({st.tau, energy(st, p, win_lo, win_hi)});
    };
    auto snap = [&](const FieldState& st) {
        art.snapshots.push_back({st.tau, st.phi, st.phi_dot});
    };

    std::vector<double> snap_times = config.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t next_snap = 0;

    try {
        record(state);
        while (next_snap < snap_times.size() && snap_times[next_snap] <= state.tau + 1e-12) {
            snap(state);
            ++next_snap;
        }
        const auto total_steps =
            static_cast<long long>(std::ceil(config.tau_final / config.dt - 1e-9));
        const auto record_every = std::max<long long>(
            1, static_cast<long long>(std::llround(config.record_dt / config.dt)));
        for (long long k = 1; k <= total_steps; ++k) {
            state = step(state, p, config.dt);
            if (k % record_every == 0 || k == total_steps) record(state);
            while (next_snap < snap_times.size() &&
                   snap_times[next_snap] <= state.tau + 1e-12) {
                snap(state);
                ++next_snap;
            }
        }
        art.completed = true;
    } catch (const std::exception& e) {
        art.abort_reason = e.what();
    }

    art.front = make_front_trace(taus, fronts, 5);

    // Windowed terminal velocity: mean and spread of the smoothed series
    // over the last 10% of the run.
    if (!art.front.records.empty()) {
        const double t_from = art.front.records.back().tau * 0.9;
        double sum = 0.0, sum2 = 0.0;
        int cnt = 0;
        for (const auto& r : art.front.records) {
            if (r.tau >= t_from) {
                sum += r.v_smooth;
                sum2 += r.v_smooth * r.v_smooth;
                ++cnt;
            }
        }
        if (cnt > 0) {
            art.terminal.mean = sum / cnt;
            art.terminal.stddev = std::sqrt(std::max(0.0, sum2 / cnt - art.terminal.mean * art.terminal.mean));
            art.terminal.window_from = t_from;
        }
    }
    art.final_state = std::move(state);
    return art;
}

}  // namespace ndsg

// Command-line laboratory for the nonlocal double sine-Gordon model:
// radiationless kink spectra, asymptotic comparison tables, kink profiles,
// and launched-kink evolution experiments.
//
// Exit codes: 0 success (an empty spectrum is a success), 2 validation
// error, 3 solver failure, 4 numerical instability.

#include "ndsg/asymptotics.hpp"
#include "ndsg/csv.hpp"
#include "ndsg/evolution.hpp"
#include "ndsg/manifest.hpp"
#include "ndsg/model.hpp"
#include "ndsg/nonlocal.hpp"
#include "ndsg/run_config.hpp"
#include "ndsg/traveling_wave.hpp"
#include "ndsg/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace {

using namespace ndsg;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_solver = 3;
constexpr int exit_instability = 4;

CsvTable spectrum_csv(const VelocitySpectrum& spec) {
    CsvTable t;
    const char* name = spec.kind == SpectrumKind::velocity
                           ? "v_n"
                           : spec.kind == SpectrumKind::lambda ? "lambda_n" : "delta_n";
    t.header = {"n", name, "bracket_lo", "bracket_hi", "abs_R"};
    for (const auto& e : spec.entries)
        t.add_row({static_cast<double>(e.n), e.value, e.bracket_lo, e.bracket_hi, e.residual});
    return t;
}

nlohmann::json spectrum_json(const VelocitySpectrum& spec) {
    nlohmann::json j;
    j["kind"] = spec.kind == SpectrumKind::velocity
                    ? "velocity"
                    : spec.kind == SpectrumKind::lambda ? "lambda" : "delta";
    j["lambda"] = spec.params.lambda;
    j["A"] = spec.params.A;
    if (spec.kind == SpectrumKind::lambda) j["v"] = spec.fixed_v;
    j["scan_points"] = spec.scan_points;
    j["no_crossing_points"] = spec.no_crossing_points;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : spec.entries)
        j["entries"].push_back({{"n", e.n},
                                {"value", e.value},
                                {"bracket", {e.bracket_lo, e.bracket_hi}},
                                {"R_bracket", {e.R_lo, e.R_hi}},
                                {"abs_R", e.residual}});
    j["suspected_zeros"] = nlohmann::json::array();
    for (const auto& s : spec.suspected)
        j["suspected_zeros"].push_back({{"where", s.where}, {"abs_R", s.abs_R}, {"reason", s.reason}});
    return j;
}

void write_if(const std::string& path, const std::string& content) {
    if (!path.empty()) write_file(path, content);
}

int cmd_spectrum(double lambda, double A, double v_lo, double v_hi, int n_max, int points,
                 bool fourth_order, std::optional<double> scan_v, double t_lo, double t_hi,
                 bool sweep, int sweep_steps, const std::string& out_csv,
                 const std::string& out_json) {
    ScanControls c;
    c.grid_points = points;

    if (sweep) {
        // v_n(lambda) branch curves: one lambda per row, columns v_1..v_3.
        CsvTable t;
        t.header = {"lambda", "v_1", "v_2", "v_3"};
        for (int i = 0; i < sweep_steps; ++i) {
            const double lam = t_lo + (t_hi - t_lo) * i / std::max(1, sweep_steps - 1);
            auto spec = find_velocity_spectrum(ModelParams{lam, A}, v_lo, v_hi, 3, c);
            std::vector<double> row{lam, 0.0, 0.0, 0.0};
            for (const auto& e : spec.entries)
                if (e.n <= 3) row[static_cast<std::size_t>(e.n)] = e.value;
            t.add_row(row);
            std::cout << "lambda = " << format_double(lam) << ": " << spec.entries.size()
                      << " branch(es)\n";
        }
        write_if(out_csv, t.serialize());
        return exit_ok;
    }

    VelocitySpectrum spec;
    if (fourth_order)
        spec = fourth_order_spectrum(A, t_lo, t_hi, n_max, c);
    else if (scan_v)
        spec = find_lambda_spectrum(A, *scan_v, t_lo, t_hi, n_max, c);
    else
        spec = find_velocity_spectrum(ModelParams{lambda, A}, v_lo, v_hi, n_max, c);

    write_if(out_csv, spectrum_csv(spec).serialize());
    write_if(out_json, spectrum_json(spec).dump(2) + "\n");
    if (spec.entries.empty()) {
        std::cout << "empty spectrum (" << spec.scan_points << " scan points, "
                  << spec.suspected.size() << " suspected zeros)\n";
    }
    for (const auto& e : spec.entries)
        std::cout << "n=" << e.n << "  " << format_double(e.value) << "  |R|=" << e.residual
                  << "\n";
    return exit_ok;
}

int cmd_asympt(double A, std::optional<double> v, bool fourth_order, int n_rows, double theta0t,
               bool with_solver, int points, const std::string& out_csv) {
    if (A <= 0.0) {
        std::cout << "Conjecture not applicable for A <= 0: the kink's nearest singularities "
                     "lie on the imaginary axis (alpha = 0); no asymptotic sequence exists.\n";
        return exit_ok;
    }
    const SpectrumKind kind = fourth_order ? SpectrumKind::delta : SpectrumKind::lambda;
    AsymptoticTable table;
    if (with_solver) {
        ScanControls c;
        c.grid_points = points;
        VelocitySpectrum spec;
        if (fourth_order) {
            const double hi = delta_n_asymptotic(A, 1) * 1.6;
            const double lo = delta_n_asymptotic(A, n_rows) * 0.55;
            spec = fourth_order_spectrum(A, lo, hi, n_rows, c);
        } else {
            const double hi = lambda_n_asymptotic(A, *v, 1, theta0t) * 1.6;
            const double lo = lambda_n_asymptotic(A, n_rows, theta0t) * 0.5;
            spec = find_lambda_spectrum(A, *v, std::max(1e-3, lo), hi, n_rows, c);
        }
        table = build_comparison_table(spec, n_rows, theta0t);
    } else {
        table = asymptotic_only_table(kind, A, v, n_rows, theta0t);
    }

    CsvTable t;
    t.header = {"n", "asymptotic", "computed", "abs_dev", "rel_dev"};
    for (const auto& r : table.rows) {
        std::vector<std::string> row{std::to_string(r.n), format_double(r.asymptotic)};
        row.push_back(r.computed ? format_double(*r.computed) : "");
        row.push_back(r.abs_deviation ? format_double(*r.abs_deviation) : "");
        row.push_back(r.rel_deviation ? format_double(*r.rel_deviation) : "");
        t.rows.push_back(row);
        std::cout << "n=" << r.n << "  asympt=" << format_double(r.asymptotic);
        if (r.computed) std::cout << "  calc=" << format_double(*r.computed);
        std::cout << "\n";
    }
    if (table.improves_with_n)
        std::cout << "agreement improves with n: " << (*table.improves_with_n ? "yes" : "no")
                  << "\n";
    write_if(out_csv, t.serialize());
    return exit_ok;
}

int cmd_kink(double lambda, double A, int branch, double v_lo, double v_hi, double h,
             const std::string& out_prefix) {
    ModelParams p{lambda, A};
    ScanControls c;
    auto spec = find_velocity_spectrum(p, v_lo, v_hi, branch + 2, c);
    const SpectrumEntry* entry = nullptr;
    for (const auto& e : spec.entries)
        if (e.n == branch) entry = &e;
    if (!entry) {
        std::cerr << "branch " << branch << " not resolved: insufficient accuracy ("
                  << spec.entries.size() << " verified zeros, " << spec.suspected.size()
                  << " suspected)\n";
        return exit_solver;
    }
    auto k = assemble_kink(p, entry->value, h);
    k.branch = branch;

    CsvTable t;
    t.header = {"xi", "phi", "dphi", "q", "dq"};
    for (std::size_t i = 0; i < k.xi.size(); ++i)
        t.add_row({k.xi[i], k.phi[i], k.dphi[i], k.q[i], k.dq[i]});
    write_if(out_prefix.empty() ? "" : out_prefix + "_profile.csv", t.serialize());

    nlohmann::json j;
    j["v"] = k.v;
    j["lambda"] = k.lambda;
    j["A"] = k.A;
    j["branch"] = k.branch;
    j["energy"] = {{"total", k.energy},
                   {"potential", k.energy_potential},
                   {"kinetic", k.energy_kinetic},
                   {"nonlocal", k.energy_nonlocal}};
    j["residual"] = k.residual;
    j["section_defect"] = k.section_defect;
    write_if(out_prefix.empty() ? "" : out_prefix + "_kink.json", j.dump(2) + "\n");
    std::cout << "v_" << branch << " = " << format_double(k.v)
              << "  W = " << format_double(k.energy) << "  residual = " << k.residual << "\n";
    return exit_ok;
}

int cmd_evolve(const std::string& config_path) {
    RunConfig cfg = parse_run_config(read_file(config_path));

    RunManifest manifest;
    manifest.tool_version = version;
    manifest.started_at = iso8601_utc_now();
    const std::string cfg_canonical = serialize_run_config(cfg);
    manifest.config_hash = hex64(fnv1a64(cfg_canonical));

    // The traveling kind needs the branch profile from the shooting solver.
    std::optional<KinkProfile> profile;
    if (cfg.initial.kind == InitialKind::traveling) {
        ScanControls c;
        auto spec = find_velocity_spectrum(cfg.model, 0.05, 0.95, cfg.initial.branch + 1, c);
        const SpectrumEntry* entry = nullptr;
        for (const auto& e : spec.entries)
            if (e.n == cfg.initial.branch) entry = &e;
        if (!entry) {
            std::cerr << "evolve: branch " << cfg.initial.branch
                      << " not resolved (insufficient accuracy)\n";
            return exit_solver;
        }
        profile = assemble_kink(cfg.model, entry->value);
        if (cfg.initial.v == 0.0) cfg.initial.v = entry->value;  // natural velocity
        manifest.diagnostics.push_back("branch " + std::to_string(cfg.initial.branch) +
                                       " velocity " + format_double(entry->value));
    }

    auto art = ndsg::run(cfg, profile ? &*profile : nullptr);

    // Flush artifacts even when the run aborted.
    CsvTable front;
    front.header = {"tau", "zeta_front", "v_raw", "v_smooth"};
    for (const auto& r : art.front.records) front.add_row({r.tau, r.zeta, r.v_raw, r.v_smooth});
    emit_file(manifest, cfg.output_dir, "front.csv", front.serialize());

    CsvTable en;
    en.header = {"tau", "W_total", "W_pot", "W_kin", "W_nonlocal"};
    for (const auto& r : art.energy_series)
        en.add_row({r.tau, r.report.total, r.report.potential, r.report.kinetic,
                    r.report.nonlocal});
    emit_file(manifest, cfg.output_dir, "energy.csv", en.serialize());

    const Grid g = cfg.make_grid();
    for (const auto& s : art.snapshots) {
        CsvTable snap;
        snap.header = {"zeta", "phi", "phi_dot"};
        for (std::size_t i = 0; i < s.phi.size(); ++i)
            snap.add_row({g.x(i), s.phi[i], s.phi_dot[i]});
        emit_file(manifest, cfg.output_dir, "snapshot_" + format_double(s.tau) + ".csv",
                  snap.serialize());
    }

    emit_file(manifest, cfg.output_dir, "config.cfg", cfg_canonical);
    manifest.diagnostics.push_back("terminal velocity " + format_double(art.terminal.mean) +
                                   " +- " + format_double(art.terminal.stddev));
    if (!art.completed) manifest.diagnostics.push_back("aborted: " + art.abort_reason);
    manifest.finished_at = iso8601_utc_now();
    write_file((std::filesystem::path(cfg.output_dir) / "manifest.json").string(),
               manifest.to_json());

    std::cout << "terminal velocity: " << format_double(art.terminal.mean) << " +- "
              << format_double(art.terminal.stddev) << "\n";
    if (!art.completed) {
        std::cerr << "evolve: aborted: " << art.abort_reason << "\n";
        return exit_instability;
    }
    return exit_ok;
}

int cmd_units(double lambda_L, double L, double d, double lambda_J, std::optional<double> j_c,
              std::optional<double> J2, std::optional<double> k_scale) {
    PhysicalParams phys;
    phys.lambda_L = lambda_L;
    phys.L = L;
    phys.d = d;
    phys.lambda_J = lambda_J;
    phys.j_c = j_c;
    phys.J2 = J2;
    const auto r = physical_to_dimensionless(phys);
    std::cout << "lambda        = " << format_double(r.lambda) << "\n";
    if (r.has_A) std::cout << "A             = " << format_double(r.A) << "\n";
    std::cout << "lambda_eff    = " << format_double(r.lambda_eff)
              << "   (= lambda_L*sqrt(L/(L+d)))\n";
    std::cout << "zeta per x    = " << format_double(r.zeta_per_x) << "\n";
    std::cout << "Lambda        = " << format_double(r.big_lambda) << "\n";
    std::cout << "time scale    = " << r.tau_scale << "\n";
    std::cout << "energy unit   = " << r.energy_prefactor
              << "   (geometric factor " << format_double(r.energy_geometry) << ")\n";
    if (k_scale) {
        const double f = thin_layer_factor(phys, *k_scale);
        std::cout << "thin-layer factor 2L*sqrt(lambda_L^-2+k^2) = " << format_double(f) << "\n";
        if (f > 0.3)
            std::cout << "warning: thin-layer reduction assumes this << 1; the nonlocal "
                         "kernel may be inaccurate for these scales\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal double sine-Gordon kink laboratory"};
    app.set_version_flag("--version", ndsg::version);
    app.require_subcommand(1);

    // spectrum
    double lambda = 0.3, A = 0.125, v_lo = 0.05, v_hi = 0.95;
    int n_max = 8, points = 2000;
    bool fourth = false, sweep = false;
    std::optional<double> scan_v;
    double t_lo = 0.0, t_hi = 0.0;
    int sweep_steps = 10;
    std::string out_csv, out_json;
    auto* sp = app.add_subcommand("spectrum", "radiationless velocity / parameter spectra");
    sp->add_option("--lambda", lambda, "nonlocality parameter");
    sp->add_option("--A", A, "second-harmonic amplitude");
    sp->add_option("--v-min", v_lo, "scan lower velocity");
    sp->add_option("--v-max", v_hi, "scan upper velocity");
    sp->add_option("--n-max", n_max, "maximum branches to report");
    sp->add_option("--points", points, "scan grid points");
    sp->add_flag("--fourth-order", fourth, "scan the fourth-order model in delta");
    sp->add_option("--scan-v", scan_v, "fix this velocity and scan lambda instead");
    sp->add_option("--t-min", t_lo, "lower end of the delta/lambda scan");
    sp->add_option("--t-max", t_hi, "upper end of the delta/lambda scan");
    sp->add_flag("--sweep", sweep, "emit v_n(lambda) branch curves");
    sp->add_option("--sweep-steps", sweep_steps, "lambda steps of the sweep");
    sp->add_option("--out", out_csv, "CSV output path");
    sp->add_option("--json", out_json, "JSON output path");

    // asympt
    double as_A = 0.125, as_theta = 0.0;
    std::optional<double> as_v;
    int as_n = 6, as_points = 2000;
    bool as_fourth = false, as_solver = false;
    std::string as_out;
    auto* as = app.add_subcommand("asympt", "asymptotic spectra and comparison tables");
    as->add_option("--A", as_A, "second-harmonic amplitude");
    as->add_option("--v", as_v, "fixed velocity (lambda table)");
    as->add_flag("--fourth-order", as_fourth, "fourth-order (delta) table");
    as->add_option("--n", as_n, "rows");
    as->add_option("--theta0-tilde", as_theta, "phase constant of the asymptotic law");
    as->add_flag("--with-solver", as_solver, "also run the shooting solver (side-by-side)");
    as->add_option("--points", as_points, "solver scan points");
    as->add_option("--out", as_out, "CSV output path");

    // kink
    double k_lambda = 0.3, k_A = 0.125, k_vlo = 0.05, k_vhi = 0.95, k_h = 0.01;
    int k_branch = 1;
    std::string k_out;
    auto* kn = app.add_subcommand("kink", "assemble a kink profile and its energy");
    kn->add_option("--lambda", k_lambda, "nonlocality parameter");
    kn->add_option("--A", k_A, "second-harmonic amplitude");
    kn->add_option("--branch", k_branch, "branch index (1 = fastest)");
    kn->add_option("--v-min", k_vlo, "bracket lower velocity");
    kn->add_option("--v-max", k_vhi, "bracket upper velocity");
    kn->add_option("--sample-h", k_h, "profile sample spacing");
    kn->add_option("--out", k_out, "output prefix (writes <prefix>_profile.csv, <prefix>_kink.json)");

    // evolve
    std::string cfg_path;
    auto* ev = app.add_subcommand("evolve", "run a time-evolution experiment from a config file");
    ev->add_option("config", cfg_path, "run configuration file")->required();

    // units
    double u_lL = 0.0, u_L = 0.0, u_d = 0.0, u_lJ = 0.0;
    std::optional<double> u_jc, u_J2, u_k;
    auto* un = app.add_subcommand("units", "physical-to-dimensionless conversion");
    un->add_option("--lambda-L", u_lL, "London penetration depth")->required();
    un->add_option("--L", u_L, "superconducting half-thickness")->required();
    un->add_option("--d", u_d, "tunnel half-thickness")->required();
    un->add_option("--lambda-J", u_lJ, "Josephson length")->required();
    un->add_option("--j-c", u_jc, "critical current density");
    un->add_option("--J2", u_J2, "second-harmonic current density");
    un->add_option("--k-scale", u_k, "inverse length scale for the thin-layer check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) {
            if (fourth && t_hi <= t_lo) {
                t_lo = 0.02;
                t_hi = 0.5;
            }
            if (scan_v && t_hi <= t_lo) {
                t_lo = 0.02;
                t_hi = 1.2;
            }
            return cmd_spectrum(lambda, A, v_lo, v_hi, n_max, points, fourth, scan_v, t_lo, t_hi,
                                sweep, sweep_steps, out_csv, out_json);
        }
        if (as->parsed()) {
            if (!as_fourth && !as_v && as_A > 0.0)
                throw std::invalid_argument("asympt: --v required for the lambda table");
            return cmd_asympt(as_A, as_v, as_fourth, as_n, as_theta, as_solver, as_points, as_out);
        }
        if (kn->parsed()) return cmd_kink(k_lambda, k_A, k_branch, k_vlo, k_vhi, k_h, k_out);
        if (ev->parsed()) return cmd_evolve(cfg_path);
        if (un->parsed()) return cmd_units(u_lL, u_L, u_d, u_lJ, u_jc, u_J2, u_k);
    } catch (const StabilityViolation& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return exit_instability;
    } catch (const BlowUpError& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return exit_instability;
    } catch (const ConfigError& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::domain_error& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    }
    return exit_ok;
}

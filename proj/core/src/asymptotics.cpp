#include "ndsg/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ndsg {

namespace {
constexpr double pi = std::numbers::pi;

void require_A_quarter(double A) {
    if (!(1.0 + 4.0 * A > 0.0))
        throw std::domain_error("asymptotics: requires A > -1/4");
}
}  // namespace

SingularityPair singularities_full(double A, double v) {
    require_A_quarter(A);
    if (!(v * v < 1.0)) throw std::domain_error("singularities_full: requires v^2 < 1");
    SingularityPair s;
    s.context = SingularityContext::full_equation;
    const double g = std::sqrt(1.0 - v * v);
    s.beta = pi * g / (2.0 * std::sqrt(1.0 + 4.0 * A));
    if (A > 0.0) {
        s.alpha = g * std::acosh(1.0 + 8.0 * A) / (2.0 * std::sqrt(1.0 + 4.0 * A));
        s.applicable = true;
    }
    return s;
}

SingularityPair singularities_fourth(double A) {
    require_A_quarter(A);
    SingularityPair s;
    s.context = SingularityContext::fourth_order;
    s.beta = pi / (2.0 * std::sqrt(1.0 + 4.0 * A));
    if (A > 0.0) {
        s.alpha = std::acosh(1.0 + 8.0 * A) / (2.0 * std::sqrt(1.0 + 4.0 * A));
        s.applicable = true;
    }
    return s;
}

double lambda_n_asymptotic(double A, double v, int n, double theta0_tilde) {
    if (!(A > 0.0)) throw std::domain_error("lambda_n_asymptotic: requires A > 0");
    if (!(v > 0.0) || !(v < 1.0))
        throw std::domain_error("lambda_n_asymptotic: requires v in (0,1)");
    if (n < 1) throw std::domain_error("lambda_n_asymptotic: requires n >= 1");
    return (1.0 - v * v) * std::acosh(1.0 + 8.0 * A) /
           (v * std::sqrt(1.0 + 4.0 * A) * ((2.0 * n - 1.0) * pi + theta0_tilde));
}

double delta_n_asymptotic(double A, int n, double theta0_tilde) {
    if (!(A > 0.0)) throw std::domain_error("delta_n_asymptotic: requires A > 0");
    if (n < 1) throw std::domain_error("delta_n_asymptotic: requires n >= 1");
    return std::acosh(1.0 + 8.0 * A) /
           (std::sqrt(1.0 + 4.0 * A) * ((2.0 * n - 1.0) * pi + theta0_tilde));
}

double conjecture_wavenumber(double alpha, int n, double theta0) {
    if (!(alpha > 0.0)) throw std::domain_error("conjecture_wavenumber: requires alpha > 0");
    return (n * pi + theta0) / alpha;
}

namespace {

AsymptoticTable make_table(SpectrumKind kind, double A, std::optional<double> v, int n_rows,
                           double theta0_tilde, const VelocitySpectrum* spectrum) {
    AsymptoticTable t;
    t.A = A;
    t.v = v;
    t.kind = kind;
    for (int n = 1; n <= n_rows; ++n) {
        AsymptoticRow row;
        row.n = n;
        row.asymptotic = kind == SpectrumKind::lambda
                             ? lambda_n_asymptotic(A, *v, n, theta0_tilde)
                             : delta_n_asymptotic(A, n, theta0_tilde);
        if (spectrum) {
            for (const auto& e : spectrum->entries) {
                if (e.n == n) {
                    row.computed = e.value;
                    row.abs_deviation = std::abs(e.value - row.asymptotic);
                    row.rel_deviation = *row.abs_deviation / std::abs(e.value);
                    break;
                }
            }
        }
        t.rows.push_back(row);
    }
    // Verdict: relative deviation at the largest common n vs at n = 1.
    const AsymptoticRow* first = nullptr;
    const AsymptoticRow* last = nullptr;
    for (const auto& r : t.rows)
        if (r.rel_deviation) {
            if (!first) first = &r;
            last = &r;
        }
    if (first && last && first != last)
        t.improves_with_n = *last->rel_deviation < *first->rel_deviation;
    return t;
}

}  // namespace

AsymptoticTable build_comparison_table(const VelocitySpectrum& spectrum, int n_rows,
                                       double theta0_tilde) {
    if (spectrum.kind == SpectrumKind::velocity)
        throw std::invalid_argument(
            "build_comparison_table: velocity scans have no aligned closed form; "
            "use a lambda or fourth-order spectrum");
    const double A = spectrum.params.A;
    if (!(A > 0.0))
        throw std::invalid_argument("build_comparison_table: requires A > 0 context");
    std::optional<double> v;
    if (spectrum.kind == SpectrumKind::lambda) {
        if (!(spectrum.fixed_v > 0.0) || !(spectrum.fixed_v < 1.0))
            throw std::invalid_argument("build_comparison_table: lambda table needs v in (0,1)");
        v = spectrum.fixed_v;
    }
    return make_table(spectrum.kind, A, v, n_rows, theta0_tilde, &spectrum);
}

AsymptoticTable asymptotic_only_table(SpectrumKind kind, double A, std::optional<double> v,
                                      int n_rows, double theta0_tilde) {
    if (kind == SpectrumKind::lambda && !v)
        throw std::invalid_argument("asymptotic_only_table: lambda table needs v");
    return make_table(kind, A, v, n_rows, theta0_tilde, nullptr);
}

}  // namespace ndsg

#pragma once

// Closed-form asymptotics of the radiationless spectra, built on the
// singularity structure of the local 2pi-kink continued to complex xi.  For
// A > 0 the singularities nearest the real axis sit at  +-alpha + i beta;
// the resonance condition k(lambda_n) alpha ~ n pi + theta_0 then yields the
// large-n laws for lambda_n (full model, v fixed) and delta_n (fourth-order
// model).  For A <= 0 the singularities sit on the imaginary axis and no
// asymptotic sequence is predicted.

#include "ndsg/traveling_wave.hpp"

#include <optional>
#include <vector>

namespace ndsg {

enum class SingularityContext { full_equation, fourth_order };

struct SingularityPair {
    double alpha = 0.0;  // |real part|
    double beta = 0.0;   // imaginary part
    SingularityContext context = SingularityContext::full_equation;
    bool applicable = false;  // false when A <= 0 (alpha = 0)
};

// Nearest singularities of the local DSG kink in traveling-wave variables:
//   alpha = sqrt(1-v^2) arccosh(1+8A) / (2 sqrt(1+4A)),
//   beta  = pi sqrt(1-v^2) / (2 sqrt(1+4A)).
// A <= 0 reports non-applicability.  Requires v^2 < 1 and A > -1/4.
SingularityPair singularities_full(double A, double v);

// The v-free fourth-order variant (scaled variable eta).
SingularityPair singularities_fourth(double A);

// lambda_n ~ (1-v^2) arccosh(1+8A) / (v sqrt(1+4A) ((2n-1) pi + theta0_tilde))
double lambda_n_asymptotic(double A, double v, int n, double theta0_tilde = 0.0);

// delta_n ~ arccosh(1+8A) / (sqrt(1+4A) ((2n-1) pi + theta0_tilde))
double delta_n_asymptotic(double A, int n, double theta0_tilde = 0.0);

// Predicted resonance wavenumber at the n-th member: (n pi + theta0)/alpha.
double conjecture_wavenumber(double alpha, int n, double theta0 = 0.0);

struct AsymptoticRow {
    int n = 0;
    double asymptotic = 0.0;
    std::optional<double> computed;      // empty when the solver had no entry
    std::optional<double> abs_deviation;
    std::optional<double> rel_deviation;
};

struct AsymptoticTable {
    double A = 0.0;
    std::optional<double> v;  // set for lambda tables
    SpectrumKind kind = SpectrumKind::lambda;
    std::vector<AsymptoticRow> rows;
    // "agreement improves with n": relative deviation at the largest common
    // n is smaller than at n = 1.  Unset when fewer than two common rows.
    std::optional<bool> improves_with_n;
};

// Align solver entries with the closed-form sequence by branch index.
// The spectrum must be a lambda scan (kind lambda, same A, v given) or a
// fourth-order scan (kind delta, same A); mismatched contexts throw.
AsymptoticTable build_comparison_table(const VelocitySpectrum& spectrum, int n_rows,
                                       double theta0_tilde = 0.0);

// Asymptotic-only table (for empty spectra or previews).
AsymptoticTable asymptotic_only_table(SpectrumKind kind, double A, std::optional<double> v,
                                      int n_rows, double theta0_tilde = 0.0);

}  // namespace ndsg

#pragma once

// Problem 2: same data, but the roles of the transmitting conditions are
// exchanged.  The velocity condition now determines B_k (dividing by
// E_{alpha,1} instead of E_{alpha,2}) and the position condition yields the
// solution jump hbar_k at the switch.  C_k is shared with Problem 1.

#include <cmath>

#include "fracswitch/inverse_p1.hpp"

namespace fracswitch {

// B_k from the velocity transmitting condition (zero mismatch).
inline double compute_Bk_p2(const InverseInput& in, double C_k, int k) {
    const auto& cfg = in.config;
    const double lambda = eigenvalue(k);
    const double arg = lambda * std::pow(cfg.a, cfg.alpha);
    const double denom = ml::ml(cfg.alpha, 1.0, -arg, in.ml_tol);
    if (std::fabs(denom) <= detail::guard_threshold(in.guard_scale, arg))
        throw near_zero_denominator(k, cfg.alpha, std::fabs(denom));
    const double phi_k = k <= in.phi.modes() ? in.phi[k] : 0.0;
    const TimeSamples fk = in.f_mode(k);
    double num = fk.at(cfg.a) +
                 lambda * (phi_k * std::pow(cfg.a, cfg.alpha - 1.0) *
                               ml::ml(cfg.alpha, cfg.alpha, -arg, in.ml_tol) -
                           C_k);
    if (!fk.is_zero()) {
        ConvolutionSpec spec{0.0, cfg.a, cfg.alpha - 2.0, cfg.alpha, cfg.alpha - 1.0,
                             lambda, &fk};
        num -= conv_integral(spec, in.quad_tol);
    }
    return num / denom;
}

// hbar_k from the position transmitting condition: the jump u_k(a+)-u_k(a-).
inline double compute_hbar_k(const InverseInput& in, double C_k, double B_k, int k) {
    const auto& cfg = in.config;
    const double lambda = eigenvalue(k);
    const double arg = lambda * std::pow(cfg.a, cfg.alpha);
    const double phi_k = k <= in.phi.modes() ? in.phi[k] : 0.0;
    double h = C_k - phi_k * ml::ml(cfg.alpha, 1.0, -arg, in.ml_tol) -
               B_k * cfg.a * ml::ml(cfg.alpha, 2.0, -arg, in.ml_tol);
    const TimeSamples fk = in.f_mode(k);
    if (!fk.is_zero()) {
        ConvolutionSpec spec{0.0, cfg.a, cfg.alpha - 1.0, cfg.alpha, cfg.alpha, lambda, &fk};
        h -= conv_integral(spec, in.quad_tol);
    }
    return h;
}

// Full Problem-2 recovery.  Guard failures on E_{alpha,1} mark the mode
// excluded (hbar indeterminate) when skip_bad_modes is set.
inline InverseSolution solve_problem2(const InverseInput& in) {
    in.config.validate();
    InverseSolution out;
    out.h = SineSeries(in.config.modes);
    for (int k = 1; k <= in.config.modes; ++k) {
        ModeDiagnostics diag;
        diag.k = k;
        diag.lambda = eigenvalue(k);
        try {
            const double C_k = compute_Ck(in, k);
            const double B_k = compute_Bk_p2(in, C_k, k);
            const double hbar_k = compute_hbar_k(in, C_k, B_k, k);
            auto sol = detail::make_mode(in, k, C_k, B_k, hbar_k, hbar_k);
            diag.C = C_k;
            diag.B = B_k;
            diag.h = hbar_k;
            diag.guard_E_alpha1 = sol.coeffs.guard_E_alpha1;
            diag.guard_E_alpha2 = sol.coeffs.guard_E_alpha2;
            diag.guard_E_beta1 = ml::ml(
                in.config.beta, 1.0,
                -diag.lambda * std::pow(in.config.xi - in.config.a, in.config.beta), in.ml_tol);
            const double psi_k = k <= in.psi.modes() ? in.psi[k] : 0.0;
            diag.residual_overdetermination = mode_u_diffusion(sol, in.config.xi) - psi_k;
            // Jump identity: u_k(a+) - u_k(a-) - hbar_k.
            diag.residual_continuity =
                sol.coeffs.C - mode_u_wave(sol, in.config.a) - hbar_k;
            diag.residual_velocity = sol.f_k.at(in.config.a) - diag.lambda * C_k -
                                     mode_u_wave_deriv(sol, in.config.a);
            out.h[k] = hbar_k;
            out.modes.push_back(std::move(sol));
        } catch (const near_zero_denominator&) {
            if (!in.skip_bad_modes) throw;
            diag.skipped = true;
        }
        out.report.modes.push_back(diag);
    }
    out.report.truncation = detail::make_truncation(in);
    return out;
}

}  // namespace fracswitch

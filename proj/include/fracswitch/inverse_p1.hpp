#pragma once

// Problem 1: recover {C_k, B_k, h_k} (and hence u and the velocity-condition
// mismatch h) from (phi, psi, f).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracswitch/convergence.hpp"
#include "fracswitch/errors.hpp"
#include "fracswitch/forward_solver.hpp"

namespace fracswitch {

struct InverseInput {
    ProblemConfig config;
    SineSeries phi;
    SineSeries psi;
    std::vector<TimeSamples> f;  // per-mode forcing samples on [0,b]; empty = zero
    bool skip_bad_modes = false;
    double guard_scale = 1e-10;  // |E| counts as zero below guard_scale/(1+|z|)
    double quad_tol = 1e-8;
    double ml_tol = 1e-12;

    TimeSamples f_mode(int k) const {
        if (static_cast<size_t>(k) <= f.size()) return f[static_cast<size_t>(k - 1)];
        return TimeSamples::zero(0.0, config.b);
    }
};

struct ModeDiagnostics {
    int k = 0;
    double lambda = 0.0;
    double C = 0.0, B = 0.0, h = 0.0;
    double guard_E_beta1 = 0.0;   // C_k denominator
    double guard_E_alpha1 = 0.0;  // P2 B_k denominator
    double guard_E_alpha2 = 0.0;  // P1 B_k denominator
    double residual_overdetermination = 0.0;
    double residual_continuity = 0.0;  // position condition (or jump identity)
    double residual_velocity = 0.0;    // velocity condition via the limit identity
    bool skipped = false;
};

struct SolveReport {
    std::vector<ModeDiagnostics> modes;
    TruncationReport truncation;
};

struct InverseSolution {
    std::vector<PiecewiseModeSolution> modes;  // skipped modes excluded
    SineSeries h;                              // h (Problem 1) or hbar (Problem 2)
    SolveReport report;
};

namespace detail {

inline double guard_threshold(double scale, double envelope_arg) {
    return scale / (1.0 + envelope_arg);
}

}  // namespace detail

// C_k from the overdetermination condition u_k(xi) = psi_k.
inline double compute_Ck(const InverseInput& in, int k) {
    const auto& cfg = in.config;
    const double lambda = eigenvalue(k);
    const double arg = lambda * std::pow(cfg.xi - cfg.a, cfg.beta);
    const double denom = ml::ml(cfg.beta, 1.0, -arg, in.ml_tol);
    // Nonvanishing is guaranteed for 0 < beta < 1; assert numerically anyway.
    if (std::fabs(denom) <= detail::guard_threshold(in.guard_scale, arg))
        throw near_zero_denominator(k, cfg.beta, std::fabs(denom));
    double num = k <= in.psi.modes() ? in.psi[k] : 0.0;
    const TimeSamples fk = in.f_mode(k);
    if (!fk.is_zero()) {
        ConvolutionSpec spec{cfg.a, cfg.xi, cfg.beta - 1.0, cfg.beta, cfg.beta, lambda, &fk};
        num -= conv_integral(spec, in.quad_tol);
    }
    return num / denom;
}

// B_k from position continuity at the switch.
inline double compute_Bk(const InverseInput& in, double C_k, int k) {
    const auto& cfg = in.config;
    const double lambda = eigenvalue(k);
    const double arg = lambda * std::pow(cfg.a, cfg.alpha);
    const double denom = ml::ml(cfg.alpha, 2.0, -arg, in.ml_tol);
    if (std::fabs(denom) <= detail::guard_threshold(in.guard_scale, arg))
        throw near_zero_denominator(k, cfg.alpha, std::fabs(denom));
    const double phi_k = k <= in.phi.modes() ? in.phi[k] : 0.0;
    double num = C_k - phi_k * ml::ml(cfg.alpha, 1.0, -arg, in.ml_tol);
    const TimeSamples fk = in.f_mode(k);
    if (!fk.is_zero()) {
        ConvolutionSpec spec{0.0, cfg.a, cfg.alpha - 1.0, cfg.alpha, cfg.alpha, lambda, &fk};
        num -= conv_integral(spec, in.quad_tol);
    }
    return num / (cfg.a * denom);
}

// h_k from the velocity transmitting condition.
inline double compute_hk(const InverseInput& in, double C_k, double B_k, int k) {
    const auto& cfg = in.config;
    const double lambda = eigenvalue(k);
    const double arg = lambda * std::pow(cfg.a, cfg.alpha);
    const double phi_k = k <= in.phi.modes() ? in.phi[k] : 0.0;
    const TimeSamples fk = in.f_mode(k);
    double h = fk.at(cfg.a) +
               lambda * phi_k * std::pow(cfg.a, cfg.alpha - 1.0) *
                   ml::ml(cfg.alpha, cfg.alpha, -arg, in.ml_tol) -
               lambda * C_k - B_k * ml::ml(cfg.alpha, 1.0, -arg, in.ml_tol);
    if (!fk.is_zero()) {
        ConvolutionSpec spec{0.0, cfg.a, cfg.alpha - 2.0, cfg.alpha, cfg.alpha - 1.0,
                             lambda, &fk};
        h -= conv_integral(spec, in.quad_tol);
    }
    return h;
}

namespace detail {

inline PiecewiseModeSolution make_mode(const InverseInput& in, int k, double C_k,
                                       double B_k, double h_k, double jump) {
    PiecewiseModeSolution sol;
    sol.config = in.config;
    sol.quad_tol = in.quad_tol;
    sol.ml_tol = in.ml_tol;
    sol.coeffs.k = k;
    sol.coeffs.lambda = eigenvalue(k);
    sol.coeffs.C = C_k;
    sol.coeffs.B = B_k;
    sol.coeffs.h = h_k;
    sol.coeffs.jump = jump;
    const double arg = sol.coeffs.lambda * std::pow(in.config.a, in.config.alpha);
    sol.coeffs.guard_E_alpha1 = ml::ml(in.config.alpha, 1.0, -arg, in.ml_tol);
    sol.coeffs.guard_E_alpha2 = ml::ml(in.config.alpha, 2.0, -arg, in.ml_tol);
    sol.phi_k = k <= in.phi.modes() ? in.phi[k] : 0.0;
    sol.f_k = in.f_mode(k);
    return sol;
}

inline TruncationReport make_truncation(const InverseInput& in) {
    TruncationReport tr;
    const auto& cfg = in.config;
    tr.K_used = cfg.modes;
    auto m_k = [&](int k) {
        if (static_cast<size_t>(k) > in.f.size()) return 0.0;
        const auto& v = in.f[static_cast<size_t>(k - 1)].values;
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    };
    auto psi_k = [&](int k) { return k <= in.psi.modes() ? in.psi[k] : 0.0; };
    tr.lemma1_tail = lemma1_tail(m_k, cfg.beta, cfg.b - cfg.a, cfg.modes,
                                 100000, &tr.cap_warning);
    tr.lemma2_tail = lemma2_tail(psi_k, cfg.modes, 100000, &tr.cap_warning);
    tr.lemma4_tail = lemma4_tail(m_k, cfg.alpha, cfg.b, cfg.modes, 100000, &tr.cap_warning);
    for (int k = 1; k <= cfg.modes; ++k) {
        tr.lemma3_peak_values.push_back(lemma3_peak(cfg.alpha, eigenvalue(k)).g_max);
        tr.M_k_estimates.push_back(m_k(k));
    }
    return tr;
}

}  // namespace detail

// Full Problem-1 recovery.  Guard failures abort unless skip_bad_modes is
// set, in which case the offending mode is excluded and reported.
inline InverseSolution solve_problem1(const InverseInput& in) {
    in.config.validate();
    InverseSolution out;
    out.h = SineSeries(in.config.modes);
    for (int k = 1; k <= in.config.modes; ++k) {
        ModeDiagnostics diag;
        diag.k = k;
        diag.lambda = eigenvalue(k);
        try {
            const double C_k = compute_Ck(in, k);
            const double B_k = compute_Bk(in, C_k, k);
            const double h_k = compute_hk(in, C_k, B_k, k);
            auto sol = detail::make_mode(in, k, C_k, B_k, h_k, 0.0);
            diag.C = C_k;
            diag.B = B_k;
            diag.h = h_k;
            diag.guard_E_alpha1 = sol.coeffs.guard_E_alpha1;
            diag.guard_E_alpha2 = sol.coeffs.guard_E_alpha2;
            diag.guard_E_beta1 = ml::ml(
                in.config.beta, 1.0,
                -diag.lambda * std::pow(in.config.xi - in.config.a, in.config.beta), in.ml_tol);
            const double psi_k = k <= in.psi.modes() ? in.psi[k] : 0.0;
            diag.residual_overdetermination = mode_u_diffusion(sol, in.config.xi) - psi_k;
            diag.residual_continuity = mode_u_wave(sol, in.config.a) - C_k;
            diag.residual_velocity = sol.f_k.at(in.config.a) - diag.lambda * C_k -
                                     mode_u_wave_deriv(sol, in.config.a) - h_k;
            out.h[k] = h_k;
            out.modes.push_back(std::move(sol));
        } catch (const near_zero_denominator&) {
            if (!in.skip_bad_modes) throw;
            diag.skipped = true;
            out.h[k] = 0.0;
        }
        out.report.modes.push_back(diag);
    }
    out.report.truncation = detail::make_truncation(in);
    return out;
}

}  // namespace fracswitch

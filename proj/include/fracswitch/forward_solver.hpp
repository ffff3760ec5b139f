#pragma once

// Piecewise mode solutions of the time-switched equation: wave formula on
// [0,a] (order alpha), diffusion formula on (a,b] (order beta, memory started
// at the switch), plus series assembly and the direct map used as the
// round-trip oracle for both inverse problems.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracswitch/mittag_leffler.hpp"
#include "fracswitch/sine_basis.hpp"
#include "fracswitch/singular_quadrature.hpp"

namespace fracswitch {

struct ProblemConfig {
    double alpha = 1.25;  // wave order, (1,2)
    double beta = 0.5;    // diffusion order, (0,1)
    double a = 0.5;       // switch time
    double b = 1.0;       // horizon
    double xi = 0.75;     // snapshot time, (a,b)
    int modes = 64;

    void validate() const {
        if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("config: alpha outside (1,2)");
        if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("config: beta outside (0,1)");
        if (!(0.0 < a && a < xi && xi < b)) throw std::domain_error("config: need 0 < a < xi < b");
        if (modes < 1) throw std::domain_error("config: modes >= 1 required");
    }
};

struct ModeCoefficients {
    int k = 0;
    double lambda = 0.0;
    double C = 0.0;      // diffusion-side value at the switch
    double B = 0.0;      // wave-side initial velocity coefficient
    double h = 0.0;      // recovered interface coefficient (h_k or hbar_k)
    double guard_E_alpha2 = 0.0;  // E_{alpha,2}(-lambda a^alpha)
    double guard_E_alpha1 = 0.0;  // E_{alpha,1}(-lambda a^alpha)
    // Jump of the solution at t=a (zero for Problem-1-type solutions,
    // hbar_k for Problem-2-type ones).
    double jump = 0.0;
};

struct PiecewiseModeSolution {
    ProblemConfig config;
    ModeCoefficients coeffs;
    double phi_k = 0.0;
    TimeSamples f_k;  // forcing coefficient samples on [0, b]
    double quad_tol = 1e-8;
    double ml_tol = 1e-12;
};

// u_k(t) on [0, a].
inline double mode_u_wave(const PiecewiseModeSolution& sol, double t) {
    if (t < 0.0 || t > sol.config.a + 1e-12) throw std::domain_error("mode_u_wave: t outside [0,a]");
    const double al = sol.config.alpha;
    const double l = sol.coeffs.lambda;
    const double ta = std::pow(t, al);
    double v = sol.phi_k * ml::ml(al, 1.0, -l * ta, sol.ml_tol) +
               sol.coeffs.B * t * ml::ml(al, 2.0, -l * ta, sol.ml_tol);
    if (!sol.f_k.is_zero() && t > 0.0) {
        ConvolutionSpec spec{0.0, t, al - 1.0, al, al, l, &sol.f_k};
        v += conv_integral(spec, sol.quad_tol);
    }
    return v;
}

// u_k(t) on [a, b] (diffusion-side formula; equals C_k at t=a).
inline double mode_u_diffusion(const PiecewiseModeSolution& sol, double t) {
    const double a = sol.config.a;
    if (t < a - 1e-12 || t > sol.config.b + 1e-12)
        throw std::domain_error("mode_u_diffusion: t outside [a,b]");
    const double be = sol.config.beta;
    const double l = sol.coeffs.lambda;
    const double span = std::max(0.0, t - a);
    double v = sol.coeffs.C * ml::ml(be, 1.0, -l * std::pow(span, be), sol.ml_tol);
    if (!sol.f_k.is_zero() && span > 0.0) {
        ConvolutionSpec spec{a, t, be - 1.0, be, be, l, &sol.f_k};
        v += conv_integral(spec, sol.quad_tol);
    }
    return v;
}

// u_k'(t) on (0, a], from the differentiated wave formula.
inline double mode_u_wave_deriv(const PiecewiseModeSolution& sol, double t) {
    if (t <= 0.0 || t > sol.config.a + 1e-12)
        throw std::domain_error("mode_u_wave_deriv: t outside (0,a]");
    const double al = sol.config.alpha;
    const double l = sol.coeffs.lambda;
    const double ta = std::pow(t, al);
    double v = -l * sol.phi_k * std::pow(t, al - 1.0) * ml::ml(al, al, -l * ta, sol.ml_tol) +
               sol.coeffs.B * ml::ml(al, 1.0, -l * ta, sol.ml_tol);
    if (!sol.f_k.is_zero()) {
        ConvolutionSpec spec{0.0, t, al - 2.0, al, al - 1.0, l, &sol.f_k};
        v += conv_integral(spec, sol.quad_tol);
    }
    return v;
}

// Heaviside switch: wave formula on [0,a] (closed at a), diffusion beyond.
inline double mode_u(const PiecewiseModeSolution& sol, double t) {
    return t <= sol.config.a ? mode_u_wave(sol, t) : mode_u_diffusion(sol, t);
}

// u(t_i, x_j) = sum_k u_k(t_i) sin(k pi x_j); row-major [t][x].
inline std::vector<std::vector<double>> assemble_solution(
    const std::vector<PiecewiseModeSolution>& modes, std::span<const double> ts,
    std::span<const double> xs) {
    std::vector<std::vector<double>> out(ts.size(), std::vector<double>(xs.size(), 0.0));
    for (size_t i = 0; i < ts.size(); ++i) {
        for (const auto& sol : modes) {
            const double uk = mode_u(sol, ts[i]);
            for (size_t j = 0; j < xs.size(); ++j) {
                out[i][j] += uk * std::sin(sol.coeffs.k * kPi * xs[j]);
            }
        }
    }
    return out;
}

// Default time grid: uniform nodes on [0,b] with {0, a, xi, b} always present.
inline std::vector<double> default_time_grid(const ProblemConfig& cfg, int nodes = 401) {
    std::vector<double> ts;
    ts.reserve(static_cast<size_t>(nodes) + 3);
    for (int i = 0; i < nodes; ++i) ts.push_back(cfg.b * i / (nodes - 1));
    for (double t : {cfg.a, cfg.xi}) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double p, double q) { return std::fabs(p - q) < 1e-13; }),
             ts.end());
    return ts;
}

struct DirectSolution {
    std::vector<PiecewiseModeSolution> modes;
    SineSeries induced_h;
};

// Direct problem: given (phi, B, f), build the continuous solution
// (C_k := u_k(a-)) and read off the interface function h that makes the
// velocity transmitting condition hold:
//   h_k = f_k(a) - lambda_k C_k - u_k'(a-).
inline DirectSolution solve_direct(const ProblemConfig& cfg, const SineSeries& phi,
                                   const SineSeries& velocity,
                                   const std::vector<TimeSamples>& f,
                                   double quad_tol = 1e-8, double ml_tol = 1e-12) {
    cfg.validate();
    DirectSolution out;
    out.induced_h = SineSeries(cfg.modes);
    out.modes.reserve(static_cast<size_t>(cfg.modes));
    for (int k = 1; k <= cfg.modes; ++k) {
        PiecewiseModeSolution sol;
        sol.config = cfg;
        sol.quad_tol = quad_tol;
        sol.ml_tol = ml_tol;
        sol.coeffs.k = k;
        sol.coeffs.lambda = eigenvalue(k);
        sol.phi_k = k <= phi.modes() ? phi[k] : 0.0;
        sol.coeffs.B = k <= velocity.modes() ? velocity[k] : 0.0;
        sol.f_k = static_cast<size_t>(k) <= f.size() ? f[static_cast<size_t>(k - 1)]
                                                     : TimeSamples::zero(0.0, cfg.b);
        const double za = -sol.coeffs.lambda * std::pow(cfg.a, cfg.alpha);
        sol.coeffs.guard_E_alpha1 = ml::ml(cfg.alpha, 1.0, za, ml_tol);
        sol.coeffs.guard_E_alpha2 = ml::ml(cfg.alpha, 2.0, za, ml_tol);
        sol.coeffs.C = mode_u_wave(sol, cfg.a);
        const double fka = sol.f_k.at(cfg.a);
        out.induced_h[k] = fka - sol.coeffs.lambda * sol.coeffs.C - mode_u_wave_deriv(sol, cfg.a);
        sol.coeffs.h = out.induced_h[k];
        out.modes.push_back(std::move(sol));
    }
    return out;
}

}  // namespace fracswitch

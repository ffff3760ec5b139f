#pragma once

// Fourier sine analysis/synthesis on [0,1] against {sin(k pi x)} with the
// coefficient convention c_k = 2 * integral_0^1 g(x) sin(k pi x) dx.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracswitch/special.hpp"

namespace fracswitch {

struct SineSeries {
    std::vector<double> coeffs;  // coeffs[k-1] multiplies sin(k pi x)

    SineSeries() = default;
    explicit SineSeries(std::vector<double> c) : coeffs(std::move(c)) {}
    explicit SineSeries(int modes) : coeffs(static_cast<size_t>(modes), 0.0) {}

    int modes() const { return static_cast<int>(coeffs.size()); }
    double operator[](int k) const { return coeffs.at(static_cast<size_t>(k - 1)); }
    double& operator[](int k) { return coeffs.at(static_cast<size_t>(k - 1)); }
};

// Samples of a function at the uniform nodes x_j = j/N, j = 0..N.
struct GridFunction {
    std::vector<double> samples;

    int resolution() const { return static_cast<int>(samples.size()) - 1; }
};

// lambda_k = (k pi)^2, the Dirichlet eigenvalues on (0,1).
inline double eigenvalue(int k) {
    if (k < 1) throw std::domain_error("eigenvalue: k >= 1 required");
    return (k * kPi) * (k * kPi);
}

// Sine coefficients of a grid function via the type-I discrete sine transform
// (trapezoid rule with vanishing endpoints), exact for inputs band-limited to
// fewer than N modes.
inline SineSeries analyze(const GridFunction& g, int modes) {
    const int n = g.resolution();
    if (n < 1 || modes < 1) throw std::domain_error("analyze: empty input");
    if (n < 4 * modes)
        throw std::domain_error("analyze: grid resolution must be >= 4*modes");
    if (std::fabs(g.samples.front()) > 1e-12 || std::fabs(g.samples.back()) > 1e-12)
        throw std::domain_error("analyze: endpoint samples must vanish");
    SineSeries out(modes);
    for (int k = 1; k <= modes; ++k) {
        double acc = 0.0;
        for (int j = 1; j < n; ++j) {
            acc += g.samples[static_cast<size_t>(j)] * std::sin(k * kPi * j / n);
        }
        out[k] = 2.0 * acc / n;
    }
    return out;
}

// Pointwise partial sums of the sine series at arbitrary locations in [0,1].
inline std::vector<double> synthesize(const SineSeries& s, std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (x < 0.0 || x > 1.0) throw std::domain_error("synthesize: x outside [0,1]");
        double acc = 0.0;
        for (int k = 1; k <= s.modes(); ++k) {
            acc += s[k] * std::sin(k * kPi * x);
        }
        out.push_back(acc);
    }
    return out;
}

inline double synthesize_at(const SineSeries& s, double x) {
    const double xs[1] = {x};
    return synthesize(s, xs)[0];
}

}  // namespace fracswitch

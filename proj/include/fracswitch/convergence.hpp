#pragma once

// Structural truncation-tail series and peak formulas from the convergence
// analysis of the mode expansions.  The multiplicative constants in the
// underlying bounds are unknown, so every tail is a constant-free relative
// indicator, not a certified error bound.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracswitch/sine_basis.hpp"

namespace fracswitch {

struct TruncationReport {
    int K_used = 0;
    double lemma1_tail = 0.0;
    double lemma2_tail = 0.0;
    std::vector<double> lemma3_peak_values;  // g(t_max) per retained mode
    double lemma4_tail = 0.0;
    std::vector<double> M_k_estimates;  // sup_t |f_k(t)| per retained mode
    bool cap_warning = false;           // a tail had not plateaued at K_max
};

namespace detail {

inline double summed_tail(const std::function<double(int)>& term, int k_from, int k_max,
                          bool* cap_warning) {
    double acc = 0.0;
    int quiet = 0;
    for (int k = k_from; k <= k_max; ++k) {
        const double t = term(k);
        if (t < 0.0) throw std::domain_error("tail term must be nonnegative");
        acc += t;
        quiet = (t < 1e-15) ? quiet + 1 : 0;
        if (quiet >= 100) return acc;
    }
    if (cap_warning) *cap_warning = true;
    return acc;
}

}  // namespace detail

// (1/beta) sum_{k>K} M_k ln(1 + k^2 pi^2 (b-a)^beta)
inline double lemma1_tail(const std::function<double(int)>& m_k, double beta,
                          double span, int K, int k_max = 100000,
                          bool* cap_warning = nullptr) {
    const double sb = std::pow(span, beta);
    return detail::summed_tail(
               [&](int k) {
                   return m_k(k) * std::log1p(static_cast<double>(k) * k * kPi * kPi * sb);
               },
               K + 1, k_max, cap_warning) /
           beta;
}

// sum_{k>K} k^2 pi^2 |psi_k|
inline double lemma2_tail(const std::function<double(int)>& psi_k, int K,
                          int k_max = 100000, bool* cap_warning = nullptr) {
    return detail::summed_tail(
        [&](int k) { return static_cast<double>(k) * k * kPi * kPi * std::fabs(psi_k(k)); },
        K + 1, k_max, cap_warning);
}

struct PeakPoint {
    double t_max;
    double g_max;
};

// Closed-form maximum of g(t) = lambda t / (1 + lambda t^alpha) over t > 0.
inline PeakPoint lemma3_peak(double alpha, double lambda) {
    if (!(alpha > 1.0 && alpha < 2.0) || !(lambda > 0.0))
        throw std::domain_error("lemma3_peak: alpha in (1,2), lambda > 0 required");
    const double t_max = std::pow(1.0 / ((alpha - 1.0) * lambda), 1.0 / alpha);
    const double g_max =
        std::pow(alpha - 1.0, 1.0 - 1.0 / alpha) / alpha * std::pow(lambda, 1.0 - 1.0 / alpha);
    return {t_max, g_max};
}

// (1/alpha) sum_{k>K} M_k ln(1 + lambda_k b^alpha): the dominant forcing tail
// on the wave side.
inline double lemma4_tail(const std::function<double(int)>& m_k, double alpha,
                          double horizon, int K, int k_max = 100000,
                          bool* cap_warning = nullptr) {
    const double ba = std::pow(horizon, alpha);
    return detail::summed_tail(
               [&](int k) {
                   return m_k(k) * std::log1p(static_cast<double>(k) * k * kPi * kPi * ba);
               },
               K + 1, k_max, cap_warning) /
           alpha;
}

}  // namespace fracswitch

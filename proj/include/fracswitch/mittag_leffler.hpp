#pragma once

// Two-parameter Mittag-Leffler function E_{a,b}(z) on the closed negative real
// axis, 0 < a <= 2.  Three regimes: Taylor series near the origin, the
// algebraic asymptotic expansion far out, and a deformed-Bromwich (parabolic
// contour) Laplace inversion in between.  Every result carries an absolute
// error estimate.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fracswitch/errors.hpp"
#include "fracswitch/special.hpp"

namespace fracswitch::ml {

enum class Method { series, asymptotic, contour };

struct MLResult {
    double value;
    double abs_error_estimate;
    Method method_used;
};

// Regime crossovers, overridable per call.  The series/asymptotic routines
// fall back to the contour whenever they cannot certify the tolerance, so
// these are performance knobs, not correctness knobs.
struct MLConfig {
    double series_bound = 5.0;      // try the power series for |z| <= this
    double asymptotic_bound = 50.0; // try the asymptotic expansion for |z| >= this
};

namespace detail {

inline constexpr double kEps = 2.220446049250313e-16;

// Power series sum_{n>=0} z^n / Gamma(an+b).  Fails (returns false) when
// cancellation or slow decay prevents certifying tol.
inline bool try_series(double a, double b, double z, double tol,
                       double& value, double& err) {
    double sum = rgamma(b);
    double max_mag = std::fabs(sum);
    double zp = 1.0;
    for (int n = 1; n <= 2000; ++n) {
        zp *= z;
        const double term = zp * rgamma(a * n + b);
        sum += term;
        max_mag = std::max(max_mag, std::fabs(term));
        // Terms decay monotonically once Gamma outgrows |z|^n.
        const double next_ratio =
            a * n + b > 0.0
                ? std::fabs(z) *
                      std::exp(std::lgamma(a * n + b) - std::lgamma(a * (n + 1) + b))
                : 1.0;
        if (next_ratio < 0.5 && std::fabs(term) < 0.25 * tol * (1.0 + std::fabs(sum))) {
            const double tail = 2.0 * std::fabs(term) * next_ratio;
            const double round = max_mag * kEps * (n + 2);
            err = tail + round;
            value = sum;
            return err <= tol;
        }
    }
    return false;
}

// Algebraic expansion E_{a,b}(z) ~ -sum_{n>=1} z^{-n} / Gamma(b - an) plus,
// for a > 1, the exponentially small pole-pair contribution
// (2/a) Re[ s^{1-b} e^s ] at s = |z|^{1/a} e^{i pi/a}.  Truncation is driven
// by the reflection envelope |1/Gamma(b-an)| <= Gamma(1+an-b)/pi, since the
// raw term magnitudes oscillate through the sin factor.
inline bool try_asymptotic(double a, double b, double z, double tol,
                           double& value, double& err) {
    const double logz = std::log(std::fabs(z));
    double sum = 0.0;
    if (a > 1.0) {
        const std::complex<double> s =
            std::pow(std::fabs(z), 1.0 / a) * std::exp(std::complex<double>(0.0, kPi / a));
        sum += 2.0 / a * (std::pow(s, 1.0 - b) * std::exp(s)).real();
    }
    double zinv = 1.0 / z;
    double zp = 1.0;
    double prev_env = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 300; ++n) {
        const double arg = b - a * n;
        const double env = arg < 0.5 ? std::exp(std::lgamma(1.0 - arg) - n * logz) / kPi
                                     : std::exp(-std::lgamma(arg) - n * logz);
        if (env >= prev_env) {
            err = env + kEps * std::fabs(sum);
            value = sum;
            return err <= tol;
        }
        prev_env = env;
        zp *= zinv;
        sum -= zp * rgamma(arg);
        if (env < 0.05 * tol) {
            err = env + kEps * std::fabs(sum);
            value = sum;
            return true;
        }
    }
    err = prev_env;
    value = sum;
    return err <= tol;
}

// One trapezoidal pass over the parabolic contour s(u) = mu*(1+iu)^2.
// abs_tot accumulates sum |f_j| * h/pi for the roundoff bound.
inline double contour_pass(double a, double b, double z, double mu,
                           double h, double big_u, double& abs_tot) {
    using cplx = std::complex<double>;
    const int n = static_cast<int>(big_u / h) + 1;
    double tot = 0.0;
    abs_tot = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double u = j * h;
        const cplx w(1.0, u);
        const cplx s = mu * w * w;
        const cplx ds = cplx(0.0, 2.0 * mu) * w;
        const cplx f = std::exp(s) * std::pow(s, a - b) / (std::pow(s, a) - z) * ds;
        tot += f.imag() * (j == 0 ? 0.5 : 1.0);
        abs_tot += std::fabs(f.imag());
    }
    abs_tot *= h / kPi;
    return h / kPi * tot;
}

// Bromwich inversion of s^{a-b}/(s^a - z) at t = 1, requires b > 0.
// For a > 1 the pole pair s* = |z|^{1/a} e^{+-i pi/a} lies on the principal
// sheet; it is either enclosed (small mu, residues added) or kept at a safe
// parameter distance outside the contour.
inline void contour_eval(double a, double b, double z, double tol,
                         double& value, double& err) {
    using cplx = std::complex<double>;
    const double big_r = std::pow(std::fabs(z), 1.0 / a);
    double mu = 2.0;
    double dist = 1.0;
    double residues = 0.0;
    if (a > 1.0) {
        const double c = std::cos(kPi / (2.0 * a));
        const double c2 = big_r * c * c;
        bool enclose = false;
        if (c2 >= 0.5) {
            // Pole pair enclosed at parameter-plane radius >= 2.
            mu = std::min(2.0, c2 / 4.0);
            enclose = true;
        } else {
            mu = 2.0;  // pole pair stays at radius <= 0.5, outside
        }
        const double rho = std::sqrt(c2 / mu);
        dist = std::min(1.0, std::fabs(rho - 1.0));
        if (enclose) {
            const cplx s = big_r * std::exp(cplx(0.0, kPi / a));
            residues = 2.0 / a * (std::pow(s, 1.0 - b) * std::exp(s)).real();
        }
    }
    const double length = std::log(1e16);
    double h = 2.0 * kPi * dist / (mu + length);
    const double big_u = std::sqrt(1.0 + (mu + length) / mu);
    // The strip-of-analyticity rate can be degraded by the branch cut, so
    // refine h until successive passes agree to the requested tolerance.
    double abs_f = 0.0;
    double prev = contour_pass(a, b, z, mu, h * 1.1, big_u, abs_f);
    for (int iter = 0; iter < 6; ++iter) {
        const double cur = contour_pass(a, b, z, mu, h, big_u, abs_f);
        value = residues + cur;
        err = std::fabs(cur - prev) +
              kEps * (4.0 * abs_f + 8.0 * std::fabs(residues) + std::fabs(value));
        if (err <= tol) return;
        prev = cur;
        h *= 0.6;
    }
}

}  // namespace detail

// E_{a,b}(z) with |value - E_{a,b}(z)| <= abs_error_estimate <= tol on success.
// Throws std::domain_error for invalid (a, z), accuracy_error when no method
// certifies tol.
inline MLResult ml_eval(double a, double b, double z, double tol = 1e-12,
                        const MLConfig& cfg = {}) {
    if (!(a > 0.0) || a > 2.0) throw std::domain_error("ml_eval: requires 0 < a <= 2");
    if (!(z <= 0.0)) throw std::domain_error("ml_eval: requires z <= 0");
    if (!std::isfinite(b) || !std::isfinite(z)) throw std::domain_error("ml_eval: non-finite input");
    if (tol < 1e-14 || tol > 1e-6) throw std::domain_error("ml_eval: tol outside [1e-14, 1e-6]");

    if (z == 0.0) return {rgamma(b), 0.0, Method::series};

    double value = 0.0, err = 0.0;
    if (std::fabs(z) <= cfg.series_bound &&
        detail::try_series(a, b, z, tol, value, err)) {
        return {value, err, Method::series};
    }
    if (z <= -cfg.asymptotic_bound &&
        detail::try_asymptotic(a, b, z, tol, value, err)) {
        return {value, err, Method::asymptotic};
    }

    // Contour inversion needs b > 0; shift with E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z).
    double offset = 0.0;
    double scale = 1.0;
    double bb = b;
    while (bb <= 0.1) {
        offset += scale * rgamma(bb);
        scale *= z;
        bb += a;
    }
    detail::contour_eval(a, bb, z, tol / std::fabs(scale), value, err);
    value = offset + scale * value;
    err = std::fabs(scale) * err + detail::kEps * std::fabs(offset);
    if (err > tol) {
        throw accuracy_error("ml_eval: tolerance not achieved", err);
    }
    return {value, err, Method::contour};
}

// Convenience wrapper returning just the value.
inline double ml(double a, double b, double z, double tol = 1e-12) {
    return ml_eval(a, b, z, tol).value;
}

// |E_{a,b}(z)| * (1 + |z|): the quantity bounded by the classical decay
// envelope on the negative axis.
inline double ml_decay_margin(double a, double b, double z, double tol = 1e-12) {
    return std::fabs(ml(a, b, z, tol)) * (1.0 + std::fabs(z));
}

}  // namespace fracswitch::ml

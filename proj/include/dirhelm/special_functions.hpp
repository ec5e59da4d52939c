#pragma once

// Hankel functions of the first kind, orders 0 and 1, for real positive argument.
//
// Small arguments use the ascending series for J_n and Y_n, summed in extended
// precision so the cancellation near the switch point stays below 1e-12.
// Large arguments use Hankel's asymptotic expansion, truncated at its smallest term.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "dirhelm/errors.hpp"

namespace dirhelm {

namespace detail {

/// Below this argument the ascending series is used.
inline constexpr double hankel_series_limit = 20.0;

struct BesselPair {
    double j;
    double y;
};

inline BesselPair bessel_series(int order, double z) {
    using Ld = long double;
    constexpr Ld euler_gamma = 0.577215664901532860606512090082402431L;
    constexpr Ld pi = 3.141592653589793238462643383279502884L;
    const Ld x = z;
    const Ld quarter_sq = -x * x / 4;  // (-z^2/4)
    const Ld log_half = std::log(x / 2);

    if (order == 0) {
        // J0 = sum (-z^2/4)^k / (k!)^2
        // Y0 = (2/pi)(log(z/2) + gamma) J0 - (2/pi) sum H_k (-z^2/4)^k / (k!)^2
        Ld term = 1;
        Ld j = 1;
        Ld harmonic = 0;
        Ld ysum = 0;
        for (int k = 1; k < 200; ++k) {
            term *= quarter_sq / (Ld(k) * Ld(k));
            harmonic += Ld(1) / k;
            j += term;
            ysum += harmonic * term;
            if (std::abs(term) * (1 + harmonic) < 1e-22L * std::abs(j) + 1e-40L) break;
        }
        const Ld y = (2 / pi) * (log_half + euler_gamma) * j - (2 / pi) * ysum;
        return {static_cast<double>(j), static_cast<double>(y)};
    }

    // J1 = (z/2) sum (-z^2/4)^k / (k!(k+1)!)
    // Y1 = -2/(pi z) + (2/pi) log(z/2) J1
    //      - (1/pi)(z/2) sum (psi(k+1) + psi(k+2)) (-z^2/4)^k / (k!(k+1)!)
    Ld term = 1;  // (-z^2/4)^k / (k!(k+1)!)
    Ld jsum = 1;
    Ld psi_k1 = -euler_gamma;             // psi(k+1)
    Ld psi_k2 = -euler_gamma + 1;         // psi(k+2)
    Ld ysum = psi_k1 + psi_k2;
    for (int k = 1; k < 200; ++k) {
        term *= quarter_sq / (Ld(k) * Ld(k + 1));
        psi_k1 += Ld(1) / k;
        psi_k2 += Ld(1) / (k + 1);
        jsum += term;
        ysum += (psi_k1 + psi_k2) * term;
        if (std::abs(term) * (1 + std::abs(psi_k1 + psi_k2)) < 1e-22L * std::abs(jsum) + 1e-40L) break;
    }
    const Ld j = (x / 2) * jsum;
    const Ld y = -2 / (pi * x) + (2 / pi) * log_half * j - (x / 2) * ysum / pi;
    return {static_cast<double>(j), static_cast<double>(y)};
}

/// H^(1)_nu(z) ~ sqrt(2/(pi z)) exp(i(z - nu pi/2 - pi/4)) sum_k i^k a_k(nu) / z^k
inline std::complex<double> hankel_asymptotic(int order, double z) {
    const double mu = 4.0 * order * order;
    std::complex<double> sum = 1.0;
    std::complex<double> term = 1.0;
    const std::complex<double> i_over_z(0.0, 1.0 / z);
    double previous = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= i_over_z * ((mu - odd * odd) / (8.0 * k));
        const double magnitude = std::abs(term);
        if (magnitude > previous) break;  // past the smallest term
        sum += term;
        previous = magnitude;
        if (k >= 8 && magnitude < 1e-17 * std::abs(sum)) break;
    }
    // exp(i z) is formed from the exact double z; the constant phase is applied afterwards.
    const double phase = -(2.0 * order + 1.0) * std::numbers::pi / 4.0;
    const std::complex<double> carrier(std::cos(z), std::sin(z));
    const std::complex<double> shift(std::cos(phase), std::sin(phase));
    return std::sqrt(2.0 / (std::numbers::pi * z)) * carrier * shift * sum;
}

inline std::complex<double> hankel1(int order, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("Hankel function requires finite z > 0");
    if (z < hankel_series_limit) {
        const auto [j, y] = bessel_series(order, z);
        return {j, y};
    }
    return hankel_asymptotic(order, z);
}

}  // namespace detail

/// H^(1)_0(z) = J0(z) + i Y0(z), z > 0.
inline std::complex<double> hankel1_0(double z) { return detail::hankel1(0, z); }

/// H^(1)_1(z) = J1(z) + i Y1(z), z > 0. Note d/dz H^(1)_0 = -H^(1)_1.
inline std::complex<double> hankel1_1(double z) { return detail::hankel1(1, z); }

}  // namespace dirhelm

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "qlag/numeric.hpp"

namespace qlag {

struct SlowConvergence : Error { using Error::Error; };

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// ---------------------------------------------------------------------------
// gamma / digamma
// ---------------------------------------------------------------------------

// Digamma for z > 0: shift to z >= 10, then the Bernoulli asymptotic series.
inline double digamma(double z) {
    if (!(z > 0.0)) throw DomainError("digamma: need z > 0");
    double acc = 0.0;
    while (z < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    double inv = 1.0 / z, inv2 = inv * inv;
    // psi(z) ~ ln z - 1/(2z) - sum B_{2n} / (2n z^{2n})
    double series = std::log(z) - 0.5 * inv -
                    inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return acc + series;
}

// (Gamma(z), Psi(z)) for z > 0.
inline std::pair<double, double> gamma_digamma(double z) {
    if (!(z > 0.0)) throw DomainError("gamma_digamma: need z > 0");
    return {std::tgamma(z), digamma(z)};
}

inline double harmonic(int n) {
    double h = 0.0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    return h;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// ---------------------------------------------------------------------------
// Modified Bessel K_s, integer order
// ---------------------------------------------------------------------------

// Small-argument series built from the classical four-piece expansion
//   K_s(z) = 1/2 sum_{k=0}^{s-1} (-1)^k (s-k-1)!/k! (z/2)^{2k-s}
//          + (-1)^{s+1} log(z/2) I_s(z)
//          + (-1)^s 1/2 sum_{k>=0} [Psi(k+1)+Psi(s+k+1)] (z/2)^{2k+s} / (k! (s+k)!)
// which is the expansion behind the multiquadric transform formulas
// (digamma terms, log z, log 2 and Euler's constant all appear there).
inline double bessel_k_smallarg(int s, double z, int term_cap = 60) {
    if (s < 0) s = -s;
    if (!(z > 0.0)) throw DomainError("bessel_k_smallarg: need z > 0");
    const double half = z / 2.0;
    const double q = half * half;

    KahanSum sum;
    // finite part
    double pw = std::pow(half, -s);
    for (int k = 0; k < s; ++k) {
        double term = 0.5 * factorial(s - k - 1) / factorial(k) * pw;
        if (k % 2) term = -term;
        sum.add(term);
        pw *= q;
    }
    // log * I_s and the digamma series, summed together term by term
    const double lg = std::log(half);
    const double sgn = (s % 2 == 0) ? 1.0 : -1.0;
    double t = std::pow(half, s);  // (z/2)^{s+2k} / (k! (s+k)!) accumulates below
    t /= factorial(s);
    bool converged = false;
    for (int k = 0; k < term_cap; ++k) {
        double psi_sum = digamma(k + 1.0) + digamma(s + k + 1.0);
        double term = -sgn * lg * t + sgn * 0.5 * psi_sum * t;
        sum.add(term);
        if (std::abs(term) < 1e-16 * std::max(1.0, std::abs(sum.value())) && k > 2) {
            converged = true;
            break;
        }
        t *= q / ((k + 1.0) * (s + k + 1.0));
    }
    if (!converged)
        throw ConvergenceFailure("bessel_k_smallarg: term ratio did not fall below 1e-16");
    return sum.value();
}

// Branch switch at z = 2: paper-style series below, standard library above.
// Both branches agree to ~1e-13 across the overlap band [1.5, 2.5].
inline double bessel_k(int s, double z) {
    if (!(z > 0.0)) throw DomainError("bessel_k: need z > 0");
    if (z <= 2.0) return bessel_k_smallarg(s, z);
    return std::cyl_bessel_k(static_cast<double>(s < 0 ? -s : s), z);
}

// d/dz K_s = -(K_{s-1} + K_{s+1}) / 2; repeated to higher orders.
// Returns K_s(z) and its first `nder` derivatives.
inline std::vector<double> bessel_k_derivatives(int s, double z, int nder) {
    std::vector<double> kv(nder + s + 1);
    for (int o = 0; o <= nder + s; ++o) kv[o] = bessel_k(o, z);
    // table[d][o] = d-th derivative of K_o, built by the recurrence
    std::vector<std::vector<double>> table(nder + 1);
    table[0] = kv;
    for (int d = 1; d <= nder; ++d) {
        int width = nder + s - d;
        table[d].resize(width + 1);
        for (int o = 0; o <= width; ++o) {
            double lower = (o == 0) ? table[d - 1][1] : table[d - 1][o - 1];
            table[d][o] = -0.5 * (lower + table[d - 1][o + 1]);
        }
    }
    std::vector<double> out(nder + 1);
    for (int d = 0; d <= nder; ++d) out[d] = table[d][s];
    return out;
}

// ---------------------------------------------------------------------------
// Appendix series: inverse Fourier transform of exp(-||x||^beta)
// ---------------------------------------------------------------------------

struct BetaExpSeries {
    double beta = 2.0;
    int dimension = 1;
    int term_cap = 400;
    double tolerance = 1e-14;
};

// F^{-1}[exp(-||.||^beta)](xi)
//   = 2^{1-n}/pi^{n/2} * (1/beta) * sum_k (-1)^k (xi/2)^{2k} Gamma((n+2k)/beta)
//                                          / (k! Gamma(k+n/2))
// valid for beta > 1.  Alternating; Kahan summation plus the first-omitted-term
// bound.  For large xi the terms grow enormously before decaying, so there is
// a hard accuracy guard.
inline double inverse_ft_beta_exp(const BetaExpSeries& s, double xi) {
    if (!(s.beta > 1.0)) throw DomainError("inverse_ft_beta_exp: need beta > 1");
    if (s.dimension < 1) throw DomainError("inverse_ft_beta_exp: need n >= 1");
    if (xi < 0) xi = -xi;
    const double n = s.dimension;
    const double q = xi * xi / 4.0;

    KahanSum sum;
    double largest = 0.0;
    // term_k = (-1)^k q^k Gamma((n+2k)/beta) / (k! Gamma(k+n/2))
    double lt = std::lgamma(n / s.beta) - std::lgamma(n / 2.0);  // log |term_0|
    double term = std::exp(lt);
    double bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k < s.term_cap; ++k) {
        sum.add((k % 2) ? -term : term);
        largest = std::max(largest, term);
        // ratio to next term
        double lnext = std::lgamma((n + 2 * (k + 1)) / s.beta) - std::lgamma((n + 2 * k) / s.beta);
        double ratio = q * std::exp(lnext) / ((k + 1.0) * (k + n / 2.0));
        term *= ratio;
        bound = term;
        if (term < s.tolerance * std::max(1.0, std::abs(sum.value())) && k > 4) break;
    }
    if (!(bound < s.tolerance * std::max(1.0, std::abs(sum.value()))))
        throw SlowConvergence("inverse_ft_beta_exp: series tail above tolerance at cap");
    if (largest > 1e12 * std::max(std::abs(sum.value()), 1.0))
        throw SlowConvergence("inverse_ft_beta_exp: cancellation exceeds accuracy budget");
    const double front =
        std::pow(2.0, 1.0 - n) / std::pow(kPi, n / 2.0) / s.beta;
    return front * sum.value();
}

// beta = 1 closed form (Poisson kernel), n-dimensional:
//   F^{-1}[exp(-||.||)](xi) = Gamma((n+1)/2) / pi^{(n+1)/2} (1+||xi||^2)^{-(n+1)/2}
// Verified against direct quadrature of the transform; the constant differs
// from a published variant by a normalization slip there.
inline double poisson_kernel_inverse_ft(int n, double xi) {
    if (n < 1) throw DomainError("poisson_kernel_inverse_ft: need n >= 1");
    double e = (n + 1) / 2.0;
    return std::tgamma(e) / std::pow(kPi, e) * std::pow(1.0 + xi * xi, -e);
}

// Comb weight of F^{-1}|sin| at x = 2k:  (1/pi)(1+e^{i 2k pi})/(1-4k^2) = 2/(pi(1-4k^2)).
inline double sin_abs_fourier_identity(int k) {
    return 2.0 / (kPi * (1.0 - 4.0 * double(k) * double(k)));
}

// Fourier coefficient of |sin| at integer frequency j (zero for odd j).
inline double sin_abs_fourier_coefficient(int j) {
    if (j % 2 != 0) return 0.0;
    return 2.0 / (kPi * (1.0 - double(j) * double(j)));
}

}  // namespace qlag

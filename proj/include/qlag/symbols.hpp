#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qlag/kernels.hpp"
#include "qlag/moments.hpp"
#include "qlag/numeric.hpp"
#include "qlag/specfun.hpp"

namespace qlag {

struct SymbolVanishes : Error { using Error::Error; };
struct TailBoundTooLoose : Error { using Error::Error; };

enum class SymbolSource { ClosedForm, Quadrature, Reciprocal };

// A 2 pi periodic even symbol given by its Fourier coefficients lambda_j,
// |j| <= J, with lambda_{-j} = lambda_j, plus a certified algebraic decay rate
// |lambda_j| = O(|j|^{-decay_exponent}) for truncation bookkeeping.
struct PeriodicSymbol {
    SymbolSource source = SymbolSource::ClosedForm;
    std::vector<double> lambda;   // lambda[j], j = 0..J
    double decay_exponent = 0.0;  // 0 means compactly supported coefficients
    double tail_constant = 0.0;   // |lambda_j| <= tail_constant * j^{-decay}
    std::string label;

    int truncation() const { return static_cast<int>(lambda.size()) - 1; }

    double coeff(int j) const {
        j = std::abs(j);
        return j < static_cast<int>(lambda.size()) ? lambda[j] : 0.0;
    }

    double operator()(double theta) const {
        KahanSum s;
        s.add(lambda[0]);
        for (int j = 1; j < static_cast<int>(lambda.size()); ++j)
            s.add(2.0 * lambda[j] * std::cos(j * theta));
        return s.value();
    }

    // sum_{|j| > J} |lambda_j| <= tail_constant * 2 J^{1-decay} / (decay - 1)
    double abs_tail_bound() const {
        if (decay_exponent == 0.0) return 0.0;
        if (decay_exponent <= 1.0)
            throw TailBoundTooLoose("symbol coefficients are not absolutely summable");
        double J = truncation();
        return 2.0 * tail_constant * std::pow(J, 1.0 - decay_exponent) / (decay_exponent - 1.0);
    }
};

namespace detail {

// log-log fit of |lambda_j| over j in [J/4, J]; near-zero entries are skipped.
inline void fit_symbol_decay(PeriodicSymbol& sym) {
    int J = sym.truncation();
    std::vector<double> lx, ly;
    double floor = 0.0;
    for (double v : sym.lambda) floor = std::max(floor, std::abs(v));
    floor *= 1e-15;
    for (int j = std::max(2, J / 4); j <= J; ++j) {
        double v = std::abs(sym.lambda[j]);
        if (v > floor) {
            lx.push_back(std::log(double(j)));
            ly.push_back(std::log(v));
        }
    }
    if (lx.size() < 4) {
        sym.decay_exponent = 0.0;  // compactly supported or below noise
        sym.tail_constant = 0.0;
        return;
    }
    LineFit f = least_squares_line(lx, ly);
    sym.decay_exponent = -f.slope;
    sym.tail_constant = std::exp(f.intercept);
}

}  // namespace detail

// Fourier coefficients lambda_j = (1/2pi) int_T f(t) e^{-i j t} dt for an even
// piecewise-smooth 2 pi periodic f, by composite Clenshaw-Curtis with doubling
// and fixed panel splits at 0 and +-pi where the fractional-power symbols lose
// smoothness.
inline PeriodicSymbol fourier_coefficients(const std::function<double(double)>& f, int J,
                                           double tol = 1e-12,
                                           std::vector<double> extra_splits = {}) {
    if (J < 1) throw DomainError("fourier_coefficients: need J >= 1");
    PeriodicSymbol sym;
    sym.source = SymbolSource::Quadrature;
    sym.lambda.resize(J + 1);
    std::vector<double> splits = {0.0};
    for (double s : extra_splits) splits.push_back(s);
    for (int j = 0; j <= J; ++j) {
        // even f: lambda_j = (1/pi) int_0^pi f cos(j t) dt; keep >= ~8 panels
        // per oscillation at every refinement level
        auto integrand = [&](double t) { return f(t) * std::cos(j * t); };
        std::vector<double> sp;
        int base = std::max(4, j);
        for (int q = 0; q <= base; ++q) sp.push_back(kPi * q / base);
        for (double s : splits)
            if (s > 0 && s < kPi) sp.push_back(s);
        sym.lambda[j] = cc_integrate(integrand, 0.0, kPi, tol, sp) / kPi;
    }
    detail::fit_symbol_decay(sym);
    return sym;
}

// ---------------------------------------------------------------------------
// Cardinal interpolation: reciprocal of the lattice symbol
// ---------------------------------------------------------------------------

// sigma(theta) = sum_l phihat(|theta + 2 pi l|), theta in (-pi, pi].
// The algebraic lattice tail is summed by Euler-Maclaurin; transforms with
// exponential decay truncate plainly.
inline double lattice_symbol(const RadialKernel& k, double theta, int L = 64) {
    theta = std::remainder(theta, 2.0 * kPi);
    KahanSum s;
    double a = std::abs(theta);
    if (a > 0) s.add(transform_value(k, a));
    for (int l = 1; l <= L; ++l) {
        s.add(transform_value(k, std::abs(theta + 2.0 * kPi * l)));
        s.add(transform_value(k, std::abs(theta - 2.0 * kPi * l)));
    }
    double mu = k.singularity_order();
    if (k.kind == KernelKind::ThinPlateSpline || k.kind == KernelKind::CubicPower) {
        double lead = (k.kind == KernelKind::ThinPlateSpline) ? 2.0 * kPi : 12.0;
        auto f = [&](double l) {
            return lead * (std::pow(theta + 2.0 * kPi * l, -mu) + std::pow(2.0 * kPi * l - theta, -mu));
        };
        s.add(euler_maclaurin_tail(f, double(L)));
    }
    // multiquadric and B-spline lattice tails decay at least exponentially
    return s.value();
}

// Reciprocal-symbol coefficients lambda_j = (1/2pi) int_T e^{i j t} / sigma(t) dt.
// sigma is checked to stay away from zero on a fine grid first.
inline PeriodicSymbol reciprocal_symbol_coefficients(const RadialKernel& k, int J,
                                                     double tol = 1e-13) {
    for (int i = 1; i <= 512; ++i) {
        double t = kPi * i / 512.0;
        if (!(lattice_symbol(k, t) > 1e-8))
            throw SymbolVanishes("reciprocal_symbol_coefficients: sigma too small at "
                                 + std::to_string(t));
    }
    auto tau = [&](double t) { return 1.0 / lattice_symbol(k, t); };
    PeriodicSymbol sym = fourier_coefficients(tau, J, tol);
    sym.source = SymbolSource::Reciprocal;
    sym.label = "reciprocal(" + kernel_name(k.kind) + ")";

    if (k.kind == KernelKind::ThinPlateSpline) {
        // tau has the germ |t|^3 / (2 pi) at 0, so lambda_j -> 3/pi^2 j^-4;
        // snap the certified decay data to the analytic values and project the
        // computed coefficients onto the exact moment identities
        // sum lambda = sum j^2 lambda = 0 (with the j > J model tail included),
        // which the growth of the thin-plate kernel otherwise amplifies.
        sym.decay_exponent = 4.0;
        sym.tail_constant = 3.0 / (kPi * kPi);
        const double a4 = sym.tail_constant;
        double m0 = sym.lambda[0], m2 = 0.0;
        for (int j = 1; j <= J; ++j) {
            m0 += 2.0 * sym.lambda[j];
            m2 += 2.0 * double(j) * double(j) * sym.lambda[j];
        }
        m0 += 2.0 * euler_maclaurin_tail([&](double t) { return a4 / (t * t * t * t); }, J);
        m2 += 2.0 * euler_maclaurin_tail([&](double t) { return a4 / (t * t); }, J);
        sym.lambda[1] -= m2 / 2.0;
        sym.lambda[0] -= (m0 - m2);
    }
    return sym;
}

// ---------------------------------------------------------------------------
// Closed coefficient families used by the schemes
// ---------------------------------------------------------------------------

// Fourier coefficients of (2 - 2 cos t)^{3/2} = 8 |sin(t/2)|^3:
//   lambda_j = 96 / (pi (1 - 4 j^2)(9 - 4 j^2)).
inline double two_minus_two_cos_32_coefficient(int j) {
    double jj = 4.0 * double(j) * double(j);
    return 96.0 / (kPi * (1.0 - jj) * (9.0 - jj));
}

inline PeriodicSymbol two_minus_two_cos_32_symbol(int J) {
    PeriodicSymbol sym;
    sym.source = SymbolSource::ClosedForm;
    sym.label = "(2-2cos)^{3/2}";
    sym.lambda.resize(J + 1);
    for (int j = 0; j <= J; ++j) sym.lambda[j] = two_minus_two_cos_32_coefficient(j);
    sym.decay_exponent = 4.0;
    sym.tail_constant = 6.0 / kPi;
    return sym;
}

// Fourier coefficients of |sin t|^3: only even frequencies survive,
//   lambda_{2m} = 12 / (pi (1 - 4 m^2)(9 - 4 m^2)).
inline double sin_abs_cubed_coefficient(int j) {
    if (j % 2 != 0) return 0.0;
    int m = j / 2;
    double mm = 4.0 * double(m) * double(m);
    return 12.0 / (kPi * (1.0 - mm) * (9.0 - mm));
}

inline PeriodicSymbol sin_abs_cubed_symbol(int J) {
    PeriodicSymbol sym;
    sym.source = SymbolSource::ClosedForm;
    sym.label = "|sin|^3";
    sym.lambda.resize(J + 1);
    for (int j = 0; j <= J; ++j) sym.lambda[j] = sin_abs_cubed_coefficient(j);
    sym.decay_exponent = 4.0;
    sym.tail_constant = 12.0 / kPi;
    return sym;
}

// P(t)|sin t| for a symmetric trig polynomial P: convolution of P's
// coefficients with the A.1 coefficients of |sin|.
inline double p_sin_abs_coefficient(const TrigPolynomial& P, int j) {
    KahanSum s;
    int N = P.bandwidth();
    for (int k = -N; k <= N; ++k)
        s.add(P.coeff(k) * sin_abs_fourier_coefficient(j - k));
    return s.value();
}

inline PeriodicSymbol p_sin_abs_symbol(const TrigPolynomial& P, int J) {
    PeriodicSymbol sym;
    sym.source = SymbolSource::ClosedForm;
    sym.label = "P(t)|sin t|";
    sym.lambda.resize(J + 1);
    for (int j = 0; j <= J; ++j) sym.lambda[j] = p_sin_abs_coefficient(P, j);
    sym.decay_exponent = 2.0;
    sym.tail_constant = 4.0 / (kPi * kPi) * std::abs(P(0.0) + P(kPi)) * 0.5 +
                        4.0 / (kPi * kPi);
    return sym;
}

// The intermediate thin-plate symbol P(t)|sin t| with P solved from the
// N = 2 moment system.
inline PeriodicSymbol build_tps_intermediate_symbol(int J = 64) {
    SymTrigPolynomial P = solve_moment_system(tps_intermediate_system());
    return p_sin_abs_symbol(P.to_numeric(), J);
}

}  // namespace qlag

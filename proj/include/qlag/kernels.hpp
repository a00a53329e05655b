#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qlag/jet.hpp"
#include "qlag/numeric.hpp"
#include "qlag/specfun.hpp"
#include "qlag/symbolic.hpp"

namespace qlag {

struct UnsupportedKernel : Error { using Error::Error; };

enum class KernelKind { ThinPlateSpline, GeneralizedMultiquadric, CubicPower, CubicBSpline };

inline std::string kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::ThinPlateSpline: return "thin-plate-spline";
        case KernelKind::GeneralizedMultiquadric: return "generalized-multiquadric";
        case KernelKind::CubicPower: return "cubic-power";
        case KernelKind::CubicBSpline: return "cubic-bspline";
    }
    return "?";
}

// phi plus the analytic structure of its (generalized) transform.  c is the
// multiquadric shape parameter, ignored by the other kinds; everything here
// is one-dimensional.
struct RadialKernel {
    KernelKind kind = KernelKind::ThinPlateSpline;
    double c = 1.0;
    int dimension = 1;

    // exponent mu with phihat(r) ~ r^{-mu} near zero
    double singularity_order() const {
        switch (kind) {
            case KernelKind::ThinPlateSpline: return 3.0;
            case KernelKind::GeneralizedMultiquadric: return 4.0;
            case KernelKind::CubicPower: return 4.0;
            case KernelKind::CubicBSpline: return 0.0;
        }
        return 0.0;
    }
};

inline RadialKernel make_kernel(KernelKind kind, double c = 1.0) {
    if (kind == KernelKind::GeneralizedMultiquadric && !(c > 0.0))
        throw DomainError("multiquadric kernel needs c > 0");
    return RadialKernel{kind, c, 1};
}

// Centered cubic B-spline, support [-2, 2], unit integral.
inline double cubic_bspline(double x) {
    x = std::abs(x);
    if (x >= 2.0) return 0.0;
    if (x >= 1.0) {
        double t = 2.0 - x;
        return t * t * t / 6.0;
    }
    return 2.0 / 3.0 - x * x + x * x * x / 2.0;
}

inline double kernel_value(const RadialKernel& k, double r) {
    if (r < 0.0) throw DomainError("kernel_value: need r >= 0");
    switch (k.kind) {
        case KernelKind::ThinPlateSpline:
            return r == 0.0 ? 0.0 : r * r * std::log(r);
        case KernelKind::GeneralizedMultiquadric: {
            double s = r * r + k.c * k.c;
            return s * std::sqrt(s);
        }
        case KernelKind::CubicPower:
            return r * r * r;
        case KernelKind::CubicBSpline:
            return cubic_bspline(r);
    }
    return 0.0;
}

// phihat(|xi|) in the convention  fhat(xi) = int f(x) exp(-i xi x) dx, with
// delta-supported parts of the generalized transforms dropped:
//   TPS:  2 pi |xi|^-3
//   GMQ:  6 c^2 K_2(c|xi|) / xi^2        (the (2 pi)^{1/2} 2^{5/2}/Gamma(-3/2)
//                                          prefactor collapses to 6)
//   r^3:  12 |xi|^-4
//   B-spline: sinc^4(xi/2)
inline double transform_value(const RadialKernel& k, double xi) {
    double a = std::abs(xi);
    if (a == 0.0 && k.singularity_order() > 0.0)
        throw DomainError("transform_value: xi = 0 at a singular transform");
    switch (k.kind) {
        case KernelKind::ThinPlateSpline:
            return 2.0 * kPi / (a * a * a);
        case KernelKind::GeneralizedMultiquadric:
            return 6.0 * k.c * k.c * bessel_k(2, k.c * a) / (a * a);
        case KernelKind::CubicPower:
            return 12.0 / (a * a * a * a);
        case KernelKind::CubicBSpline: {
            if (a == 0.0) return 1.0;
            double s = std::sin(a / 2.0) / (a / 2.0);
            return s * s * s * s;
        }
    }
    return 0.0;
}

// Taylor jet of phihat at xi0 > 0 (away from the origin singularity).
template <int N>
Jet<N> transform_jet(const RadialKernel& k, double xi0) {
    if (!(xi0 > 0.0)) throw DomainError("transform_jet: need xi0 > 0");
    Jet<N> xi = Jet<N>::variable(xi0);
    switch (k.kind) {
        case KernelKind::ThinPlateSpline:
            return 2.0 * kPi * pow(xi, -3.0);
        case KernelKind::CubicPower:
            return 12.0 * pow(xi, -4.0);
        case KernelKind::CubicBSpline: {
            Jet<N> s = sinc(0.5 * xi);
            Jet<N> s2 = s * s;
            return s2 * s2;
        }
        case KernelKind::GeneralizedMultiquadric: {
            auto kd = bessel_k_derivatives(2, k.c * xi0, N - 1);
            std::array<double, N> fc;
            double f = 1.0;
            for (int d = 0; d < N; ++d) {
                if (d > 0) f *= d;
                fc[d] = kd[d] / f;
            }
            Jet<N> kz = compose(fc, k.c * xi);
            return 6.0 * k.c * k.c * kz * pow(xi, -2.0);
        }
    }
    return Jet<N>::constant(0.0);
}

// One term coef * xi^exponent * log(|xi|)^{0 or 1} of the transform near 0.
struct SingularTerm {
    int exponent = 0;
    bool has_log = false;
    SymReal coefficient;
};

struct TransformExpansion {
    std::vector<SingularTerm> singular_terms;            // increasing exponent
    std::function<double(double)> smooth_tail_evaluator;  // transform minus listed terms
    double normalization = 1.0;
    double shape_c = 1.0;

    double term_sum(double xi) const {
        double a = std::abs(xi);
        KahanSum s;
        for (const auto& t : singular_terms) {
            double v = t.coefficient.value(shape_c) * std::pow(a, t.exponent);
            if (t.has_log) v *= std::log(a);
            s.add(v);
        }
        return s.value();
    }
};

// Expansion of phihat about xi = 0 including every term with exponent <= order.
// GMQ terms come from the Olver-form K_2 series:
//   phihat = 12/xi^4 - 3 c^2/xi^2 + sum_k (A_k + B_k log|xi|) xi^{2k},
//   D_k = c^{2k+4} / (4^{k+1} k! (k+2)!),
//   A_k = D_k (3 (H_k + H_{k+2}) - 6 gamma + 6 log 2 - 6 log c),  B_k = -6 D_k.
inline TransformExpansion transform_expansion(const RadialKernel& k, int order,
                                              Rational c_exact = Rational(1)) {
    TransformExpansion e;
    e.shape_c = k.c;
    switch (k.kind) {
        case KernelKind::CubicBSpline:
            // no singular part
            e.smooth_tail_evaluator = [k](double xi) { return transform_value(k, xi); };
            e.normalization = 1.0;
            return e;
        case KernelKind::ThinPlateSpline: {
            SymReal two_pi;
            two_pi.pi = 2;
            e.singular_terms.push_back({-3, false, two_pi});
            e.normalization = 2.0 * kPi;
            e.smooth_tail_evaluator = [](double) { return 0.0; };
            return e;
        }
        case KernelKind::CubicPower: {
            e.singular_terms.push_back({-4, false, SymReal::of(12)});
            e.normalization = 3.0;
            e.smooth_tail_evaluator = [](double) { return 0.0; };
            return e;
        }
        case KernelKind::GeneralizedMultiquadric: {
            Rational c2 = c_exact * c_exact;
            e.singular_terms.push_back({-4, false, SymReal::of(12)});
            e.singular_terms.push_back({-2, false, SymReal::of(-3 * c2)});
            Rational Dk = c2 * c2 / Rational(8);  // c^4 / (4 * 0! * 2!)
            Rational Hk = 0, Hk2 = Rational(1) + Rational(1, 2);
            for (int kk = 0; 2 * kk <= order; ++kk) {
                if (kk > 0) {
                    Dk *= c2 / Rational(4 * kk * (kk + 2));
                    Hk += Rational(1, kk);
                    Hk2 += Rational(1, kk + 2);
                }
                SymReal A;
                A.one = Rational(3) * (Hk + Hk2) * Dk;
                A.euler = Rational(-6) * Dk;
                A.ln2 = Rational(6) * Dk;
                A.lnc = Rational(-6) * Dk;
                SymReal B;
                B.one = Rational(-6) * Dk;
                e.singular_terms.push_back({2 * kk, false, A});
                e.singular_terms.push_back({2 * kk, true, B});
            }
            e.normalization = 3.0;
            RadialKernel kc = k;
            TransformExpansion probe = e;  // capture by value below
            e.smooth_tail_evaluator = [kc, probe](double xi) {
                return transform_value(kc, xi) - probe.term_sum(xi);
            };
            return e;
        }
    }
    throw UnsupportedKernel("transform_expansion: unknown kernel");
}

}  // namespace qlag

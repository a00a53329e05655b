#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlag/jet.hpp"
#include "qlag/kernels.hpp"
#include "qlag/moments.hpp"
#include "qlag/numeric.hpp"
#include "qlag/symbols.hpp"

namespace qlag {

struct DivergentCombination : Error { using Error::Error; };
struct NonDifferentiablePoint : Error { using Error::Error; };

// One-sided derivative pair; the two agree everywhere psihat is C^d.
struct DerivativeValue {
    double left = 0.0;
    double right = 0.0;
    double value() const { return 0.5 * (left + right); }
    bool split(double tol = 1e-9) const { return std::abs(left - right) > tol; }
};

// ---------------------------------------------------------------------------
// Near-zero expansion of psihat: sum of a_m xi^m, b_m xi^m log|xi| and
// c_m |xi|^m (odd m) terms.  Exact derivative bookkeeping at xi = 0.
// ---------------------------------------------------------------------------
struct NearZeroExpansion {
    static constexpr int kOrder = 11;
    std::array<double, kOrder> plain{};    // a_m xi^m
    std::array<double, kOrder> logpow{};   // b_m xi^m log|xi|
    std::array<double, kOrder> absodd{};   // c_m |xi|^m, odd m only

    double eval(double xi) const {
        double a = std::abs(xi);
        double lg = (a > 0.0) ? std::log(a) : 0.0;
        KahanSum s;
        double pw = 1.0, apw = 1.0;
        for (int m = 0; m < kOrder; ++m) {
            s.add(plain[m] * pw);
            if (a > 0.0) {
                s.add(logpow[m] * pw * lg);
                s.add(absodd[m] * apw);
            }
            pw *= xi;
            apw *= a;
        }
        return s.value();
    }

    // d-th derivative at 0; split when an |xi|^d term survives, +-inf when a
    // log term sits at order d.
    DerivativeValue derivative_at_zero(int d) const {
        double fact = 1.0;
        for (int q = 2; q <= d; ++q) fact *= q;
        DerivativeValue v;
        v.left = v.right = plain[d] * fact;
        if (absodd[d] != 0.0) {
            v.right += fact * absodd[d];
            v.left -= fact * absodd[d];  // odd m: (-1)^m = -1
        }
        if (logpow[d] != 0.0) {
            double s = logpow[d] > 0 ? 1.0 : -1.0;
            v.left = -s * std::numeric_limits<double>::infinity();
            v.right = -s * std::numeric_limits<double>::infinity();
        }
        return v;
    }
};

// ---------------------------------------------------------------------------
// Local structure of psihat at a kink location: psihat(loc + t) = |t|^r S(t)
// with S analytic (r = 0 means plain smooth jet).
// ---------------------------------------------------------------------------
struct LocalGerm {
    double location = 0.0;
    int r = 0;
    Jet<7> cofactor;

    DerivativeValue derivative(int d) const {
        DerivativeValue v;
        if (r == 0) {
            v.left = v.right = cofactor.derivative(d);
            return v;
        }
        if (d < r) {
            v.left = v.right = 0.0;
            return v;
        }
        double fact = 1.0;
        for (int q = 2; q <= d; ++q) fact *= q;
        double coef = fact * cofactor.c[d - r];
        v.right = coef;
        v.left = (r % 2 == 0) ? coef : -coef;
        return v;
    }
};

// Far-field germ family over the half-lattice {offset + k*step : k >= 0}
// (mirrored to negative frequencies): psihat(loc + t) = |t|^r U(t) loc^{-3}
// (1 + t/loc)^{-3}.  The transform of each germ turns the lattice into
// trigonometric sums; the x^{-r-1-q} scale comes from d^q/dx^q FT(|t|^r).
struct GermFamily {
    double offset = 2.0 * kPi;
    double step = 2.0 * kPi;
    int r = 3;
    Jet<7> ucofactor;  // U(t), the location-independent part of the cofactor
};

// Explicit finite kink list (Fourier-profile route).
struct ExplicitKinks {
    int r = 3;
    std::vector<std::pair<double, Jet<7>>> kinks;  // (location > 0, cofactor)
};

namespace detail {

// FT(|t|^r)(x) = c_r / x^{r+1} for odd r: c_1 = -2, c_3 = 12, c_5 = -240.
inline double abs_power_ft_constant(int r) {
    switch (r) {
        case 1: return -2.0;
        case 3: return 12.0;
        case 5: return -240.0;
    }
    throw DomainError("abs_power_ft_constant: odd r in {1,3,5} only");
}

// (-i)^q d^q/dx^q (c_r x^{-(r+1)}) as a complex number at real x > 0.
inline std::complex<double> germ_transform(int r, int q, double x) {
    double c = abs_power_ft_constant(r);
    double p = r + 1.0;
    double deriv = c;
    for (int k = 0; k < q; ++k) deriv *= -(p + k);
    deriv *= std::pow(x, -(p + q));
    std::complex<double> mi(0.0, -1.0);
    std::complex<double> f(1.0, 0.0);
    for (int k = 0; k < q; ++k) f *= mi;
    return f * deriv;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// QuasiLagrange
// ---------------------------------------------------------------------------

enum class EvalRoute { FiniteSum, CachedSum, FourierQuadrature };

class QuasiLagrange {
  public:
    std::string id;
    RadialKernel kernel{};
    bool has_kernel = false;
    EvalRoute route = EvalRoute::FiniteSum;
    double normalization = 1.0;

    // real-space data (FiniteSum / CachedSum): lambda[j], j = 0..J, symmetric,
    // with the normalization already folded in.
    std::vector<double> lambda;
    double support_radius = std::numeric_limits<double>::infinity();
    double tail_a4 = 0.0;       // cached-sum coefficient model lambda_j ~ a4 j^-4
    double crossover = 40.0;    // switch to far-field asymptotics beyond this

    // psihat machinery
    std::function<double(double)> psihat_direct;          // away from 0 and kinks
    std::function<Jet<7>(double)> psihat_jet;             // optional analytic jet
    NearZeroExpansion near_zero;
    std::function<LocalGerm(int)> lattice_local;          // at 2 pi j, j != 0
    std::function<std::optional<LocalGerm>(double)> kink_local;  // at other kinks

    // far field
    std::vector<GermFamily> germ_families;
    std::array<double, 4> center_germs{};  // kappa_q of |t|^3 t^q at xi = 0
    bool has_center_germs = false;
    std::vector<double> origin_log_germs;  // L_m: coefficient of xi^{2m} log|xi|, m = 0..
    std::optional<ExplicitKinks> explicit_kinks;

    // Fourier-quadrature evaluation parameters
    double quad_cutoff = 0.0;       // integrate |xi| <= cutoff
    bool quad_byparts_tail = false; // add the integrated-by-parts tail terms
    double byparts_kink_jump_scale = 0.0;  // A' jump at odd pi multiples: scale/xi^3

    // declared decay exponent (for summability/window bookkeeping); 0 = compact
    double decay_exponent = 0.0;

    // ---- psi ----

    double psi(double x) const {
        x = std::abs(x);
        switch (route) {
            case EvalRoute::FiniteSum: {
                if (x >= support_radius) return 0.0;
                if (!origin_log_germs.empty() && x > crossover) return psi_far_logger(x);
                return real_space_sum(x);
            }
            case EvalRoute::CachedSum: {
                if (x > crossover) return psi_far_germs(x);
                return real_space_sum(x) + cached_tail(x);
            }
            case EvalRoute::FourierQuadrature: {
                if (x > crossover) {
                    if (explicit_kinks) return psi_far_kinks(x);
                    return psi_far_germs(x);
                }
                return psi_quadrature(x);
            }
        }
        return 0.0;
    }

    // absolute evaluation tolerance attached to psi(x)
    double psi_tolerance(double x) const {
        x = std::abs(x);
        switch (route) {
            case EvalRoute::FiniteSum:
                if (x >= support_radius) return 0.0;
                if (!origin_log_germs.empty() && x > crossover)
                    return 1e-2 * std::abs(psi_far_logger(x)) + 1e-300;
                return 4e-16 * real_space_abs_sum(x);
            case EvalRoute::CachedSum:
                if (x > crossover) return 2e-2 * std::abs(psi_far_germs(x)) + 1e-300;
                return 4e-16 * real_space_abs_sum(x) + 1e-13;
            case EvalRoute::FourierQuadrature:
                if (x > crossover) return 2e-2 * std::abs(psi(x)) + 1e-300;
                return quad_byparts_tail ? 1.2e-7 / std::max(1.0, x * x) : 1e-12;
        }
        return 0.0;
    }

    // ---- psihat ----

    double psi_hat(double xi) const {
        double a = std::abs(xi);
        if (a < 0.05) return near_zero.eval(a);
        return psihat_direct(a);
    }

    DerivativeValue psi_hat_derivative(double xi, int d) const {
        if (d > 6) throw DomainError("psi_hat_derivative: order too high");
        double a = std::abs(xi);
        // exact lattice / kink points first
        double two_pi_j = std::round(a / (2.0 * kPi)) * 2.0 * kPi;
        if (std::abs(a - two_pi_j) < 1e-12 && two_pi_j > 0.0) {
            int j = static_cast<int>(std::round(two_pi_j / (2.0 * kPi)));
            DerivativeValue v = lattice_local(j).derivative(d);
            return reflect(v, xi, d);
        }
        if (a < 1e-12) return near_zero.derivative_at_zero(d);
        if (kink_local) {
            double pim = std::round(a / kPi) * kPi;
            if (std::abs(a - pim) < 1e-12 && pim > 0.0) {
                if (auto g = kink_local(pim)) return reflect(g->derivative(d), xi, d);
            }
        }
        if (a < 0.05) {
            // derivatives of the expansion, one term set at a time
            double lg = std::log(a);
            KahanSum s;
            for (int m = 0; m < NearZeroExpansion::kOrder; ++m) {
                s.add(near_zero.plain[m] * monomial_derivative(m, a, d));
                if (near_zero.logpow[m] != 0.0)
                    s.add(near_zero.logpow[m] * logpow_derivative(m, a, d, lg));
                if (near_zero.absodd[m] != 0.0)
                    s.add(near_zero.absodd[m] * monomial_derivative(m, a, d));
            }
            DerivativeValue v;
            v.left = v.right = s.value();
            return reflect(v, xi, d);
        }
        if (psihat_jet) {
            Jet<7> j = psihat_jet(a);
            DerivativeValue v;
            v.left = v.right = j.derivative(d);
            return reflect(v, xi, d);
        }
        // central differences with one Richardson step (fallback)
        DerivativeValue v;
        v.left = v.right = finite_difference(a, d);
        return reflect(v, xi, d);
    }

    // ---- internals ----

    double real_space_sum(double x) const {
        KahanSum s;
        int J = static_cast<int>(lambda.size()) - 1;
        for (int j = J; j >= 1; --j) {
            double pair = kernel_value(kernel, std::abs(x - j)) +
                          kernel_value(kernel, std::abs(x + j));
            s.add(lambda[j] * pair);
        }
        s.add(lambda[0] * kernel_value(kernel, std::abs(x)));
        return s.value();
    }

    double real_space_abs_sum(double x) const {
        KahanSum s;
        int J = static_cast<int>(lambda.size()) - 1;
        for (int j = J; j >= 0; --j) {
            double pair = std::abs(kernel_value(kernel, std::abs(x - j))) +
                          (j ? std::abs(kernel_value(kernel, std::abs(x + j))) : 0.0);
            s.add(std::abs(lambda[j]) * pair);
        }
        return s.value();
    }

    // sum_{j > J} a4/j^4 [phi(|x-j|) + phi(x+j)] for the thin-plate kernel:
    // the integral part has the elementary antiderivative below (expansion of
    // the pair in powers of x/J keeps it stable for all |x| <= crossover),
    // and Euler-Maclaurin supplies the endpoint corrections.
    double cached_tail(double x) const {
        int J = static_cast<int>(lambda.size()) - 1;
        const double a4 = tail_a4;
        const double lJ = std::log(double(J));
        double J3 = double(J) * double(J) * double(J);
        KahanSum integral;
        integral.add(a4 * 2.0 * (lJ + 1.0) / J);
        integral.add(a4 * x * x * (2.0 * lJ / 3.0 + 2.0 / 9.0 + 1.0) / J3);
        integral.add(-a4 * std::pow(x, 4) / (30.0 * J3 * J * J));
        integral.add(-a4 * std::pow(x, 6) / (210.0 * std::pow(double(J), 7)));
        auto f = [&, x](double t) {
            return a4 / (t * t * t * t) *
                   (kernel_value(kernel, std::abs(x - t)) + kernel_value(kernel, x + t));
        };
        double h = 0.5;
        double f0 = f(J);
        double fp = (f(J + h) - f(J - h)) / (2.0 * h);
        double f3 = (f(J + 2 * h) - 2.0 * f(J + h) + 2.0 * f(J - h) - f(J - 2 * h)) /
                    (2.0 * h * h * h);
        return integral.value() - 0.5 * f0 - fp / 12.0 + f3 / 720.0;
    }

    // far field from origin xi^{2m} log germs:
    //   psi(x) ~ sum_m L_m (-1)^{m+1} (2m)! / (2 x^{2m+1})
    double psi_far_logger(double x) const {
        KahanSum s;
        for (std::size_t m = 0; m < origin_log_germs.size(); ++m) {
            double L = origin_log_germs[m];
            if (L == 0.0) continue;
            double fact = factorial(static_cast<int>(2 * m));
            double sgn = (m % 2 == 0) ? -1.0 : 1.0;
            s.add(L * sgn * fact / (2.0 * std::pow(x, 2.0 * m + 1.0)));
        }
        return s.value();
    }

    double psi_far_germs(double x) const {
        std::complex<double> total(0.0, 0.0);
        static const double C[4] = {1.0, -3.0, 6.0, -10.0};  // binom(-3, b)
        for (const auto& fam : germ_families) {
            // T_b(x) = sum_{k>=0} (offset + k step)^{-(3+b)} e^{i (offset + k step) x}
            std::array<std::complex<double>, 4> T{};
            const int KS = 4000;
            for (int k = KS; k >= 0; --k) {
                double loc = fam.offset + fam.step * k;
                std::complex<double> phase(std::cos(loc * x), std::sin(loc * x));
                double pw = 1.0 / (loc * loc * loc);
                for (int b = 0; b < 4; ++b) {
                    T[b] += pw * phase;
                    pw /= loc;
                }
            }
            for (int q = 0; q < 4; ++q) {
                std::complex<double> amp(0.0, 0.0), amp_m(0.0, 0.0);
                for (int a = 0; a <= q; ++a) {
                    int b = q - a;
                    double w = fam.ucofactor.c[a] * C[b];
                    amp += w * T[b];
                    amp_m += (q % 2 == 0 ? w : -w) * std::conj(T[b]);
                }
                std::complex<double> g = detail::germ_transform(fam.r, q, x);
                total += (amp + amp_m) * g;
            }
        }
        if (has_center_germs) {
            for (int q = 0; q < 4; ++q)
                if (center_germs[q] != 0.0)
                    total += center_germs[q] * detail::germ_transform(3, q, x);
        }
        return total.real() / (2.0 * kPi);
    }

    double psi_far_kinks(double x) const {
        std::complex<double> total(0.0, 0.0);
        const auto& ek = *explicit_kinks;
        for (const auto& [loc, jet] : ek.kinks) {
            std::complex<double> phase(std::cos(loc * x), std::sin(loc * x));
            for (int q = 0; q < 4; ++q) {
                std::complex<double> g = detail::germ_transform(ek.r, q, x);
                double sgn = (q % 2 == 0) ? 1.0 : -1.0;  // mirror kink at -loc
                total += jet.c[q] * g * (phase + sgn * std::conj(phase));
            }
        }
        return total.real() / (2.0 * kPi);
    }

    // (1/pi) int_0^cutoff psihat(s) cos(x s) ds with pi-aligned panels, plus
    // the integrated-by-parts tail when enabled.
    double psi_quadrature(double x) const {
        const QuadRule& rule = cached_rule(16, true);
        int panels_per_pi = 1 + static_cast<int>(x / 4.0);
        KahanSum s;
        int npi = static_cast<int>(std::ceil(quad_cutoff / kPi));
        double cutoff = quad_byparts_tail ? (npi + 0.5) * kPi : quad_cutoff;
        for (int k = 0; k < npi; ++k) {
            for (int q = 0; q < panels_per_pi; ++q) {
                double a = (k + double(q) / panels_per_pi) * kPi;
                double b = (k + double(q + 1) / panels_per_pi) * kPi;
                s.add(integrate_panel([&](double t) { return psi_hat(t) * std::cos(x * t); },
                                      a, b, rule));
            }
        }
        if (quad_byparts_tail) {
            for (int q = 0; q < panels_per_pi; ++q) {
                double a = (npi + double(q) / (2.0 * panels_per_pi)) * kPi;
                double b = (npi + double(q + 1) / (2.0 * panels_per_pi)) * kPi;
                s.add(integrate_panel([&](double t) { return psi_hat(t) * std::cos(x * t); },
                                      a, b, rule));
            }
            s.add(byparts_tail(cutoff, x));
        }
        return s.value() / kPi;
    }

    double byparts_tail(double a, double x) const {
        // int_a^inf A cos(x s) ds =
        //   -A(a) sin(ax)/x + A'(a) cos(ax)/x^2
        //   - (1/x^2) sum_{kinks > a} jump(A') cos(kink x)  + O(int |A''| / x^2)
        double h = 1e-5;
        double A0 = psihat_direct(a);
        double A1 = (psihat_direct(a + h) - psihat_direct(a - h)) / (2.0 * h);
        KahanSum s;
        s.add(-A0 * std::sin(a * x) / x);
        s.add(A1 * std::cos(a * x) / (x * x));
        if (byparts_kink_jump_scale != 0.0) {
            int k0 = static_cast<int>(std::ceil((a / kPi - 1.0) / 2.0));
            KahanSum ks;
            for (int k = k0; k < k0 + 4000; ++k) {
                double loc = (2.0 * k + 1.0) * kPi;
                ks.add(byparts_kink_jump_scale / (loc * loc * loc) * std::cos(loc * x));
            }
            s.add(-ks.value() / (x * x));
        }
        return s.value();
    }

  private:
    static DerivativeValue reflect(DerivativeValue v, double xi, int d) {
        // psihat is even; odd derivatives flip across xi -> -xi and the
        // one-sided roles swap.
        if (xi >= 0.0) return v;
        DerivativeValue r;
        double sgn = (d % 2 == 0) ? 1.0 : -1.0;
        r.left = sgn * v.right;
        r.right = sgn * v.left;
        return r;
    }

    static double monomial_derivative(int m, double a, int d) {
        double coef = 1.0;
        for (int k = 0; k < d; ++k) coef *= (m - k);  // vanishes for d > m
        return coef == 0.0 ? 0.0 : coef * std::pow(a, m - d);
    }

    static double logpow_derivative(int m, double a, int d, double lg) {
        // d-th derivative of a^m log a: falling-factorial ladder
        // f = x^m log x; f^(d) = (m)_d x^{m-d} log x + sum over split products.
        // Use the recursion f_d = (m-d+1) f_{d-1}/x + x^{m-d} (m)_{d-1} ... easier:
        // derivative of x^k log x = k x^{k-1} log x + x^{k-1}.
        double cl = 1.0;  // coefficient of x^{m-q} log x
        double cp = 0.0;  // coefficient of x^{m-q}
        int k = m;
        for (int q = 0; q < d; ++q) {
            double ncl = cl * k;
            double ncp = cp * k + cl;
            cl = ncl;
            cp = ncp;
            --k;
        }
        return cl * std::pow(a, m - d) * lg + cp * std::pow(a, m - d);
    }

    double finite_difference(double a, int d) const {
        if (d == 0) return psi_hat(a);
        auto D = [&](double h) {
            switch (d) {
                case 1: return (psi_hat(a + h) - psi_hat(a - h)) / (2 * h);
                case 2: return (psi_hat(a + h) - 2 * psi_hat(a) + psi_hat(a - h)) / (h * h);
                case 3:
                    return (psi_hat(a + 2 * h) - 2 * psi_hat(a + h) + 2 * psi_hat(a - h) -
                            psi_hat(a - 2 * h)) / (2 * h * h * h);
                default:
                    return (psi_hat(a + 2 * h) - 4 * psi_hat(a + h) + 6 * psi_hat(a) -
                            4 * psi_hat(a - h) + psi_hat(a - 2 * h)) / (h * h * h * h);
            }
        };
        double d1 = D(1e-2), d2 = D(5e-3);
        return (4.0 * d2 - d1) / 3.0;  // one Richardson step, h^2 error model
    }
};

}  // namespace qlag

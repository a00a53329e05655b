#pragma once

#include <cmath>
#include <vector>

#include "qlag/jet.hpp"
#include "qlag/kernels.hpp"
#include "qlag/numeric.hpp"
#include "qlag/symbolic.hpp"

namespace qlag {

struct InconsistentSystem : Error { using Error::Error; };
struct UnderdeterminedSystem : Error { using Error::Error; };

// Real symmetric trigonometric polynomial P(xi) = sum_{k=-N}^{N} mu_k e^{i k xi}
// with mu_{-k} = mu_k, stored as mu_0..mu_N.
struct TrigPolynomial {
    std::vector<double> mu;  // mu[k], k = 0..N

    int bandwidth() const { return static_cast<int>(mu.size()) - 1; }

    double coeff(int k) const {
        k = std::abs(k);
        return k < static_cast<int>(mu.size()) ? mu[k] : 0.0;
    }

    double operator()(double xi) const {
        KahanSum s;
        s.add(mu[0]);
        for (int k = 1; k < static_cast<int>(mu.size()); ++k)
            s.add(2.0 * mu[k] * std::cos(k * xi));
        return s.value();
    }

    double derivative(double xi, int d) const {
        KahanSum s;
        for (int k = 1; k < static_cast<int>(mu.size()); ++k) {
            double v = 2.0 * mu[k] * std::pow(double(k), d);
            switch (d % 4) {
                case 0: v *= std::cos(k * xi); break;
                case 1: v *= -std::sin(k * xi); break;
                case 2: v *= -std::cos(k * xi); break;
                default: v *= std::sin(k * xi); break;
            }
            s.add(v);
        }
        if (d == 0) s.add(mu[0]);
        return s.value();
    }

    template <int N>
    Jet<N> jet(double xi) const {
        Jet<N> r;
        for (int d = 0; d < N; ++d) {
            double f = 1.0;
            for (int q = 2; q <= d; ++q) f *= q;
            r.c[d] = derivative(xi, d) / f;
        }
        return r;
    }

    // moment M_p = sum_k k^p mu_k (zero for odd p by symmetry)
    double moment(int p) const {
        if (p % 2 == 1) return 0.0;
        KahanSum s;
        if (p == 0) s.add(mu[0]);
        for (int k = 1; k < static_cast<int>(mu.size()); ++k)
            s.add(2.0 * mu[k] * std::pow(double(k), p));
        return s.value();
    }
};

// Same thing with exact coefficients.
struct SymTrigPolynomial {
    std::vector<SymReal> mu;  // mu[k], k = 0..N

    int bandwidth() const { return static_cast<int>(mu.size()) - 1; }

    SymReal moment(int p) const {
        SymReal m;
        if (p % 2 == 1) return m;
        if (p == 0) m += mu[0];
        for (int k = 1; k < static_cast<int>(mu.size()); ++k) {
            Rational kp = 1;
            for (int q = 0; q < p; ++q) kp *= k;
            m += (Rational(2) * kp) * mu[k];
        }
        return m;
    }

    TrigPolynomial to_numeric(double c = 1.0) const {
        TrigPolynomial p;
        p.mu.reserve(mu.size());
        for (const auto& m : mu) p.mu.push_back(m.value(c));
        return p;
    }
};

// One equation sum_k k^p mu_k = rhs.
struct MomentEquation {
    int power = 0;
    SymReal rhs;
};

struct MomentSystem {
    int bandwidth = 0;
    std::vector<MomentEquation> equations;
    bool symmetric = true;  // close with mu_{-k} = mu_k first
    double shape_c = 1.0;   // numeric value behind log c in the rhs
};

namespace detail {

// Gaussian elimination of a rational matrix with SymReal right-hand sides
// (SymReal is a module over Q, so the elimination is component-wise exact).
inline std::vector<SymReal> solve_rational(std::vector<std::vector<Rational>> A,
                                           std::vector<SymReal> b) {
    const int rows = static_cast<int>(A.size());
    const int cols = rows ? static_cast<int>(A[0].size()) : 0;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (A[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        Rational inv = A[r][c];
        for (int j = c; j < cols; ++j) A[r][j] /= inv;
        b[r] = Rational(Rational(1) / inv) * b[r];
        for (int i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Rational f = A[i][c];
            for (int j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (!b[i].is_zero())
            throw InconsistentSystem("moment system has no solution");
    if (r < cols)
        throw UnderdeterminedSystem("moment system rank deficit after symmetry closure");
    std::vector<SymReal> x(cols);
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

}  // namespace detail

// Exact solution of the moment system.  Symmetry mu_{-k} = mu_k is imposed
// first (odd-power equations must then be homogeneous); if the even-power
// block is still short of equations the minimum-norm solution (Euclidean norm
// of the full coefficient vector mu_{-N..N}) closes it.
inline SymTrigPolynomial solve_moment_system(const MomentSystem& sys) {
    const int N = sys.bandwidth;
    if (!sys.symmetric)
        throw UnderdeterminedSystem("only the symmetric closure is implemented");

    std::vector<std::vector<Rational>> A;
    std::vector<SymReal> b;
    for (const auto& eq : sys.equations) {
        if (eq.power % 2 == 1) {
            if (!eq.rhs.is_zero())
                throw InconsistentSystem("odd moment equation incompatible with symmetry");
            continue;
        }
        std::vector<Rational> row(N + 1);
        row[0] = (eq.power == 0) ? Rational(1) : Rational(0);
        for (int k = 1; k <= N; ++k) {
            Rational kp = 1;
            for (int q = 0; q < eq.power; ++q) kp *= k;
            row[k] = 2 * kp;
        }
        A.push_back(std::move(row));
        b.push_back(eq.rhs);
    }

    const int m = static_cast<int>(A.size());
    SymTrigPolynomial out;
    if (m >= N + 1) {
        out.mu = detail::solve_rational(std::move(A), std::move(b));
        return out;
    }

    // under-determined: minimize mu_0^2 + 2 sum mu_k^2 subject to A mu = b,
    // i.e. mu = W^{-1} A^T y with (A W^{-1} A^T) y = b, W = diag(1,2,..,2).
    std::vector<std::vector<Rational>> G(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Rational s = A[i][0] * A[j][0];
            for (int k = 1; k <= N; ++k) s += A[i][k] * A[j][k] / Rational(2);
            G[i][j] = s;
        }
    std::vector<SymReal> y = detail::solve_rational(G, b);
    out.mu.assign(N + 1, SymReal{});
    for (int k = 0; k <= N; ++k) {
        SymReal v;
        for (int i = 0; i < m; ++i) v += A[i][k] * y[i];
        if (k > 0) v = Rational(1, 2) * v;
        out.mu[k] = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// System builders for the schemes
// ---------------------------------------------------------------------------

// Thin-plate intermediate scheme: psihat = 2 pi P(xi) sin(xi) / xi^3 near zero
// must be 1 + O(xi^3).  Moments:  M0 = M1 = 0, M2 = -1/pi, M3 = 0, M4 = 2/pi.
inline MomentSystem tps_intermediate_system(int N = 2) {
    MomentSystem sys;
    sys.bandwidth = N;
    SymReal m2, m4;
    m2.inv_pi = -1;
    m4.inv_pi = 2;
    sys.equations = {{0, SymReal::zero()}, {1, SymReal::zero()}, {2, m2},
                     {3, SymReal::zero()}, {4, m4}};
    return sys;
}

// Generic builder: choose P so that P(xi) * phihat(xi) = 1 + O(xi^{2H} log),
// with phihat = lead/xi^mu + sub/xi^{mu-2} + sum (A_k + B_k log) xi^{2k}.
// Writing P(xi) = sum_j i^j M_j xi^j / j!, the xi^{-mu+2q} coefficients of the
// product give one equation per q; log terms ride along automatically since
// their xi powers only meet moments that earlier equations force to vanish.
// For the multiquadric (mu=4, H=4, N=4) this reproduces
//   M0..M3 = 0, M4 = 2, M5 = 0, M6 = -15 c^2,
//   M8 = 105/2 c^4 (1 + 4 gamma - 4 log2 + 4 log c),
// and for the cubic power (mu=4, no lower terms) M4 = 2, M6 = M8 = 0.
inline MomentSystem improved_finite_system(const RadialKernel& kernel, int N,
                                           Rational c_exact = Rational(1)) {
    if (kernel.kind != KernelKind::GeneralizedMultiquadric &&
        kernel.kind != KernelKind::CubicPower)
        throw UnsupportedKernel("improved_finite_system: finite schemes need mu = 4");
    MomentSystem sys;
    sys.bandwidth = N;
    sys.shape_c = kernel.c;
    const bool gmq = kernel.kind == KernelKind::GeneralizedMultiquadric;
    const Rational c2 = c_exact * c_exact;

    // phihat coefficients: lead = 12 @ xi^-4, sub = -3c^2 @ xi^-2 (gmq only),
    // then (A_k + B_k log) xi^{2k}
    auto Ak = [&](int k) -> SymReal {
        if (!gmq) return SymReal::zero();
        Rational Dk = c2 * c2;
        Rational four_pow = 4;
        Rational fact_k = 1, fact_k2 = 2;
        for (int q = 1; q <= k; ++q) {
            four_pow *= 4;
            fact_k *= q;
            fact_k2 *= (q + 2);
            Dk *= c2;
        }
        Dk /= four_pow * fact_k * fact_k2;
        Rational Hk = 0, Hk2 = Rational(3, 2);
        for (int q = 1; q <= k; ++q) {
            Hk += Rational(1, q);
            Hk2 += Rational(1, q + 2);
        }
        SymReal A;
        A.one = 3 * (Hk + Hk2) * Dk;
        A.euler = -6 * Dk;
        A.ln2 = 6 * Dk;
        A.lnc = -6 * Dk;
        return A;
    };

    // i^j M_j / j! conventions: with all odd moments zero the product is real.
    // Equations for xi^{-4}, xi^{-3}, ..., xi^{4}:
    //   q-th even coefficient: 12 (-1)^{q/2+...}: handled with explicit signs.
    // xi^{-4}: M0 = 0;  xi^{-3}: M1 = 0;  xi^{-2}: -12 M2/2 - 3c^2 M0 = 0
    // xi^{-1}: -12 M3/6 ... = 0;  xi^0: 12 M4/24 + 3 c^2 M2 / 2 + A0 M0 = 1
    // and so on.  Solving that triangular structure explicitly one moment at a
    // time gives the closed forms below.
    std::vector<MomentEquation> eq;
    eq.push_back({0, SymReal::zero()});
    eq.push_back({1, SymReal::zero()});
    eq.push_back({2, SymReal::zero()});
    eq.push_back({3, SymReal::zero()});
    eq.push_back({4, SymReal::of(2)});
    eq.push_back({5, SymReal::zero()});
    // xi^2: -12 M6 / 720 - 3 c^2 M4 / 24 = 0  ->  M6 = -15 c^2 M4 / 2 = -15 c^2
    eq.push_back({6, gmq ? SymReal::of(-15 * c2) : SymReal::zero()});
    eq.push_back({7, SymReal::zero()});
    // xi^4: 12 M8 / 8! + 3 c^2 M6 / 720 + A0 M4 / 24 = 0
    //   ->  M8 = -3360 (c^2 M6 / 240 + A0 / 12) = 210 c^4 - 280 A0
    SymReal m8;
    if (gmq) {
        m8 = SymReal::of(210 * c2 * c2) - (Rational(280) * Ak(0));
    }
    eq.push_back({8, m8});
    sys.equations = std::move(eq);
    return sys;
}

}  // namespace qlag

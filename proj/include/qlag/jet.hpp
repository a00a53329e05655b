#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "qlag/numeric.hpp"

namespace qlag {

// Truncated Taylor polynomial of fixed order: c[k] is the k-th Taylor
// coefficient (derivative / k!).  Order 6 covers the fourth derivatives the
// Strang-Fix checks need plus the germ extraction for far-field asymptotics.
template <int N = 7>
struct Jet {
    std::array<double, N> c{};

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    static Jet variable(double v) {
        Jet j;
        j.c[0] = v;
        if (N > 1) j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }
    double derivative(int d) const {
        double f = 1.0;
        for (int k = 2; k <= d; ++k) f *= k;
        return c[d] * f;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < N; ++i) c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < N; ++i) c[i] -= o.c[i];
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) {
        for (int i = 0; i < N; ++i) a.c[i] = -a.c[i];
        return a;
    }
    friend Jet operator*(double s, Jet a) {
        for (int i = 0; i < N; ++i) a.c[i] *= s;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i)
            for (int j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
};

// Composition with an analytic scalar function given its Taylor coefficients
// at a.c[0]: f(a) where fc[k] = f^{(k)}(a0)/k!.
template <int N>
Jet<N> compose(const std::array<double, N>& fc, const Jet<N>& a) {
    Jet<N> d = a;  // a - a0
    d.c[0] = 0.0;
    Jet<N> r = Jet<N>::constant(fc[N - 1]);
    for (int k = N - 2; k >= 0; --k) {
        r = r * d;
        r.c[0] += fc[k];
    }
    return r;
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
    std::array<double, N> fc;
    double s = std::sin(a.c[0]), c = std::cos(a.c[0]), f = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) f *= k;
        switch (k % 4) {
            case 0: fc[k] = s / f; break;
            case 1: fc[k] = c / f; break;
            case 2: fc[k] = -s / f; break;
            default: fc[k] = -c / f; break;
        }
    }
    return compose(fc, a);
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
    std::array<double, N> fc;
    double s = std::sin(a.c[0]), c = std::cos(a.c[0]), f = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) f *= k;
        switch (k % 4) {
            case 0: fc[k] = c / f; break;
            case 1: fc[k] = -s / f; break;
            case 2: fc[k] = -c / f; break;
            default: fc[k] = s / f; break;
        }
    }
    return compose(fc, a);
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
    std::array<double, N> fc;
    double e = std::exp(a.c[0]), f = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) f *= k;
        fc[k] = e / f;
    }
    return compose(fc, a);
}

// a^p for real p, requires a.c[0] > 0.
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
    std::array<double, N> fc;
    double f = 1.0, coef = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) {
            f *= k;
            coef *= (p - (k - 1));
        }
        fc[k] = coef * std::pow(a.c[0], p - k) / f;
    }
    return compose(fc, a);
}

template <int N>
Jet<N> reciprocal(const Jet<N>& a) {
    return pow(a, -1.0);
}

// sin(u)/u extended through u = 0 (entire function).
template <int N>
Jet<N> sinc(const Jet<N>& a) {
    if (std::abs(a.c[0]) > 0.5) {
        Jet<N> s = sin(a);
        return s * reciprocal(a);
    }
    // series sum (-1)^m u^{2m} / (2m+1)!
    Jet<N> u2 = a * a;
    Jet<N> r = Jet<N>::constant(0.0);
    Jet<N> p = Jet<N>::constant(1.0);
    double denom = 1.0;
    for (int m = 0; 2 * m < N + 4; ++m) {
        if (m > 0) {
            denom *= (2.0 * m) * (2.0 * m + 1.0);
            p = p * u2;
        }
        double sgn = (m % 2) ? -1.0 : 1.0;
        r += (sgn / denom) * p;
    }
    return r;
}

}  // namespace qlag

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlag {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct ToleranceNotMet : Error { using Error::Error; };

// Compensated (Kahan-Neumaier) accumulator. The coefficient sums in this
// project cancel by many orders of magnitude, so plain += is not an option.
class KahanSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on the three-term recurrence.
inline QuadRule gauss_legendre(int n) {
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

// Clenshaw-Curtis rule (n+1 points including endpoints), exact weights.
inline QuadRule clenshaw_curtis(int n) {
    QuadRule r;
    r.nodes.resize(n + 1);
    r.weights.resize(n + 1);
    for (int k = 0; k <= n; ++k) r.nodes[k] = -std::cos(kPi * k / n);
    for (int k = 0; k <= n; ++k) {
        double w = 1.0;
        for (int j = 1; j <= n / 2; ++j) {
            double b = (2 * j == n) ? 1.0 : 2.0;
            w -= b * std::cos(2.0 * j * kPi * k / n) / (4.0 * j * j - 1.0);
        }
        w *= 2.0 / n;
        if (k == 0 || k == n) w *= 0.5;
        r.weights[k] = w;
    }
    return r;
}

inline const QuadRule& cached_rule(int n, bool gauss) {
    static thread_local std::vector<std::pair<int, QuadRule>> gl, cc;
    auto& cache = gauss ? gl : cc;
    for (auto& e : cache)
        if (e.first == n) return e.second;
    cache.emplace_back(n, gauss ? gauss_legendre(n) : clenshaw_curtis(n));
    return cache.back().second;
}

template <class F>
double integrate_panel(F&& f, double a, double b, const QuadRule& rule) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    KahanSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * s.value();
}

// Composite quadrature over fixed panel edges.
template <class F>
double integrate_panels(F&& f, const std::vector<double>& edges, const QuadRule& rule) {
    KahanSum s;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        s.add(integrate_panel(f, edges[i], edges[i + 1], rule));
    return s.value();
}

// Composite Clenshaw-Curtis with doubling refinement.  `splits` are interior
// points where the integrand loses smoothness; they stay panel edges at every
// refinement level.
template <class F>
double cc_integrate(F&& f, double a, double b, double tol,
                    std::vector<double> splits = {}, int max_level = 14) {
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    std::vector<double> base;
    for (double s : splits)
        if (s >= a && s <= b) base.push_back(s);

    double prev = 0.0;
    for (int level = 0; level <= max_level; ++level) {
        int sub = 1 << level;
        std::vector<double> edges;
        for (std::size_t i = 0; i + 1 < base.size(); ++i)
            for (int k = 0; k < sub; ++k)
                edges.push_back(base[i] + (base[i + 1] - base[i]) * k / sub);
        edges.push_back(b);
        double val = integrate_panels(f, edges, cached_rule(16, false));
        if (level > 0 && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val)))
            return val;
        prev = val;
    }
    throw QuadratureFailure("cc_integrate: refinement did not converge");
}

// sum_{j > J} f(j) for smooth decaying f, by Euler-Maclaurin:
//   sum_{j>J} f = int_J^inf f - f(J)/2 - f'(J)/12 + f'''(J)/720 - ...
// The integral is mapped to (0,1] via t = J/u and done with Gauss-Legendre;
// this needs f to decay at least like t^{-2}.
template <class F>
double euler_maclaurin_tail(F&& f, double J, int gl_points = 48) {
    const QuadRule& rule = cached_rule(gl_points, true);
    KahanSum integral;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double u = 0.5 + 0.5 * rule.nodes[i];   // (0,1)
        double w = 0.5 * rule.weights[i];
        integral.add(w * f(J / u) * J / (u * u));
    }
    double h = std::max(1e-3, 1e-6 * J);
    double f0 = f(J);
    double fp = (f(J + h) - f(J - h)) / (2.0 * h);
    double f3 = (f(J + 2 * h) - 2.0 * f(J + h) + 2.0 * f(J - h) - f(J - 2 * h)) / (2.0 * h * h * h);
    return integral.value() - 0.5 * f0 - fp / 12.0 + f3 / 720.0;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("least_squares_line: need at least two points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i] - fit.intercept - fit.slope * x[i];
            ss += r * r;
        }
        fit.slope_stderr = std::sqrt(ss / ((n - 2) * sxx));
    }
    return fit;
}

}  // namespace qlag

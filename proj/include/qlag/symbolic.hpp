#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "qlag/numeric.hpp"

namespace qlag {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return static_cast<double>(q); }

// Parse a decimal string ("0.5", "-3", "1e-2") into an exact rational.
inline Rational rational_from_decimal(const std::string& s) {
    std::string t = s;
    long expo = 0;
    if (auto p = t.find_first_of("eE"); p != std::string::npos) {
        expo = std::stol(t.substr(p + 1));
        t = t.substr(0, p);
    }
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = (t[0] == '-');
        t = t.substr(1);
    }
    std::string digits;
    long frac = 0;
    bool seen_dot = false;
    for (char ch : t) {
        if (ch == '.') {
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits += ch;
            if (seen_dot) ++frac;
        } else {
            throw DomainError("rational_from_decimal: bad literal '" + s + "'");
        }
    }
    if (digits.empty()) throw DomainError("rational_from_decimal: bad literal '" + s + "'");
    boost::multiprecision::cpp_int num(digits);
    boost::multiprecision::cpp_int den = 1;
    long net = expo - frac;
    for (long i = 0; i < std::abs(net); ++i) {
        if (net > 0) num *= 10; else den *= 10;
    }
    Rational q(num, den);
    return neg ? -q : q;
}

// Exact linear combination over the rationals of the constants that appear in
// the kernel transform expansions and moment-system solutions:
//     one + euler*g + ln2*log(2) + lnc*log(c) + pi*P + inv_pi/P
// where g is Euler's constant and P = 3.14159...  Only linear operations are
// ever required (the moment systems are linear), so no product is defined
// between two SymReal values, just scaling by rationals.
struct SymReal {
    Rational one{0}, euler{0}, ln2{0}, lnc{0}, pi{0}, inv_pi{0};

    static SymReal of(const Rational& r) { return SymReal{r, 0, 0, 0, 0, 0}; }
    static SymReal zero() { return SymReal{}; }

    SymReal& operator+=(const SymReal& o) {
        one += o.one; euler += o.euler; ln2 += o.ln2;
        lnc += o.lnc; pi += o.pi; inv_pi += o.inv_pi;
        return *this;
    }
    SymReal& operator-=(const SymReal& o) {
        one -= o.one; euler -= o.euler; ln2 -= o.ln2;
        lnc -= o.lnc; pi -= o.pi; inv_pi -= o.inv_pi;
        return *this;
    }
    friend SymReal operator+(SymReal a, const SymReal& b) { return a += b; }
    friend SymReal operator-(SymReal a, const SymReal& b) { return a -= b; }
    friend SymReal operator*(const Rational& r, SymReal a) {
        a.one *= r; a.euler *= r; a.ln2 *= r; a.lnc *= r; a.pi *= r; a.inv_pi *= r;
        return a;
    }
    friend SymReal operator-(SymReal a) { return Rational(-1) * a; }
    bool is_zero() const {
        return one == 0 && euler == 0 && ln2 == 0 && lnc == 0 && pi == 0 && inv_pi == 0;
    }
    friend bool operator==(const SymReal& a, const SymReal& b) {
        return a.one == b.one && a.euler == b.euler && a.ln2 == b.ln2 &&
               a.lnc == b.lnc && a.pi == b.pi && a.inv_pi == b.inv_pi;
    }

    // Numeric value; `c` is the multiquadric shape parameter behind log(c).
    double value(double c = 1.0) const {
        constexpr double kEuler = 0.57721566490153286060651209008240243;
        constexpr double kLn2 = 0.69314718055994530941723212145817657;
        double v = to_double(one) + to_double(euler) * kEuler + to_double(ln2) * kLn2 +
                   to_double(pi) * kPi + to_double(inv_pi) / kPi;
        if (lnc != 0) v += to_double(lnc) * std::log(c);
        return v;
    }

    std::string str() const {
        std::ostringstream os;
        auto emit = [&](const Rational& q, const char* name) {
            if (q == 0) return;
            if (os.tellp() > 0) os << (q > 0 ? " + " : " - ");
            else if (q < 0) os << "-";
            Rational a = q > 0 ? q : Rational(-q);
            os << a;
            if (*name) os << "*" << name;
        };
        emit(one, "");
        emit(euler, "gamma");
        emit(ln2, "log2");
        emit(lnc, "logc");
        emit(pi, "pi");
        emit(inv_pi, "1/pi");
        if (os.tellp() == 0) os << "0";
        return os.str();
    }
};

}  // namespace qlag

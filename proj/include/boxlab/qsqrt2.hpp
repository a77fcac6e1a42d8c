#pragma once

#include "boxlab/rational.hpp"

#include <iosfwd>
#include <string>

namespace boxlab {

// Element a + b*sqrt(2) of the real quadratic field Q(sqrt(2)).
//
// The representation is unique (sqrt(2) is irrational), so equality is
// component-wise and ordering is decided exactly by sign case analysis on
// (a, b) together with a comparison of a^2 against 2 b^2. The field is
// closed under +, -, *, / which is all the certification paths need; the
// one constant outside the field (the theorem-4 factor 2/sqrt(2-sqrt(2)))
// lives in numerics.hpp as a double.
struct QSqrt2 {
    Rational a;  // rational part
    Rational b;  // coefficient of sqrt(2)

    QSqrt2() : a(0), b(0) {}
    QSqrt2(const Rational& rational_part) : a(rational_part), b(0) {}
    QSqrt2(long v) : a(v), b(0) {}
    QSqrt2(const Rational& rational_part, const Rational& sqrt2_part)
        : a(rational_part), b(sqrt2_part) {}

    bool is_rational() const { return b == 0; }

    // Throws std::domain_error when the value has a sqrt(2) component.
    const Rational& as_rational() const;

    // Exact sign of a + b*sqrt(2): -1, 0 or +1.
    int sign() const;

    QSqrt2 operator-() const { return QSqrt2(-a, -b); }
    QSqrt2& operator+=(const QSqrt2& o) { a += o.a; b += o.b; return *this; }
    QSqrt2& operator-=(const QSqrt2& o) { a -= o.a; b -= o.b; return *this; }
    QSqrt2& operator*=(const QSqrt2& o);
    QSqrt2& operator/=(const QSqrt2& o);

    friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
    friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
    friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
    friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }

    friend bool operator==(const QSqrt2& x, const QSqrt2& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QSqrt2& x, const QSqrt2& y) { return !(x == y); }
    friend bool operator<(const QSqrt2& x, const QSqrt2& y) {
        return (x - y).sign() < 0;
    }
    friend bool operator>(const QSqrt2& x, const QSqrt2& y) { return y < x; }
    friend bool operator<=(const QSqrt2& x, const QSqrt2& y) { return !(y < x); }
    friend bool operator>=(const QSqrt2& x, const QSqrt2& y) { return !(x < y); }
};

QSqrt2 q2_abs(const QSqrt2& x);
QSqrt2 q2_pow(const QSqrt2& base, unsigned long e);
QSqrt2 q2_inv(const QSqrt2& x);

BigFloat to_bigfloat(const QSqrt2& x);
double to_double(const QSqrt2& x);

// Human-readable exact form: "a/b" when rational, "a/b+c/d*sqrt(2)" otherwise.
std::string q2_to_string(const QSqrt2& x);
std::string q2_to_decimal(const QSqrt2& x, int digits = 17);

// w = (2+sqrt(2))/4, the quantum winning probability of the CHSH game.
const QSqrt2& chsh_w();
// 1 - w = (2-sqrt(2))/4.
const QSqrt2& chsh_one_minus_w();

std::ostream& operator<<(std::ostream& os, const QSqrt2& x);

}  // namespace boxlab

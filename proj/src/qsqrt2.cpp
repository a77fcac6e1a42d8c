#include "boxlab/qsqrt2.hpp"

#include <ostream>
#include <sstream>

namespace boxlab {

const Rational& QSqrt2::as_rational() const {
    if (b != 0) throw std::domain_error("QSqrt2 value has an irrational part: " + q2_to_string(*this));
    return a;
}

int QSqrt2::sign() const {
    const int sa = a.sign();
    const int sb = b.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: |a| vs |b|sqrt(2) decided by a^2 vs 2 b^2.
    const Rational a2 = a * a;
    const Rational b2_twice = 2 * b * b;
    if (a2 == b2_twice) return 0;  // impossible for nonzero rationals, kept for safety
    return a2 > b2_twice ? sa : sb;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
    const Rational na = a * o.a + 2 * b * o.b;
    const Rational nb = a * o.b + b * o.a;
    a = na;
    b = nb;
    return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
    return *this *= q2_inv(o);
}

QSqrt2 q2_inv(const QSqrt2& x) {
    // 1/(a+b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2)
    const Rational norm = x.a * x.a - 2 * x.b * x.b;
    if (norm == 0) throw std::domain_error("division by zero in Q(sqrt(2))");
    return QSqrt2(x.a / norm, -x.b / norm);
}

QSqrt2 q2_abs(const QSqrt2& x) { return x.sign() < 0 ? -x : x; }

QSqrt2 q2_pow(const QSqrt2& base, unsigned long e) {
    QSqrt2 acc(Rational(1));
    QSqrt2 b = base;
    while (e > 0) {
        if (e & 1ul) acc *= b;
        b *= b;
        e >>= 1ul;
    }
    return acc;
}

BigFloat to_bigfloat(const QSqrt2& x) {
    static const BigFloat sqrt2 = sqrt(BigFloat(2));
    return to_bigfloat(x.a) + to_bigfloat(x.b) * sqrt2;
}

double to_double(const QSqrt2& x) { return static_cast<double>(to_bigfloat(x)); }

std::string q2_to_string(const QSqrt2& x) {
    if (x.b == 0) return rational_to_string(x.a);
    std::ostringstream os;
    os << rational_to_string(x.a);
    os << (x.b < 0 ? "-" : "+");
    os << rational_to_string(rat_abs(x.b)) << "*sqrt(2)";
    return os.str();
}

std::string q2_to_decimal(const QSqrt2& x, int digits) {
    return bigfloat_to_decimal(to_bigfloat(x), digits);
}

const QSqrt2& chsh_w() {
    static const QSqrt2 w(Rational(1, 2), Rational(1, 4));
    return w;
}

const QSqrt2& chsh_one_minus_w() {
    static const QSqrt2 v(Rational(1, 2), Rational(-1, 4));
    return v;
}

std::ostream& operator<<(std::ostream& os, const QSqrt2& x) {
    return os << q2_to_string(x);
}

}  // namespace boxlab

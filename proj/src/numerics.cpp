#include "boxlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace boxlab {

Config& config() {
    static Config cfg;
    return cfg;
}

Rational rational_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        const Integer num(s.substr(0, slash));
        const Integer den(s.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("denominator must be positive");
        return Rational(num, den);
    } catch (const std::exception& e) {
        throw std::invalid_argument("bad rational literal '" + s + "': " + e.what());
    }
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << "/" << denominator(r);
    return os.str();
}

std::string bigfloat_to_decimal(const BigFloat& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string rational_to_decimal(const Rational& r, int digits) {
    return bigfloat_to_decimal(to_bigfloat(r), digits);
}

FrequencyVector::FrequencyVector(std::vector<long> cnt) : counts(std::move(cnt)) {
    if (counts.empty()) throw std::domain_error("frequency vector needs d >= 1");
    n = 0;
    for (long k : counts) {
        if (k < 0) throw std::domain_error("negative class count");
        n += k;
    }
}

std::vector<Rational> FrequencyVector::as_fractions() const {
    std::vector<Rational> f;
    f.reserve(counts.size());
    for (long k : counts) f.emplace_back(k, n);
    return f;
}

double rel_entropy(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.size() != g.size()) throw std::domain_error("rel_entropy: length mismatch");
    double acc = 0;
    for (std::size_t r = 0; r < f.size(); ++r) {
        if (f[r] == 0) continue;  // 0 ln 0 = 0
        if (g[r] == 0)
            throw SupportViolation("rel_entropy: f has mass outside supp(g) at index " +
                                   std::to_string(r));
        acc += f[r] * std::log(f[r] / g[r]);
    }
    return acc;
}

BigFloat rel_entropy_big(const std::vector<BigFloat>& f, const std::vector<BigFloat>& g) {
    if (f.size() != g.size()) throw std::domain_error("rel_entropy: length mismatch");
    BigFloat acc = 0;
    for (std::size_t r = 0; r < f.size(); ++r) {
        if (f[r] == 0) continue;
        if (g[r] == 0)
            throw SupportViolation("rel_entropy: f has mass outside supp(g) at index " +
                                   std::to_string(r));
        acc += f[r] * log(f[r] / g[r]);
    }
    return acc;
}

Rational exact_exp_neg_nD(const FrequencyVector& counts, const std::vector<Rational>& g) {
    if (counts.counts.size() != g.size())
        throw std::domain_error("exact_exp_neg_nD: length mismatch");
    Rational acc(1);
    for (std::size_t r = 0; r < g.size(); ++r) {
        const long k = counts.counts[r];
        if (k == 0) continue;
        if (g[r] == 0)
            throw SupportViolation("exact_exp_neg_nD: count outside supp(g) at index " +
                                   std::to_string(r));
        acc *= rat_pow(g[r] * counts.n / k, static_cast<unsigned long>(k));
    }
    return acc;
}

QSqrt2 exact_exp_neg_nD_q2(const FrequencyVector& counts, const std::vector<QSqrt2>& g) {
    if (counts.counts.size() != g.size())
        throw std::domain_error("exact_exp_neg_nD: length mismatch");
    QSqrt2 acc(Rational(1));
    for (std::size_t r = 0; r < g.size(); ++r) {
        const long k = counts.counts[r];
        if (k == 0) continue;
        if (g[r].sign() == 0)
            throw SupportViolation("exact_exp_neg_nD: count outside supp(g) at index " +
                                   std::to_string(r));
        acc *= q2_pow(g[r] * QSqrt2(Rational(counts.n, k)), static_cast<unsigned long>(k));
    }
    return acc;
}

Integer binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("binomial: need 0 <= k <= n");
    k = std::min(k, n - k);
    Integer acc = 1;
    for (long i = 0; i < k; ++i) {
        acc *= (n - i);
        acc /= (i + 1);  // exact: prefix products are binomials
    }
    return acc;
}

Integer factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative");
    Integer acc = 1;
    for (long i = 2; i <= n; ++i) acc *= i;
    return acc;
}

Integer multinomial(long n, const std::vector<long>& counts) {
    long total = 0;
    for (long k : counts) {
        if (k < 0) throw std::domain_error("multinomial: negative count");
        total += k;
    }
    if (total != n) throw std::domain_error("multinomial: counts do not sum to n");
    Integer acc = 1;
    long used = 0;
    for (long k : counts) {
        acc *= binomial(used + k, k);
        used += k;
    }
    return acc;
}

MultinomialSandwich multinomial_sandwich(long n, const FrequencyVector& counts) {
    if (counts.n != n) throw std::domain_error("multinomial_sandwich: counts do not sum to n");
    MultinomialSandwich out;
    Rational prod(1);
    for (long k : counts.counts) {
        if (k == 0) continue;  // factor 1
        prod *= rat_pow(Rational(n, k), static_cast<unsigned long>(k));
    }
    const long d = counts.d();
    out.upper = prod;
    out.lower = prod / rat_pow(Rational(n + 1), static_cast<unsigned long>(d - 1));
    out.value = multinomial(n, counts.counts);
    const Rational v(out.value);
    if (!(out.lower <= v && v <= out.upper))
        throw std::logic_error("multinomial sandwich violated");  // cannot happen
    return out;
}

QSqrt2 poly_integral_q2(long n, long k, const QSqrt2& lo, const QSqrt2& hi) {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("poly_integral: need 0 <= k <= n");
    // F(t) = sum_j binom(n-k, j) (-1)^j t^{k+j+1} / (k+j+1)
    auto eval = [&](const QSqrt2& t) {
        QSqrt2 acc;
        for (long j = 0; j <= n - k; ++j) {
            QSqrt2 term = q2_pow(t, static_cast<unsigned long>(k + j + 1));
            term *= QSqrt2(Rational(binomial(n - k, j), Integer(k + j + 1)));
            if (j % 2 == 1) term = -term;
            acc += term;
        }
        return acc;
    };
    return eval(hi) - eval(lo);
}

Rational beta_identity(long n, long k) {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("beta_identity: need 0 <= k <= n");
    const Rational closed = Rational(1) / (Rational(n + 1) * Rational(binomial(n, k)));
    const QSqrt2 expanded = poly_integral_q2(n, k, QSqrt2(Rational(0)), QSqrt2(Rational(1)));
    if (expanded != QSqrt2(closed))
        throw std::logic_error("beta identity mismatch between closed form and antiderivative");
    return closed;
}

QSqrt2 incomplete_beta_qsqrt2(long n, long k) {
    return poly_integral_q2(n, k, chsh_one_minus_w(), chsh_w());
}

IntegralSandwichReport integral_sandwich_check(const std::function<double(double)>& f,
                                               double a, double b, long n,
                                               int quadrature_points) {
    if (!(a < b)) throw std::domain_error("integral_sandwich_check: need a < b");
    if (n < 1) throw std::domain_error("integral_sandwich_check: need n >= 1");
    IntegralSandwichReport rep;
    const double tol = config().float_tol;

    // Locate the max on a 1024-point grid, then refine by golden section.
    const int grid = 1024;
    double best_x = a, best_f = f(a);
    for (int i = 1; i <= grid; ++i) {
        const double x = a + (b - a) * i / grid;
        const double v = f(x);
        if (v > best_f) { best_f = v; best_x = x; }
    }
    {
        const double h = (b - a) / grid;
        double lo = std::max(a, best_x - h), hi = std::min(b, best_x + h);
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            if (f(c) < f(d)) { lo = c; c = d; d = lo + invphi * (hi - lo); }
            else { hi = d; d = c; c = hi - invphi * (hi - lo); }
        }
        const double xm = (lo + hi) / 2;
        if (f(xm) > best_f) { best_f = f(xm); best_x = xm; }
    }
    rep.x_star = best_x;
    rep.f_star = best_f;

    // Composite Simpson quadrature of f^n.
    int m = quadrature_points;
    if (m % 2 == 1) ++m;
    const double h = (b - a) / m;
    double acc = std::pow(f(a), double(n)) + std::pow(f(b), double(n));
    for (int i = 1; i < m; ++i)
        acc += std::pow(f(a + i * h), double(n)) * (i % 2 == 1 ? 4.0 : 2.0);
    rep.integral = acc * h / 3.0;

    // Sampled concavity check (warning flag only; proofs assume concavity).
    for (int i = 1; i < 64; ++i) {
        const double x = a + (b - a) * i / 64.0;
        const double step = (b - a) / 64.0;
        const double second = f(x - step) - 2 * f(x) + f(x + step);
        if (second > tol * std::max(1.0, std::fabs(f(x)))) {
            rep.concave_ok = false;
            break;
        }
    }

    rep.upper = (b - a) * std::pow(best_f, double(n));
    rep.lower = rep.upper / double(n + 1);
    rep.pass = rep.lower - tol <= rep.integral && rep.integral <= rep.upper + tol;
    return rep;
}

PinskerReport pinsker_pair_check(double p, double q) {
    if (!(p > 0 && p < 1 && q > 0 && q < 1))
        throw std::domain_error("pinsker_pair_check: need p, q in (0,1)");
    PinskerReport rep;
    rep.l1 = 2 * std::fabs(p - q);
    rep.rel_ent = rel_entropy({p, 1 - p}, {q, 1 - q});
    rep.pinsker_rhs = std::sqrt(2 * rep.rel_ent);
    rep.reverse_rhs = rep.l1 * rep.l1 / std::min(q, 1 - q);
    const double tol = config().float_tol;
    rep.pass = rep.l1 <= rep.pinsker_rhs + tol && rep.rel_ent <= rep.reverse_rhs + tol;
    return rep;
}

}  // namespace boxlab

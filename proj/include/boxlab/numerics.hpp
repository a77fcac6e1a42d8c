#pragma once

#include "boxlab/qsqrt2.hpp"
#include "boxlab/rational.hpp"

#include <functional>
#include <vector>

namespace boxlab {

// Global knobs. float_tol applies wherever a comparison cannot be made in
// exact arithmetic; everything rational or in Q(sqrt(2)) is compared exactly.
struct Config {
    double float_tol = 1e-9;
    std::size_t dense_entry_cap = std::size_t(1) << 24;
    std::size_t pattern_cap = std::size_t(1) << 20;
};
Config& config();

struct SupportViolation : std::domain_error {
    explicit SupportViolation(const std::string& what) : std::domain_error(what) {}
};

// Class counts (k_1,...,k_d) of n rounds; sum(counts) == n.
struct FrequencyVector {
    std::vector<long> counts;
    long n = 0;

    FrequencyVector() = default;
    FrequencyVector(std::vector<long> cnt);
    long d() const { return static_cast<long>(counts.size()); }
    std::vector<Rational> as_fractions() const;  // (k_r / n)_r
};

// --- entropy -----------------------------------------------------------

// sum_r f_r ln(f_r/g_r), convention 0 ln(0/g) = 0. Throws SupportViolation
// when f_r > 0 with g_r = 0.
double rel_entropy(const std::vector<double>& f, const std::vector<double>& g);
BigFloat rel_entropy_big(const std::vector<BigFloat>& f, const std::vector<BigFloat>& g);

// prod_r (n g_r / k_r)^{k_r}  ==  exp(-n D(counts/n || g)), exactly.
Rational exact_exp_neg_nD(const FrequencyVector& counts, const std::vector<Rational>& g);
QSqrt2 exact_exp_neg_nD_q2(const FrequencyVector& counts, const std::vector<QSqrt2>& g);

// --- combinatorics ------------------------------------------------------

Integer binomial(long n, long k);
Integer multinomial(long n, const std::vector<long>& counts);
Integer factorial(long n);

struct MultinomialSandwich {
    Rational lower;   // (n+1)^{-(d-1)} prod (n/k_r)^{k_r}
    Integer value;    // the multinomial coefficient
    Rational upper;   // prod (n/k_r)^{k_r}
};
// Postcondition (asserted): lower <= value <= upper.
MultinomialSandwich multinomial_sandwich(long n, const FrequencyVector& counts);

// int_0^1 t^k (1-t)^{n-k} dt, computed as 1/((n+1) binom(n,k)) and
// independently by expanding the polynomial antiderivative; both routes
// must agree exactly.
Rational beta_identity(long n, long k);

// Antiderivative of t^k (1-t)^{n-k} evaluated between two field points.
QSqrt2 poly_integral_q2(long n, long k, const QSqrt2& lo, const QSqrt2& hi);

// int_{1-w}^{w} p^k (1-p)^{n-k} dp in Q(sqrt(2)).
QSqrt2 incomplete_beta_qsqrt2(long n, long k);

// --- numeric sandwich / Pinsker checks ----------------------------------

struct IntegralSandwichReport {
    double integral = 0;    // quadrature estimate of int f^n
    double lower = 0;       // (b-a) f(x*)^n / (n+1)
    double upper = 0;       // (b-a) f(x*)^n
    double x_star = 0;
    double f_star = 0;
    bool concave_ok = true; // sampled second differences non-positive (up to tol)
    bool pass = false;
};
IntegralSandwichReport integral_sandwich_check(const std::function<double(double)>& f,
                                               double a, double b, long n,
                                               int quadrature_points = 4096);

struct PinskerReport {
    double l1 = 0;             // |Ber(p)-Ber(q)|_1 = 2|p-q|
    double rel_ent = 0;        // D(Ber(p)||Ber(q))
    double pinsker_rhs = 0;    // sqrt(2 D)
    double reverse_rhs = 0;    // l1^2 / min(q, 1-q), upper bound for D
    bool pass = false;
};
PinskerReport pinsker_pair_check(double p, double q);

}  // namespace boxlab

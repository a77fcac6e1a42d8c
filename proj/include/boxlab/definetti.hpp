#pragma once

#include "boxlab/boxes.hpp"
#include "boxlab/numerics.hpp"
#include "boxlab/threshold.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

// The n-round CHSH-symmetric de Finetti box (1/(2w-1)) int_{1-w}^{w}
// Q(p)^{(x) n} dp in compressed form; entries are exact in Q(sqrt(2)).
SymBox tau_chsh(int n);

// sup_{p in [1-w,w]} (p/2)^{k} ((1-p)/2)^{n-k} per-entry score; the sup sits
// at clamp(k/n, 1-w, w).
QSqrt2 score_sup(long n, long k);

enum class Verdict { Pass, BoundViolation, PreconditionSymmetry, PreconditionThreshold };

struct Certificate {
    std::string bound_name;
    QSqrt2 prefactor;
    QSqrt2 worst_ratio;  // max_k p_k / (prefactor tau_k)
    int witness_k = -1;
    Verdict verdict = Verdict::BoundViolation;
    std::string detail;
    std::vector<ThresholdRow> rows;  // per-k (p_k, prefactor tau_k, slack)
    bool pass() const { return verdict == Verdict::Pass; }
};

// p_k <= (n+1)^2 tau_k entrywise with exact field comparisons; the
// threshold premise is checked first and reported as a precondition
// failure, never silently.
Certificate certify_first_definetti(const SymBox& P);
Certificate certify_first_definetti(const Box& P);

// Mixture sum_N p_N Q(clamp(N/n, 1-w, w))^{(x) k} in compressed form.
SymBox tau_second(const SymBox& P, int k);

struct Thm4Report {
    QSqrt2 lhs_exact;   // |P^k - tau_second|, exact
    double lhs = 0;
    double rhs = 0;     // (C sqrt(ln(n/k)) + 4) sqrt(k/n) + 4 k/n
    bool pass = false;
};
Thm4Report certify_second_definetti(const SymBox& P, int k);

// Theorem-4 right hand side and the constant C = 2/sqrt(2-sqrt(2)).
double thm4_rhs(long n, long k);
double thm4_constant();

struct DiaconisFreedmanReport {
    QSqrt2 lhs;       // |hypergeometric mixture - binomial mixture|_1, exact
    Rational bound;   // 4k/n
    bool pass = false;
};
DiaconisFreedmanReport diaconis_freedman_check(const SymBox& P, int k);

struct BinomL1Report {
    Rational lhs;         // |Binom(k,p) - Binom(k,q)|_1, exact
    Rational bound_sq;    // 4 k (p-q)^2 / min(q, 1-q)  (square of the bound)
    double bound = 0;
    bool pass = false;    // decided exactly via lhs^2 <= bound_sq
};
BinomL1Report binom_l1_bound_check(long k, const Rational& p, const Rational& q);

// --- general symmetries (appendix machinery) ----------------------------

// Convex family of single-round single-interface boxes, given by a polytope
// C in parameter space and an affine map phi -> Q_phi.
struct ConvexFamily {
    int single_in = 1;
    int single_out = 1;
    std::vector<std::vector<QSqrt2>> param_vertices;  // vertices of C
    std::vector<QSqrt2> base;                         // entries of Q at phi = 0
    std::vector<std::vector<QSqrt2>> dirs;            // one direction per dimension

    int dprime() const { return static_cast<int>(dirs.size()); }
    std::vector<QSqrt2> box_entries_at(const std::vector<QSqrt2>& phi) const;
    Box box_at(int n_rounds, const std::vector<QSqrt2>& phi) const;  // validated, 1 round iid-able
};

// The CHSH family on the lumped alphabet: phi = p over [1-w, w].
ConvexFamily chsh_family();

struct GeneralTauDiag {
    int grid = 0;
    std::size_t grid_points = 0;
    double lemma13_min_ratio = 0;  // min over entries of tau binom(n+d',d') / sup_phi Q^n
    double grid_error = 0;         // max entry movement against the half-resolution grid
};

// Uniform-grid mixture over C of Q_phi^{(x) n} as a dense box.
Box general_tau(const ConvexFamily& family, int n, int grid, GeneralTauDiag* diag = nullptr);

struct FreqRow {
    FrequencyVector f;
    QSqrt2 lhs;       // Pr_P[freq = f]
    double rhs;       // C binom(n+d',d') (n+1)^{d-1} Pr_tau[freq = f]
    double slack;
};

struct GeneralCertificate {
    Verdict verdict = Verdict::BoundViolation;
    std::string detail;
    double prefactor = 0;          // C binom(n+d',d') (n+1)^{d-1}
    std::vector<FreqRow> part1;    // frequency-level rows
    double part1_worst_ratio = 0;
    double part2_worst_ratio = 0;  // entrywise, only for w-symmetric P
    GeneralTauDiag tau_diag;
    bool pass() const { return verdict == Verdict::Pass; }
};

// Theorem-8 style certification: threshold premise via
// general_threshold_bound, part-1 frequency inequality (P need not be
// symmetric), part-2 entrywise inequality (requires w-symmetry of P and of
// the family). tau is grid-approximated; comparisons on the tau side are
// floating point with the configured tolerance, plus the reported grid
// error bar.
GeneralCertificate certify_general_definetti(const Box& P, const Predicate& pred,
                                             const ConvexFamily& family,
                                             const std::vector<QSqrt2>& mu_single,
                                             double C, int grid);

// Image of the family under Q -> (sum_{w(a,x)=r} Q(a|x) mu(x))_r, as the
// vertex list of the expected-frequency polytope.
std::vector<std::vector<QSqrt2>> expected_freq_set(const ConvexFamily& family,
                                                   const std::vector<QSqrt2>& mu_single,
                                                   const Predicate& pred);

// Greedy SymBox saturating every upper-tail threshold bound exactly;
// adversarial input for the first de Finetti certificate.
SymBox adversarial_tail_saturating(int n);

}  // namespace boxlab

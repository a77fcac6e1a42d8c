#pragma once

#include "boxlab/boxes.hpp"
#include "boxlab/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

enum class TailKind { UpperTail, LowerTail, Middle };

struct ThresholdRow {
    int k = 0;
    TailKind kind = TailKind::Middle;
    QSqrt2 observed;  // tail mass (or p_k for middle rows)
    QSqrt2 bound;
    QSqrt2 slack;     // bound - observed
};

struct ThresholdReport {
    std::vector<ThresholdRow> rows;
    bool pass = false;
    int worst_k = -1;
    QSqrt2 worst_slack;
};

// e^{-n D(k/n, 1-k/n || w, 1-w)} evaluated exactly in Q(sqrt(2)):
// (w n / k)^k ((1-w) n / (n-k))^{n-k}, zero-count factors equal to 1.
// Requires k > w n.
QSqrt2 chsh_tail_bound_exact(long n, long k);
double chsh_tail_bound(long n, long k);

// e^{-n D(k/n,... || g, 1-g)} against an arbitrary reference point in the
// field; shared by the tail bound and the clamped per-k bound.
QSqrt2 chsh_exp_neg_nD(long n, long k, const QSqrt2& g);

// Exact per-k bound sup_{p in [1-w,w]} e^{-n D(k/n || p)}; the supremum is
// attained at clamp(k/n, 1-w, w).
QSqrt2 chsh_clamped_bound(long n, long k);
QSqrt2 chsh_clamp(const Rational& alpha);  // clamp into [1-w, w]

// Checks every upper tail (k > wn), the mirrored lower tails (k < (1-w)n)
// and the trivial middle rows against the exact bounds. A fail verdict
// means the box lies outside the set the bounds govern; it is a result,
// not an error.
ThresholdReport check_chsh_threshold(const SymBox& sb);

// exp(-n inf_{f' in Fmu} D(f || f')) where Fmu is the convex hull of the
// given vertex list inside the probability simplex. Membership and support
// are decided exactly; the interior minimization runs in floating point at
// tolerance 1e-10 (segment families with d = 2 use the exact clamp).
double general_threshold_bound(const FrequencyVector& counts,
                               const std::vector<std::vector<QSqrt2>>& fmu_vertices);

// Exact value of the above for a d=2 segment family {(p,1-p) : p in [lo,hi]}.
QSqrt2 segment_threshold_bound(const FrequencyVector& counts, const QSqrt2& lo,
                               const QSqrt2& hi);

// Theorem-8 part 3 direction: a box satisfying p_k <= Ctilde tau_k entrywise
// also satisfies the frequency-level bound p_k <= Ctilde * clamped bound.
// Throws PreconditionError when the entrywise premise fails.
ThresholdReport definetti_implies_threshold(const SymBox& P, const SymBox& tau,
                                            const QSqrt2& Ctilde);

}  // namespace boxlab

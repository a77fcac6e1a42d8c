#pragma once

#include "boxlab/boxes.hpp"
#include "boxlab/linprog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

// Channel on n-round boxes: an input distribution on the system's n-round
// joint inputs and a result kernel P(r | a, x). Kernel layout:
// kernel[(a_idx * in_count + x_idx) * R + r].
struct Channel {
    int n = 1;
    std::size_t in_count = 1;   // system n-round joint input count
    std::size_t out_count = 1;  // system n-round joint output count
    int R = 2;
    std::vector<QSqrt2> px;      // size in_count
    std::vector<QSqrt2> kernel;  // size out_count * in_count * R

    const QSqrt2& k(std::size_t a, std::size_t x, int r) const {
        return kernel[(a * in_count + x) * R + r];
    }
    void validate() const;
};

// Channel output distribution on R for a box without an Eve interface.
std::vector<QSqrt2> apply(const Channel& ch, const Box& box);

struct DistinguishReport {
    QSqrt2 value;
    std::vector<int> best_z;        // optimizing Eve input per result r
    std::vector<int> sign_pattern;  // sign of each (e, r) term at the optimum, flattened e*R+r
};

// Exact evaluation of sum_r max_z sum_e | sum_{a,x} P(a e | x z) (...) |.
// The box's last interface is Eve's; boxes without one are treated as
// having a trivial Eve.
DistinguishReport distinguishability(const Channel& E, const Channel& F, const Box& box);

struct DiamondReport {
    QSqrt2 value;
    std::vector<QSqrt2> witness;    // optimizing box entries (polytope layout)
    std::vector<int> best_z;
    std::vector<int> sign_pattern;
    long patterns_solved = 0;
};

// Diamond distance over a polytope of (extended) boxes: one exact LP per
// (z per r, sign per (e,r)) assignment. `eve_out`/`eve_in` describe the
// Eve interface of the polytope's boxes (1/1 when absent). Refuses when
// the assignment count exceeds the configured pattern cap.
DiamondReport diamond_over_polytope(const Channel& E, const Channel& F,
                                    const Polytope& poly, int n,
                                    const Alphabets& box_alph);

// Theorem-5 extension: tau_ABE' with one extra Eve outcome e*; entries
// P(abe|xyz)/(n+1)^2 for e != e* and (1-(n+1)^{-2}) R(ab|xy) at e*, where
// (n+1)^2 tau = P_AB + ((n+1)^2 - 1) R. Preconditions (CHSH-symmetric
// AB-marginal with non-negative R) are checked exactly.
Box build_thm5_extension(const Box& P_abe, const Box& tau_ab, int n);

struct CounterexampleChannels {
    Channel E, F;                     // act on single-interface n-round boxes
    std::vector<Rational> delta;      // over (w, t), flattened w * (m+1) + t
    int n = 0, m = 0;
    int subspace_dim = 0;             // (w,t)-distributions proportional to binom(m,t)
    int complement_dim = 0;
    long t_of(std::size_t x_idx) const;   // sum of the first m input bits
    long w_of(std::size_t a_idx) const;   // sum of the last n-m output bits
    const Rational& d(long w, long t) const { return delta[w * (m + 1) + t]; }
};

// Lemma-6/7 construction: statistics t = sum_{i<=m} x_i, w = sum_{i>m} a_i,
// Delta orthogonal to every (w,t)-distribution with P(w,t)/binom(m,t)
// constant in t, channels P(r=0|w,t) = (1 +/- Delta_{wt})/2 under uniform
// inputs. Requires n > 1 and n/2 < m <= n-1.
CounterexampleChannels counterexample_channels(int n, int m);

// Deterministic distinguisher box: a = 1...1 iff sum_i x_i > n/2 else 0...0.
Box lemma7_distinguisher(int n);

struct CounterexampleReport {
    QSqrt2 roundns_value;   // diamond over the round-non-signaling polytope
    Rational q_value;       // distinguishability with the Lemma-7 box
    Rational gated_value;   // Pr[e*] * q_value, the e*-gated strategy
    Rational twirled_value; // full distinguishability of the transcript extension
    Rational pr_estar;      // 8^{-n} / n!
    std::vector<Rational> delta;
    bool pass = false;      // roundns == 0, q_value > 0, twirled >= gated > 0
};

CounterexampleReport verify_counterexample(int n, int m);

}  // namespace boxlab

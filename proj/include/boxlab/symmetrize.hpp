#pragma once

#include "boxlab/boxes.hpp"

#include <cstdint>
#include <optional>

namespace boxlab {

// One element of the per-round CHSH relabeling group, acting on a single
// round (a, b, x, y). The three generator bits:
//   r1 - joint output flip        a -> a^1,      b -> b^1
//   r2 - Alice input relabel      x -> x^1,      b -> b^(y)
//   r3 - Bob input relabel        y -> y^1,      a -> a^(x)
// applied in the order r2, r3, r1; every element is a bijection that
// preserves the win predicate a^b = xy.
struct RoundTwirl {
    uint8_t r1 = 0, r2 = 0, r3 = 0;

    // forward map (box tuple -> user tuple)
    void apply(int& a, int& b, int& x, int& y) const {
        if (r2) { x ^= 1; b ^= y; }
        if (r3) { y ^= 1; a ^= x; }
        if (r1) { a ^= 1; b ^= 1; }
    }
    // inverse map (user tuple -> box tuple)
    void invert(int& a, int& b, int& x, int& y) const {
        if (r1) { a ^= 1; b ^= 1; }
        if (r3) { a ^= x; y ^= 1; }
        if (r2) { b ^= y; x ^= 1; }
    }
    static RoundTwirl from_code(int g) {
        return RoundTwirl{static_cast<uint8_t>(g & 1), static_cast<uint8_t>((g >> 1) & 1),
                          static_cast<uint8_t>((g >> 2) & 1)};
    }
};

// Full twirl transcript: a round permutation plus one RoundTwirl per round.
struct TwirlElement {
    std::vector<int> perm;        // user round i is box round perm[i]
    std::vector<RoundTwirl> g;    // per user round
};

// Box produced by applying one fixed transcript to a 2-interface binary box.
Box apply_twirl(const Box& box, const TwirlElement& elem);

struct PermutationTwirlResult {
    Box box;
    bool exact = true;  // false when the n > 6 sampled variant was used
};

// Uniform average over all n! round permutations for n <= 6; a seeded
// sample of 10 n^2 permutations beyond that (flagged approximate).
PermutationTwirlResult permutation_twirl(const Box& box, uint64_t seed = 0);

// Uniform average over the 8^n per-round relabelings, computed one round at
// a time. Any CHSH-symmetric box is a fixed point; permutation-invariant
// inputs come out CHSH symmetric.
Box chsh_depolarize(const Box& box);

// Extension handing the per-round group transcript to a third interface
// (Eve output alphabet 8 per round, trivial input). The AB-marginal equals
// chsh_depolarize(box); conditioned on the identity transcript e* (index 0)
// the box is unchanged, with Pr[e*] = 8^{-n}.
Box depolarize_with_eve(const Box& box);

}  // namespace boxlab

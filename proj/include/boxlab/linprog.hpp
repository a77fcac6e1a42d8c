#pragma once

#include "boxlab/boxes.hpp"
#include "boxlab/qsqrt2.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

enum class Sense { EQ, LE, GE };

struct LinRow {
    std::vector<std::pair<int, QSqrt2>> terms;  // sparse (variable, coefficient)
    QSqrt2 rhs;
    Sense sense = Sense::EQ;
    std::string label;
};

// Linear system over box coordinates; all variables are >= 0.
struct Polytope {
    int nvars = 0;
    std::vector<LinRow> rows;

    // Exact constraint check; returns the label/index of the first violated
    // row, or nullopt when the point is feasible.
    std::optional<std::string> violated_row(const std::vector<QSqrt2>& point) const;
    bool contains(const std::vector<QSqrt2>& point) const {
        return !violated_row(point).has_value();
    }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    QSqrt2 value;
    std::vector<QSqrt2> witness;  // original variables only
    long iterations = 0;
};

// Exact simplex over Q(sqrt(2)) (two-phase, Bland's rule). The witness of
// an Optimal solution satisfies every constraint exactly; callers can
// re-verify with Polytope::violated_row.
LPSolution lp_solve(const Polytope& poly, const std::vector<QSqrt2>& objective,
                    bool maximize);

// Variables of these polytopes are dense box entries in the Box layout
// (entry index = in_idx * out_count + out_idx).

// Normalization + interface-level non-signaling marginal equalities.
Polytope ns_polytope(int n, const Alphabets& alph);

// Additionally non-signaling between the individual rounds of each
// interface (per-round marginals independent of that round's input).
Polytope round_ns_polytope(int n, const Alphabets& alph);

// Extensions tau_{ABE|XYZ} of a fixed 2-interface marginal tau_AB:
// non-negativity, tripartite non-signaling and sum_e tau(abe|xyz) =
// tau_ab(ab|xy) for every z.
Polytope extension_polytope(const Box& tau_ab, int eve_out, int eve_in);

}  // namespace boxlab

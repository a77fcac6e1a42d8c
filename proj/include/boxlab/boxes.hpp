#pragma once

#include "boxlab/numerics.hpp"
#include "boxlab/qsqrt2.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace boxlab {

struct BoxValidationError : std::runtime_error {
    explicit BoxValidationError(const std::string& what) : std::runtime_error(what) {}
};
struct SizeCapError : std::runtime_error {
    explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};
struct SymmetryError : std::runtime_error {
    explicit SymmetryError(const std::string& what) : std::runtime_error(what) {}
};

// Per-round alphabet sizes of one interface. A `global` interface gives a
// single input and output regardless of the round count (used for Eve,
// whose alphabet has no round structure).
struct InterfaceSpec {
    int in = 1;
    int out = 1;
    bool global = false;
    bool operator==(const InterfaceSpec&) const = default;
};

struct Alphabets {
    std::vector<InterfaceSpec> ifaces;

    int count() const { return static_cast<int>(ifaces.size()); }
    int digits_of(int iface, int n) const { return ifaces[iface].global ? 1 : n; }
    int digit_lo(int iface, int n) const {
        int lo = 0;
        for (int j = 0; j < iface; ++j) lo += digits_of(j, n);
        return lo;
    }
    int digit_hi(int iface, int n) const { return digit_lo(iface, n) + digits_of(iface, n); }
    static Alphabets chsh_pair() { return Alphabets{{{2, 2}, {2, 2}}}; }
    static Alphabets single(int in, int out) { return Alphabets{{{in, out}}}; }
    bool operator==(const Alphabets&) const = default;
};

// Mixed-radix index helper over digit sequence
// [iface0 round1..roundN, iface1 round1..roundN, ...], last digit fastest.
struct TupleIndexer {
    std::vector<int> radix;
    std::vector<std::size_t> stride;
    std::size_t total = 1;

    TupleIndexer() = default;
    TupleIndexer(const Alphabets& alph, int n, bool outputs);
    std::size_t index(const std::vector<int>& digits) const;
    std::vector<int> digits(std::size_t idx) const;
};

// Dense n-round conditional distribution. Entry layout:
//   entries[in_idx * out_count + out_idx]   (outputs vary fastest)
// with in/out indices given by TupleIndexer over the documented digit order.
struct Box {
    int n = 1;
    Alphabets alph;
    std::vector<QSqrt2> e;

    TupleIndexer outs() const { return TupleIndexer(alph, n, true); }
    TupleIndexer ins() const { return TupleIndexer(alph, n, false); }
    std::size_t out_count() const { return outs().total; }
    std::size_t in_count() const { return ins().total; }

    const QSqrt2& at(std::size_t in_idx, std::size_t out_idx) const {
        return e[in_idx * out_count_cache() + out_idx];
    }
    QSqrt2& at(std::size_t in_idx, std::size_t out_idx) {
        return e[in_idx * out_count_cache() + out_idx];
    }
    std::size_t out_count_cache() const {
        if (!out_count_) out_count_ = out_count();
        return *out_count_;
    }

  private:
    mutable std::optional<std::size_t> out_count_;
};

// Validates shape, non-negativity and per-input normalization.
Box box_new(int n, const Alphabets& alph, std::vector<QSqrt2> entries);

// Throws SizeCapError when a dense table would exceed the configured cap.
void check_dense_cap(int n, const Alphabets& alph);

// CHSH-symmetric box in compressed form: p[k] = probability of winning
// exactly k of the n CHSH games. Entries live in Q(sqrt(2)).
struct SymBox {
    int n = 0;
    std::vector<QSqrt2> p;  // size n+1
};

SymBox symbox_new(int n, std::vector<QSqrt2> p);

// Appendix-style predicate on single-round (output, input) symbols of a
// single-interface box; classes are 1..d, stored 0-based.
struct Predicate {
    int d = 1;
    int single_out = 1;
    int single_in = 1;
    std::vector<int> table;  // table[a * single_in + x] in {0,...,d-1}

    int cls(int a, int x) const { return table[static_cast<std::size_t>(a) * single_in + x]; }
};

Predicate chsh_predicate();  // on the lumped {0,1}^2 x {0,1}^2 alphabet, d = 2

// iid product distribution on n-round joint inputs.
struct InputDist {
    int n = 1;
    std::vector<QSqrt2> mu;  // over single-round joint inputs, flattened like in-digits

    static InputDist uniform(int n, int joint_in);
};

struct NsViolation {
    int iface = -1;
    std::size_t in_a = 0, in_b = 0;   // conflicting input tuples (full indices)
    std::size_t fixed_out = 0;        // witness assignment of the other outputs
    std::string describe(const Box& box) const;
};

// Def-1 style non-signaling across interfaces (exact). Returns the first
// violated marginal equality, if any.
std::optional<NsViolation> nonsignaling_violation(const Box& box);
bool is_nonsignaling(const Box& box);

// 2-interface binary boxes only.
bool is_chsh_symmetric(const Box& box);
SymBox sym_from_dense(const Box& box);   // throws SymmetryError naming a violating pair
Box dense_from_sym(const SymBox& sb);

// Single-round box winning CHSH with probability p: p/2 on the 8 winning
// (a,b,x,y) cells, (1-p)/2 on the rest.
Box q_box(const QSqrt2& p);
// Same distribution with Alice+Bob lumped into one interface (|A|=|X|=4).
Box q_box_lumped(const QSqrt2& p);

Box iid_power(const Box& single, int n);
Box mix(const std::vector<Box>& boxes, const std::vector<QSqrt2>& weights);

// Merge a 2-interface box into the equivalent single-interface box
// (per-round joint symbols, first interface major).
Box lump_interfaces(const Box& box);

int chsh_wins(std::size_t out_idx, std::size_t in_idx, int n);  // on 2-iface binary boxes

FrequencyVector freq_w(const std::vector<int>& a, const std::vector<int>& x,
                       const Predicate& pred);
bool is_w_symmetric(const Box& box, const Predicate& pred);

// Distribution of the number of won CHSH games under inputs mu^{(x) n}.
std::vector<QSqrt2> win_distribution(const Box& box, const InputDist& mu);

// Compressed marginal of the first k rounds (hypergeometric mixing).
SymBox marginal_first_k(const SymBox& sb, int k);

// max_x sum_out |P - Q| resp. sum_k |p_k - q_k|; both exact.
QSqrt2 box_distance(const Box& P, const Box& Q);
QSqrt2 symbox_distance(const SymBox& P, const SymBox& Q);

// Marginal over the outputs of one interface (that interface is removed);
// requires the marginal to be independent of the removed interface's input,
// which is checked exactly (the removed input is fixed to digit zero).
Box marginal_without_interface(const Box& box, int iface);

}  // namespace boxlab

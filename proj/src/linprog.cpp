#include "boxlab/linprog.hpp"

#include <algorithm>
#include <sstream>

namespace boxlab {

std::optional<std::string> Polytope::violated_row(const std::vector<QSqrt2>& point) const {
    if (static_cast<int>(point.size()) != nvars)
        throw std::domain_error("violated_row: point dimension mismatch");
    for (const auto& v : point)
        if (v.sign() < 0) return std::string("nonnegativity");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        QSqrt2 lhs;
        for (const auto& [var, coef] : rows[i].terms) lhs += coef * point[var];
        const int cmp = (lhs - rows[i].rhs).sign();
        const bool ok = rows[i].sense == Sense::EQ   ? cmp == 0
                        : rows[i].sense == Sense::LE ? cmp <= 0
                                                     : cmp >= 0;
        if (!ok) {
            if (!rows[i].label.empty()) return rows[i].label;
            return "row " + std::to_string(i);
        }
    }
    return std::nullopt;
}

namespace {

// Dense two-phase tableau simplex over Q(sqrt(2)), Bland's rule throughout.
class Simplex {
  public:
    Simplex(const Polytope& poly, const std::vector<QSqrt2>& objective, bool maximize)
        : nvars_(poly.nvars) {
        const QSqrt2 one((Rational(1)));
        int nslack = 0;
        for (const auto& row : poly.rows)
            if (row.sense != Sense::EQ) ++nslack;
        const int m = static_cast<int>(poly.rows.size());
        int scol = nvars_;
        artificial_start_ = nvars_ + nslack;
        int acol = artificial_start_;
        ncols_ = nvars_ + nslack + m;  // at most one artificial per row
        rows_.assign(m, std::vector<QSqrt2>(ncols_ + 1));
        basis_.assign(m, -1);
        disabled_.assign(ncols_, 0);

        for (int i = 0; i < m; ++i) {
            const auto& row = poly.rows[i];
            auto& t = rows_[i];
            const bool flip = row.rhs.sign() < 0;
            const QSqrt2 sgn = flip ? QSqrt2(Rational(-1)) : one;
            for (const auto& [var, coef] : row.terms) t[var] += sgn * coef;
            t[ncols_] = sgn * row.rhs;
            Sense sense = row.sense;
            if (flip && sense != Sense::EQ) sense = (sense == Sense::LE) ? Sense::GE : Sense::LE;
            if (sense == Sense::LE) {
                t[scol] = one;
                basis_[i] = scol++;
            } else if (sense == Sense::GE) {
                t[scol] = -one;
                ++scol;
                t[acol] = one;
                basis_[i] = acol++;
            } else {
                t[acol] = one;
                basis_[i] = acol++;
            }
        }
        nartificial_ = acol - artificial_start_;

        obj_.assign(ncols_ + 1, QSqrt2());
        for (int j = 0; j < nvars_; ++j) obj_[j] = maximize ? objective[j] : -objective[j];
    }

    LPSolution solve() {
        LPSolution sol;
        std::vector<QSqrt2> phase1(ncols_ + 1);
        for (int j = artificial_start_; j < artificial_start_ + nartificial_; ++j)
            phase1[j] = QSqrt2(Rational(-1));
        load_costs(phase1);
        run(sol);  // phase 1 is always bounded
        if (objective_value().sign() < 0) {
            sol.status = LPStatus::Infeasible;
            return sol;
        }
        purge_artificials();

        load_costs(obj_);
        if (!run(sol)) {
            sol.status = LPStatus::Unbounded;
            return sol;
        }
        sol.status = LPStatus::Optimal;
        sol.value = objective_value();
        sol.witness.assign(nvars_, QSqrt2());
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < nvars_) sol.witness[basis_[i]] = rows_[i][ncols_];
        return sol;
    }

  private:
    void load_costs(const std::vector<QSqrt2>& costs) {
        cost_ = costs;
        cost_.resize(ncols_ + 1);
        zrow_.assign(ncols_ + 1, QSqrt2());
        for (int j = 0; j <= ncols_; ++j) zrow_[j] = -cost_[j];
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const QSqrt2& mult = cost_[basis_[i]];
            if (mult.sign() == 0) continue;
            for (int j = 0; j <= ncols_; ++j) {
                if (rows_[i][j].sign() == 0) continue;
                zrow_[j] += mult * rows_[i][j];
            }
        }
    }

    QSqrt2 objective_value() const { return zrow_[ncols_]; }

    // Bland's rule iterations; returns false on unboundedness.
    bool run(LPSolution& sol) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (disabled_[j]) continue;
                if (zrow_[j].sign() < 0) { enter = j; break; }
            }
            if (enter < 0) return true;
            int leave = -1;
            QSqrt2 best_ratio;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][enter].sign() <= 0) continue;
                const QSqrt2 ratio = rows_[i][ncols_] / rows_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = static_cast<int>(i);
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            ++sol.iterations;
        }
    }

    void pivot(int row, int col) {
        auto& r = rows_[row];
        const QSqrt2 inv = q2_inv(r[col]);
        for (int j = 0; j <= ncols_; ++j)
            if (r[j].sign() != 0) r[j] *= inv;
        r[col] = QSqrt2(Rational(1));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            const QSqrt2 factor = rows_[i][col];
            if (factor.sign() == 0) continue;
            for (int j = 0; j <= ncols_; ++j) {
                if (r[j].sign() == 0) continue;
                rows_[i][j] -= factor * r[j];
            }
            rows_[i][col] = QSqrt2();
        }
        const QSqrt2 zfactor = zrow_[col];
        if (zfactor.sign() != 0) {
            for (int j = 0; j <= ncols_; ++j) {
                if (r[j].sign() == 0) continue;
                zrow_[j] -= zfactor * r[j];
            }
            zrow_[col] = QSqrt2();
        }
        basis_[row] = col;
    }

    // After phase 1: pivot basic artificials out where possible (their rows
    // have zero rhs, so feasibility is preserved), drop dependent rows, and
    // fence artificial columns off from phase 2.
    void purge_artificials() {
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < artificial_start_) { ++i; continue; }
            int col = -1;
            for (int j = 0; j < artificial_start_; ++j)
                if (rows_[i][j].sign() != 0) { col = j; break; }
            if (col >= 0) {
                pivot(static_cast<int>(i), col);
                ++i;
            } else {
                rows_.erase(rows_.begin() + static_cast<long>(i));
                basis_.erase(basis_.begin() + static_cast<long>(i));
            }
        }
        for (int j = artificial_start_; j < artificial_start_ + nartificial_; ++j)
            disabled_[j] = 1;
    }

    int nvars_ = 0;
    int ncols_ = 0;
    int artificial_start_ = 0;
    int nartificial_ = 0;
    std::vector<std::vector<QSqrt2>> rows_;
    std::vector<int> basis_;
    std::vector<QSqrt2> obj_, cost_, zrow_;
    std::vector<char> disabled_;
};

}  // namespace

LPSolution lp_solve(const Polytope& poly, const std::vector<QSqrt2>& objective,
                    bool maximize) {
    if (static_cast<int>(objective.size()) != poly.nvars)
        throw std::domain_error("lp_solve: objective dimension mismatch");
    Simplex s(poly, objective, maximize);
    LPSolution sol = s.solve();
    if (sol.status == LPStatus::Optimal && !maximize) sol.value = -sol.value;
    return sol;
}

namespace {

// All index offsets from varying digits [lo, hi) of the indexer.
std::vector<std::size_t> vary(const TupleIndexer& ix, int lo, int hi) {
    std::vector<std::size_t> out{0};
    for (int pos = lo; pos < hi; ++pos) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * ix.radix[pos]);
        for (std::size_t base : out)
            for (int v = 0; v < ix.radix[pos]; ++v) next.push_back(base + ix.stride[pos] * v);
        out.swap(next);
    }
    return out;
}

std::vector<std::size_t> vary_excluding(const TupleIndexer& ix, int lo, int hi) {
    std::vector<std::size_t> out{0};
    for (int pos = 0; pos < static_cast<int>(ix.radix.size()); ++pos) {
        if (pos >= lo && pos < hi) continue;
        std::vector<std::size_t> next;
        next.reserve(out.size() * ix.radix[pos]);
        for (std::size_t base : out)
            for (int v = 0; v < ix.radix[pos]; ++v) next.push_back(base + ix.stride[pos] * v);
        out.swap(next);
    }
    return out;
}

void add_normalization_rows(Polytope& poly, int n, const Alphabets& alph) {
    const TupleIndexer outs(alph, n, true);
    const TupleIndexer ins(alph, n, false);
    for (std::size_t in = 0; in < ins.total; ++in) {
        LinRow row;
        row.sense = Sense::EQ;
        row.rhs = QSqrt2(Rational(1));
        row.label = "normalization@in" + std::to_string(in);
        for (std::size_t o = 0; o < outs.total; ++o)
            row.terms.emplace_back(static_cast<int>(in * outs.total + o), QSqrt2(Rational(1)));
        poly.rows.push_back(std::move(row));
    }
}

// Marginal equalities: summing outputs over digits [olo, ohi) must give the
// same value for every assignment of the inputs over the same digit range.
void add_marginal_rows(Polytope& poly, int n, const Alphabets& alph, int olo, int ohi,
                       const std::string& tag) {
    const TupleIndexer outs(alph, n, true);
    const TupleIndexer ins(alph, n, false);
    const auto own_out = vary(outs, olo, ohi);
    const auto other_out = vary_excluding(outs, olo, ohi);
    const auto own_in = vary(ins, olo, ohi);
    const auto other_in = vary_excluding(ins, olo, ohi);
    for (std::size_t oin : other_in) {
        for (std::size_t oout : other_out) {
            for (std::size_t v = 1; v < own_in.size(); ++v) {
                LinRow row;
                row.sense = Sense::EQ;
                row.rhs = QSqrt2();
                row.label = tag + "@in" + std::to_string(oin + own_in[v]) + "/out" +
                            std::to_string(oout);
                for (std::size_t so : own_out) {
                    row.terms.emplace_back(
                        static_cast<int>((oin + own_in[0]) * outs.total + oout + so),
                        QSqrt2(Rational(1)));
                    row.terms.emplace_back(
                        static_cast<int>((oin + own_in[v]) * outs.total + oout + so),
                        QSqrt2(Rational(-1)));
                }
                poly.rows.push_back(std::move(row));
            }
        }
    }
}

}  // namespace

Polytope ns_polytope(int n, const Alphabets& alph) {
    check_dense_cap(n, alph);
    Polytope poly;
    const TupleIndexer outs(alph, n, true);
    const TupleIndexer ins(alph, n, false);
    poly.nvars = static_cast<int>(outs.total * ins.total);
    add_normalization_rows(poly, n, alph);
    if (alph.count() >= 2)
        for (int j = 0; j < alph.count(); ++j)
            add_marginal_rows(poly, n, alph, alph.digit_lo(j, n), alph.digit_hi(j, n),
                              "ns-iface" + std::to_string(j));
    return poly;
}

Polytope round_ns_polytope(int n, const Alphabets& alph) {
    check_dense_cap(n, alph);
    Polytope poly;
    const TupleIndexer outs(alph, n, true);
    const TupleIndexer ins(alph, n, false);
    poly.nvars = static_cast<int>(outs.total * ins.total);
    add_normalization_rows(poly, n, alph);
    if (alph.count() >= 2)
        for (int j = 0; j < alph.count(); ++j)
            add_marginal_rows(poly, n, alph, alph.digit_lo(j, n), alph.digit_hi(j, n),
                              "ns-iface" + std::to_string(j));
    for (int j = 0; j < alph.count(); ++j)
        for (int i = 0; i < alph.digits_of(j, n); ++i)
            add_marginal_rows(poly, n, alph, alph.digit_lo(j, n) + i, alph.digit_lo(j, n) + i + 1,
                              "roundns-iface" + std::to_string(j) + "-round" + std::to_string(i));
    return poly;
}

Polytope extension_polytope(const Box& tau_ab, int eve_out, int eve_in) {
    if (tau_ab.alph.count() != 2)
        throw std::domain_error("extension_polytope expects a 2-interface marginal");
    const int n = tau_ab.n;
    Alphabets ext = tau_ab.alph;
    ext.ifaces.push_back(InterfaceSpec{eve_in, eve_out, true});
    check_dense_cap(n, ext);

    Polytope poly;
    const TupleIndexer outs(ext, n, true);
    const TupleIndexer ins(ext, n, false);
    poly.nvars = static_cast<int>(outs.total * ins.total);

    // fixed AB-marginal for every z (implies normalization and the Eve-side
    // non-signaling equalities)
    const int elo = ext.digit_lo(2, n), ehi = ext.digit_hi(2, n);
    const auto eve_out_off = vary(outs, elo, ehi);
    const auto ab_out_off = vary_excluding(outs, elo, ehi);
    const auto eve_in_off = vary(ins, elo, ehi);
    const auto ab_in_off = vary_excluding(ins, elo, ehi);
    const std::size_t tau_oc = tau_ab.out_count();
    for (std::size_t zi = 0; zi < eve_in_off.size(); ++zi) {
        for (std::size_t xi = 0; xi < ab_in_off.size(); ++xi) {
            for (std::size_t oi = 0; oi < ab_out_off.size(); ++oi) {
                LinRow row;
                row.sense = Sense::EQ;
                row.rhs = tau_ab.e[xi * tau_oc + oi];
                row.label = "marginal@z" + std::to_string(zi) + "/x" + std::to_string(xi) +
                            "/ab" + std::to_string(oi);
                for (std::size_t eo : eve_out_off)
                    row.terms.emplace_back(
                        static_cast<int>((ab_in_off[xi] + eve_in_off[zi]) * outs.total +
                                         ab_out_off[oi] + eo),
                        QSqrt2(Rational(1)));
                poly.rows.push_back(std::move(row));
            }
        }
    }
    // remaining tripartite non-signaling equalities (A and B interfaces)
    for (int j = 0; j < 2; ++j)
        add_marginal_rows(poly, n, ext, ext.digit_lo(j, n), ext.digit_hi(j, n),
                          "ns-iface" + std::to_string(j));
    return poly;
}

}  // namespace boxlab

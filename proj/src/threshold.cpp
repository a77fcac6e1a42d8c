#include "boxlab/threshold.hpp"

#include "boxlab/linprog.hpp"

#include <algorithm>
#include <cmath>

namespace boxlab {

QSqrt2 chsh_exp_neg_nD(long n, long k, const QSqrt2& g) {
    FrequencyVector counts({k, n - k});
    return exact_exp_neg_nD_q2(counts, {g, QSqrt2(Rational(1)) - g});
}

QSqrt2 chsh_tail_bound_exact(long n, long k) {
    if (!(k <= n)) throw std::domain_error("chsh_tail_bound: need k <= n");
    const QSqrt2 wn = chsh_w() * QSqrt2(Rational(n));
    if (!(QSqrt2(Rational(k)) > wn))
        throw std::domain_error("chsh_tail_bound: need k > w n");
    return chsh_exp_neg_nD(n, k, chsh_w());
}

double chsh_tail_bound(long n, long k) { return to_double(chsh_tail_bound_exact(n, k)); }

QSqrt2 chsh_clamp(const Rational& alpha) {
    const QSqrt2 a(alpha);
    if (a > chsh_w()) return chsh_w();
    if (a < chsh_one_minus_w()) return chsh_one_minus_w();
    return a;
}

QSqrt2 chsh_clamped_bound(long n, long k) {
    return chsh_exp_neg_nD(n, k, chsh_clamp(Rational(k, n)));
}

ThresholdReport check_chsh_threshold(const SymBox& sb) {
    const int n = sb.n;
    const QSqrt2 wn = chsh_w() * QSqrt2(Rational(n));
    const QSqrt2 lwn = chsh_one_minus_w() * QSqrt2(Rational(n));

    // suffix and prefix tail masses, exact
    std::vector<QSqrt2> upper(n + 2), lower(n + 1);
    for (int k = n; k >= 0; --k) upper[k] = upper[k + 1] + sb.p[k];
    for (int k = 0; k <= n; ++k) lower[k] = (k ? lower[k - 1] : QSqrt2()) + sb.p[k];

    ThresholdReport rep;
    rep.pass = true;
    for (int k = 0; k <= n; ++k) {
        ThresholdRow row;
        row.k = k;
        const QSqrt2 kq((Rational(k)));
        if (kq > wn) {
            row.kind = TailKind::UpperTail;
            row.observed = upper[k];
            row.bound = chsh_exp_neg_nD(n, k, chsh_w());
        } else if (kq < lwn) {
            row.kind = TailKind::LowerTail;
            row.observed = lower[k];
            row.bound = chsh_exp_neg_nD(n, k, chsh_one_minus_w());
        } else {
            row.kind = TailKind::Middle;
            row.observed = sb.p[k];
            row.bound = QSqrt2(Rational(1));
        }
        row.slack = row.bound - row.observed;
        if (rep.worst_k < 0 || row.slack < rep.worst_slack) {
            rep.worst_k = k;
            rep.worst_slack = row.slack;
        }
        if (row.slack.sign() < 0) rep.pass = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

QSqrt2 segment_threshold_bound(const FrequencyVector& counts, const QSqrt2& lo,
                               const QSqrt2& hi) {
    if (counts.d() != 2) throw std::domain_error("segment bound needs d = 2");
    QSqrt2 ref(Rational(counts.counts[0], counts.n));
    if (ref < lo) ref = lo;
    if (ref > hi) ref = hi;
    return exact_exp_neg_nD_q2(counts, {ref, QSqrt2(Rational(1)) - ref});
}

namespace {

// Minimize D(f || V lambda) over the lambda-simplex by projected gradient
// descent with backtracking. Convex and smooth away from the support
// boundary, which the iterates avoid since the objective blows up there.
double min_rel_entropy_over_hull(const std::vector<double>& f,
                                 const std::vector<std::vector<double>>& verts) {
    const std::size_t m = verts.size();
    const std::size_t d = f.size();
    std::vector<double> lambda(m, 1.0 / static_cast<double>(m));

    auto mixture = [&](const std::vector<double>& lam) {
        std::vector<double> g(d, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < d; ++r) g[r] += lam[i] * verts[i][r];
        return g;
    };
    auto value = [&](const std::vector<double>& lam) {
        const auto g = mixture(lam);
        double acc = 0;
        for (std::size_t r = 0; r < d; ++r) {
            if (f[r] == 0) continue;
            if (g[r] <= 0) return std::numeric_limits<double>::infinity();
            acc += f[r] * std::log(f[r] / g[r]);
        }
        return acc;
    };
    auto project_simplex = [](std::vector<double> v) {
        std::vector<double> u = v;
        std::sort(u.begin(), u.end(), std::greater<>());
        double css = 0, theta = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            css += u[i];
            const double t = (css - 1.0) / static_cast<double>(i + 1);
            if (u[i] - t > 0) theta = t;
        }
        for (auto& x : v) x = std::max(0.0, x - theta);
        return v;
    };

    double cur = value(lambda);
    double step = 1.0;
    for (int iter = 0; iter < 20000; ++iter) {
        const auto g = mixture(lambda);
        std::vector<double> grad(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < d; ++r)
                if (f[r] > 0) grad[i] -= f[r] * verts[i][r] / g[r];
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> cand(m);
            for (std::size_t i = 0; i < m; ++i) cand[i] = lambda[i] - step * grad[i];
            cand = project_simplex(std::move(cand));
            const double v = value(cand);
            if (v < cur - 1e-16) {
                lambda = std::move(cand);
                if (cur - v < 1e-14 && iter > 100) { cur = v; return cur; }
                cur = v;
                moved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return cur;
}

}  // namespace

double general_threshold_bound(const FrequencyVector& counts,
                               const std::vector<std::vector<QSqrt2>>& fmu_vertices) {
    if (fmu_vertices.empty()) throw std::domain_error("empty expected-frequency set");
    const std::size_t d = counts.counts.size();
    for (const auto& v : fmu_vertices)
        if (v.size() != d) throw std::domain_error("vertex dimension mismatch");

    // support infeasibility: f has mass where every vertex is zero
    for (std::size_t r = 0; r < d; ++r) {
        if (counts.counts[r] == 0) continue;
        bool any = false;
        for (const auto& v : fmu_vertices)
            if (v[r].sign() > 0) { any = true; break; }
        if (!any) return 0.0;
    }

    // exact membership: f in conv(vertices) -> inf D = 0
    const auto f = counts.as_fractions();
    {
        Polytope memb;
        memb.nvars = static_cast<int>(fmu_vertices.size());
        for (std::size_t r = 0; r < d; ++r) {
            LinRow row;
            row.sense = Sense::EQ;
            row.rhs = QSqrt2(f[r]);
            for (std::size_t i = 0; i < fmu_vertices.size(); ++i)
                row.terms.emplace_back(static_cast<int>(i), fmu_vertices[i][r]);
            memb.rows.push_back(std::move(row));
        }
        {
            LinRow row;
            row.sense = Sense::EQ;
            row.rhs = QSqrt2(Rational(1));
            for (std::size_t i = 0; i < fmu_vertices.size(); ++i)
                row.terms.emplace_back(static_cast<int>(i), QSqrt2(Rational(1)));
            memb.rows.push_back(std::move(row));
        }
        std::vector<QSqrt2> obj(memb.nvars, QSqrt2());
        if (lp_solve(memb, obj, true).status == LPStatus::Optimal) return 1.0;
    }

    // exact clamp for segment families in the 2-class case
    if (d == 2 && fmu_vertices.size() == 2) {
        QSqrt2 lo = fmu_vertices[0][0], hi = fmu_vertices[1][0];
        if (lo > hi) std::swap(lo, hi);
        return to_double(segment_threshold_bound(counts, lo, hi));
    }

    std::vector<double> fd(d);
    for (std::size_t r = 0; r < d; ++r) fd[r] = to_double(f[r]);
    std::vector<std::vector<double>> verts;
    for (const auto& v : fmu_vertices) {
        std::vector<double> vd(d);
        for (std::size_t r = 0; r < d; ++r) vd[r] = to_double(v[r]);
        verts.push_back(std::move(vd));
    }
    const double inf_d = min_rel_entropy_over_hull(fd, verts);
    return std::exp(-static_cast<double>(counts.n) * inf_d);
}

ThresholdReport definetti_implies_threshold(const SymBox& P, const SymBox& tau,
                                            const QSqrt2& Ctilde) {
    if (P.n != tau.n) throw PreconditionError("round count mismatch between box and tau");
    for (int k = 0; k <= P.n; ++k)
        if (P.p[k] > Ctilde * tau.p[k])
            throw PreconditionError("entrywise premise p_k <= Ctilde tau_k fails at k = " +
                                    std::to_string(k));
    ThresholdReport rep;
    rep.pass = true;
    for (int k = 0; k <= P.n; ++k) {
        ThresholdRow row;
        row.k = k;
        row.kind = TailKind::Middle;
        row.observed = P.p[k];
        row.bound = Ctilde * chsh_clamped_bound(P.n, k);
        row.slack = row.bound - row.observed;
        if (rep.worst_k < 0 || row.slack < rep.worst_slack) {
            rep.worst_k = k;
            rep.worst_slack = row.slack;
        }
        if (row.slack.sign() < 0) rep.pass = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace boxlab

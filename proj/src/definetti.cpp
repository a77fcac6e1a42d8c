#include "boxlab/definetti.hpp"

#include "boxlab/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace boxlab {

SymBox tau_chsh(int n) {
    if (n < 1) throw std::domain_error("tau_chsh needs n >= 1");
    const QSqrt2 interval = chsh_w() - chsh_one_minus_w();  // 2w - 1 = sqrt(2)/2
    std::vector<QSqrt2> p(n + 1);
    for (int k = 0; k <= n; ++k)
        p[k] = QSqrt2(Rational(binomial(n, k))) * incomplete_beta_qsqrt2(n, k) / interval;
    return symbox_new(n, std::move(p));
}

QSqrt2 score_sup(long n, long k) {
    if (k < 0 || k > n) throw std::domain_error("score_sup: need 0 <= k <= n");
    const QSqrt2 phat = chsh_clamp(Rational(k, n));
    QSqrt2 v = q2_pow(phat, static_cast<unsigned long>(k)) *
               q2_pow(QSqrt2(Rational(1)) - phat, static_cast<unsigned long>(n - k));
    return v * QSqrt2(Rational(1, 1) / rat_pow(Rational(2), static_cast<unsigned long>(n)));
}

Certificate certify_first_definetti(const SymBox& P) {
    Certificate cert;
    cert.bound_name = "first-definetti";
    const int n = P.n;
    cert.prefactor = QSqrt2(rat_pow(Rational(n + 1), 2));

    const ThresholdReport thr = check_chsh_threshold(P);
    if (!thr.pass) {
        cert.verdict = Verdict::PreconditionThreshold;
        std::ostringstream os;
        os << "threshold premise fails at k = " << thr.worst_k
           << " (slack " << q2_to_decimal(thr.worst_slack, 6) << ")";
        cert.detail = os.str();
        return cert;
    }

    const SymBox tau = tau_chsh(n);
    bool ok = true;
    for (int k = 0; k <= n; ++k) {
        const QSqrt2 rhs = cert.prefactor * tau.p[k];
        ThresholdRow row;
        row.k = k;
        row.observed = P.p[k];
        row.bound = rhs;
        row.slack = rhs - P.p[k];
        cert.rows.push_back(row);
        const QSqrt2 ratio = P.p[k] / rhs;  // tau_k > 0 for every k
        if (cert.witness_k < 0 || ratio > cert.worst_ratio) {
            cert.worst_ratio = ratio;
            cert.witness_k = k;
        }
        if (row.slack.sign() < 0) ok = false;
    }
    cert.verdict = ok ? Verdict::Pass : Verdict::BoundViolation;
    return cert;
}

Certificate certify_first_definetti(const Box& P) {
    try {
        return certify_first_definetti(sym_from_dense(P));
    } catch (const SymmetryError& e) {
        Certificate cert;
        cert.bound_name = "first-definetti";
        cert.verdict = Verdict::PreconditionSymmetry;
        cert.detail = e.what();
        return cert;
    }
}

SymBox tau_second(const SymBox& P, int k) {
    if (k < 1 || k > P.n) throw std::domain_error("tau_second: need 1 <= k <= n");
    const int n = P.n;
    std::vector<QSqrt2> q(k + 1);
    for (int N = 0; N <= n; ++N) {
        if (P.p[N].sign() == 0) continue;
        const QSqrt2 c = chsh_clamp(Rational(N, n));
        const QSqrt2 cbar = QSqrt2(Rational(1)) - c;
        for (int j = 0; j <= k; ++j) {
            q[j] += P.p[N] * QSqrt2(Rational(binomial(k, j))) *
                    q2_pow(c, static_cast<unsigned long>(j)) *
                    q2_pow(cbar, static_cast<unsigned long>(k - j));
        }
    }
    return symbox_new(k, std::move(q));
}

double thm4_constant() { return 2.0 / std::sqrt(2.0 - std::sqrt(2.0)); }

double thm4_rhs(long n, long k) {
    if (k < 1 || k > n) throw std::domain_error("thm4_rhs: need 1 <= k <= n");
    const double kn = static_cast<double>(k) / static_cast<double>(n);
    return (thm4_constant() * std::sqrt(std::log(double(n) / double(k))) + 4.0) *
               std::sqrt(kn) +
           4.0 * kn;
}

Thm4Report certify_second_definetti(const SymBox& P, int k) {
    Thm4Report rep;
    rep.lhs_exact = symbox_distance(marginal_first_k(P, k), tau_second(P, k));
    rep.lhs = to_double(rep.lhs_exact);
    rep.rhs = thm4_rhs(P.n, k);
    rep.pass = rep.lhs <= rep.rhs + config().float_tol;
    return rep;
}

DiaconisFreedmanReport diaconis_freedman_check(const SymBox& P, int k) {
    if (k < 1 || k > P.n) throw std::domain_error("diaconis_freedman_check: need 1 <= k <= n");
    const int n = P.n;
    const SymBox hyper = marginal_first_k(P, k);
    std::vector<QSqrt2> binom_mix(k + 1);
    for (int N = 0; N <= n; ++N) {
        if (P.p[N].sign() == 0) continue;
        const Rational c(N, n);
        for (int j = 0; j <= k; ++j) {
            binom_mix[j] += P.p[N] * QSqrt2(Rational(binomial(k, j)) *
                                            rat_pow(c, static_cast<unsigned long>(j)) *
                                            rat_pow(1 - c, static_cast<unsigned long>(k - j)));
        }
    }
    DiaconisFreedmanReport rep;
    QSqrt2 sum;
    for (int j = 0; j <= k; ++j) sum += q2_abs(hyper.p[j] - binom_mix[j]);
    rep.lhs = sum;
    rep.bound = Rational(4 * k, n);
    rep.pass = (QSqrt2(rep.bound) - rep.lhs).sign() >= 0;
    return rep;
}

BinomL1Report binom_l1_bound_check(long k, const Rational& p, const Rational& q) {
    if (!(p > 0 && p < 1 && q > 0 && q < 1))
        throw std::domain_error("binom_l1_bound_check: need p, q in (0,1)");
    BinomL1Report rep;
    Rational lhs(0);
    for (long j = 0; j <= k; ++j) {
        const Rational pj = Rational(binomial(k, j)) * rat_pow(p, j) * rat_pow(1 - p, k - j);
        const Rational qj = Rational(binomial(k, j)) * rat_pow(q, j) * rat_pow(1 - q, k - j);
        lhs += rat_abs(pj - qj);
    }
    rep.lhs = lhs;
    const Rational minq = std::min(q, 1 - q);
    rep.bound_sq = Rational(4 * k) * (p - q) * (p - q) / minq;
    rep.bound = std::sqrt(to_double(rep.bound_sq));
    rep.pass = lhs * lhs <= rep.bound_sq;  // both sides exact
    return rep;
}

// --- general symmetries ---------------------------------------------------

std::vector<QSqrt2> ConvexFamily::box_entries_at(const std::vector<QSqrt2>& phi) const {
    if (static_cast<int>(phi.size()) != dprime())
        throw std::domain_error("family parameter dimension mismatch");
    std::vector<QSqrt2> e = base;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (dirs[j].size() != e.size()) throw std::domain_error("family direction size mismatch");
        for (std::size_t t = 0; t < e.size(); ++t) e[t] += phi[j] * dirs[j][t];
    }
    return e;
}

Box ConvexFamily::box_at(int n_rounds, const std::vector<QSqrt2>& phi) const {
    Box single = box_new(1, Alphabets::single(single_in, single_out), box_entries_at(phi));
    return n_rounds == 1 ? single : iid_power(single, n_rounds);
}

ConvexFamily chsh_family() {
    ConvexFamily fam;
    fam.single_in = 4;
    fam.single_out = 4;
    fam.param_vertices = {{chsh_one_minus_w()}, {chsh_w()}};
    fam.base.assign(16, QSqrt2());
    fam.dirs.assign(1, std::vector<QSqrt2>(16));
    for (int in = 0; in < 4; ++in)
        for (int out = 0; out < 4; ++out) {
            const bool win = chsh_wins(out, in, 1) == 1;
            fam.base[in * 4 + out] = win ? QSqrt2() : QSqrt2(Rational(1, 2));
            fam.dirs[0][in * 4 + out] = QSqrt2(Rational(win ? 1 : -1, 2));
        }
    return fam;
}

namespace {

// Exact convex-hull membership via a feasibility LP.
bool in_hull(const std::vector<QSqrt2>& point,
             const std::vector<std::vector<QSqrt2>>& vertices) {
    Polytope memb;
    memb.nvars = static_cast<int>(vertices.size());
    for (std::size_t r = 0; r < point.size(); ++r) {
        LinRow row;
        row.sense = Sense::EQ;
        row.rhs = point[r];
        for (std::size_t i = 0; i < vertices.size(); ++i)
            row.terms.emplace_back(static_cast<int>(i), vertices[i][r]);
        memb.rows.push_back(std::move(row));
    }
    LinRow norm;
    norm.sense = Sense::EQ;
    norm.rhs = QSqrt2(Rational(1));
    for (std::size_t i = 0; i < vertices.size(); ++i)
        norm.terms.emplace_back(static_cast<int>(i), QSqrt2(Rational(1)));
    memb.rows.push_back(std::move(norm));
    return lp_solve(memb, std::vector<QSqrt2>(memb.nvars), true).status == LPStatus::Optimal;
}

std::vector<std::vector<QSqrt2>> grid_points(const ConvexFamily& family, int grid) {
    const int dp = family.dprime();
    if (dp == 0) return {std::vector<QSqrt2>{}};
    if (grid < 2) throw std::domain_error("grid resolution must be >= 2 per dimension");
    if (dp > 2) throw std::domain_error("grid mixtures support d' <= 2");

    std::vector<QSqrt2> lo(dp), hi(dp);
    for (int j = 0; j < dp; ++j) {
        lo[j] = family.param_vertices[0][j];
        hi[j] = family.param_vertices[0][j];
        for (const auto& v : family.param_vertices) {
            if (v[j] < lo[j]) lo[j] = v[j];
            if (v[j] > hi[j]) hi[j] = v[j];
        }
    }
    auto axis = [&](int j) {
        std::vector<QSqrt2> ts(grid);
        for (int i = 0; i < grid; ++i)
            ts[i] = lo[j] + (hi[j] - lo[j]) * QSqrt2(Rational(i, grid - 1));
        return ts;
    };

    std::vector<std::vector<QSqrt2>> pts;
    if (dp == 1) {
        for (const auto& t : axis(0)) pts.push_back({t});
        return pts;  // the segment itself; no filtering needed
    }
    const auto tx = axis(0), ty = axis(1);
    for (const auto& a : tx)
        for (const auto& b : ty) {
            std::vector<QSqrt2> phi{a, b};
            if (in_hull(phi, family.param_vertices)) pts.push_back(std::move(phi));
        }
    if (pts.empty()) throw std::domain_error("no grid point falls inside the parameter polytope");
    return pts;
}

Box tau_from_grid(const ConvexFamily& family, int n,
                  const std::vector<std::vector<QSqrt2>>& pts,
                  std::vector<QSqrt2>* sup_entries) {
    const Alphabets alph = Alphabets::single(family.single_in, family.single_out);
    check_dense_cap(n, alph);
    const TupleIndexer outs(alph, n, true), ins(alph, n, false);
    std::vector<QSqrt2> acc(outs.total * ins.total);
    if (sup_entries) sup_entries->assign(acc.size(), QSqrt2());
    const int so = family.single_out;
    for (const auto& phi : pts) {
        const auto single = family.box_entries_at(phi);
        for (std::size_t in = 0; in < ins.total; ++in) {
            const auto ind = ins.digits(in);
            for (std::size_t o = 0; o < outs.total; ++o) {
                const auto ond = outs.digits(o);
                QSqrt2 prod(Rational(1));
                for (int i = 0; i < n && prod.sign() != 0; ++i)
                    prod *= single[static_cast<std::size_t>(ind[i]) * so + ond[i]];
                acc[in * outs.total + o] += prod;
                if (sup_entries && prod > (*sup_entries)[in * outs.total + o])
                    (*sup_entries)[in * outs.total + o] = prod;
            }
        }
    }
    const QSqrt2 weight(Rational(1, static_cast<long>(pts.size())));
    for (auto& v : acc) v *= weight;
    return box_new(n, alph, std::move(acc));
}

}  // namespace

Box general_tau(const ConvexFamily& family, int n, int grid, GeneralTauDiag* diag) {
    const auto pts = grid_points(family, grid);
    std::vector<QSqrt2> sup_entries;
    Box tau = tau_from_grid(family, n, pts, diag ? &sup_entries : nullptr);
    if (diag) {
        diag->grid = grid;
        diag->grid_points = pts.size();
        const Rational pre(binomial(n + family.dprime(), family.dprime()));
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < tau.e.size(); ++t) {
            if (sup_entries[t].sign() == 0) continue;
            const double ratio = to_double(QSqrt2(pre) * tau.e[t] / sup_entries[t]);
            min_ratio = std::min(min_ratio, ratio);
        }
        diag->lemma13_min_ratio = min_ratio;
        diag->grid_error = 0;
        if (family.dprime() >= 1 && grid / 2 >= 2) {
            const Box coarse = tau_from_grid(family, n, grid_points(family, grid / 2), nullptr);
            double err = 0;
            for (std::size_t t = 0; t < tau.e.size(); ++t)
                err = std::max(err, std::fabs(to_double(tau.e[t] - coarse.e[t])));
            diag->grid_error = err;
        }
    }
    return tau;
}

std::vector<std::vector<QSqrt2>> expected_freq_set(const ConvexFamily& family,
                                                   const std::vector<QSqrt2>& mu_single,
                                                   const Predicate& pred) {
    if (pred.single_in != family.single_in || pred.single_out != family.single_out)
        throw std::domain_error("predicate does not match the family alphabet");
    if (static_cast<int>(mu_single.size()) != family.single_in)
        throw std::domain_error("mu does not match the family input alphabet");
    std::vector<std::vector<QSqrt2>> image;
    for (const auto& v : family.param_vertices) {
        const auto entries = family.box_entries_at(v);
        std::vector<QSqrt2> f(pred.d);
        for (int x = 0; x < family.single_in; ++x)
            for (int a = 0; a < family.single_out; ++a)
                f[pred.cls(a, x)] +=
                    entries[static_cast<std::size_t>(x) * family.single_out + a] * mu_single[x];
        if (std::find(image.begin(), image.end(), f) == image.end())
            image.push_back(std::move(f));
    }
    return image;
}

GeneralCertificate certify_general_definetti(const Box& P, const Predicate& pred,
                                             const ConvexFamily& family,
                                             const std::vector<QSqrt2>& mu_single,
                                             double C, int grid) {
    GeneralCertificate cert;
    if (P.alph.count() != 1 || P.alph.ifaces[0].in != pred.single_in ||
        P.alph.ifaces[0].out != pred.single_out)
        throw BoxValidationError("certify_general_definetti expects a single-interface box "
                                 "matching the predicate alphabet");
    const int n = P.n;
    const int d = pred.d;
    const int dp = family.dprime();
    const double tol = config().float_tol;

    for (const auto& v : family.param_vertices) {
        if (!is_w_symmetric(family.box_at(1, v), pred)) {
            cert.verdict = Verdict::PreconditionSymmetry;
            cert.detail = "a family vertex box is not w-symmetric";
            return cert;
        }
    }
    const bool p_symmetric = is_w_symmetric(P, pred);

    // realized frequency masses under P and mu^{(x) n}
    const TupleIndexer outs = P.outs(), ins = P.ins();
    std::map<std::vector<long>, QSqrt2> mass_p;
    for (std::size_t in = 0; in < ins.total; ++in) {
        const auto xd = ins.digits(in);
        QSqrt2 muw(Rational(1));
        for (int i = 0; i < n; ++i) muw *= mu_single[xd[i]];
        if (muw.sign() == 0) continue;
        for (std::size_t o = 0; o < outs.total; ++o) {
            const QSqrt2& v = P.at(in, o);
            if (v.sign() == 0) continue;
            mass_p[freq_w(outs.digits(o), xd, pred).counts] += v * muw;
        }
    }

    const auto fmu = expected_freq_set(family, mu_single, pred);

    // threshold premise at every realized frequency
    for (const auto& [counts, mass] : mass_p) {
        const double bound = C * general_threshold_bound(FrequencyVector(counts), fmu);
        if (to_double(mass) > bound + tol) {
            cert.verdict = Verdict::PreconditionThreshold;
            std::ostringstream os;
            os << "threshold premise fails at a realized frequency (mass "
               << q2_to_decimal(mass, 6) << " > bound " << bound << ")";
            cert.detail = os.str();
            return cert;
        }
    }

    const Box tau = general_tau(family, n, grid, &cert.tau_diag);
    std::map<std::vector<long>, QSqrt2> mass_tau;
    for (std::size_t in = 0; in < ins.total; ++in) {
        const auto xd = ins.digits(in);
        QSqrt2 muw(Rational(1));
        for (int i = 0; i < n; ++i) muw *= mu_single[xd[i]];
        if (muw.sign() == 0) continue;
        for (std::size_t o = 0; o < outs.total; ++o) {
            const QSqrt2& v = tau.at(in, o);
            if (v.sign() == 0) continue;
            mass_tau[freq_w(outs.digits(o), xd, pred).counts] += v * muw;
        }
    }

    cert.prefactor = C * to_double(Rational(binomial(n + dp, dp)) *
                                   rat_pow(Rational(n + 1), static_cast<unsigned long>(d - 1)));
    bool ok = true;
    for (const auto& [counts, mass] : mass_p) {
        FreqRow row;
        row.f = FrequencyVector(counts);
        row.lhs = mass;
        const auto it = mass_tau.find(counts);
        row.rhs = cert.prefactor * (it == mass_tau.end() ? 0.0 : to_double(it->second));
        row.slack = row.rhs - to_double(mass);
        if (row.rhs > 0)
            cert.part1_worst_ratio = std::max(cert.part1_worst_ratio, to_double(mass) / row.rhs);
        else if (mass.sign() > 0)
            cert.part1_worst_ratio = std::numeric_limits<double>::infinity();
        if (row.slack < -tol) ok = false;
        cert.part1.push_back(std::move(row));
    }

    if (p_symmetric) {
        for (std::size_t t = 0; t < P.e.size(); ++t) {
            const double lhs = to_double(P.e[t]);
            const double rhs = cert.prefactor * to_double(tau.e[t]);
            if (rhs > 0) cert.part2_worst_ratio = std::max(cert.part2_worst_ratio, lhs / rhs);
            else if (lhs > 0) cert.part2_worst_ratio = std::numeric_limits<double>::infinity();
            if (lhs > rhs + tol) ok = false;
        }
    }

    if (!p_symmetric) {
        cert.verdict = Verdict::PreconditionSymmetry;
        cert.detail = "box is not w-symmetric; only the frequency-level inequality was checked";
    } else {
        cert.verdict = ok ? Verdict::Pass : Verdict::BoundViolation;
    }
    return cert;
}

SymBox adversarial_tail_saturating(int n) {
    const QSqrt2 wn = chsh_w() * QSqrt2(Rational(n));
    int kmin = n;
    for (int k = 0; k <= n; ++k)
        if (QSqrt2(Rational(k)) > wn) { kmin = k; break; }
    std::vector<QSqrt2> p(n + 1);
    QSqrt2 next_tail;  // B_{k+1}, zero beyond n
    for (int k = n; k >= kmin; --k) {
        const QSqrt2 bk = chsh_tail_bound_exact(n, k);
        p[k] = bk - next_tail;
        next_tail = bk;
    }
    p[n / 2] += QSqrt2(Rational(1)) - next_tail;
    return symbox_new(n, std::move(p));
}

}  // namespace boxlab

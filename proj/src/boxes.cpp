#include "boxlab/boxes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace boxlab {

TupleIndexer::TupleIndexer(const Alphabets& alph, int n, bool outputs) {
    for (const auto& ifc : alph.ifaces)
        for (int i = 0; i < (ifc.global ? 1 : n); ++i) radix.push_back(outputs ? ifc.out : ifc.in);
    stride.assign(radix.size(), 1);
    for (int i = static_cast<int>(radix.size()) - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * static_cast<std::size_t>(radix[i + 1]);
    total = radix.empty() ? 1 : stride[0] * static_cast<std::size_t>(radix[0]);
}

std::size_t TupleIndexer::index(const std::vector<int>& digits) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < radix.size(); ++i) idx += stride[i] * digits[i];
    return idx;
}

std::vector<int> TupleIndexer::digits(std::size_t idx) const {
    std::vector<int> d(radix.size());
    for (std::size_t i = 0; i < radix.size(); ++i) {
        d[i] = static_cast<int>(idx / stride[i]);
        idx %= stride[i];
    }
    return d;
}

namespace {

std::string digits_to_string(const std::vector<int>& d) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << ")";
    return os.str();
}

// All index offsets obtained by varying digits [lo, hi) with others zero.
std::vector<std::size_t> offsets_for_digits(const TupleIndexer& ix, int lo, int hi) {
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

// All index offsets obtained by varying every digit outside [lo, hi).
std::vector<std::size_t> offsets_excluding(const TupleIndexer& ix, int lo, int hi) {
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

}  // namespace

void check_dense_cap(int n, const Alphabets& alph) {
    long double size = 1;
    for (const auto& ifc : alph.ifaces)
        size *= std::pow(static_cast<long double>(ifc.in) * ifc.out,
                         static_cast<long double>(ifc.global ? 1 : n));
    if (size > static_cast<long double>(config().dense_entry_cap))
        throw SizeCapError("dense box would have " + std::to_string(static_cast<double>(size)) +
                           " entries, beyond the configured cap; use the compressed paths");
}

Box box_new(int n, const Alphabets& alph, std::vector<QSqrt2> entries) {
    if (n < 1) throw BoxValidationError("box needs n >= 1");
    for (const auto& ifc : alph.ifaces)
        if (ifc.in < 1 || ifc.out < 1) throw BoxValidationError("alphabet sizes must be >= 1");
    check_dense_cap(n, alph);
    Box box{n, alph, std::move(entries)};
    const std::size_t oc = box.out_count(), ic = box.in_count();
    if (box.e.size() != oc * ic)
        throw BoxValidationError("entry count " + std::to_string(box.e.size()) +
                                 " does not match alphabets (" + std::to_string(oc * ic) + ")");
    const auto ins = box.ins();
    for (std::size_t in = 0; in < ic; ++in) {
        QSqrt2 sum;
        for (std::size_t out = 0; out < oc; ++out) {
            const QSqrt2& v = box.at(in, out);
            if (v.sign() < 0)
                throw BoxValidationError("negative entry at input " +
                                         digits_to_string(ins.digits(in)));
            sum += v;
        }
        if (sum != QSqrt2(Rational(1)))
            throw BoxValidationError("entries sum to " + q2_to_string(sum) + " on input " +
                                     digits_to_string(ins.digits(in)));
    }
    return box;
}

SymBox symbox_new(int n, std::vector<QSqrt2> p) {
    if (n < 1) throw BoxValidationError("symbox needs n >= 1");
    if (p.size() != static_cast<std::size_t>(n) + 1)
        throw BoxValidationError("symbox needs n+1 win-count probabilities");
    QSqrt2 sum;
    for (const auto& v : p) {
        if (v.sign() < 0) throw BoxValidationError("negative win-count probability");
        sum += v;
    }
    if (sum != QSqrt2(Rational(1)))
        throw BoxValidationError("win-count probabilities sum to " + q2_to_string(sum));
    return SymBox{n, std::move(p)};
}

std::string NsViolation::describe(const Box& box) const {
    std::ostringstream os;
    os << "interface " << iface << " signals: marginal differs between inputs "
       << digits_to_string(box.ins().digits(in_a)) << " and "
       << digits_to_string(box.ins().digits(in_b)) << " at fixed outputs "
       << digits_to_string(box.outs().digits(fixed_out));
    return os.str();
}

std::optional<NsViolation> nonsignaling_violation(const Box& box) {
    if (box.alph.count() < 2) return std::nullopt;
    const auto outs = box.outs();
    const auto ins = box.ins();
    for (int j = 0; j < box.alph.count(); ++j) {
        const int olo = box.alph.digit_lo(j, box.n), ohi = box.alph.digit_hi(j, box.n);
        const auto own_out = offsets_for_digits(outs, olo, ohi);
        const auto other_out = offsets_excluding(outs, olo, ohi);
        const auto own_in = offsets_for_digits(ins, olo, ohi);
        const auto other_in = offsets_excluding(ins, olo, ohi);
        for (std::size_t oin : other_in) {
            for (std::size_t oout : other_out) {
                QSqrt2 base;
                for (std::size_t k = 0; k < own_in.size(); ++k) {
                    QSqrt2 sum;
                    for (std::size_t sout : own_out) sum += box.at(oin + own_in[k], oout + sout);
                    if (k == 0) {
                        base = sum;
                    } else if (sum != base) {
                        return NsViolation{j, oin + own_in[0], oin + own_in[k], oout};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

bool is_nonsignaling(const Box& box) { return !nonsignaling_violation(box).has_value(); }

int chsh_wins(std::size_t out_idx, std::size_t in_idx, int n) {
    // digit order: out = [a_1..a_n, b_1..b_n], in = [x_1..x_n, y_1..y_n], binary
    int wins = 0;
    for (int i = 0; i < n; ++i) {
        const int a = static_cast<int>(out_idx >> (2 * n - 1 - i)) & 1;
        const int b = static_cast<int>(out_idx >> (n - 1 - i)) & 1;
        const int x = static_cast<int>(in_idx >> (2 * n - 1 - i)) & 1;
        const int y = static_cast<int>(in_idx >> (n - 1 - i)) & 1;
        if ((a ^ b) == (x & y)) ++wins;
    }
    return wins;
}

namespace {

void require_chsh_shape(const Box& box) {
    if (box.alph.count() != 2 || box.alph.ifaces[0] != InterfaceSpec{2, 2} ||
        box.alph.ifaces[1] != InterfaceSpec{2, 2})
        throw BoxValidationError("operation needs a 2-interface binary box");
}

}  // namespace

bool is_chsh_symmetric(const Box& box) {
    try {
        sym_from_dense(box);
        return true;
    } catch (const SymmetryError&) {
        return false;
    }
}

SymBox sym_from_dense(const Box& box) {
    require_chsh_shape(box);
    const std::size_t oc = box.out_count(), ic = box.in_count();
    std::vector<std::optional<QSqrt2>> rep(box.n + 1);
    std::vector<std::pair<std::size_t, std::size_t>> where(box.n + 1);
    for (std::size_t in = 0; in < ic; ++in) {
        for (std::size_t out = 0; out < oc; ++out) {
            const int k = chsh_wins(out, in, box.n);
            const QSqrt2& v = box.at(in, out);
            if (!rep[k]) {
                rep[k] = v;
                where[k] = {in, out};
            } else if (*rep[k] != v) {
                std::ostringstream os;
                os << "not CHSH symmetric: entries with " << k << " wins differ between "
                   << digits_to_string(box.outs().digits(where[k].second)) << "|"
                   << digits_to_string(box.ins().digits(where[k].first)) << " and "
                   << digits_to_string(box.outs().digits(out)) << "|"
                   << digits_to_string(box.ins().digits(in));
                throw SymmetryError(os.str());
            }
        }
    }
    std::vector<QSqrt2> p(box.n + 1);
    const QSqrt2 two_n(rat_pow(Rational(2), static_cast<unsigned long>(box.n)));
    for (int k = 0; k <= box.n; ++k)
        p[k] = *rep[k] * QSqrt2(Rational(binomial(box.n, k))) * two_n;
    return symbox_new(box.n, std::move(p));
}

Box dense_from_sym(const SymBox& sb) {
    const Alphabets alph = Alphabets::chsh_pair();
    check_dense_cap(sb.n, alph);
    const std::size_t oc = std::size_t(1) << (2 * sb.n);
    const std::size_t ic = oc;
    std::vector<QSqrt2> entries(oc * ic);
    const QSqrt2 two_n(rat_pow(Rational(2), static_cast<unsigned long>(sb.n)));
    std::vector<QSqrt2> cell(sb.n + 1);
    for (int k = 0; k <= sb.n; ++k)
        cell[k] = sb.p[k] / (QSqrt2(Rational(binomial(sb.n, k))) * two_n);
    for (std::size_t in = 0; in < ic; ++in)
        for (std::size_t out = 0; out < oc; ++out)
            entries[in * oc + out] = cell[chsh_wins(out, in, sb.n)];
    return box_new(sb.n, alph, std::move(entries));
}

Box q_box(const QSqrt2& p) {
    if (p.sign() < 0 || (QSqrt2(Rational(1)) - p).sign() < 0)
        throw BoxValidationError("q_box needs p in [0,1]");
    const QSqrt2 win = p / QSqrt2(Rational(2));
    const QSqrt2 lose = (QSqrt2(Rational(1)) - p) / QSqrt2(Rational(2));
    std::vector<QSqrt2> entries(16);
    for (std::size_t in = 0; in < 4; ++in)
        for (std::size_t out = 0; out < 4; ++out)
            entries[in * 4 + out] = chsh_wins(out, in, 1) ? win : lose;
    return box_new(1, Alphabets::chsh_pair(), std::move(entries));
}

Box q_box_lumped(const QSqrt2& p) { return lump_interfaces(q_box(p)); }

Box iid_power(const Box& single, int n) {
    if (single.n != 1) throw BoxValidationError("iid_power expects a single-round box");
    check_dense_cap(n, single.alph);
    Box out;
    out.n = n;
    out.alph = single.alph;
    const auto souts = single.outs();
    const auto sins = single.ins();
    const auto outs = TupleIndexer(single.alph, n, true);
    const auto ins = TupleIndexer(single.alph, n, false);
    const int J = single.alph.count();
    out.e.resize(outs.total * ins.total);
    std::vector<int> sod(J), sid(J);
    for (std::size_t in = 0; in < ins.total; ++in) {
        const auto ind = ins.digits(in);
        for (std::size_t o = 0; o < outs.total; ++o) {
            const auto ond = outs.digits(o);
            QSqrt2 prod(Rational(1));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < J; ++j) {
                    sod[j] = ond[j * n + i];
                    sid[j] = ind[j * n + i];
                }
                prod *= single.at(sins.index(sid), souts.index(sod));
                if (prod.sign() == 0) break;
            }
            out.e[in * outs.total + o] = prod;
        }
    }
    return out;
}

Box mix(const std::vector<Box>& boxes, const std::vector<QSqrt2>& weights) {
    if (boxes.empty()) throw BoxValidationError("mix needs at least one box");
    if (boxes.size() != weights.size()) throw BoxValidationError("mix: weight count mismatch");
    QSqrt2 wsum;
    for (const auto& w : weights) {
        if (w.sign() < 0) throw BoxValidationError("mix: negative weight");
        wsum += w;
    }
    if (wsum != QSqrt2(Rational(1))) throw BoxValidationError("mix: weights must sum to 1");
    Box out = boxes[0];
    for (auto& v : out.e) v *= weights[0];
    for (std::size_t i = 1; i < boxes.size(); ++i) {
        if (!(boxes[i].n == out.n && boxes[i].alph == out.alph))
            throw BoxValidationError("mix: incompatible box shapes");
        for (std::size_t t = 0; t < out.e.size(); ++t) out.e[t] += boxes[i].e[t] * weights[i];
    }
    return out;
}

Box lump_interfaces(const Box& box) {
    if (box.alph.count() != 2 || box.alph.ifaces[0].global || box.alph.ifaces[1].global)
        throw BoxValidationError("lump_interfaces expects 2 round-structured interfaces");
    const int inA = box.alph.ifaces[0].in, outA = box.alph.ifaces[0].out;
    const int inB = box.alph.ifaces[1].in, outB = box.alph.ifaces[1].out;
    Box out;
    out.n = box.n;
    out.alph = Alphabets::single(inA * inB, outA * outB);
    const auto oo = box.outs();
    const auto oi = box.ins();
    const auto no = out.outs();
    const auto ni = out.ins();
    out.e.resize(no.total * ni.total);
    std::vector<int> od(box.n), id(box.n);
    for (std::size_t in = 0; in < oi.total; ++in) {
        const auto ind = oi.digits(in);
        for (int i = 0; i < box.n; ++i) id[i] = ind[i] * inB + ind[box.n + i];
        const std::size_t nin = ni.index(id);
        for (std::size_t o = 0; o < oo.total; ++o) {
            const auto ond = oo.digits(o);
            for (int i = 0; i < box.n; ++i) od[i] = ond[i] * outB + ond[box.n + i];
            out.e[nin * no.total + no.index(od)] = box.at(in, o);
        }
    }
    return out;
}

Predicate chsh_predicate() {
    Predicate pred;
    pred.d = 2;
    pred.single_out = 4;
    pred.single_in = 4;
    pred.table.resize(16);
    for (int ab = 0; ab < 4; ++ab)
        for (int xy = 0; xy < 4; ++xy) {
            const int a = ab >> 1, b = ab & 1, x = xy >> 1, y = xy & 1;
            pred.table[ab * 4 + xy] = ((a ^ b) == (x & y)) ? 0 : 1;
        }
    return pred;
}

InputDist InputDist::uniform(int n, int joint_in) {
    InputDist d;
    d.n = n;
    d.mu.assign(joint_in, QSqrt2(Rational(1, joint_in)));
    return d;
}

FrequencyVector freq_w(const std::vector<int>& a, const std::vector<int>& x,
                       const Predicate& pred) {
    if (a.size() != x.size()) throw std::domain_error("freq_w: tuple length mismatch");
    std::vector<long> counts(pred.d, 0);
    for (std::size_t i = 0; i < a.size(); ++i) ++counts[pred.cls(a[i], x[i])];
    return FrequencyVector(std::move(counts));
}

bool is_w_symmetric(const Box& box, const Predicate& pred) {
    if (box.alph.count() != 1) throw BoxValidationError("is_w_symmetric expects 1 interface");
    if (box.alph.ifaces[0].out != pred.single_out || box.alph.ifaces[0].in != pred.single_in)
        throw BoxValidationError("predicate table does not match the box alphabet");
    const auto outs = box.outs();
    const auto ins = box.ins();
    std::map<std::vector<long>, QSqrt2> rep;
    for (std::size_t in = 0; in < ins.total; ++in) {
        const auto xd = ins.digits(in);
        for (std::size_t o = 0; o < outs.total; ++o) {
            const auto ad = outs.digits(o);
            auto f = freq_w(ad, xd, pred);
            auto [it, inserted] = rep.try_emplace(f.counts, box.at(in, o));
            if (!inserted && it->second != box.at(in, o)) return false;
        }
    }
    return true;
}

std::vector<QSqrt2> win_distribution(const Box& box, const InputDist& mu) {
    require_chsh_shape(box);
    if (mu.n != box.n || mu.mu.size() != 4)
        throw BoxValidationError("win_distribution: input distribution shape mismatch");
    const std::size_t oc = box.out_count(), ic = box.in_count();
    std::vector<QSqrt2> dist(box.n + 1);
    for (std::size_t in = 0; in < ic; ++in) {
        QSqrt2 weight(Rational(1));
        for (int i = 0; i < box.n; ++i) {
            const int x = static_cast<int>(in >> (2 * box.n - 1 - i)) & 1;
            const int y = static_cast<int>(in >> (box.n - 1 - i)) & 1;
            weight *= mu.mu[x * 2 + y];
        }
        if (weight.sign() == 0) continue;
        for (std::size_t out = 0; out < oc; ++out)
            dist[chsh_wins(out, in, box.n)] += weight * box.at(in, out);
    }
    return dist;
}

SymBox marginal_first_k(const SymBox& sb, int k) {
    if (k < 1 || k > sb.n) throw std::domain_error("marginal_first_k: need 1 <= k <= n");
    if (k == sb.n) return sb;
    std::vector<QSqrt2> q(k + 1);
    const Rational denom(binomial(sb.n, k));
    for (int N = 0; N <= sb.n; ++N) {
        if (sb.p[N].sign() == 0) continue;
        for (int j = std::max(0, k - (sb.n - N)); j <= std::min(k, N); ++j) {
            const Rational hyper =
                Rational(binomial(N, j) * binomial(sb.n - N, k - j)) / denom;
            q[j] += sb.p[N] * QSqrt2(hyper);
        }
    }
    return symbox_new(k, std::move(q));
}

QSqrt2 box_distance(const Box& P, const Box& Q) {
    if (!(P.n == Q.n && P.alph == Q.alph))
        throw BoxValidationError("box_distance: shape mismatch");
    const std::size_t oc = P.out_count(), ic = P.in_count();
    QSqrt2 best;
    for (std::size_t in = 0; in < ic; ++in) {
        QSqrt2 sum;
        for (std::size_t out = 0; out < oc; ++out) sum += q2_abs(P.at(in, out) - Q.at(in, out));
        if (sum > best) best = sum;
    }
    return best;
}

QSqrt2 symbox_distance(const SymBox& P, const SymBox& Q) {
    if (P.n != Q.n) throw BoxValidationError("symbox_distance: round count mismatch");
    QSqrt2 sum;
    for (int k = 0; k <= P.n; ++k) sum += q2_abs(P.p[k] - Q.p[k]);
    return sum;
}

Box marginal_without_interface(const Box& box, int iface) {
    const int J = box.alph.count();
    if (iface < 0 || iface >= J) throw std::domain_error("bad interface index");
    const auto outs = box.outs();
    const auto ins = box.ins();
    const int olo = box.alph.digit_lo(iface, box.n), ohi = box.alph.digit_hi(iface, box.n);
    const auto own_out = offsets_for_digits(outs, olo, ohi);
    const auto own_in = offsets_for_digits(ins, olo, ohi);
    const auto other_out = offsets_excluding(outs, olo, ohi);
    const auto other_in = offsets_excluding(ins, olo, ohi);

    Box out;
    out.n = box.n;
    for (int j = 0; j < J; ++j)
        if (j != iface) out.alph.ifaces.push_back(box.alph.ifaces[j]);
    const auto nouts = out.outs();
    const auto nins = out.ins();
    out.e.assign(nouts.total * nins.total, QSqrt2());

    // other_out/other_in enumerate the kept digits in their original relative
    // order, matching the new box's digit order; entry k of the enumeration is
    // exactly new index k.
    for (std::size_t ii = 0; ii < other_in.size(); ++ii) {
        for (std::size_t oo = 0; oo < other_out.size(); ++oo) {
            QSqrt2 base;
            for (std::size_t v = 0; v < own_in.size(); ++v) {
                QSqrt2 sum;
                for (std::size_t so : own_out)
                    sum += box.at(other_in[ii] + own_in[v], other_out[oo] + so);
                if (v == 0) base = sum;
                else if (sum != base)
                    throw BoxValidationError(
                        "marginal_without_interface: marginal depends on the removed "
                        "interface's input (interface " + std::to_string(iface) + ")");
            }
            out.e[ii * nouts.total + oo] = base;
        }
    }
    return out;
}

}  // namespace boxlab

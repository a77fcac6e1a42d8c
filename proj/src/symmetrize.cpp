#include "boxlab/symmetrize.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace boxlab {

namespace {

void require_chsh_shape(const Box& box) {
    if (box.alph.count() != 2 || box.alph.ifaces[0] != InterfaceSpec{2, 2} ||
        box.alph.ifaces[1] != InterfaceSpec{2, 2})
        throw BoxValidationError("twirl operations need a 2-interface binary box");
}

struct BitView {
    int n;
    int a(std::size_t out, int i) const { return static_cast<int>(out >> (2 * n - 1 - i)) & 1; }
    int b(std::size_t out, int i) const { return static_cast<int>(out >> (n - 1 - i)) & 1; }
    int x(std::size_t in, int i) const { return static_cast<int>(in >> (2 * n - 1 - i)) & 1; }
    int y(std::size_t in, int i) const { return static_cast<int>(in >> (n - 1 - i)) & 1; }
    std::size_t pack_out(const std::vector<int>& av, const std::vector<int>& bv) const {
        std::size_t o = 0;
        for (int i = 0; i < n; ++i) o = (o << 1) | av[i];
        for (int i = 0; i < n; ++i) o = (o << 1) | bv[i];
        return o;
    }
    std::size_t pack_in(const std::vector<int>& xv, const std::vector<int>& yv) const {
        std::size_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 1) | xv[i];
        for (int i = 0; i < n; ++i) v = (v << 1) | yv[i];
        return v;
    }
};

}  // namespace

Box apply_twirl(const Box& box, const TwirlElement& elem) {
    require_chsh_shape(box);
    const int n = box.n;
    const BitView bits{n};
    const std::size_t oc = box.out_count(), ic = box.in_count();
    Box out = box;

    std::vector<int> av(n), bv(n), xv(n), yv(n);
    std::vector<int> pa(n), pb(n), px(n), py(n);
    for (std::size_t in = 0; in < ic; ++in) {
        for (std::size_t o = 0; o < oc; ++o) {
            // user tuple -> box tuple: invert per-round relabels, then permute
            for (int i = 0; i < n; ++i) {
                av[i] = bits.a(o, i);
                bv[i] = bits.b(o, i);
                xv[i] = bits.x(in, i);
                yv[i] = bits.y(in, i);
                elem.g[i].invert(av[i], bv[i], xv[i], yv[i]);
            }
            for (int i = 0; i < n; ++i) {
                pa[elem.perm[i]] = av[i];
                pb[elem.perm[i]] = bv[i];
                px[elem.perm[i]] = xv[i];
                py[elem.perm[i]] = yv[i];
            }
            out.e[in * oc + o] = box.at(bits.pack_in(px, py), bits.pack_out(pa, pb));
        }
    }
    return out;
}

PermutationTwirlResult permutation_twirl(const Box& box, uint64_t seed) {
    require_chsh_shape(box);
    const int n = box.n;
    std::vector<std::vector<int>> perms;
    bool exact = true;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 6) {
        do perms.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        exact = false;
        std::mt19937_64 rng(seed);
        for (int s = 0; s < 10 * n * n; ++s) {
            std::shuffle(perm.begin(), perm.end(), rng);
            perms.push_back(perm);
        }
    }

    TwirlElement elem;
    elem.g.assign(n, RoundTwirl{});
    Box acc = box;
    std::fill(acc.e.begin(), acc.e.end(), QSqrt2());
    for (const auto& p : perms) {
        elem.perm = p;
        const Box term = apply_twirl(box, elem);
        for (std::size_t t = 0; t < acc.e.size(); ++t) acc.e[t] += term.e[t];
    }
    const QSqrt2 w(Rational(1, static_cast<long>(perms.size())));
    for (auto& v : acc.e) v *= w;
    return PermutationTwirlResult{std::move(acc), exact};
}

Box chsh_depolarize(const Box& box) {
    require_chsh_shape(box);
    const int n = box.n;
    const BitView bits{n};
    const std::size_t oc = box.out_count(), ic = box.in_count();

    Box cur = box;
    for (int round = 0; round < n; ++round) {
        Box next = cur;
        for (std::size_t in = 0; in < ic; ++in) {
            for (std::size_t o = 0; o < oc; ++o) {
                QSqrt2 sum;
                for (int g = 0; g < 8; ++g) {
                    int a = bits.a(o, round), b = bits.b(o, round);
                    int x = bits.x(in, round), y = bits.y(in, round);
                    RoundTwirl::from_code(g).invert(a, b, x, y);
                    const std::size_t shift_a = 2 * n - 1 - round, shift_b = n - 1 - round;
                    std::size_t o2 = o, in2 = in;
                    o2 ^= (static_cast<std::size_t>(a ^ bits.a(o, round)) << shift_a);
                    o2 ^= (static_cast<std::size_t>(b ^ bits.b(o, round)) << shift_b);
                    in2 ^= (static_cast<std::size_t>(x ^ bits.x(in, round)) << shift_a);
                    in2 ^= (static_cast<std::size_t>(y ^ bits.y(in, round)) << shift_b);
                    sum += cur.at(in2, o2);
                }
                next.e[in * oc + o] = sum / QSqrt2(Rational(8));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Box depolarize_with_eve(const Box& box) {
    require_chsh_shape(box);
    const int n = box.n;
    Alphabets ext = box.alph;
    const std::size_t ec = std::size_t(1) << (3 * n);  // 8^n transcripts
    ext.ifaces.push_back(InterfaceSpec{1, static_cast<int>(ec), true});
    check_dense_cap(n, ext);

    const std::size_t oc = box.out_count(), ic = box.in_count();
    std::vector<QSqrt2> entries(ic * oc * ec);
    const QSqrt2 weight(Rational(1, static_cast<long>(ec)));

    TwirlElement elem;
    elem.perm.resize(n);
    std::iota(elem.perm.begin(), elem.perm.end(), 0);
    elem.g.resize(n);
    // Eve's single global digit encodes round i's group code in base-8 digit
    // i; e = 0 is the identity transcript e*.
    for (std::size_t e = 0; e < ec; ++e) {
        std::size_t rem = e;
        for (int i = n - 1; i >= 0; --i) {
            elem.g[i] = RoundTwirl::from_code(static_cast<int>(rem & 7));
            rem >>= 3;
        }
        const Box twirled = apply_twirl(box, elem);
        for (std::size_t in = 0; in < ic; ++in)
            for (std::size_t o = 0; o < oc; ++o)
                entries[in * (oc * ec) + o * ec + e] = twirled.at(in, o) * weight;
    }
    return box_new(n, ext, std::move(entries));
}

}  // namespace boxlab

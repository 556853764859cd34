#include "oddu/quad.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace oddu {

HeisElem heis_add(const Ring& K, const HeisElem& a, const HeisElem& b) {
    HeisElem out;
    out.x = K.add(a.x, b.x);
    out.y = K.sub(K.add(a.y, b.y), K.mul(K.involve(a.x), b.x));
    return out;
}

HeisElem heis_neg(const Ring& K, const HeisElem& a) {
    HeisElem out;
    out.x = K.neg(a.x);
    out.y = K.sub(K.neg(a.y), K.mul(K.involve(a.x), a.x));
    return out;
}

HeisElem heis_sub(const Ring& K, const HeisElem& a, const HeisElem& b) {
    return heis_add(K, a, heis_neg(K, b));
}

HeisElem heis_mul(const Ring& K, const HeisElem& a, const HeisElem& b) {
    HeisElem out;
    out.x = K.mul(a.x, b.x);
    Ring::Elem t1 = K.mul(K.mul(K.involve(a.x), b.y), a.x);
    Ring::Elem t2 = K.mul(K.mul(K.involve(b.x), a.y), b.x);
    Ring::Elem t3 = K.mul(a.y, b.y);
    Ring::Elem t4 = K.mul(K.involve(a.y), b.y);
    out.y = K.add(K.add(t1, t2), K.add(t3, t4));
    return out;
}

HeisElem heis_act(const Ring& K, const HeisElem& a, Ring::Elem k) {
    HeisElem out;
    out.x = K.mul(a.x, k);
    out.y = K.mul(K.mul(K.involve(k), a.y), k);
    return out;
}

HeisElem heis_phi(const Ring& K, Ring::Elem k) {
    (void)K;
    HeisElem out;
    out.x = 0;
    out.y = k;
    return out;
}

Ring::Elem heis_tr(const Ring& K, const HeisElem& a) {
    return K.add(K.mul(K.involve(a.x), a.x), K.add(a.y, K.involve(a.y)));
}

std::string heis_to_string(const Ring& K, const HeisElem& a) {
    return "(" + K.to_string(a.x) + ", " + K.to_string(a.y) + ")";
}

namespace {

struct UImpl {
    const Ring* K = nullptr;
    std::size_t n = 0;
    std::vector<HeisElem> reps;
    std::vector<std::uint16_t> table;
    std::uint16_t cls(const HeisElem& h) const {
        return table[static_cast<std::size_t>(h.x) * n + h.y];
    }
};

} // namespace

std::uint16_t UniversalStructure::class_of(const Ring& K, const HeisElem& h) const {
    return class_table[static_cast<std::size_t>(h.x) * K.size() + h.y];
}

UniversalStructure universal_structure(const Ring& K) {
    if (K.lambda() != K.one()) fail("InvalidLambda", "universal structure needs lambda = 1");
    std::size_t n = K.size();

    auto impl = std::make_shared<UImpl>();
    impl->K = &K;
    impl->n = n;
    impl->table.assign(n * n, 0xffff);

    // subgroup {(0, k - conj(k))} of pairs; additive image of k -> k - conj(k)
    std::set<Ring::Elem> comm;
    for (Ring::Elem k = 0; k < n; ++k) comm.insert(K.sub(k, K.involve(k)));

    for (Ring::Elem x = 0; x < n; ++x) {
        for (Ring::Elem y = 0; y < n; ++y) {
            if (impl->table[static_cast<std::size_t>(x) * n + y] != 0xffff) continue;
            if (impl->reps.size() >= 0xffff) fail("CarrierTooLarge", "too many classes");
            auto code = static_cast<std::uint16_t>(impl->reps.size());
            impl->reps.push_back(HeisElem{x, y});
            for (Ring::Elem c : comm)
                impl->table[static_cast<std::size_t>(x) * n + K.add(y, c)] = code;
        }
    }

    UniversalStructure out;
    out.reps = impl->reps;
    out.class_table = impl->table;

    QuadStructure& S = out.ring.base;
    S.R = &K;
    S.size = static_cast<std::uint16_t>(impl->reps.size());
    S.zero = impl->cls(HeisElem{0, 0});
    S.add = [impl](std::uint16_t a, std::uint16_t b) {
        return impl->cls(heis_add(*impl->K, impl->reps[a], impl->reps[b]));
    };
    S.neg = [impl](std::uint16_t a) { return impl->cls(heis_neg(*impl->K, impl->reps[a])); };
    S.phi = [impl](Ring::Elem k) { return impl->cls(heis_phi(*impl->K, k)); };
    S.tr = [impl](std::uint16_t a) { return heis_tr(*impl->K, impl->reps[a]); };
    S.act = [impl](std::uint16_t a, Ring::Elem k) {
        return impl->cls(heis_act(*impl->K, impl->reps[a], k));
    };
    out.ring.one = impl->cls(HeisElem{K.one(), 0});
    out.ring.mul = [impl](std::uint16_t a, std::uint16_t b) {
        return impl->cls(heis_mul(*impl->K, impl->reps[a], impl->reps[b]));
    };
    return out;
}

QuadAlgebraBinding universal_binding(const UniversalStructure& AK, const QuadStructure& AR) {
    if (!AK.ring.base.R->same_as(*AR.R)) fail("RingMismatch", "binding needs one ground ring");
    QuadAlgebraBinding B;
    B.scalars = &AK.ring;
    B.module = &AR;
    const std::vector<HeisElem>* reps = &AK.reps;
    const QuadStructure* M = &AR;
    B.act = [reps, M](std::uint16_t aK, std::uint16_t aR) {
        const Ring& K = *M->R;
        const HeisElem& rep = (*reps)[aK];
        std::uint16_t moved = M->act(aR, rep.x);
        Ring::Elem w = K.mul(rep.y, M->tr(aR));
        return M->add(moved, M->phi(w));
    };
    return B;
}

namespace {

// Runs a law over all tuples when the space is small enough, otherwise over
// a seeded sample. body returns an empty string on success, a witness on
// failure; the first witness stops the run.
template <class Body>
CheckEntry run_law(const std::string& law, std::uint64_t seed, std::size_t samples,
                   std::uint64_t na, std::uint64_t nb, std::uint64_t nc, const Body& body) {
    CheckEntry e;
    e.law = law;
    const std::uint64_t total = na * nb * nc;
    if (total <= (std::uint64_t{1} << 16)) {
        for (std::uint64_t a = 0; a < na && e.ok; ++a)
            for (std::uint64_t b = 0; b < nb && e.ok; ++b)
                for (std::uint64_t c = 0; c < nc && e.ok; ++c) {
                    ++e.cases;
                    std::string w = body(a, b, c);
                    if (!w.empty()) {
                        e.ok = false;
                        e.witness = w;
                    }
                }
    } else {
        Rng rng(mix_seed(seed, law));
        for (std::size_t s = 0; s < samples && e.ok; ++s) {
            ++e.cases;
            std::string w = body(rng.below(na), rng.below(nb), rng.below(nc));
            if (!w.empty()) {
                e.ok = false;
                e.witness = w;
            }
        }
    }
    return e;
}

} // namespace

CheckReport verify_QS(const QuadStructure& S, std::uint64_t seed, std::size_t samples) {
    const Ring& R = *S.R;
    CheckReport rep;

    rep.entries.push_back(run_law(
        "QS1 phi(r) = phi(conj(r) lambda)", seed, samples, R.size(), 1, 1,
        [&](std::uint64_t r, std::uint64_t, std::uint64_t) -> std::string {
            auto e = static_cast<Ring::Elem>(r);
            if (S.phi(e) == S.phi(R.mul(R.involve(e), R.lambda()))) return {};
            return "r=" + R.to_string(e);
        }));

    rep.entries.push_back(run_law(
        "QS2 tr(phi(r)) = r + conj(r) lambda", seed, samples, R.size(), 1, 1,
        [&](std::uint64_t r, std::uint64_t, std::uint64_t) -> std::string {
            auto e = static_cast<Ring::Elem>(r);
            Ring::Elem want = R.add(e, R.mul(R.involve(e), R.lambda()));
            if (S.tr(S.phi(e)) == want) return {};
            return "r=" + R.to_string(e) + " got=" + R.to_string(S.tr(S.phi(e))) +
                   " want=" + R.to_string(want);
        }));

    rep.entries.push_back(run_law(
        "QS3 tr(a) = conj(tr(a)) lambda", seed, samples, S.size, 1, 1,
        [&](std::uint64_t a, std::uint64_t, std::uint64_t) -> std::string {
            Ring::Elem t = S.tr(static_cast<std::uint16_t>(a));
            if (t == R.mul(R.involve(t), R.lambda())) return {};
            return "a=#" + std::to_string(a) + " tr=" + R.to_string(t);
        }));

    rep.entries.push_back(run_law(
        "QS4 a.(r+r') = a.r + phi(conj(r') tr(a) r) + a.r'", seed, samples, S.size, R.size(),
        R.size(), [&](std::uint64_t ai, std::uint64_t ri, std::uint64_t si) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto r = static_cast<Ring::Elem>(ri);
            auto s = static_cast<Ring::Elem>(si);
            std::uint16_t lhs = S.act(a, R.add(r, s));
            Ring::Elem mid = R.mul(R.mul(R.involve(s), S.tr(a)), r);
            std::uint16_t rhs = S.add(S.add(S.act(a, r), S.phi(mid)), S.act(a, s));
            if (lhs == rhs) return {};
            return "a=#" + std::to_string(ai) + " r=" + R.to_string(r) + " r'=" + R.to_string(s);
        }));

    rep.entries.push_back(run_law(
        "QS5 phi(tr(a)) = a + a.(-1)", seed, samples, S.size, 1, 1,
        [&](std::uint64_t ai, std::uint64_t, std::uint64_t) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            std::uint16_t lhs = S.phi(S.tr(a));
            std::uint16_t rhs = S.add(a, S.act(a, R.neg(R.one())));
            if (lhs == rhs) return {};
            return "a=#" + std::to_string(ai);
        }));

    return rep;
}

CheckReport verify_QR(const QuadRing& Q, std::uint64_t seed, std::size_t samples) {
    const QuadStructure& S = Q.base;
    const Ring& R = *S.R;
    CheckReport rep;

    rep.entries.push_back(run_law(
        "QR1 a (a'.k) = (a a').k", seed, samples, S.size, S.size, R.size(),
        [&](std::uint64_t ai, std::uint64_t bi, std::uint64_t ki) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto b = static_cast<std::uint16_t>(bi);
            auto k = static_cast<Ring::Elem>(ki);
            if (Q.mul(a, S.act(b, k)) == S.act(Q.mul(a, b), k)) return {};
            return "a=#" + std::to_string(ai) + " a'=#" + std::to_string(bi) +
                   " k=" + R.to_string(k);
        }));

    rep.entries.push_back(run_law(
        "QR2 a phi(k) = phi(tr(a) k)", seed, samples, S.size, R.size(), 1,
        [&](std::uint64_t ai, std::uint64_t ki, std::uint64_t) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto k = static_cast<Ring::Elem>(ki);
            if (Q.mul(a, S.phi(k)) == S.phi(R.mul(S.tr(a), k))) return {};
            return "a=#" + std::to_string(ai) + " k=" + R.to_string(k);
        }));

    rep.entries.push_back(run_law(
        "QR3 tr(1) = 1", seed, samples, 1, 1, 1,
        [&](std::uint64_t, std::uint64_t, std::uint64_t) -> std::string {
            if (S.tr(Q.one) == R.one()) return {};
            return "tr(1)=" + R.to_string(S.tr(Q.one));
        }));

    rep.entries.push_back(run_law(
        "QR4 tr(a a') = tr(a) tr(a')", seed, samples, S.size, S.size, 1,
        [&](std::uint64_t ai, std::uint64_t bi, std::uint64_t) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto b = static_cast<std::uint16_t>(bi);
            if (S.tr(Q.mul(a, b)) == R.mul(S.tr(a), S.tr(b))) return {};
            return "a=#" + std::to_string(ai) + " a'=#" + std::to_string(bi);
        }));

    return rep;
}

CheckReport verify_QA(const QuadAlgebraBinding& B, std::uint64_t seed, std::size_t samples) {
    const QuadStructure& AK = B.scalars->base;
    const QuadStructure& AR = *B.module;
    if (!AK.R->same_as(*AR.R)) fail("RingMismatch", "binding needs one ground ring");
    const Ring& R = *AR.R;
    CheckReport rep;

    rep.entries.push_back(run_law(
        "QA1 aK (aR.r) = (aK aR).r", seed, samples, AK.size, AR.size, R.size(),
        [&](std::uint64_t ai, std::uint64_t mi, std::uint64_t ri) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto m = static_cast<std::uint16_t>(mi);
            auto r = static_cast<Ring::Elem>(ri);
            if (B.act(a, AR.act(m, r)) == AR.act(B.act(a, m), r)) return {};
            return "aK=#" + std::to_string(ai) + " aR=#" + std::to_string(mi) +
                   " r=" + R.to_string(r);
        }));

    rep.entries.push_back(run_law(
        "QA2 (aK.k) aR = (aK aR).k", seed, samples, AK.size, AR.size, R.size(),
        [&](std::uint64_t ai, std::uint64_t mi, std::uint64_t ki) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto m = static_cast<std::uint16_t>(mi);
            auto k = static_cast<Ring::Elem>(ki);
            if (B.act(AK.act(a, k), m) == AR.act(B.act(a, m), k)) return {};
            return "aK=#" + std::to_string(ai) + " aR=#" + std::to_string(mi) +
                   " k=" + R.to_string(k);
        }));

    rep.entries.push_back(run_law(
        "QA3 aK phiR(r) = phiR(trK(aK) r)", seed, samples, AK.size, R.size(), 1,
        [&](std::uint64_t ai, std::uint64_t ri, std::uint64_t) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto r = static_cast<Ring::Elem>(ri);
            if (B.act(a, AR.phi(r)) == AR.phi(R.mul(AK.tr(a), r))) return {};
            return "aK=#" + std::to_string(ai) + " r=" + R.to_string(r);
        }));

    rep.entries.push_back(run_law(
        "QA4 phiK(k) aR = phiR(k trR(aR))", seed, samples, R.size(), AR.size, 1,
        [&](std::uint64_t ki, std::uint64_t mi, std::uint64_t) -> std::string {
            auto k = static_cast<Ring::Elem>(ki);
            auto m = static_cast<std::uint16_t>(mi);
            if (B.act(AK.phi(k), m) == AR.phi(R.mul(k, AR.tr(m)))) return {};
            return "k=" + R.to_string(k) + " aR=#" + std::to_string(mi);
        }));

    rep.entries.push_back(run_law(
        "QA5 trR(aK aR) = trK(aK) trR(aR)", seed, samples, AK.size, AR.size, 1,
        [&](std::uint64_t ai, std::uint64_t mi, std::uint64_t) -> std::string {
            auto a = static_cast<std::uint16_t>(ai);
            auto m = static_cast<std::uint16_t>(mi);
            if (AR.tr(B.act(a, m)) == R.mul(AK.tr(a), AR.tr(m))) return {};
            return "aK=#" + std::to_string(ai) + " aR=#" + std::to_string(mi);
        }));

    return rep;
}

namespace {

constexpr long long kPolyBound = 1000000;

void check_small(const ZPair& a) {
    if (a.x > kPolyBound || a.x < -kPolyBound || a.y > kPolyBound || a.y < -kPolyBound)
        fail("Overflow", "pair coordinates exceed the supported range");
}

struct IPoly {
    __int128 c0 = 0;
    __int128 c1 = 0;
};

IPoly ipoly_of(__int128 x, __int128 y) {
    // x + (y + x(x-1)/2) T; x(x-1) is even for every integer x
    IPoly p;
    p.c0 = x;
    p.c1 = y + x * (x - 1) / 2;
    return p;
}

IPoly ipoly_add(const IPoly& a, const IPoly& b) { return IPoly{a.c0 + b.c0, a.c1 + b.c1}; }

IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
    // T^2 = 2T
    return IPoly{a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0 + 2 * a.c1 * b.c1};
}

} // namespace

ZPair zpair_add(const ZPair& a, const ZPair& b) {
    check_small(a);
    check_small(b);
    return ZPair{a.x + b.x, a.y + b.y - a.x * b.x};
}

ZPair zpair_mul(const ZPair& a, const ZPair& b) {
    check_small(a);
    check_small(b);
    return ZPair{a.x * b.x, a.x * a.x * b.y + b.x * b.x * a.y + 2 * a.y * b.y};
}

ZPoly heis_poly_image(const ZPair& a) {
    check_small(a);
    IPoly p = ipoly_of(a.x, a.y);
    return ZPoly{static_cast<long long>(p.c0), static_cast<long long>(p.c1)};
}

bool heis_poly_check(const ZPair& a, const ZPair& b) {
    check_small(a);
    check_small(b);
    IPoly pa = ipoly_of(a.x, a.y);
    IPoly pb = ipoly_of(b.x, b.y);

    __int128 sx = static_cast<__int128>(a.x) + b.x;
    __int128 sy = static_cast<__int128>(a.y) + b.y - static_cast<__int128>(a.x) * b.x;
    IPoly psum = ipoly_of(sx, sy);
    IPoly want_sum = ipoly_add(pa, pb);
    if (psum.c0 != want_sum.c0 || psum.c1 != want_sum.c1) return false;

    __int128 px = static_cast<__int128>(a.x) * b.x;
    __int128 py = static_cast<__int128>(a.x) * a.x * b.y + static_cast<__int128>(b.x) * b.x * a.y +
                  2 * static_cast<__int128>(a.y) * b.y;
    IPoly pprod = ipoly_of(px, py);
    IPoly want_prod = ipoly_mul(pa, pb);
    return pprod.c0 == want_prod.c0 && pprod.c1 == want_prod.c1;
}

} // namespace oddu

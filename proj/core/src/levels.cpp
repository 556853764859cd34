#include "oddu/levels.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <utility>

namespace oddu {

namespace {

unsigned rk(const EndoContext& ctx, int i) {
    return ctx.space.profile().block_rank(i);
}
unsigned st(const EndoContext& ctx, int i) {
    return ctx.space.profile().block_start(i);
}

void need_block(const EndoContext& ctx, int i) {
    if (std::abs(i) > ctx.bl()) fail("BadBlock", "block index out of range");
}

Mat put_block(const EndoContext& ctx, int i, int j, const Mat& c) {
    std::vector<Ring::Elem> entries;
    entries.reserve(static_cast<std::size_t>(c.rows()) * c.cols());
    for (unsigned u = 0; u < c.rows(); ++u)
        for (unsigned v = 0; v < c.cols(); ++v)
            entries.push_back(c.at(u, v));
    return block_matrix(ctx, i, j, entries);
}

bool dbl_is_zero(const DoubleElem& a) {
    return mat_is_zero(a.x) && mat_is_zero(a.y);
}

bool hzero(const HElem& h) {
    return mat_is_zero(h.x) && mat_is_zero(h.y) && mat_is_zero(h.z);
}

std::string hkey(const HElem& h) {
    return mat_key(h.x) + mat_key(h.y) + mat_key(h.z);
}

HElem h_sub_(const EndoContext& ctx, const HElem& a, const HElem& b) {
    return h_add(ctx, a, h_neg(ctx, b));
}

// the unique block an element of H sits in, nothing for 0 or mixed support
std::optional<int> h_block_of(const EndoContext& ctx, const HElem& h) {
    for (int t = -ctx.bl(); t <= ctx.bl(); ++t)
        if (h_in_block(ctx, h, t)) return t;
    return std::nullopt;
}

ZRow flat_pair(const EndoContext& ctx, int i, int j, const DoubleElem& a) {
    const Ring& K = ctx.ring();
    unsigned ri = rk(ctx, i), rj = rk(ctx, j), si = st(ctx, i), sj = st(ctx, j);
    ZRow row;
    row.reserve(2 * static_cast<std::size_t>(ri) * rj * K.rank());
    for (const Mat* m : {&a.x, &a.y})
        for (unsigned u = 0; u < ri; ++u)
            for (unsigned v = 0; v < rj; ++v) {
                auto co = K.coords(m->at(si + u, sj + v));
                row.insert(row.end(), co.begin(), co.end());
            }
    return row;
}

bool block_nonzero(const EndoContext& ctx, int i, int j, const DoubleElem& a) {
    unsigned ri = rk(ctx, i), rj = rk(ctx, j), si = st(ctx, i), sj = st(ctx, j);
    for (unsigned u = 0; u < ri; ++u)
        for (unsigned v = 0; v < rj; ++v)
            if (a.x.at(si + u, sj + v) != 0 || a.y.at(si + u, sj + v) != 0)
                return true;
    return false;
}

DoubleElem unflat_pair(const EndoContext& ctx, int i, int j, const ZRow& row) {
    const Ring& K = ctx.ring();
    unsigned ri = rk(ctx, i), rj = rk(ctx, j);
    std::size_t half = row.size() / 2;
    ZRow rx(row.begin(), row.begin() + static_cast<long>(half));
    ZRow ry(row.begin() + static_cast<long>(half), row.end());
    return DoubleElem{put_block(ctx, i, j, mat_unflatten(K, ri, rj, rx)),
                      put_block(ctx, i, j, mat_unflatten(K, ri, rj, ry))};
}

// code odometer over `slots` ring elements; emits at least the zero tuple
template <class F>
void for_codes(const Ring& K, std::size_t slots, F&& f) {
    std::vector<Ring::Elem> codes(slots, 0);
    const std::size_t n = K.size();
    for (;;) {
        f(codes);
        std::size_t p = 0;
        while (p < slots) {
            if (static_cast<std::size_t>(++codes[p]) < n) break;
            codes[p] = 0;
            ++p;
        }
        if (p == slots) return;
    }
}

void carrier_guard(const Ring& K, std::size_t slots, std::size_t cap,
                   const char* what) {
    unsigned long long total = 1;
    for (std::size_t t = 0; t < slots; ++t) {
        total *= K.size();
        if (total > cap) fail("CarrierTooLarge", std::string(what) +
                                  " carrier would exceed the cap");
    }
}

Mat mat_from_codes(const Ring& K, unsigned rows, unsigned cols,
                   const std::vector<Ring::Elem>& codes, std::size_t off) {
    Mat m(K, rows, cols);
    for (unsigned u = 0; u < rows; ++u)
        for (unsigned v = 0; v < cols; ++v)
            m.at(u, v) = codes[off + static_cast<std::size_t>(u) * cols + v];
    return m;
}

// compact H slots placed at their block support
Mat x_place(const EndoContext& ctx, int i, const Mat& c) {
    Mat x(ctx.ring(), ctx.r0(), ctx.dim());
    unsigned si = st(ctx, i);
    for (unsigned u = 0; u < c.rows(); ++u)
        for (unsigned v = 0; v < c.cols(); ++v)
            x.at(u, si + v) = c.at(u, v);
    return x;
}

Mat z_place(const EndoContext& ctx, int i, const Mat& c) {
    Mat z(ctx.ring(), ctx.dim(), ctx.r0());
    unsigned sm = st(ctx, -i);
    for (unsigned u = 0; u < c.rows(); ++u)
        for (unsigned v = 0; v < c.cols(); ++v)
            z.at(sm + u, v) = c.at(u, v);
    return z;
}

std::string block_label(const char* part, int i, int j) {
    return std::string(part) + "(" + std::to_string(i) + "," +
           std::to_string(j) + ")";
}

// ---------------------------------------------------------------- span data

struct TGen {
    int i, j;
    DoubleElem a;
};

struct TMul {
    int u, v;
    bool scalar;
    DoubleElem m;
};

std::vector<TGen> tagged_gens(const EndoContext& ctx, const SubmoduleBasis& I) {
    std::vector<TGen> out;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j)
            for (DoubleElem& a : I.block_gens(i, j))
                out.push_back(TGen{i, j, std::move(a)});
    return out;
}

// the fixed multipliers K + (1-e0)C(1-e0) + pi(Lambda) + inv(pi(Lambda));
// the dynamic summand I joins at the use sites
std::vector<TMul> fixed_mults(const EndoContext& ctx, const GammaData& lam) {
    const Ring& K = ctx.ring();
    std::vector<TMul> out;
    for (Ring::Elem k : K.basis())
        out.push_back(TMul{0, 0, true,
                           dbl_of(ctx, Mat::scalar(K, ctx.dim(), k))});
    int l = ctx.bl();
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (int v = -l; v <= l; ++v) {
            if (v == 0) continue;
            for (unsigned p = 0; p < rk(ctx, u); ++p)
                for (unsigned q = 0; q < rk(ctx, v); ++q)
                    for (Ring::Elem b : K.basis()) {
                        Mat c(K, ctx.dim(), ctx.dim());
                        c.at(st(ctx, u) + p, st(ctx, v) + q) = b;
                        out.push_back(TMul{u, v, false, dbl_of(ctx, c)});
                    }
        }
    }
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : lam.block(i).elems()) {
            if (hzero(h)) continue;
            DoubleElem p = h_pi(ctx, h);
            if (dbl_is_zero(p)) continue;
            out.push_back(TMul{0, i, false, p});
            out.push_back(TMul{-i, 0, false, dbl_conj(ctx, p)});
        }
    }
    return out;
}

std::vector<DoubleElem> class_module_gens(const EndoContext& ctx,
                                          const AugLevel& L) {
    std::vector<DoubleElem> out;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j) {
            if (j == 0) continue;
            for (DoubleElem& a : L.I.block_gens(i, j))
                out.push_back(std::move(a));
        }
    return out;
}

std::vector<HElem> class_group_elems(const EndoContext& ctx, const AugLevel& L) {
    std::vector<HElem> out;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) out.push_back(h);
    }
    return out;
}

// closes the generators under every level axiom that forces new data; the
// column-0 equality is not forced from below and is left to validation.
// Worklist over the canonical rows of the module part and the elements of
// the group part: both grow monotonically, and every axiom pairs one of them
// against fixed data or against each other, so pairing each new item once
// against everything seen reaches the same fixpoint as whole-level rounds.
// A seed must already be closed; only its interactions with the new
// generators are replayed.
AugLevel close_level(const EndoContext& ctx, const GammaData& lam,
                     const AugLevel* seed,
                     const std::vector<DoubleElem>& mgens,
                     const std::vector<HElem>& hgens, std::size_t cap) {
    AugLevel L = seed ? *seed : AugLevel{SubmoduleBasis(ctx), make_gamma(ctx)};
    std::vector<TMul> fixed = fixed_mults(ctx, lam);
    int l = ctx.bl();

    std::vector<TGen> mrows;
    std::vector<std::pair<int, HElem>> hrows;
    std::vector<DoubleElem> pis;
    std::set<std::string> mdone, hdone;
    std::size_t mcur = 0, hcur = 0;

    auto row_key = [](int i, int j, const ZRow& row) {
        std::string k = std::to_string(i) + "|" + std::to_string(j) + "|";
        for (unsigned c : row) k += static_cast<char>('0' + c % 64);
        return k;
    };
    auto enqueue_block = [&](int i, int j) {
        for (DoubleElem& a : L.I.block_gens(i, j)) {
            ZRow row = flat_pair(ctx, i, j, a);
            if (mdone.insert(row_key(i, j, row)).second)
                mrows.push_back(TGen{i, j, std::move(a)});
        }
    };
    auto push_m = [&](const DoubleElem& a) {
        if (dbl_is_zero(a)) return;
        std::vector<std::pair<int, int>> grown;
        if (!L.I.grow(a, &grown)) return;
        for (auto& [i, j] : grown) enqueue_block(i, j);
    };
    auto push_h = [&](int t, const HElem& h) {
        if (hzero(h)) return;
        if (!L.gamma.block(t).grow(h, cap)) return;
        for (const HElem& e : L.gamma.block(t).elems()) {
            if (hzero(e)) continue;
            if (hdone.insert(std::to_string(t) + "|" + hkey(e)).second)
                hrows.emplace_back(t, e);
        }
    };

    if (seed) {
        // mark the seed's data as seen but processed
        for (TGen& g : tagged_gens(ctx, L.I)) {
            mdone.insert(row_key(g.i, g.j, flat_pair(ctx, g.i, g.j, g.a)));
            mrows.push_back(std::move(g));
        }
        for (int i = -l; i <= l; ++i)
            for (const HElem& h : L.gamma.block(i).elems()) {
                if (hzero(h)) continue;
                hdone.insert(std::to_string(i) + "|" + hkey(h));
                hrows.emplace_back(i, h);
                DoubleElem p = h_pi(ctx, h);
                if (!dbl_is_zero(p)) pis.push_back(std::move(p));
            }
        mcur = mrows.size();
        hcur = hrows.size();
    }

    for (const DoubleElem& a : mgens) push_m(a);
    for (const HElem& h : hgens) {
        if (hzero(h)) continue;
        std::optional<int> t = h_block_of(ctx, h);
        if (!t) fail("BadBlock", "group generator is not supported in a single block");
        push_h(*t, h);
    }

    while (mcur < mrows.size() || hcur < hrows.size()) {
        if (mcur < mrows.size()) {
            TGen g = mrows[mcur++];
            for (const TMul& m : fixed) {
                if (!m.scalar && g.j != m.u) continue;
                push_m(dbl_mul(g.a, m.m));
            }
            // both orders here; later rows meet this one on their own turn
            for (std::size_t s = 0; s < mrows.size(); ++s) {
                if (g.j == mrows[s].i) push_m(dbl_mul(g.a, mrows[s].a));
                if (mrows[s].j == g.i) push_m(dbl_mul(mrows[s].a, g.a));
            }
            if (g.j == -g.i) push_h(g.j, phi_H(ctx, g.a));
            if (g.i != 0)
                for (const HElem& h : lam.block(g.i).elems()) {
                    if (hzero(h)) continue;
                    push_h(g.j, h_act(ctx, h, g.a));
                }
            for (std::size_t s = 0; s < hrows.size(); ++s)
                if (hrows[s].first == g.i)
                    push_h(g.j, h_act(ctx, hrows[s].second, g.a));
        } else {
            auto [t, h] = hrows[hcur++];
            DoubleElem p = h_pi(ctx, h);
            push_m(p);
            push_m(h_tr(ctx, h));
            if (!dbl_is_zero(p)) {
                DoubleElem pc = dbl_conj(ctx, p);
                push_m(dbl_mul(pc, p));
                for (const DoubleElem& q : pis) {
                    push_m(dbl_mul(pc, q));
                    push_m(dbl_mul(dbl_conj(ctx, q), p));
                }
                pis.push_back(std::move(p));
            }
            for (const TMul& m : fixed) {
                if (!m.scalar && m.u != t) continue;
                push_h(m.scalar ? t : m.v, h_act(ctx, h, m.m));
            }
            for (std::size_t s = 0; s < mrows.size(); ++s)
                if (mrows[s].i == t)
                    push_h(mrows[s].j, h_act(ctx, h, mrows[s].a));
        }
    }
    return L;
}

AugLevel close_level(const EndoContext& ctx, const GammaData& lam,
                     const std::vector<DoubleElem>& mgens,
                     const std::vector<HElem>& hgens, std::size_t cap) {
    return close_level(ctx, lam, nullptr, mgens, hgens, cap);
}

CheckReport check_impl(const EndoContext& ctx, const GammaData& lam,
                       const AugLevel& L, std::size_t cap);

void validate_level(const EndoContext& ctx, const GammaData& lam,
                    const AugLevel& L, std::size_t cap, const char* who) {
    CheckReport rep = check_impl(ctx, lam, L, cap);
    for (const CheckEntry& e : rep.entries)
        if (!e.ok)
            fail("NotALevel", std::string(who) + ": " + e.law +
                                  " fails at " + e.witness);
}

CheckReport check_impl(const EndoContext& ctx, const GammaData& lam,
                       const AugLevel& L, std::size_t cap) {
    CheckReport rep;
    rep.entries.resize(6);
    CheckEntry& e1 = rep.entries[0];
    CheckEntry& e2 = rep.entries[1];
    CheckEntry& e3 = rep.entries[2];
    CheckEntry& e4 = rep.entries[3];
    CheckEntry& e5 = rep.entries[4];
    CheckEntry& e6 = rep.entries[5];
    e1.law = "I = inv(I)";
    e2.law = "I * span <= I";
    e3.law = "pi(Gamma) <= I";
    e4.law = "tr(Gamma) + inv(pi(Gamma)) pi(Gamma) <= I";
    e5.law = "Gamma * span + Lambda * I + phi(I) <= Gamma";
    e6.law = "e0 I (1-e0) = pi(Gamma (1-e0))";

    auto miss = [](CheckEntry& e, const std::string& w) {
        if (e.ok) {
            e.ok = false;
            e.witness = w;
        }
    };

    int l = ctx.bl();
    std::vector<TGen> gens = tagged_gens(ctx, L.I);
    std::vector<TMul> fixed = fixed_mults(ctx, lam);

    for (const TGen& g : gens) {
        ++e1.cases;
        if (!L.I.member(dbl_conj(ctx, g.a)))
            miss(e1, block_label("I", g.i, g.j));
    }

    for (const TGen& g : gens) {
        for (const TMul& m : fixed) {
            if (!m.scalar && g.j != m.u) continue;
            ++e2.cases;
            if (!L.I.member(dbl_mul(g.a, m.m)))
                miss(e2, block_label("I", g.i, g.j) + " * mult(" +
                             std::to_string(m.u) + "," + std::to_string(m.v) + ")");
        }
        for (const TGen& g2 : gens) {
            if (g.j != g2.i) continue;
            ++e2.cases;
            if (!L.I.member(dbl_mul(g.a, g2.a)))
                miss(e2, block_label("I", g.i, g.j) + " * " +
                             block_label("I", g2.i, g2.j));
        }
    }

    std::vector<std::pair<int, DoubleElem>> pis;
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : L.gamma.block(i).elems()) {
            if (hzero(h)) continue;
            DoubleElem p = h_pi(ctx, h);
            ++e3.cases;
            if (!L.I.member(p)) miss(e3, "Gamma block " + std::to_string(i));
            ++e4.cases;
            if (!L.I.member(h_tr(ctx, h)))
                miss(e4, "tr over Gamma block " + std::to_string(i));
            if (!dbl_is_zero(p)) pis.emplace_back(i, std::move(p));
        }
    for (const auto& [i1, p] : pis)
        for (const auto& [i2, q] : pis) {
            ++e4.cases;
            if (!L.I.member(dbl_mul(dbl_conj(ctx, p), q)))
                miss(e4, "pi product over Gamma blocks " + std::to_string(i1) +
                             "," + std::to_string(i2));
        }

    for (int i = -l; i <= l; ++i)
        for (const HElem& h : L.gamma.block(i).elems()) {
            if (hzero(h)) continue;
            for (const TMul& m : fixed) {
                if (!m.scalar && m.u != i) continue;
                HElem g2 = h_act(ctx, h, m.m);
                if (hzero(g2)) continue;
                int t = m.scalar ? i : m.v;
                ++e5.cases;
                if (!L.gamma.block(t).member(g2))
                    miss(e5, "Gamma block " + std::to_string(i) + " * mult(" +
                                 std::to_string(m.u) + "," + std::to_string(m.v) +
                                 ")");
            }
            for (const TGen& g : gens) {
                if (g.i != i) continue;
                HElem g2 = h_act(ctx, h, g.a);
                if (hzero(g2)) continue;
                ++e5.cases;
                if (!L.gamma.block(g.j).member(g2))
                    miss(e5, "Gamma block " + std::to_string(i) + " * " +
                                 block_label("I", g.i, g.j));
            }
        }
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (const HElem& h : lam.block(u).elems()) {
            if (hzero(h)) continue;
            for (const TGen& g : gens) {
                if (g.i != u) continue;
                HElem g2 = h_act(ctx, h, g.a);
                if (hzero(g2)) continue;
                ++e5.cases;
                if (!L.gamma.block(g.j).member(g2))
                    miss(e5, "Lambda block " + std::to_string(u) + " * " +
                                 block_label("I", g.i, g.j));
            }
        }
    }
    for (const TGen& g : gens) {
        if (g.j != -g.i) continue;
        HElem p = phi_H(ctx, g.a);
        if (hzero(p)) continue;
        ++e5.cases;
        if (!L.gamma.block(g.j).member(p))
            miss(e5, "phi over " + block_label("I", g.i, g.j));
    }

    const Ring& K = ctx.ring();
    for (int j = -l; j <= l; ++j) {
        if (j == 0) continue;
        unsigned w = 2 * rk(ctx, 0) * rk(ctx, j) * K.rank();
        if (w == 0) continue;
        HowellBasis span(K.modulus(), w);
        for (const HElem& h : L.gamma.block(j).elems()) {
            if (hzero(h)) continue;
            span.add(flat_pair(ctx, 0, j, h_pi(ctx, h)));
        }
        HowellBasis have(K.modulus(), w);
        for (const DoubleElem& a : L.I.block_gens(0, j))
            have.add(flat_pair(ctx, 0, j, a));
        ++e6.cases;
        if (!span.same_span(have)) miss(e6, "column " + std::to_string(j));
    }
    (void)cap;
    return rep;
}

} // namespace

// ------------------------------------------------------------ SubmoduleBasis

SubmoduleBasis::SubmoduleBasis(const EndoContext& ctx)
    : ctx_(&ctx), l_(ctx.bl()) {
    const Ring& K = ctx.ring();
    int n = 2 * l_ + 1;
    blocks_.reserve(static_cast<std::size_t>(n) * n);
    for (int i = -l_; i <= l_; ++i)
        for (int j = -l_; j <= l_; ++j)
            blocks_.emplace_back(K.modulus(),
                                 2 * rk(ctx, i) * rk(ctx, j) * K.rank());
}

const HowellBasis& SubmoduleBasis::at(int i, int j) const {
    need_block(*ctx_, i);
    need_block(*ctx_, j);
    int n = 2 * l_ + 1;
    return blocks_[static_cast<std::size_t>(i + l_) * n + (j + l_)];
}

HowellBasis& SubmoduleBasis::at(int i, int j) {
    return const_cast<HowellBasis&>(
        static_cast<const SubmoduleBasis*>(this)->at(i, j));
}

bool SubmoduleBasis::grow(const DoubleElem& a,
                          std::vector<std::pair<int, int>>* grown) {
    auto pass = [&](const DoubleElem& cur) {
        bool grew = false;
        for (int i = -l_; i <= l_; ++i)
            for (int j = -l_; j <= l_; ++j) {
                if (!block_nonzero(*ctx_, i, j, cur)) continue;
                if (at(i, j).grow(flat_pair(*ctx_, i, j, cur))) {
                    grew = true;
                    if (grown) grown->emplace_back(i, j);
                }
            }
        return grew;
    };
    // a member element has its involution image inside as well, since every
    // successful insertion also inserted the image
    if (!pass(a)) return false;
    pass(dbl_conj(*ctx_, a));
    return true;
}

bool SubmoduleBasis::member(const DoubleElem& a) const {
    for (int i = -l_; i <= l_; ++i)
        for (int j = -l_; j <= l_; ++j) {
            if (!block_nonzero(*ctx_, i, j, a)) continue;
            if (!at(i, j).contains(flat_pair(*ctx_, i, j, a))) return false;
        }
    return true;
}

bool SubmoduleBasis::contains(const SubmoduleBasis& o) const {
    for (std::size_t t = 0; t < blocks_.size(); ++t)
        if (!blocks_[t].contains_all(o.blocks_[t])) return false;
    return true;
}

bool SubmoduleBasis::same(const SubmoduleBasis& o) const {
    for (std::size_t t = 0; t < blocks_.size(); ++t)
        if (!blocks_[t].same_span(o.blocks_[t])) return false;
    return true;
}

std::vector<DoubleElem> SubmoduleBasis::block_gens(int i, int j) const {
    std::vector<DoubleElem> out;
    for (const ZRow& row : at(i, j).rows())
        out.push_back(unflat_pair(*ctx_, i, j, row));
    return out;
}

std::vector<DoubleElem> SubmoduleBasis::gens() const {
    std::vector<DoubleElem> out;
    for (int i = -l_; i <= l_; ++i)
        for (int j = -l_; j <= l_; ++j)
            for (DoubleElem& a : block_gens(i, j))
                out.push_back(std::move(a));
    return out;
}

unsigned long long SubmoduleBasis::block_count(int i, int j) const {
    const HowellBasis& hb = at(i, j);
    return hb.width() == 0 ? 1 : hb.count();
}

bool SubmoduleBasis::block_trivial(int i, int j) const {
    return at(i, j).rows().empty();
}

// --------------------------------------------------------------- HBlockSet

HBlockSet::HBlockSet(const EndoContext& ctx, int i) : ctx_(&ctx), i_(i) {
    need_block(ctx, i);
    elems_.push_back(h_zero(ctx));
    keys_.insert(hkey(elems_.front()));
}

bool HBlockSet::member(const HElem& h) const {
    return keys_.count(hkey(h)) != 0;
}

bool HBlockSet::grow(const HElem& h, std::size_t cap) {
    if (!h_in_block(*ctx_, h, i_))
        fail("BadBlock", "element lies outside block " + std::to_string(i_));
    if (member(h)) return false;

    std::vector<HElem> steps;
    std::set<std::string> skeys;
    auto push_step = [&](const HElem& s) {
        if (hzero(s)) return;
        if (skeys.insert(hkey(s)).second) steps.push_back(s);
    };
    for (const HElem& s : elems_) {
        push_step(s);
        push_step(h_neg(*ctx_, s));
    }
    push_step(h);
    push_step(h_neg(*ctx_, h));

    std::vector<HElem> out{h_zero(*ctx_)};
    std::set<std::string> okeys{hkey(out.front())};
    for (std::size_t next = 0; next < out.size(); ++next) {
        HElem base = out[next];
        for (const HElem& s : steps) {
            HElem g = h_add(*ctx_, base, s);
            if (!okeys.insert(hkey(g)).second) continue;
            if (out.size() + 1 > cap)
                fail("CapExceeded", "block closure would exceed the cap");
            out.push_back(std::move(g));
        }
    }
    elems_ = std::move(out);
    keys_ = std::move(okeys);
    return true;
}

bool HBlockSet::contains(const HBlockSet& o) const {
    return std::includes(keys_.begin(), keys_.end(), o.keys_.begin(),
                         o.keys_.end());
}

bool HBlockSet::same(const HBlockSet& o) const { return keys_ == o.keys_; }

HBlockSet& GammaData::block(int i) {
    int l = (static_cast<int>(blocks.size()) - 1) / 2;
    if (std::abs(i) > l) fail("BadBlock", "block index out of range");
    return blocks[static_cast<std::size_t>(i + l)];
}

const HBlockSet& GammaData::block(int i) const {
    int l = (static_cast<int>(blocks.size()) - 1) / 2;
    if (std::abs(i) > l) fail("BadBlock", "block index out of range");
    return blocks[static_cast<std::size_t>(i + l)];
}

GammaData make_gamma(const EndoContext& ctx) {
    GammaData g;
    for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
        g.blocks.emplace_back(ctx, i);
    return g;
}

// ---------------------------------------------------------------- carriers

std::vector<DoubleElem> ablock_carrier(const EndoContext& ctx, int i, int j,
                                       std::size_t cap) {
    need_block(ctx, i);
    need_block(ctx, j);
    const Ring& K = ctx.ring();
    unsigned ri = rk(ctx, i), rj = rk(ctx, j);
    std::size_t slots = 2 * static_cast<std::size_t>(ri) * rj;
    carrier_guard(K, slots, cap, "module block");
    std::vector<DoubleElem> out;
    for_codes(K, slots, [&](const std::vector<Ring::Elem>& codes) {
        Mat x = mat_from_codes(K, ri, rj, codes, 0);
        Mat y = mat_from_codes(K, ri, rj, codes,
                               static_cast<std::size_t>(ri) * rj);
        out.push_back(DoubleElem{put_block(ctx, i, j, x), put_block(ctx, i, j, y)});
    });
    return out;
}

std::vector<HElem> hblock_carrier(const EndoContext& ctx, int i,
                                  std::size_t cap) {
    need_block(ctx, i);
    const Ring& K = ctx.ring();
    unsigned r0 = ctx.r0(), ri = rk(ctx, i);
    std::size_t nx = static_cast<std::size_t>(r0) * ri;
    std::size_t ny = static_cast<std::size_t>(ri) * ri;
    std::size_t nz = static_cast<std::size_t>(ri) * r0;
    carrier_guard(K, nx + ny + nz, cap, "group block");
    std::vector<HElem> out;
    for_codes(K, nx + ny + nz, [&](const std::vector<Ring::Elem>& codes) {
        Mat xc = mat_from_codes(K, r0, ri, codes, 0);
        Mat yc = mat_from_codes(K, ri, ri, codes, nx);
        Mat zc = mat_from_codes(K, ri, r0, codes, nx + ny);
        out.push_back(HElem{x_place(ctx, i, xc), put_block(ctx, -i, i, yc),
                            z_place(ctx, i, zc)});
    });
    return out;
}

// ------------------------------------------------------------ form parameter

GammaData compute_lambda(const EndoContext& ctx, std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    GammaData lam = make_gamma(ctx);
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        std::size_t found = 0;
        for (const HElem& h : hblock_carrier(ctx, i, carrier_cap)) {
            if (!is_isometry(ctx.space, tau_ultra(ctx, i, h))) continue;
            ++found;
            Mat xf = h_embed_x(ctx, h.x);
            Mat zf = h_embed_z(ctx, h.z);
            if (zf != mat_neg(adjoint(ctx, xf)))
                fail("Internal", "parameter member violates z = -inv(x)");
            if (mat_add(h.y, adjoint(ctx, h.y)) != mat_mul(zf, xf))
                fail("Internal", "parameter member violates the gram identity");
            lam.block(i).grow(h, carrier_cap);
        }
        if (lam.block(i).size() != found)
            fail("Internal", "parameter block is not closed under addition");
    }

    std::vector<DoubleElem> pis;
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : lam.block(i).elems()) {
            if (hzero(h)) continue;
            DoubleElem p = h_pi(ctx, h);
            if (p.x != p.y)
                fail("Internal", "pi of the parameter leaves the diagonal");
            DoubleElem t = h_tr(ctx, h);
            if (t.x != t.y)
                fail("Internal", "tr of the parameter leaves the diagonal");
            if (!dbl_is_zero(p)) pis.push_back(std::move(p));
        }
    }
    for (const DoubleElem& p : pis)
        for (const DoubleElem& q : pis) {
            DoubleElem pr = dbl_mul(dbl_conj(ctx, p), q);
            if (pr.x != pr.y)
                fail("Internal", "pi products of the parameter leave the diagonal");
        }

    // the parameter absorbs the diagonal multipliers and phi of the diagonal
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (const HElem& h : lam.block(u).elems()) {
            if (hzero(h)) continue;
            for (int v = -l; v <= l; ++v) {
                if (v == 0) continue;
                for (unsigned p = 0; p < rk(ctx, u); ++p)
                    for (unsigned q = 0; q < rk(ctx, v); ++q)
                        for (Ring::Elem b : K.basis()) {
                            Mat c(K, ctx.dim(), ctx.dim());
                            c.at(st(ctx, u) + p, st(ctx, v) + q) = b;
                            HElem g = h_act(ctx, h, dbl_of(ctx, c));
                            if (hzero(g)) continue;
                            if (!lam.block(v).member(g))
                                fail("Internal",
                                     "parameter not closed under the diagonal action");
                        }
            }
        }
    }
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (unsigned p = 0; p < rk(ctx, u); ++p)
            for (unsigned q = 0; q < rk(ctx, -u); ++q)
                for (Ring::Elem b : K.basis()) {
                    Mat c(K, ctx.dim(), ctx.dim());
                    c.at(st(ctx, u) + p, st(ctx, -u) + q) = b;
                    HElem g = phi_H(ctx, dbl_of(ctx, c));
                    if (hzero(g)) continue;
                    std::optional<int> t = h_block_of(ctx, g);
                    if (!t || !lam.block(*t).member(g))
                        fail("Internal", "phi of the diagonal escapes the parameter");
                }
    }
    return lam;
}

// -------------------------------------------------------------- constructors

AugLevel zero_level(const EndoContext& ctx) {
    return AugLevel{SubmoduleBasis(ctx), make_gamma(ctx)};
}

AugLevel full_level(const EndoContext& ctx, std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    GammaData lam = compute_lambda(ctx, carrier_cap);
    std::vector<DoubleElem> mgens;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j)
            for (unsigned p = 0; p < rk(ctx, i); ++p)
                for (unsigned q = 0; q < rk(ctx, j); ++q)
                    for (Ring::Elem b : K.basis()) {
                        Mat c(K, ctx.dim(), ctx.dim());
                        c.at(st(ctx, i) + p, st(ctx, j) + q) = b;
                        Mat z(K, ctx.dim(), ctx.dim());
                        mgens.push_back(DoubleElem{c, z});
                        mgens.push_back(DoubleElem{z, c});
                    }
    std::vector<HElem> hgens;
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : hblock_carrier(ctx, i, carrier_cap))
            if (!hzero(h)) hgens.push_back(h);
    AugLevel L = close_level(ctx, lam, mgens, hgens, carrier_cap);
    validate_level(ctx, lam, L, carrier_cap, "full level");
    return L;
}

AugLevel base_level(const EndoContext& ctx, std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    GammaData lam = compute_lambda(ctx, carrier_cap);
    std::vector<DoubleElem> mgens;
    int l = ctx.bl();
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (int v = -l; v <= l; ++v) {
            if (v == 0) continue;
            for (unsigned p = 0; p < rk(ctx, u); ++p)
                for (unsigned q = 0; q < rk(ctx, v); ++q)
                    for (Ring::Elem b : K.basis()) {
                        Mat c(K, ctx.dim(), ctx.dim());
                        c.at(st(ctx, u) + p, st(ctx, v) + q) = b;
                        mgens.push_back(dbl_of(ctx, c));
                    }
        }
    }
    std::vector<HElem> hgens;
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : lam.block(i).elems())
            if (!hzero(h)) hgens.push_back(h);
    AugLevel L = close_level(ctx, lam, mgens, hgens, carrier_cap);
    validate_level(ctx, lam, L, carrier_cap, "base level");
    return L;
}

AugLevel complete_level(const EndoContext& ctx,
                        const std::vector<DoubleElem>& module_gens,
                        const std::vector<HElem>& group_gens,
                        std::size_t carrier_cap) {
    GammaData lam = compute_lambda(ctx, carrier_cap);
    AugLevel L = close_level(ctx, lam, module_gens, group_gens, carrier_cap);
    validate_level(ctx, lam, L, carrier_cap, "completion");
    return L;
}

CheckReport check_aug_level(const EndoContext& ctx, const AugLevel& L,
                            std::size_t carrier_cap) {
    GammaData lam = compute_lambda(ctx, carrier_cap);
    return check_impl(ctx, lam, L, carrier_cap);
}

// ------------------------------------------------------------ class calculus

bool level_leq(const EndoContext& ctx, const AugLevel& a, const AugLevel& b) {
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j) {
            if (j == 0) continue;
            for (const DoubleElem& g : a.I.block_gens(i, j))
                if (!b.I.member(g)) return false;
        }
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        if (!b.gamma.block(i).contains(a.gamma.block(i))) return false;
    }
    return true;
}

bool level_eq(const EndoContext& ctx, const AugLevel& a, const AugLevel& b) {
    return level_leq(ctx, a, b) && level_leq(ctx, b, a);
}

AugLevel enveloping_level(const EndoContext& ctx, const AugLevel& L,
                          std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    GammaData lam = compute_lambda(ctx, carrier_cap);
    std::vector<DoubleElem> mgens = class_module_gens(ctx, L);
    int l = ctx.bl();
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (int v = -l; v <= l; ++v) {
            if (v == 0) continue;
            for (unsigned p = 0; p < rk(ctx, u); ++p)
                for (unsigned q = 0; q < rk(ctx, v); ++q)
                    for (Ring::Elem b : K.basis()) {
                        Mat c(K, ctx.dim(), ctx.dim());
                        c.at(st(ctx, u) + p, st(ctx, v) + q) = b;
                        mgens.push_back(dbl_of(ctx, c));
                    }
        }
    }
    std::vector<HElem> hgens = class_group_elems(ctx, L);
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : lam.block(i).elems())
            if (!hzero(h)) hgens.push_back(h);
    AugLevel E = close_level(ctx, lam, mgens, hgens, carrier_cap);
    validate_level(ctx, lam, E, carrier_cap, "enveloping level");
    return E;
}

AugLevel floor_level(const EndoContext& ctx, const AugLevel& L,
                     std::size_t carrier_cap) {
    GammaData lam = compute_lambda(ctx, carrier_cap);
    AugLevel env = enveloping_level(ctx, L, carrier_cap);

    AugLevel F{SubmoduleBasis(ctx), make_gamma(ctx)};
    for (const DoubleElem& g : class_module_gens(ctx, L)) F.I.grow(g);
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) F.gamma.block(i).grow(h, carrier_cap);
    }

    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (const DoubleElem& a : L.I.block_gens(0, u))
            for (const DoubleElem& b : env.I.block_gens(u, 0))
                F.I.grow(dbl_mul(a, b));
        for (const DoubleElem& a : env.I.block_gens(0, u))
            for (const DoubleElem& b : L.I.block_gens(u, 0))
                F.I.grow(dbl_mul(a, b));
    }
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (const HElem& h : L.gamma.block(u).elems()) {
            if (hzero(h)) continue;
            for (const DoubleElem& b : env.I.block_gens(u, 0)) {
                HElem g = h_act(ctx, h, b);
                if (!hzero(g)) F.gamma.block(0).grow(g, carrier_cap);
            }
        }
        for (const HElem& h : lam.block(u).elems()) {
            if (hzero(h)) continue;
            for (const DoubleElem& b : F.I.block_gens(u, 0)) {
                HElem g = h_act(ctx, h, b);
                if (!hzero(g)) F.gamma.block(0).grow(g, carrier_cap);
            }
        }
    }
    for (const DoubleElem& a : F.I.block_gens(0, 0)) {
        HElem p = phi_H(ctx, a);
        if (!hzero(p)) F.gamma.block(0).grow(p, carrier_cap);
    }
    validate_level(ctx, lam, F, carrier_cap, "floor level");
    return F;
}

AugLevel ceil_level(const EndoContext& ctx, const AugLevel& L,
                    std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    if (ctx.r0() > 1 || K.size() > 4)
        fail("CarrierTooLarge",
             "ceiling comprehension is only offered for r0 <= 1 and |K| <= 4");
    GammaData lam = compute_lambda(ctx, carrier_cap);
    AugLevel env = enveloping_level(ctx, L, carrier_cap);
    int l = ctx.bl();

    std::vector<DoubleElem> top;
    for (const DoubleElem& a : ablock_carrier(ctx, 0, 0, carrier_cap)) {
        bool ok = true;
        for (int u = -l; u <= l && ok; ++u) {
            if (u == 0) continue;
            for (const DoubleElem& b : env.I.block_gens(0, u))
                if (!L.I.member(dbl_mul(a, b))) { ok = false; break; }
            if (!ok) break;
            for (const DoubleElem& b : env.I.block_gens(u, 0))
                if (!L.I.member(dbl_mul(b, a))) { ok = false; break; }
        }
        if (ok && !dbl_is_zero(a)) top.push_back(a);
    }

    const unsigned w00 = 2 * rk(ctx, 0) * rk(ctx, 0) * K.rank();
    HowellBasis top_span(K.modulus(), w00 == 0 ? 1 : w00);
    if (w00 != 0)
        for (const DoubleElem& a : top) top_span.add(flat_pair(ctx, 0, 0, a));
    auto in_top = [&](const DoubleElem& a) {
        if (w00 == 0) return dbl_is_zero(a);
        return top_span.contains(flat_pair(ctx, 0, 0, a));
    };

    std::vector<HElem> gtop;
    for (const HElem& h : hblock_carrier(ctx, 0, carrier_cap)) {
        if (hzero(h)) continue;
        if (!in_top(h_pi(ctx, h)) || !in_top(h_tr(ctx, h))) continue;
        bool ok = true;
        for (int u = -l; u <= l && ok; ++u) {
            if (u == 0) continue;
            for (const DoubleElem& b : env.I.block_gens(0, u)) {
                HElem g = h_act(ctx, h, b);
                if (hzero(g)) continue;
                if (!L.gamma.block(u).member(g)) { ok = false; break; }
            }
        }
        if (ok) gtop.push_back(h);
    }

    AugLevel C{SubmoduleBasis(ctx), make_gamma(ctx)};
    for (const DoubleElem& g : class_module_gens(ctx, L)) C.I.grow(g);
    for (const DoubleElem& a : top) C.I.grow(a);
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) C.gamma.block(i).grow(h, carrier_cap);
    }
    for (const HElem& h : gtop) C.gamma.block(0).grow(h, carrier_cap);
    validate_level(ctx, lam, C, carrier_cap, "ceiling level");
    return C;
}

AugLevel scale_level(const EndoContext& ctx, const AugLevel& L, Ring::Elem s,
                     std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    if (K.involve(s) != s)
        fail("BadScalar", "scaling needs a hermitian ring element");
    GammaData lam = compute_lambda(ctx, carrier_cap);
    DoubleElem smat = dbl_of(ctx, Mat::scalar(K, ctx.dim(), s));

    AugLevel S{SubmoduleBasis(ctx), make_gamma(ctx)};
    for (const DoubleElem& g : L.I.gens()) S.I.grow(dbl_mul(g, smat));
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : L.gamma.block(i).elems()) {
            if (hzero(h)) continue;
            HElem g = h_act(ctx, h, smat);
            if (!hzero(g)) S.gamma.block(i).grow(g, carrier_cap);
        }
    for (const TGen& g : tagged_gens(ctx, S.I)) {
        if (g.j != -g.i) continue;
        HElem p = phi_H(ctx, g.a);
        if (!hzero(p)) S.gamma.block(g.j).grow(p, carrier_cap);
    }
    validate_level(ctx, lam, S, carrier_cap, "scaled level");
    return S;
}

std::vector<AugLevel> levels_between(const EndoContext& ctx, const AugLevel& lo,
                                     const AugLevel& hi,
                                     std::size_t carrier_cap) {
    if (!level_leq(ctx, lo, hi))
        fail("NotALevel", "the lower bound is not contained in the upper bound");
    GammaData lam = compute_lambda(ctx, carrier_cap);

    // every element of the bound, not only its generators: a sublevel's
    // generators need not be canonical generators of the bound
    std::vector<DoubleElem> pool_m;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j) {
            if (j == 0 || hi.I.block_trivial(i, j)) continue;
            for (const DoubleElem& a : ablock_carrier(ctx, i, j, carrier_cap))
                if (!dbl_is_zero(a) && hi.I.member(a)) pool_m.push_back(a);
        }
    std::vector<HElem> pool_h = class_group_elems(ctx, hi);

    auto close_class = [&](const AugLevel* seed, std::vector<DoubleElem> mg,
                           std::vector<HElem> hg) -> std::optional<AugLevel> {
        try {
            AugLevel L = close_level(ctx, lam, seed, mg, hg, carrier_cap);
            validate_level(ctx, lam, L, carrier_cap, "interval");
            return L;
        } catch (const Error& e) {
            if (e.kind() == "NotALevel") return std::nullopt;
            throw;
        }
    };

    std::map<std::string, AugLevel> seen;
    std::vector<std::string> queue;
    std::optional<AugLevel> start = close_class(
        nullptr, class_module_gens(ctx, lo), class_group_elems(ctx, lo));
    if (!start) fail("NotALevel", "the lower bound does not close to a level");
    std::string k0 = level_key(ctx, *start);
    seen.emplace(k0, std::move(*start));
    queue.push_back(k0);

    for (std::size_t next = 0; next < queue.size(); ++next) {
        AugLevel cur = seen.at(queue[next]);

        auto visit = [&](std::optional<AugLevel>&& cand) {
            if (!cand) return;
            if (!level_leq(ctx, *cand, hi)) return;
            std::string k = level_key(ctx, *cand);
            if (seen.count(k)) return;
            seen.emplace(k, std::move(*cand));
            queue.push_back(k);
        };

        for (const DoubleElem& e : pool_m) {
            if (cur.I.member(e)) continue;
            visit(close_class(&cur, {e}, {}));
        }
        for (const HElem& e : pool_h) {
            std::optional<int> t = h_block_of(ctx, e);
            if (t && cur.gamma.block(*t).member(e)) continue;
            visit(close_class(&cur, {}, {e}));
        }
    }

    std::vector<AugLevel> out;
    for (auto& [k, L] : seen) out.push_back(std::move(L));
    return out;
}

// ------------------------------------------------------------ group levels

AugLevel level_of_group(const EndoContext& ctx,
                        const std::function<bool(const Mat&)>& member,
                        std::size_t carrier_cap) {
    const Ring& K = ctx.ring();
    int l = ctx.bl();
    if (!member(Mat::identity(K, ctx.dim())))
        fail("NotALevel", "the oracle rejects the identity");

    GammaData lam = compute_lambda(ctx, carrier_cap);

    std::vector<DoubleElem> visible;
    std::vector<std::pair<std::pair<int, int>, std::vector<DoubleElem>>> vis_blocks;
    std::vector<std::vector<HElem>> gam_raw;
    std::vector<Mat> samples;

    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (int j = -l; j <= l; ++j) {
            if (j == 0 || j == i || j == -i) continue;
            std::vector<DoubleElem> hits;
            for (const DoubleElem& a : ablock_carrier(ctx, i, j, carrier_cap)) {
                if (dbl_is_zero(a)) continue;
                Mat t = tau_short(ctx, i, j, a);
                if (member(t)) {
                    hits.push_back(a);
                    if (samples.size() < 24) samples.push_back(t);
                }
            }
            vis_blocks.push_back({{i, j}, hits});
            for (const DoubleElem& a : hits) visible.push_back(a);
        }
    }
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        std::vector<HElem> hits;
        for (const HElem& h : hblock_carrier(ctx, i, carrier_cap)) {
            if (hzero(h)) continue;
            Mat t = tau_ultra(ctx, i, h);
            if (member(t)) {
                hits.push_back(h);
                if (samples.size() < 24) samples.push_back(t);
            }
        }
        gam_raw.push_back(hits);
    }

    for (const Mat& n : eu_gens(ctx, carrier_cap)) {
        std::optional<Mat> ni = mat_inverse(n);
        if (!ni) fail("Internal", "elementary generator is not invertible");
        for (const Mat& s : samples)
            if (!member(mat_mul(mat_mul(n, s), *ni)))
                fail("NotALevel",
                     "the oracle is not stable under elementary conjugation");
    }

    // spans of the visible data, for the transporter completion
    SubmoduleBasis V(ctx);
    for (const DoubleElem& a : visible) V.grow(a);
    for (const auto& [bk, hits] : vis_blocks) {
        unsigned w = 2 * rk(ctx, bk.first) * rk(ctx, bk.second) * K.rank();
        if (w == 0) continue;
        HowellBasis span(K.modulus(), w);
        for (const DoubleElem& a : hits)
            span.add(flat_pair(ctx, bk.first, bk.second, a));
        if (span.count() != hits.size() + 1)
            fail("NotALevel", "a visible block is not additively closed");
    }

    std::vector<DoubleElem> mgens = visible;
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (int t : {i, -i}) {
            for (const DoubleElem& a : ablock_carrier(ctx, i, t, carrier_cap)) {
                if (dbl_is_zero(a)) continue;
                bool ok = true;
                for (int j = -l; j <= l && ok; ++j) {
                    if (j == 0 || j == i || j == -i) continue;
                    for (unsigned p = 0; p < rk(ctx, t) && ok; ++p)
                        for (unsigned q = 0; q < rk(ctx, j); ++q) {
                            Mat c(K, ctx.dim(), ctx.dim());
                            c.at(st(ctx, t) + p, st(ctx, j) + q) = K.one();
                            if (!V.member(dbl_mul(a, dbl_of(ctx, c)))) {
                                ok = false;
                                break;
                            }
                        }
                    if (!ok) break;
                    for (unsigned p = 0; p < rk(ctx, j) && ok; ++p)
                        for (unsigned q = 0; q < rk(ctx, i); ++q) {
                            Mat c(K, ctx.dim(), ctx.dim());
                            c.at(st(ctx, j) + p, st(ctx, i) + q) = K.one();
                            if (!V.member(dbl_mul(dbl_of(ctx, c), a))) {
                                ok = false;
                                break;
                            }
                        }
                }
                if (ok) mgens.push_back(a);
            }
        }
    }

    std::vector<HElem> hgens;
    std::size_t gslot = 0;
    std::vector<std::pair<int, std::size_t>> gam_sizes;
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        const std::vector<HElem>& hits = gam_raw[gslot++];
        gam_sizes.push_back({i, hits.size()});
        for (const HElem& h : hits) hgens.push_back(h);
    }

    AugLevel L = close_level(ctx, lam, mgens, hgens, carrier_cap);
    validate_level(ctx, lam, L, carrier_cap, "group level");

    // the closure must not have outgrown the observed transvection data
    for (const auto& [bk, hits] : vis_blocks) {
        unsigned w = 2 * rk(ctx, bk.first) * rk(ctx, bk.second) * K.rank();
        if (w == 0) continue;
        HowellBasis span(K.modulus(), w);
        for (const DoubleElem& a : hits)
            span.add(flat_pair(ctx, bk.first, bk.second, a));
        for (const DoubleElem& g : L.I.block_gens(bk.first, bk.second))
            if (!span.contains(flat_pair(ctx, bk.first, bk.second, g)))
                fail("NotALevel",
                     "the axioms force transvections the oracle rejects");
    }
    for (const auto& [i, sz] : gam_sizes)
        if (L.gamma.block(i).size() != sz + 1)
            fail("NotALevel",
                 "the axioms force one-index transvections the oracle rejects");
    return L;
}

// ---------------------------------------------------------------- roots

std::optional<RootLen> root_shape(const Root& a) {
    int ones = 0, twos = 0;
    for (int c : a.v) {
        if (c == 1 || c == -1) ++ones;
        else if (c == 2 || c == -2) ++twos;
        else if (c != 0) return std::nullopt;
    }
    if (ones == 2 && twos == 0) return RootLen::Short;
    if (ones == 1 && twos == 0) return RootLen::Ultrashort;
    if (ones == 0 && twos == 1) return RootLen::Long;
    return std::nullopt;
}

Root root_neg(const Root& a) {
    Root out = a;
    for (int& c : out.v) c = -c;
    return out;
}

Root root_madd(const Root& a, const Root& b, int m, int n) {
    if (a.v.size() != b.v.size()) fail("BadBlock", "root ranks differ");
    Root out;
    out.v.resize(a.v.size());
    for (std::size_t t = 0; t < a.v.size(); ++t)
        out.v[t] = m * a.v[t] + n * b.v[t];
    return out;
}

std::vector<Root> all_roots(unsigned l) {
    std::vector<Root> out;
    auto mk = [&](std::size_t a, int ca, std::size_t b, int cb) {
        Root r;
        r.v.assign(l, 0);
        r.v[a] = ca;
        if (b < l) r.v[b] = cb;
        out.push_back(std::move(r));
    };
    for (std::size_t a = 0; a < l; ++a) {
        mk(a, 1, l, 0);
        mk(a, -1, l, 0);
        mk(a, 2, l, 0);
        mk(a, -2, l, 0);
    }
    for (std::size_t a = 0; a < l; ++a)
        for (std::size_t b = a + 1; b < l; ++b)
            for (int s : {1, -1})
                for (int t : {1, -1}) mk(a, s, b, t);
    return out;
}

std::vector<Mat> root_subgroup(const EndoContext& ctx, const AugLevel& L,
                               const Root& alpha) {
    unsigned l = static_cast<unsigned>(ctx.bl());
    if (alpha.v.size() != l) fail("BadBlock", "root rank does not match the profile");
    std::optional<RootLen> shape = root_shape(alpha);
    if (!shape) fail("BadBlock", "not a root of the doubled system");

    int a = 0, b = 0, sa = 0, sb = 0;
    for (std::size_t t = 0; t < alpha.v.size(); ++t) {
        if (alpha.v[t] == 0) continue;
        if (a == 0) {
            a = static_cast<int>(t) + 1;
            sa = alpha.v[t];
        } else {
            b = static_cast<int>(t) + 1;
            sb = alpha.v[t];
        }
    }

    std::vector<Mat> out;
    if (*shape == RootLen::Short) {
        int i = sa * a, j = -sb * b;
        for (const DoubleElem& g : L.I.block_gens(i, j))
            out.push_back(tau_short(ctx, i, j, g));
        return out;
    }
    // s e_a = -e_{-s a}, so the transvection index of s e_a is -s a
    if (*shape == RootLen::Ultrashort) {
        int i = -sa * a;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) out.push_back(tau_ultra(ctx, i, h));
        return out;
    }
    // long root 2s e_a: phi of the antidiagonal module block at index -s a
    int i = -(sa / 2) * a;
    for (const DoubleElem& g : L.I.block_gens(-i, i)) {
        HElem p = phi_H(ctx, g);
        if (!L.gamma.block(i).member(p))
            fail("Internal", "long root data escapes the ultrashort block");
        if (!hzero(p)) out.push_back(tau_ultra(ctx, i, p));
    }
    return out;
}

// ------------------------------------------------------- alpha and the defect

DoubleElem alpha_map(const EndoContext& ctx, const Mat& g) {
    std::optional<Mat> gi = mat_inverse(g);
    if (!gi) fail("NotInvertible", "the doubling embedding needs a unit");
    return DoubleElem{g, adjoint(ctx, *gi)};
}

HElem eps_elem(const EndoContext& ctx) {
    const Ring& K = ctx.ring();
    unsigned r0 = ctx.r0(), s0 = st(ctx, 0);
    Mat x(K, r0, ctx.dim());
    Mat z(K, ctx.dim(), r0);
    for (unsigned t = 0; t < r0; ++t) {
        x.at(t, s0 + t) = K.one();
        z.at(s0 + t, t) = K.neg(K.one());
    }
    return HElem{x, ctx.e_plus, z};
}

HElem eps_defect(const EndoContext& ctx, const Mat& g) {
    HElem eps = eps_elem(ctx);
    return h_sub_(ctx, h_act(ctx, eps, alpha_map(ctx, g)), eps);
}

EpsAlpha make_eps_alpha(const EndoContext& ctx) {
    return EpsAlpha{eps_elem(ctx), dbl_zeta(ctx), ctx.e_plus, ctx.e_minus};
}

// ------------------------------------------------------------- membership

namespace {

// integer group power: c (x, y, z) = (c x, c y + C(c, 2) z x, c z)
HElem h_pow(const EndoContext& ctx, unsigned long long c, const HElem& h) {
    const Ring& K = ctx.ring();
    Ring::Elem ck = K.from_int(static_cast<long long>(c % (2ull * K.modulus())));
    Ring::Elem bk = K.from_int(static_cast<long long>((c * (c - 1) / 2) %
                                                      K.modulus()));
    return HElem{mat_smul(ck, h.x),
                 mat_add(mat_smul(ck, h.y), mat_smul(bk, mat_mul(h.z, h.x))),
                 mat_smul(ck, h.z)};
}

// the x and z parts vanish and the y part is bilinear
Mat comm_y(const HElem& a, const HElem& b) {
    return mat_sub(mat_mul(a.z, b.x), mat_mul(b.z, a.x));
}

ZRow flat_xz(const HElem& h) {
    ZRow r = mat_flatten(h.x);
    ZRow z = mat_flatten(h.z);
    r.insert(r.end(), z.begin(), z.end());
    return r;
}

long long egcd(long long a, long long b, long long& s, long long& t) {
    if (b == 0) { s = 1; t = 0; return a; }
    long long s1, t1;
    long long g = egcd(b, a % b, s1, t1);
    s = t1;
    t = s1 - (a / b) * t1;
    return g;
}

} // namespace

// maintains an echelon table over Z/n on the (x, z) row of H, with the group
// elements realizing each row as witnesses, plus the additive kernel of y
// parts of central members.  (x, z) is a homomorphism onto an abelian group
// and its kernel is central, so membership splits into a row reduction
// against the table followed by a kernel test on the residue.
void GammaOracle::sift(HElem h, std::size_t) {
    const EndoContext& ctx = *ctx_;
    unsigned n = ctx.ring().modulus();
    std::vector<HElem> work;
    work.push_back(std::move(h));
    while (!work.empty()) {
        HElem cur = std::move(work.back());
        work.pop_back();
        ZRow r = flat_xz(cur);
        std::size_t c = 0;
        for (;;) {
            if (++ops_ > cap_)
                fail("GammaMembershipUndecidable",
                     "the group-part reduction exceeds the work cap");
            while (c < r.size() && r[c] == 0) ++c;
            if (c == r.size()) {
                if (!mat_is_zero(cur.y)) ky_.add(mat_flatten(cur.y));
                break;
            }
            unsigned v = r[c];
            int idx = piv_[c];
            if (idx < 0) {
                // new pivot, normalized so its leading entry divides n
                unsigned g = std::gcd(v, n);
                unsigned a = 1;
                while ((1ull * a * v) % n != g) ++a;
                HElem u = h_pow(ctx, a, cur);
                piv_[c] = static_cast<int>(tab_.size());
                tab_rho_.push_back(flat_xz(u));
                tab_.push_back(std::move(u));
                if (n / g > 1) work.push_back(h_pow(ctx, n / g, tab_.back()));
                cur = h_add(ctx, cur, h_neg(ctx, h_pow(ctx, v / g, tab_.back())));
                r = flat_xz(cur);
                continue;
            }
            unsigned d = tab_rho_[static_cast<std::size_t>(idx)][c];
            if (v % d == 0) {
                cur = h_add(ctx, cur,
                            h_neg(ctx, h_pow(ctx, v / d,
                                             tab_[static_cast<std::size_t>(idx)])));
                r = flat_xz(cur);
                continue;
            }
            // the leading entries combine to their gcd and the displaced
            // witness goes back through the mill
            long long s0, t0, s1, t1;
            long long g0 = egcd(v, d, s0, t0);
            long long g = egcd(g0, n, s1, t1);
            auto lift = [&](long long q) {
                return static_cast<unsigned>(((q % n) + n) % n);
            };
            HElem u = h_add(ctx, h_pow(ctx, lift(s1 * s0), cur),
                            h_pow(ctx, lift(s1 * t0),
                                  tab_[static_cast<std::size_t>(idx)]));
            std::swap(tab_[static_cast<std::size_t>(idx)], u);
            tab_rho_[static_cast<std::size_t>(idx)] =
                flat_xz(tab_[static_cast<std::size_t>(idx)]);
            work.push_back(std::move(u));
            unsigned gu = static_cast<unsigned>(g);
            if (n / gu > 1)
                work.push_back(h_pow(ctx, n / gu,
                                     tab_[static_cast<std::size_t>(idx)]));
        }
    }
}

GammaOracle::GammaOracle(const EndoContext& ctx, const AugLevel& L,
                         std::size_t closure_cap)
    : ctx_(&ctx),
      ky_(ctx.ring().modulus(), ctx.dim() * ctx.dim() * ctx.ring().rank()),
      piv_(2 * static_cast<std::size_t>(ctx.r0()) * ctx.dim() * ctx.ring().rank(),
           -1),
      cap_(closure_cap) {
    std::vector<HElem> gens;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i)
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) gens.push_back(h);
    for (const DoubleElem& a : L.I.gens()) {
        HElem p = phi_H(ctx, a);
        if (!hzero(p)) gens.push_back(p);
    }
    for (HElem& g : gens) sift(std::move(g), closure_cap);
    // the table is frozen from here on; commutators of its witnesses close
    // the central kernel
    for (std::size_t i = 0; i < tab_.size(); ++i)
        for (std::size_t j = i + 1; j < tab_.size(); ++j) {
            Mat cy = comm_y(tab_[i], tab_[j]);
            if (!mat_is_zero(cy)) ky_.add(mat_flatten(cy));
        }
}

bool GammaOracle::member(const HElem& h) const {
    const EndoContext& ctx = *ctx_;
    HElem cur = h;
    ZRow r = flat_xz(cur);
    std::size_t c = 0;
    while (c < r.size()) {
        if (r[c] == 0) { ++c; continue; }
        int idx = piv_[c];
        if (idx < 0) return false;
        unsigned d = tab_rho_[static_cast<std::size_t>(idx)][c];
        if (r[c] % d != 0) return false;
        cur = h_add(ctx, cur,
                    h_neg(ctx, h_pow(ctx, r[c] / d,
                                     tab_[static_cast<std::size_t>(idx)])));
        r = flat_xz(cur);
    }
    return ky_.contains(mat_flatten(cur.y));
}

bool principal_membership(const EndoContext& ctx, const AugLevel& L,
                          const Mat& g, std::size_t closure_cap) {
    DoubleElem a = alpha_map(ctx, g);
    if (!L.I.member(dbl_sub(a, dbl_one(ctx)))) return false;
    GammaOracle oracle(ctx, L, closure_cap);
    HElem eps = eps_elem(ctx);
    return oracle.member(h_sub_(ctx, h_act(ctx, eps, a), eps));
}

GuChecker::GuChecker(const EndoContext& ctx, const AugLevel& L,
                     std::size_t carrier_cap, std::size_t closure_cap)
    : ctx_(&ctx), L_(L), eps_(eps_elem(ctx)), oracle_(ctx, L, closure_cap) {
    const Ring& K = ctx.ring();
    AugLevel env = enveloping_level(ctx, L, carrier_cap);
    AugLevel flo = floor_level(ctx, env, carrier_cap);

    fam1_ = flo.I.gens();
    for (Ring::Elem k : K.basis())
        fam1_.push_back(dbl_of(ctx, Mat::scalar(K, ctx.dim(), k)));

    int l = ctx.bl();
    for (int u = -l; u <= l; ++u) {
        if (u == 0) continue;
        for (int j = -l; j <= l; ++j)
            for (DoubleElem& a : env.I.block_gens(u, j))
                fam2_.push_back(std::move(a));
    }

    for (int i = -l; i <= l; ++i)
        for (const HElem& h : flo.gamma.block(i).elems())
            if (!hzero(h)) fam3_.push_back(h);
    for (const DoubleElem& a : flo.I.gens()) {
        HElem p = phi_H(ctx, a);
        if (!hzero(p)) fam3_.push_back(p);
    }
}

bool GuChecker::member(const Mat& g, unsigned sum_trials, uint64_t seed) const {
    const EndoContext& ctx = *ctx_;
    DoubleElem ap = alpha_map(ctx, g);
    std::optional<Mat> gi = mat_inverse(g);
    DoubleElem am = alpha_map(ctx, *gi);

    auto f1 = [&](const DoubleElem& A, const DoubleElem& B, const DoubleElem& a) {
        return L_.I.member(dbl_sub(dbl_mul(dbl_mul(A, a), B), a));
    };
    auto f2 = [&](const DoubleElem& A, const DoubleElem& B, const DoubleElem& a) {
        DoubleElem ca = dbl_mul(dbl_mul(A, a), B);
        return oracle_.member(h_sub_(ctx, h_act(ctx, eps_, ca),
                                     h_act(ctx, eps_, dbl_mul(a, B))));
    };
    auto f3 = [&](const DoubleElem& A, const DoubleElem& B, const HElem& h) {
        DoubleElem p = h_pi(ctx, h);
        HElem term = h_sub_(ctx, h_act(ctx, eps_, dbl_mul(dbl_mul(A, p), B)),
                            h_act(ctx, eps_, dbl_mul(p, B)));
        term = h_add(ctx, term, h_act(ctx, h, B));
        term = h_sub_(ctx, term, h);
        return oracle_.member(term);
    };

    for (int sign = 0; sign < 2; ++sign) {
        const DoubleElem& A = sign ? am : ap;
        const DoubleElem& B = sign ? ap : am;
        for (const DoubleElem& a : fam1_)
            if (!f1(A, B, a)) return false;
        for (const DoubleElem& a : fam2_)
            if (!f2(A, B, a)) return false;
        for (const HElem& h : fam3_)
            if (!f3(A, B, h)) return false;
    }

    Rng rng(mix_seed(seed, "gu-sums"));
    for (unsigned t = 0; t < sum_trials; ++t) {
        int fam = static_cast<int>(rng.below(3));
        bool fwd = rng.below(2) == 0;
        const DoubleElem& A = fwd ? ap : am;
        const DoubleElem& B = fwd ? am : ap;
        if (fam == 0 && fam1_.size() > 1) {
            DoubleElem a = dbl_add(fam1_[rng.below(fam1_.size())],
                                   fam1_[rng.below(fam1_.size())]);
            if (!f1(A, B, a)) return false;
        } else if (fam == 1 && fam2_.size() > 1) {
            DoubleElem a = dbl_add(fam2_[rng.below(fam2_.size())],
                                   fam2_[rng.below(fam2_.size())]);
            if (!f2(A, B, a)) return false;
        } else if (fam == 2 && fam3_.size() > 1) {
            HElem h = h_add(ctx, fam3_[rng.below(fam3_.size())],
                            fam3_[rng.below(fam3_.size())]);
            if (!f3(A, B, h)) return false;
        }
    }
    return true;
}

bool gu_membership(const EndoContext& ctx, const AugLevel& L, const Mat& g,
                   unsigned sum_trials, uint64_t seed) {
    return GuChecker(ctx, L).member(g, sum_trials, seed);
}

// ------------------------------------------------------------ level groups

std::vector<Mat> eu_level_gens(const EndoContext& ctx, const AugLevel& L) {
    std::vector<Mat> out;
    int l = ctx.bl();
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (int j = -l; j <= l; ++j) {
            if (j == 0 || j == i || j == -i) continue;
            for (const DoubleElem& a : L.I.block_gens(i, j))
                out.push_back(tau_short(ctx, i, j, a));
        }
    }
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hzero(h)) out.push_back(tau_ultra(ctx, i, h));
    }
    return out;
}

std::vector<Mat> eu_gens(const EndoContext& ctx, std::size_t carrier_cap) {
    return eu_level_gens(ctx, base_level(ctx, carrier_cap));
}

FiniteGroup eu_level_group(const EndoContext& ctx, const AugLevel& L,
                           std::size_t group_cap, std::size_t carrier_cap) {
    return normal_closure(ctx.ring(), ctx.dim(), eu_level_gens(ctx, L),
                          eu_gens(ctx, carrier_cap), group_cap);
}

// ------------------------------------------------------------ serialization

namespace {

std::string hexify(const std::string& s) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(s.size() * 2);
    for (unsigned char c : s) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

std::string blocks_text(const EndoContext& ctx, const AugLevel& L,
                        bool class_only) {
    int l = ctx.bl();
    std::string out;
    for (int i = -l; i <= l; ++i)
        for (int j = -l; j <= l; ++j) {
            if (class_only && j == 0) continue;
            std::vector<DoubleElem> gs = L.I.block_gens(i, j);
            if (gs.empty()) continue;
            out += block_label("I", i, j) + ":";
            bool first = true;
            for (const DoubleElem& g : gs) {
                ZRow row = flat_pair(ctx, i, j, g);
                out += first ? " " : " | ";
                first = false;
                for (std::size_t t = 0; t < row.size(); ++t) {
                    if (t) out += " ";
                    out += std::to_string(row[t]);
                }
            }
            out += "\n";
        }
    for (int i = -l; i <= l; ++i) {
        if (class_only && i == 0) continue;
        const HBlockSet& g = L.gamma.block(i);
        if (g.size() <= 1) continue;
        out += "Gamma(" + std::to_string(i) + "): " + std::to_string(g.size()) +
               " elements\n";
        for (const std::string& k : g.keys())
            out += "  " + hexify(k) + "\n";
    }
    return out;
}

} // namespace

std::string level_text(const EndoContext& ctx, const AugLevel& L) {
    std::string out = "augmented level l=" + std::to_string(ctx.bl()) +
                      " r0=" + std::to_string(ctx.r0()) +
                      " ring=" + std::to_string(ctx.ring().size()) + "\n";
    return out + blocks_text(ctx, L, false);
}

std::string level_key(const EndoContext& ctx, const AugLevel& L) {
    return blocks_text(ctx, L, true);
}

} // namespace oddu

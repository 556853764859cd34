#include "oddu/endo.hpp"
#include "oddu/common.hpp"

#include <array>
#include <cstdlib>
#include <string>
#include <vector>

namespace oddu {

namespace {

Mat matrix_unit(const Ring& K, unsigned d, unsigned u, unsigned v) {
    Mat m(K, d, d);
    m.at(u, v) = K.one();
    return m;
}

Vec basis_vec(const Ring& K, unsigned d, unsigned s) {
    Vec v(d, K.zero());
    v[s] = K.one();
    return v;
}

// |K|^exp, or 0 once the value would exceed cap
uint64_t pow_capped(uint64_t base, uint64_t exp, uint64_t cap) {
    uint64_t v = 1;
    for (uint64_t t = 0; t < exp; ++t) {
        if (base == 0 || v > cap / base) return 0;
        v *= base;
    }
    return v;
}

void fill_from_index(const Ring& K, Mat& m, uint64_t& idx) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m.at(i, j) = static_cast<Ring::Elem>(idx % K.size());
            idx /= K.size();
        }
}

void fill_random(const Ring& K, Mat& m, Rng& rng) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m.at(i, j) = static_cast<Ring::Elem>(rng.below(K.size()));
}

} // namespace

const Mat& EndoContext::eidem(int i) const {
    int l = bl();
    if (i < -l || i > l) fail("BadBlock", "block index " + std::to_string(i) + " out of range");
    return idem[static_cast<std::size_t>(i + l)];
}

Mat adjoint(const EndoContext& ctx, const Mat& a) {
    return mat_mul(mat_mul(ctx.b_inv, mat_transpose(mat_conj(a))), ctx.space.gram());
}

EndoContext make_endo_context(const QuadraticSpace& sp) {
    auto binv = mat_inverse(sp.gram());
    if (!binv) fail("NotInvertible", "endo context needs an invertible gram matrix");

    EndoContext ctx(sp);
    ctx.b_inv = *binv;
    const Ring& K = sp.ring();
    const BlockProfile& prof = sp.profile();
    const unsigned d = sp.dim();
    const int l = static_cast<int>(prof.l);

    for (int i = -l; i <= l; ++i) {
        Mat e(K, d, d);
        unsigned s = prof.block_start(i), r = prof.block_rank(i);
        for (unsigned t = 0; t < r; ++t) e.at(s + t, s + t) = K.one();
        ctx.idem.push_back(e);
    }
    ctx.e_plus = Mat(K, d, d);
    ctx.e_minus = Mat(K, d, d);
    for (int i = 1; i <= l; ++i) {
        ctx.e_plus = mat_add(ctx.e_plus, ctx.eidem(i));
        ctx.e_minus = mat_add(ctx.e_minus, ctx.eidem(-i));
    }
    ctx.lambda_E = K.lambda();

    Mat sum(K, d, d);
    for (const Mat& e : ctx.idem) sum = mat_add(sum, e);
    if (sum != Mat::identity(K, d)) fail("Internal", "block idempotents do not sum to 1");
    for (int i = -l; i <= l; ++i) {
        for (int j = -l; j <= l; ++j) {
            Mat p = mat_mul(ctx.eidem(i), ctx.eidem(j));
            if (p != (i == j ? ctx.eidem(i) : Mat(K, d, d)))
                fail("Internal", "block idempotents are not orthogonal");
        }
        if (adjoint(ctx, ctx.eidem(i)) != ctx.eidem(-i))
            fail("Internal", "adjoint does not mirror the block idempotents");
    }

    // defining property B(a m, m') = B(m, adjoint(a) m') on the algebra basis
    for (unsigned u = 0; u < d; ++u)
        for (unsigned v = 0; v < d; ++v) {
            Mat E = matrix_unit(K, d, u, v);
            Mat A = adjoint(ctx, E);
            for (unsigned s = 0; s < d; ++s) {
                Vec es = basis_vec(K, d, s);
                for (unsigned t = 0; t < d; ++t) {
                    Vec et = basis_vec(K, d, t);
                    if (eval_form(sp.gram(), mat_apply(E, es), et) !=
                        eval_form(sp.gram(), es, mat_apply(A, et)))
                        fail("Internal", "adjoint does not transpose the form");
                }
            }
        }

    Rng rng(mix_seed(0x0dd0, "endo context"));
    for (int t = 0; t < 8; ++t) {
        Mat A(K, d, d), B(K, d, d);
        fill_random(K, A, rng);
        fill_random(K, B, rng);
        if (adjoint(ctx, mat_mul(A, B)) != mat_mul(adjoint(ctx, B), adjoint(ctx, A)))
            fail("Internal", "adjoint is not anti-multiplicative");
        if (adjoint(ctx, mat_add(A, B)) != mat_add(adjoint(ctx, A), adjoint(ctx, B)))
            fail("Internal", "adjoint is not additive");
        Mat twice = adjoint(ctx, adjoint(ctx, A));
        if (twice != mat_smul(K.lambda(), mat_smul(A, K.lambda_inv())))
            fail("Internal", "adjoint squared is not conjugation by lambda");
    }
    return ctx;
}

bool block_supported(const EndoContext& ctx, const Mat& a, int i, int j) {
    const BlockProfile& prof = ctx.space.profile();
    int l = ctx.bl();
    if (i < -l || i > l || j < -l || j > l)
        fail("BadBlock", "block index out of range");
    unsigned rs = prof.block_start(i), rr = prof.block_rank(i);
    unsigned cs = prof.block_start(j), cr = prof.block_rank(j);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (a.at(r, c) == ctx.ring().zero()) continue;
            if (r < rs || r >= rs + rr || c < cs || c >= cs + cr) return false;
        }
    return true;
}

Mat block_matrix(const EndoContext& ctx, int i, int j,
                 const std::vector<Ring::Elem>& entries) {
    const BlockProfile& prof = ctx.space.profile();
    int l = ctx.bl();
    if (i < -l || i > l || j < -l || j > l)
        fail("BadBlock", "block index out of range");
    unsigned rs = prof.block_start(i), rr = prof.block_rank(i);
    unsigned cs = prof.block_start(j), cr = prof.block_rank(j);
    if (entries.size() != static_cast<std::size_t>(rr) * cr)
        fail("BadBlock", "block entry count mismatch");
    Mat m(ctx.ring(), ctx.dim(), ctx.dim());
    for (unsigned r = 0; r < rr; ++r)
        for (unsigned c = 0; c < cr; ++c)
            m.at(rs + r, cs + c) = entries[static_cast<std::size_t>(r) * cr + c];
    return m;
}

DoubleElem dbl_zero(const EndoContext& ctx) {
    Mat z(ctx.ring(), ctx.dim(), ctx.dim());
    return DoubleElem{z, z};
}

DoubleElem dbl_one(const EndoContext& ctx) {
    Mat one = Mat::identity(ctx.ring(), ctx.dim());
    return DoubleElem{one, one};
}

DoubleElem dbl_zeta(const EndoContext& ctx) {
    return DoubleElem{Mat(ctx.ring(), ctx.dim(), ctx.dim()),
                      Mat::identity(ctx.ring(), ctx.dim())};
}

DoubleElem dbl_of(const EndoContext& ctx, const Mat& c) {
    (void)ctx;
    return DoubleElem{c, c};
}

DoubleElem dbl_add(const DoubleElem& a, const DoubleElem& b) {
    return DoubleElem{mat_add(a.x, b.x), mat_add(a.y, b.y)};
}

DoubleElem dbl_sub(const DoubleElem& a, const DoubleElem& b) {
    return DoubleElem{mat_sub(a.x, b.x), mat_sub(a.y, b.y)};
}

DoubleElem dbl_neg(const DoubleElem& a) {
    return DoubleElem{mat_neg(a.x), mat_neg(a.y)};
}

DoubleElem dbl_mul(const DoubleElem& a, const DoubleElem& b) {
    return DoubleElem{mat_mul(a.x, b.x), mat_mul(a.y, b.y)};
}

DoubleElem dbl_conj(const EndoContext& ctx, const DoubleElem& a) {
    return DoubleElem{adjoint(ctx, a.y), adjoint(ctx, a.x)};
}

HElem h_zero(const EndoContext& ctx) {
    const Ring& K = ctx.ring();
    unsigned d = ctx.dim(), r0 = ctx.r0();
    return HElem{Mat(K, r0, d), Mat(K, d, d), Mat(K, d, r0)};
}

HElem h_add(const EndoContext& ctx, const HElem& h, const HElem& g) {
    (void)ctx;
    return HElem{mat_add(h.x, g.x),
                 mat_add(mat_add(h.y, mat_mul(h.z, g.x)), g.y),
                 mat_add(h.z, g.z)};
}

HElem h_neg(const EndoContext& ctx, const HElem& h) {
    (void)ctx;
    return HElem{mat_neg(h.x), mat_sub(mat_mul(h.z, h.x), h.y), mat_neg(h.z)};
}

HElem h_act(const EndoContext& ctx, const HElem& h, const DoubleElem& a) {
    Mat qc = adjoint(ctx, a.y);
    return HElem{mat_mul(h.x, a.x), mat_mul(mat_mul(qc, h.y), a.x), mat_mul(qc, h.z)};
}

Mat h_embed_x(const EndoContext& ctx, const Mat& x) {
    unsigned d = ctx.dim(), r0 = ctx.r0();
    unsigned s0 = ctx.space.profile().block_start(0);
    Mat m(ctx.ring(), d, d);
    for (unsigned t = 0; t < r0; ++t)
        for (unsigned c = 0; c < d; ++c) m.at(s0 + t, c) = x.at(t, c);
    return m;
}

Mat h_embed_z(const EndoContext& ctx, const Mat& z) {
    unsigned d = ctx.dim(), r0 = ctx.r0();
    unsigned s0 = ctx.space.profile().block_start(0);
    Mat m(ctx.ring(), d, d);
    for (unsigned r = 0; r < d; ++r)
        for (unsigned t = 0; t < r0; ++t) m.at(r, s0 + t) = z.at(r, t);
    return m;
}

DoubleElem h_pi(const EndoContext& ctx, const HElem& h) {
    return DoubleElem{h_embed_x(ctx, h.x), mat_neg(adjoint(ctx, h_embed_z(ctx, h.z)))};
}

DoubleElem h_tr(const EndoContext& ctx, const HElem& h) {
    return DoubleElem{h.y, adjoint(ctx, mat_sub(mat_mul(h.z, h.x), h.y))};
}

HElem phi_H(const EndoContext& ctx, const DoubleElem& a) {
    const Ring& K = ctx.ring();
    unsigned d = ctx.dim(), r0 = ctx.r0();
    return HElem{Mat(K, r0, d), mat_sub(a.x, adjoint(ctx, a.y)), Mat(K, d, r0)};
}

namespace {

// compact x slot supported in block-i columns / compact z slot in block-i rows
bool xslot_in_block(const EndoContext& ctx, const Mat& x, int i) {
    const BlockProfile& prof = ctx.space.profile();
    unsigned cs = prof.block_start(i), cr = prof.block_rank(i);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            if (x.at(r, c) != ctx.ring().zero() && (c < cs || c >= cs + cr)) return false;
    return true;
}

bool zslot_in_block(const EndoContext& ctx, const Mat& z, int i) {
    const BlockProfile& prof = ctx.space.profile();
    unsigned rs = prof.block_start(i), rr = prof.block_rank(i);
    for (std::size_t r = 0; r < z.rows(); ++r)
        for (std::size_t c = 0; c < z.cols(); ++c)
            if (z.at(r, c) != ctx.ring().zero() && (r < rs || r >= rs + rr)) return false;
    return true;
}

} // namespace

bool h_in_block(const EndoContext& ctx, const HElem& h, int i) {
    int l = ctx.bl();
    if (i < -l || i > l) fail("BadBlock", "block index out of range");
    return xslot_in_block(ctx, h.x, i) && block_supported(ctx, h.y, -i, i) &&
           zslot_in_block(ctx, h.z, -i);
}

Mat t_elem(const EndoContext& ctx, int i, int j, const Mat& x) {
    if (i == j) fail("BadBlock", "t_elem needs i != j");
    if (!block_supported(ctx, x, i, j))
        fail("BadBlock", "t_elem argument not supported in block (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
    return mat_add(Mat::identity(ctx.ring(), ctx.dim()), x);
}

Mat tau_short(const EndoContext& ctx, int i, int j, const DoubleElem& a) {
    if (i == 0 || j == 0 || i == j || i == -j)
        fail("BadBlock", "tau_short needs 0 != i != +-j != 0");
    if (!block_supported(ctx, a.x, i, j) || !block_supported(ctx, a.y, i, j))
        fail("BadBlock", "tau_short argument not supported in block (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
    return mat_sub(mat_add(Mat::identity(ctx.ring(), ctx.dim()), a.x),
                   adjoint(ctx, a.y));
}

Mat tau_ultra(const EndoContext& ctx, int i, const HElem& h) {
    int l = ctx.bl();
    if (i == 0 || i < -l || i > l) fail("BadBlock", "tau_ultra needs i != 0 in range");
    unsigned d = ctx.dim(), r0 = ctx.r0();
    if (h.x.rows() != r0 || h.x.cols() != d || h.y.rows() != d || h.y.cols() != d ||
        h.z.rows() != d || h.z.cols() != r0)
        fail("BadBlock", "tau_ultra argument has wrong slot shapes");
    if (!h_in_block(ctx, h, i))
        fail("BadBlock", "tau_ultra argument not in the block-" + std::to_string(i) +
                             " slice of H");
    Mat m = mat_add(Mat::identity(ctx.ring(), d), h_embed_x(ctx, h.x));
    m = mat_add(m, h.y);
    return mat_add(m, h_embed_z(ctx, h.z));
}

HMaps h_default_maps() {
    HMaps m;
    m.pi = [](const EndoContext& c, const HElem& h) { return h_pi(c, h); };
    m.tr = [](const EndoContext& c, const HElem& h) { return h_tr(c, h); };
    m.phi = [](const EndoContext& c, const DoubleElem& a) { return phi_H(c, a); };
    return m;
}

namespace {

HElem h_from_index(const EndoContext& ctx, uint64_t idx) {
    HElem h = h_zero(ctx);
    fill_from_index(ctx.ring(), h.x, idx);
    fill_from_index(ctx.ring(), h.y, idx);
    fill_from_index(ctx.ring(), h.z, idx);
    return h;
}

HElem h_random(const EndoContext& ctx, Rng& rng) {
    HElem h = h_zero(ctx);
    fill_random(ctx.ring(), h.x, rng);
    fill_random(ctx.ring(), h.y, rng);
    fill_random(ctx.ring(), h.z, rng);
    return h;
}

DoubleElem a_from_index(const EndoContext& ctx, uint64_t idx) {
    DoubleElem a = dbl_zero(ctx);
    fill_from_index(ctx.ring(), a.x, idx);
    fill_from_index(ctx.ring(), a.y, idx);
    return a;
}

DoubleElem a_random(const EndoContext& ctx, Rng& rng) {
    DoubleElem a = dbl_zero(ctx);
    fill_random(ctx.ring(), a.x, rng);
    fill_random(ctx.ring(), a.y, rng);
    return a;
}

std::string h_str(const HElem& h) {
    return "(x=" + h.x.to_string() + ", y=" + h.y.to_string() + ", z=" + h.z.to_string() + ")";
}

std::string a_str(const DoubleElem& a) {
    return "(" + a.x.to_string() + ", " + a.y.to_string() + ")";
}

// run one NQ law over nH elements of H and nA elements of A; exhaustive when
// the tuple space fits under 2^16, otherwise `trials` seeded samples
template <typename Body>
void run_nq_law(const EndoContext& ctx, CheckReport& rep, const char* law,
                uint64_t seed, uint64_t trials, unsigned nH, unsigned nA,
                Body body) {
    CheckEntry ent;
    ent.law = law;
    const Ring& K = ctx.ring();
    const unsigned d = ctx.dim(), r0 = ctx.r0();
    const uint64_t lim = uint64_t{1} << 16;
    const uint64_t hc = pow_capped(K.size(), uint64_t{2} * r0 * d + uint64_t{d} * d, lim);
    const uint64_t ac = pow_capped(K.size(), uint64_t{2} * d * d, lim);

    uint64_t total = 1;
    bool exh = true;
    for (unsigned t = 0; t < nH && exh; ++t) {
        if (hc == 0 || total > lim / hc) exh = false;
        else total *= hc;
    }
    for (unsigned t = 0; t < nA && exh; ++t) {
        if (ac == 0 || total > lim / ac) exh = false;
        else total *= ac;
    }

    auto eval = [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) {
        std::string w = body(hs, as);
        ++ent.cases;
        if (!w.empty()) {
            ent.ok = false;
            ent.witness = w;
        }
    };

    if (exh) {
        for (uint64_t t = 0; t < total && ent.ok; ++t) {
            uint64_t rem = t;
            std::vector<HElem> hs;
            std::vector<DoubleElem> as;
            for (unsigned s = 0; s < nH; ++s) {
                hs.push_back(h_from_index(ctx, rem % hc));
                rem /= hc;
            }
            for (unsigned s = 0; s < nA; ++s) {
                as.push_back(a_from_index(ctx, rem % ac));
                rem /= ac;
            }
            eval(hs, as);
        }
    } else {
        Rng rng(mix_seed(seed, law));
        for (uint64_t t = 0; t < trials && ent.ok; ++t) {
            std::vector<HElem> hs;
            std::vector<DoubleElem> as;
            for (unsigned s = 0; s < nH; ++s) hs.push_back(h_random(ctx, rng));
            for (unsigned s = 0; s < nA; ++s) as.push_back(a_random(ctx, rng));
            eval(hs, as);
        }
    }
    rep.entries.push_back(std::move(ent));
}

} // namespace

CheckReport verify_NQ(const EndoContext& ctx, uint64_t seed, uint64_t trials) {
    return verify_NQ(ctx, h_default_maps(), seed, trials);
}

CheckReport verify_NQ(const EndoContext& ctx, const HMaps& maps, uint64_t seed,
                      uint64_t trials) {
    if (trials < 1) fail("BadBlock", "verify_NQ needs trials >= 1");
    CheckReport rep;
    auto pi = [&](const HElem& h) { return maps.pi(ctx, h); };
    auto tr = [&](const HElem& h) { return maps.tr(ctx, h); };
    auto phi = [&](const DoubleElem& a) { return maps.phi(ctx, a); };
    auto cj = [&](const DoubleElem& a) { return dbl_conj(ctx, a); };
    auto add = [&](const HElem& a, const HElem& b) { return h_add(ctx, a, b); };
    auto neg = [&](const HElem& a) { return h_neg(ctx, a); };
    auto act = [&](const HElem& h, const DoubleElem& a) { return h_act(ctx, h, a); };

    run_nq_law(ctx, rep, "NQ1 h + h' - h - h' = phi(-conj(pi(h)) pi(h')); phi(a) central",
               seed, trials, 2, 1,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                   const HElem &h = hs[0], &g = hs[1];
                   HElem comm = add(add(add(h, g), neg(h)), neg(g));
                   HElem rhs = phi(dbl_neg(dbl_mul(cj(pi(h)), pi(g))));
                   if (!(comm == rhs))
                       return "commutator mismatch at h=" + h_str(h) + ", h'=" + h_str(g);
                   if (!(add(h, phi(as[0])) == add(phi(as[0]), h)))
                       return "phi(a) not central at h=" + h_str(h) + ", a=" + a_str(as[0]);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ2 phi(conj(a)) = -phi(a) = phi(-a)", seed, trials, 0, 1,
               [&](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                   const DoubleElem& a = as[0];
                   HElem m = neg(phi(a));
                   if (!(phi(cj(a)) == m)) return "phi(conj(a)) != -phi(a) at a=" + a_str(a);
                   if (!(m == phi(dbl_neg(a)))) return "-phi(a) != phi(-a) at a=" + a_str(a);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ3 pi(phi(a)) = 0", seed, trials, 0, 1,
               [&](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                   if (!(pi(phi(as[0])) == dbl_zero(ctx)))
                       return "pi(phi(a)) != 0 at a=" + a_str(as[0]);
                   return {};
               });

    run_nq_law(ctx, rep,
               "NQ4 tr(h + h') = tr(h) - conj(pi(h)) pi(h') + tr(h'); tr(-h) = -conj(pi(h)) pi(h) - tr(h)",
               seed, trials, 2, 0,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>&) -> std::string {
                   const HElem &h = hs[0], &g = hs[1];
                   DoubleElem rhs = dbl_add(dbl_sub(tr(h), dbl_mul(cj(pi(h)), pi(g))), tr(g));
                   if (!(tr(add(h, g)) == rhs))
                       return "sum rule fails at h=" + h_str(h) + ", h'=" + h_str(g);
                   if (!(tr(h_zero(ctx)) == dbl_zero(ctx))) return "tr(0) != 0";
                   DoubleElem nrhs = dbl_sub(dbl_neg(dbl_mul(cj(pi(h)), pi(h))), tr(h));
                   if (!(tr(neg(h)) == nrhs)) return "negation rule fails at h=" + h_str(h);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ5 conj(tr(h)) = tr(-h)", seed, trials, 1, 0,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>&) -> std::string {
                   if (!(cj(tr(hs[0])) == tr(neg(hs[0]))))
                       return "at h=" + h_str(hs[0]);
                   return {};
               });

    run_nq_law(ctx, rep,
               "NQ6 h.(a + a') = h.a + phi(conj(a') tr(h) a) + h.a'; h.0 = 0; h.(-1) = phi(tr(h)) - h",
               seed, trials, 1, 2,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                   const HElem& h = hs[0];
                   const DoubleElem &a = as[0], &b = as[1];
                   HElem rhs = add(add(act(h, a), phi(dbl_mul(dbl_mul(cj(b), tr(h)), a))),
                                   act(h, b));
                   if (!(act(h, dbl_add(a, b)) == rhs))
                       return "distribution fails at h=" + h_str(h) + ", a=" + a_str(a) +
                              ", a'=" + a_str(b);
                   if (!(act(h, dbl_zero(ctx)) == h_zero(ctx)))
                       return "h.0 != 0 at h=" + h_str(h);
                   DoubleElem minus_one = dbl_neg(dbl_one(ctx));
                   if (!(act(h, minus_one) == add(phi(tr(h)), neg(h))))
                       return "h.(-1) rule fails at h=" + h_str(h);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ7 phi(a).a' = phi(conj(a') a a')", seed, trials, 0, 2,
               [&](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                   const DoubleElem &a = as[0], &b = as[1];
                   if (!(act(phi(a), b) == phi(dbl_mul(dbl_mul(cj(b), a), b))))
                       return "at a=" + a_str(a) + ", a'=" + a_str(b);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ8 tr(h.a) = conj(a) tr(h) a", seed, trials, 1, 1,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                   if (!(tr(act(hs[0], as[0])) == dbl_mul(dbl_mul(cj(as[0]), tr(hs[0])), as[0])))
                       return "at h=" + h_str(hs[0]) + ", a=" + a_str(as[0]);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ9 pi(h.a) = pi(h) a", seed, trials, 1, 1,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                   if (!(pi(act(hs[0], as[0])) == dbl_mul(pi(hs[0]), as[0])))
                       return "at h=" + h_str(hs[0]) + ", a=" + a_str(as[0]);
                   return {};
               });

    run_nq_law(ctx, rep, "NQ10 tr(phi(a)) = a - conj(a); phi(tr(h)) = h + h.(-1)",
               seed, trials, 1, 1,
               [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                   if (!(tr(phi(as[0])) == dbl_sub(as[0], cj(as[0]))))
                       return "tr(phi(a)) fails at a=" + a_str(as[0]);
                   DoubleElem minus_one = dbl_neg(dbl_one(ctx));
                   if (!(phi(tr(hs[0])) == add(hs[0], act(hs[0], minus_one))))
                       return "phi(tr(h)) fails at h=" + h_str(hs[0]);
                   return {};
               });

    return rep;
}

namespace {

// one slot of a T-relation instance: an A-element in block (i, j), or an
// H-element in the block-i slice
struct Comp {
    bool isH;
    int i, j;
};

uint64_t comp_count(const EndoContext& ctx, const Comp& c, uint64_t cap) {
    const BlockProfile& prof = ctx.space.profile();
    uint64_t n = ctx.ring().size();
    if (c.isH) {
        uint64_t ri = prof.block_rank(c.i), r0 = ctx.r0();
        return pow_capped(n, 2 * r0 * ri + ri * ri, cap);
    }
    uint64_t e = uint64_t{2} * prof.block_rank(c.i) * prof.block_rank(c.j);
    return pow_capped(n, e, cap);
}

DoubleElem comp_a(const EndoContext& ctx, const Comp& c, uint64_t idx) {
    const Ring& K = ctx.ring();
    const BlockProfile& prof = ctx.space.profile();
    std::size_t cnt = static_cast<std::size_t>(prof.block_rank(c.i)) * prof.block_rank(c.j);
    std::vector<Ring::Elem> ex(cnt), ey(cnt);
    for (auto& v : ex) {
        v = static_cast<Ring::Elem>(idx % K.size());
        idx /= K.size();
    }
    for (auto& v : ey) {
        v = static_cast<Ring::Elem>(idx % K.size());
        idx /= K.size();
    }
    return DoubleElem{block_matrix(ctx, c.i, c.j, ex), block_matrix(ctx, c.i, c.j, ey)};
}

HElem comp_h(const EndoContext& ctx, const Comp& c, uint64_t idx) {
    const Ring& K = ctx.ring();
    const BlockProfile& prof = ctx.space.profile();
    unsigned r0 = ctx.r0(), ri = prof.block_rank(c.i);
    unsigned cs = prof.block_start(c.i), ns = prof.block_start(-c.i);
    HElem h = h_zero(ctx);
    for (unsigned t = 0; t < r0; ++t)
        for (unsigned s = 0; s < ri; ++s) {
            h.x.at(t, cs + s) = static_cast<Ring::Elem>(idx % K.size());
            idx /= K.size();
        }
    for (unsigned r = 0; r < ri; ++r)
        for (unsigned s = 0; s < ri; ++s) {
            h.y.at(ns + r, cs + s) = static_cast<Ring::Elem>(idx % K.size());
            idx /= K.size();
        }
    for (unsigned r = 0; r < ri; ++r)
        for (unsigned t = 0; t < r0; ++t) {
            h.z.at(ns + r, t) = static_cast<Ring::Elem>(idx % K.size());
            idx /= K.size();
        }
    return h;
}

DoubleElem comp_a_rand(const EndoContext& ctx, const Comp& c, Rng& rng) {
    const BlockProfile& prof = ctx.space.profile();
    std::size_t cnt = static_cast<std::size_t>(prof.block_rank(c.i)) * prof.block_rank(c.j);
    std::vector<Ring::Elem> ex(cnt), ey(cnt);
    for (auto& v : ex) v = static_cast<Ring::Elem>(rng.below(ctx.ring().size()));
    for (auto& v : ey) v = static_cast<Ring::Elem>(rng.below(ctx.ring().size()));
    return DoubleElem{block_matrix(ctx, c.i, c.j, ex), block_matrix(ctx, c.i, c.j, ey)};
}

HElem comp_h_rand(const EndoContext& ctx, const Comp& c, Rng& rng) {
    const Ring& K = ctx.ring();
    const BlockProfile& prof = ctx.space.profile();
    unsigned r0 = ctx.r0(), ri = prof.block_rank(c.i);
    unsigned cs = prof.block_start(c.i), ns = prof.block_start(-c.i);
    HElem h = h_zero(ctx);
    for (unsigned t = 0; t < r0; ++t)
        for (unsigned s = 0; s < ri; ++s)
            h.x.at(t, cs + s) = static_cast<Ring::Elem>(rng.below(K.size()));
    for (unsigned r = 0; r < ri; ++r)
        for (unsigned s = 0; s < ri; ++s)
            h.y.at(ns + r, cs + s) = static_cast<Ring::Elem>(rng.below(K.size()));
    for (unsigned r = 0; r < ri; ++r)
        for (unsigned t = 0; t < r0; ++t)
            h.z.at(ns + r, t) = static_cast<Ring::Elem>(rng.below(K.size()));
    return h;
}

Mat group_inv(const Mat& g) {
    auto i = mat_inverse(g);
    if (!i) fail("Internal", "transvection is not invertible");
    return *i;
}

Mat commutator(const Mat& g, const Mat& h) {
    return mat_mul(mat_mul(g, h), mat_mul(group_inv(g), group_inv(h)));
}

// run one relation instance over its component domain; exhaustive when the
// tuple space is at most 4096, otherwise `per` seeded samples
template <typename Body>
void run_T_instance(const EndoContext& ctx, CheckEntry& ent, Rng& rng, uint64_t per,
                    const std::vector<Comp>& comps, const std::string& where,
                    Body body) {
    if (!ent.ok) return;
    const uint64_t lim = 4096;
    uint64_t total = 1;
    bool exh = true;
    for (const Comp& c : comps) {
        uint64_t n = comp_count(ctx, c, lim);
        if (n == 0 || total > lim / n) {
            exh = false;
            break;
        }
        total *= n;
    }

    auto eval = [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) {
        std::string w;
        try {
            w = body(hs, as);
        } catch (const Error& err) {
            w = std::string("threw ") + err.what();
        }
        ++ent.cases;
        if (!w.empty()) {
            ent.ok = false;
            ent.witness = where + ": " + w;
        }
    };

    if (exh) {
        for (uint64_t t = 0; t < total && ent.ok; ++t) {
            uint64_t rem = t;
            std::vector<HElem> hs;
            std::vector<DoubleElem> as;
            for (const Comp& c : comps) {
                uint64_t n = comp_count(ctx, c, lim);
                uint64_t sub = rem % n;
                rem /= n;
                if (c.isH) hs.push_back(comp_h(ctx, c, sub));
                else as.push_back(comp_a(ctx, c, sub));
            }
            eval(hs, as);
        }
    } else {
        for (uint64_t t = 0; t < per && ent.ok; ++t) {
            std::vector<HElem> hs;
            std::vector<DoubleElem> as;
            for (const Comp& c : comps) {
                if (c.isH) hs.push_back(comp_h_rand(ctx, c, rng));
                else as.push_back(comp_a_rand(ctx, c, rng));
            }
            eval(hs, as);
        }
    }
}

bool short_ok(int i, int j) { return i != 0 && j != 0 && i != j && i != -j; }

std::string ij(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

} // namespace

CheckReport verify_T(const EndoContext& ctx, std::pair<int, int> blocks,
                     uint64_t seed, uint64_t trials) {
    ConjFn conj = [](const EndoContext& c, const Mat& m) { return adjoint(c, m); };
    return verify_T(ctx, blocks, conj, seed, trials);
}

CheckReport verify_T(const EndoContext& ctx, std::pair<int, int> blocks,
                     const ConjFn& conj, uint64_t seed, uint64_t trials) {
    if (trials < 1) fail("BadBlock", "verify_T needs trials >= 1");
    const int bi = blocks.first, bj = blocks.second, l = ctx.bl();
    if (!short_ok(bi, bj) || std::abs(bi) > l || std::abs(bj) > l)
        fail("BadBlock", "verify_T needs a block pair with 0 != i != +-j != 0");

    std::vector<int> U = {bi, -bi, bj, -bj};
    for (int m = 1; m <= l; ++m)
        if (m != std::abs(bi) && m != std::abs(bj)) {
            U.push_back(m);
            U.push_back(-m);
            break;
        }

    auto cjA = [&](const DoubleElem& a) {
        return DoubleElem{conj(ctx, a.y), conj(ctx, a.x)};
    };
    CheckReport rep;

    auto add_entry = [&](const char* law, auto&& fill) {
        CheckEntry ent;
        ent.law = law;
        Rng rng(mix_seed(seed, law));
        fill(ent, rng);
        rep.entries.push_back(std::move(ent));
    };

    add_entry("T1 tau_{i,j} and tau_i are homomorphisms", [&](CheckEntry& ent, Rng& rng) {
        std::vector<std::pair<int, int>> pairs;
        for (int u : U)
            for (int v : U)
                if (short_ok(u, v)) pairs.emplace_back(u, v);
        uint64_t per = trials / (pairs.size() + U.size()) + 1;
        for (auto [u, v] : pairs)
            run_T_instance(ctx, ent, rng, per, {{false, u, v}, {false, u, v}},
                           "short at " + ij(u, v),
                           [&](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                               Mat lhs = mat_mul(tau_short(ctx, u, v, as[0]),
                                                 tau_short(ctx, u, v, as[1]));
                               if (lhs != tau_short(ctx, u, v, dbl_add(as[0], as[1])))
                                   return "a=" + a_str(as[0]) + ", a'=" + a_str(as[1]);
                               return {};
                           });
        for (int u : U)
            run_T_instance(ctx, ent, rng, per, {{true, u, 0}, {true, u, 0}},
                           "ultra at " + std::to_string(u),
                           [&](const std::vector<HElem>& hs, const std::vector<DoubleElem>&) -> std::string {
                               Mat lhs = mat_mul(tau_ultra(ctx, u, hs[0]),
                                                 tau_ultra(ctx, u, hs[1]));
                               if (lhs != tau_ultra(ctx, u, h_add(ctx, hs[0], hs[1])))
                                   return "h=" + h_str(hs[0]) + ", h'=" + h_str(hs[1]);
                               return {};
                           });
    });

    add_entry("T2 tau_{i,j}(a) = tau_{-j,-i}(-conj(a))", [&](CheckEntry& ent, Rng& rng) {
        std::vector<std::pair<int, int>> pairs;
        for (int u : U)
            for (int v : U)
                if (short_ok(u, v)) pairs.emplace_back(u, v);
        uint64_t per = trials / pairs.size() + 1;
        for (auto [u, v] : pairs)
            run_T_instance(ctx, ent, rng, per, {{false, u, v}}, "at " + ij(u, v),
                           [&](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                               if (tau_short(ctx, u, v, as[0]) !=
                                   tau_short(ctx, -v, -u, dbl_neg(cjA(as[0]))))
                                   return "a=" + a_str(as[0]);
                               return {};
                           });
    });

    add_entry("T3 [tau_{i,j}(a), tau_{k,l}(a')] = 1 for disjoint pairs",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 4>> tuples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              for (int s : U)
                                  if (short_ok(u, v) && short_ok(w, s) && u != s &&
                                      s != -v && v != w && u != -w)
                                      tuples.push_back({u, v, w, s});
                  uint64_t per = trials / (tuples.size() + 1) + 1;
                  for (auto [u, v, w, s] : tuples)
                      run_T_instance(ctx, ent, rng, per, {{false, u, v}, {false, w, s}},
                                     "at " + ij(u, v) + " vs " + ij(w, s),
                                     [&, u = u, v = v, w = w, s = s](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_short(ctx, u, v, as[0]),
                                                            tau_short(ctx, w, s, as[1]));
                                         if (c != Mat::identity(ctx.ring(), ctx.dim()))
                                             return "a=" + a_str(as[0]) + ", a'=" + a_str(as[1]);
                                         return {};
                                     });
              });

    add_entry("T4 [tau_{i,j}(a), tau_{j,k}(a')] = tau_{i,k}(a a'); [tau_{j,i}(a), tau_{k,j}(a')] = tau_{k,i}(-a' a)",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 3>> tuples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              if (short_ok(u, v) && short_ok(v, w) && u != w && u != -w)
                                  tuples.push_back({u, v, w});
                  uint64_t per = trials / (2 * tuples.size() + 1) + 1;
                  for (auto [u, v, w] : tuples) {
                      run_T_instance(ctx, ent, rng, per, {{false, u, v}, {false, v, w}},
                                     "forward at " + ij(u, v) + "," + ij(v, w),
                                     [&, u = u, v = v, w = w](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_short(ctx, u, v, as[0]),
                                                            tau_short(ctx, v, w, as[1]));
                                         if (c != tau_short(ctx, u, w, dbl_mul(as[0], as[1])))
                                             return "a=" + a_str(as[0]) + ", a'=" + a_str(as[1]);
                                         return {};
                                     });
                      run_T_instance(ctx, ent, rng, per, {{false, v, u}, {false, w, v}},
                                     "reverse at " + ij(v, u) + "," + ij(w, v),
                                     [&, u = u, v = v, w = w](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_short(ctx, v, u, as[0]),
                                                            tau_short(ctx, w, v, as[1]));
                                         if (c != tau_short(ctx, w, u,
                                                            dbl_neg(dbl_mul(as[1], as[0]))))
                                             return "a=" + a_str(as[0]) + ", a'=" + a_str(as[1]);
                                         return {};
                                     });
                  }
              });

    add_entry("T5 [tau_{-i,j}(a), tau_{j,i}(a')] = tau_i(phi(a a'))",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::pair<int, int>> pairs;
                  for (int u : U)
                      for (int v : U)
                          if (short_ok(u, v)) pairs.emplace_back(u, v);
                  uint64_t per = trials / pairs.size() + 1;
                  for (auto [u, v] : pairs)
                      run_T_instance(ctx, ent, rng, per, {{false, -u, v}, {false, v, u}},
                                     "at i=" + std::to_string(u) + ", j=" + std::to_string(v),
                                     [&, u = u, v = v](const std::vector<HElem>&, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_short(ctx, -u, v, as[0]),
                                                            tau_short(ctx, v, u, as[1]));
                                         if (c != tau_ultra(ctx, u, phi_H(ctx, dbl_mul(as[0], as[1]))))
                                             return "a=" + a_str(as[0]) + ", a'=" + a_str(as[1]);
                                         return {};
                                     });
              });

    add_entry("T6 [tau_i(h), tau_j(h')] = tau_{-i,j}(-conj(pi(h)) pi(h'))",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::pair<int, int>> pairs;
                  for (int u : U)
                      for (int v : U)
                          if (short_ok(u, v)) pairs.emplace_back(u, v);
                  uint64_t per = trials / pairs.size() + 1;
                  for (auto [u, v] : pairs)
                      run_T_instance(ctx, ent, rng, per, {{true, u, 0}, {true, v, 0}},
                                     "at i=" + std::to_string(u) + ", j=" + std::to_string(v),
                                     [&, u = u, v = v](const std::vector<HElem>& hs, const std::vector<DoubleElem>&) -> std::string {
                                         Mat c = commutator(tau_ultra(ctx, u, hs[0]),
                                                            tau_ultra(ctx, v, hs[1]));
                                         DoubleElem rhs = dbl_neg(
                                             dbl_mul(cjA(h_pi(ctx, hs[0])), h_pi(ctx, hs[1])));
                                         if (c != tau_short(ctx, -u, v, rhs))
                                             return "h=" + h_str(hs[0]) + ", h'=" + h_str(hs[1]);
                                         return {};
                                     });
              });

    add_entry("T7 [tau_i(h), tau_{j,k}(a)] = 1 for j != i != -k",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 3>> tuples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              if (short_ok(v, w) && v != u && u != -w)
                                  tuples.push_back({u, v, w});
                  uint64_t per = trials / (tuples.size() + 1) + 1;
                  for (auto [u, v, w] : tuples)
                      run_T_instance(ctx, ent, rng, per, {{true, u, 0}, {false, v, w}},
                                     "at i=" + std::to_string(u) + ", " + ij(v, w),
                                     [&, u = u, v = v, w = w](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_ultra(ctx, u, hs[0]),
                                                            tau_short(ctx, v, w, as[0]));
                                         if (c != Mat::identity(ctx.ring(), ctx.dim()))
                                             return "h=" + h_str(hs[0]) + ", a=" + a_str(as[0]);
                                         return {};
                                     });
              });

    add_entry("T8 [tau_i(h), tau_{i,j}(a)] = tau_{-i,j}(tr(h) a) tau_j(-h.(-a))",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::pair<int, int>> pairs;
                  for (int u : U)
                      for (int v : U)
                          if (short_ok(u, v)) pairs.emplace_back(u, v);
                  uint64_t per = trials / pairs.size() + 1;
                  for (auto [u, v] : pairs)
                      run_T_instance(ctx, ent, rng, per, {{true, u, 0}, {false, u, v}},
                                     "at i=" + std::to_string(u) + ", j=" + std::to_string(v),
                                     [&, u = u, v = v](const std::vector<HElem>& hs, const std::vector<DoubleElem>& as) -> std::string {
                                         Mat c = commutator(tau_ultra(ctx, u, hs[0]),
                                                            tau_short(ctx, u, v, as[0]));
                                         Mat first = tau_short(ctx, -u, v,
                                                               dbl_mul(h_tr(ctx, hs[0]), as[0]));
                                         HElem hh = h_act(ctx, h_neg(ctx, hs[0]), dbl_neg(as[0]));
                                         if (c != mat_mul(first, tau_ultra(ctx, v, hh)))
                                             return "h=" + h_str(hs[0]) + ", a=" + a_str(as[0]);
                                         return {};
                                     });
              });

    return rep;
}

namespace {

// single-slot block elements of C itself, for the t_{i,j} relation family
uint64_t cb_count(const EndoContext& ctx, int i, int j, uint64_t lim) {
    const BlockProfile& prof = ctx.space.profile();
    std::size_t slots = static_cast<std::size_t>(prof.block_rank(i)) * prof.block_rank(j);
    uint64_t n = 1;
    for (std::size_t s = 0; s < slots; ++s) {
        if (n > lim / ctx.ring().size()) return 0;
        n *= ctx.ring().size();
    }
    return n;
}

Mat cb_at(const EndoContext& ctx, int i, int j, uint64_t idx) {
    const BlockProfile& prof = ctx.space.profile();
    std::size_t slots = static_cast<std::size_t>(prof.block_rank(i)) * prof.block_rank(j);
    std::vector<Ring::Elem> entries(slots);
    for (auto& e : entries) {
        e = static_cast<Ring::Elem>(idx % ctx.ring().size());
        idx /= ctx.ring().size();
    }
    return block_matrix(ctx, i, j, entries);
}

Mat cb_rand(const EndoContext& ctx, int i, int j, Rng& rng) {
    const BlockProfile& prof = ctx.space.profile();
    std::size_t slots = static_cast<std::size_t>(prof.block_rank(i)) * prof.block_rank(j);
    std::vector<Ring::Elem> entries(slots);
    for (auto& e : entries) e = static_cast<Ring::Elem>(rng.below(ctx.ring().size()));
    return block_matrix(ctx, i, j, entries);
}

// one LT instance over a list of C blocks, exhaustive when the tuple space
// is at most 4096, otherwise `per` seeded samples
template <typename Body>
void run_LT_instance(const EndoContext& ctx, CheckEntry& ent, Rng& rng, uint64_t per,
                     const std::vector<std::pair<int, int>>& comps,
                     const std::string& where, Body body) {
    if (!ent.ok) return;
    const uint64_t lim = 4096;
    uint64_t total = 1;
    bool exh = true;
    for (auto [i, j] : comps) {
        uint64_t n = cb_count(ctx, i, j, lim);
        if (n == 0 || total > lim / n) {
            exh = false;
            break;
        }
        total *= n;
    }

    auto eval = [&](const std::vector<Mat>& xs) {
        std::string w;
        try {
            w = body(xs);
        } catch (const Error& err) {
            w = std::string("threw ") + err.what();
        }
        ++ent.cases;
        if (!w.empty()) {
            ent.ok = false;
            ent.witness = where + ": " + w;
        }
    };

    if (exh) {
        for (uint64_t t = 0; t < total && ent.ok; ++t) {
            uint64_t rem = t;
            std::vector<Mat> xs;
            for (auto [i, j] : comps) {
                uint64_t n = cb_count(ctx, i, j, lim);
                xs.push_back(cb_at(ctx, i, j, rem % n));
                rem /= n;
            }
            eval(xs);
        }
    } else {
        for (uint64_t t = 0; t < per && ent.ok; ++t) {
            std::vector<Mat> xs;
            for (auto [i, j] : comps) xs.push_back(cb_rand(ctx, i, j, rng));
            eval(xs);
        }
    }
}

std::string x_str(const Mat& x) { return "[" + mat_to_string(x) + "]"; }

} // namespace

CheckReport verify_LT(const EndoContext& ctx, uint64_t seed, uint64_t trials) {
    if (trials < 1) fail("BadBlock", "verify_LT needs trials >= 1");
    const int l = ctx.bl();
    std::vector<int> U;
    for (int i = -l; i <= l; ++i) U.push_back(i);

    CheckReport rep;
    auto add_entry = [&](const char* law, auto&& fill) {
        CheckEntry ent;
        ent.law = law;
        Rng rng(mix_seed(seed, law));
        fill(ent, rng);
        rep.entries.push_back(std::move(ent));
    };

    add_entry("LT1 t_{i,j}(x) t_{i,j}(y) = t_{i,j}(x + y)", [&](CheckEntry& ent, Rng& rng) {
        std::vector<std::pair<int, int>> pairs;
        for (int u : U)
            for (int v : U)
                if (u != v) pairs.emplace_back(u, v);
        uint64_t per = trials / pairs.size() + 1;
        for (auto [u, v] : pairs)
            run_LT_instance(ctx, ent, rng, per, {{u, v}, {u, v}}, "at " + ij(u, v),
                            [&](const std::vector<Mat>& xs) -> std::string {
                                Mat lhs = mat_mul(t_elem(ctx, u, v, xs[0]),
                                                  t_elem(ctx, u, v, xs[1]));
                                if (lhs != t_elem(ctx, u, v, mat_add(xs[0], xs[1])))
                                    return "x=" + x_str(xs[0]) + ", y=" + x_str(xs[1]);
                                return {};
                            });
    });

    add_entry("LT2 [t_{i,j}(x), t_{j,k}(y)] = t_{i,k}(x y) for i != k",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 3>> triples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              if (u != v && v != w && u != w) triples.push_back({u, v, w});
                  uint64_t per = trials / triples.size() + 1;
                  for (auto [u, v, w] : triples)
                      run_LT_instance(ctx, ent, rng, per, {{u, v}, {v, w}},
                                      "at " + ij(u, v) + " then " + ij(v, w),
                                      [&, u = u, v = v, w = w](const std::vector<Mat>& xs) -> std::string {
                                          Mat c = commutator(t_elem(ctx, u, v, xs[0]),
                                                             t_elem(ctx, v, w, xs[1]));
                                          if (c != t_elem(ctx, u, w, mat_mul(xs[0], xs[1])))
                                              return "x=" + x_str(xs[0]) + ", y=" + x_str(xs[1]);
                                          return {};
                                      });
              });

    add_entry("LT3 [t_{j,i}(x), t_{k,j}(y)] = t_{k,i}(-y x) for i != k",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 3>> triples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              if (u != v && v != w && u != w) triples.push_back({u, v, w});
                  uint64_t per = trials / triples.size() + 1;
                  for (auto [v, u, w] : triples)
                      run_LT_instance(ctx, ent, rng, per, {{v, u}, {w, v}},
                                      "at " + ij(v, u) + " after " + ij(w, v),
                                      [&, v = v, u = u, w = w](const std::vector<Mat>& xs) -> std::string {
                                          Mat c = commutator(t_elem(ctx, v, u, xs[0]),
                                                             t_elem(ctx, w, v, xs[1]));
                                          if (c != t_elem(ctx, w, u, mat_neg(mat_mul(xs[1], xs[0]))))
                                              return "x=" + x_str(xs[0]) + ", y=" + x_str(xs[1]);
                                          return {};
                                      });
              });

    add_entry("LT4 [t_{i,j}(x), t_{k,l}(y)] = 1 for j != k and l != i",
              [&](CheckEntry& ent, Rng& rng) {
                  std::vector<std::array<int, 4>> tuples;
                  for (int u : U)
                      for (int v : U)
                          for (int w : U)
                              for (int s : U)
                                  if (u != v && w != s && v != w && s != u)
                                      tuples.push_back({u, v, w, s});
                  uint64_t per = trials / (tuples.size() + 1) + 1;
                  for (auto [u, v, w, s] : tuples)
                      run_LT_instance(ctx, ent, rng, per, {{u, v}, {w, s}},
                                      "at " + ij(u, v) + " vs " + ij(w, s),
                                      [&, u = u, v = v, w = w, s = s](const std::vector<Mat>& xs) -> std::string {
                                          Mat c = commutator(t_elem(ctx, u, v, xs[0]),
                                                             t_elem(ctx, w, s, xs[1]));
                                          if (c != Mat::identity(ctx.ring(), ctx.dim()))
                                              return "x=" + x_str(xs[0]) + ", y=" + x_str(xs[1]);
                                          return {};
                                      });
              });

    return rep;
}

} // namespace oddu

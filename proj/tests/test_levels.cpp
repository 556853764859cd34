#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oddu/levels.hpp"

#include <set>
#include <string>
#include <vector>

using namespace oddu;

namespace {

template <typename F>
std::string error_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

Mat from_rows(const Ring& K, const std::vector<std::vector<long long>>& rows) {
    Mat m(K, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = K.from_int(rows[i][j]);
    return m;
}

QuadraticSpace hyper_min(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    r[0] = 0;
    return build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0), {});
}

QuadraticSpace hyper_max(const Ring& K, unsigned l) {
    QuadraticSpace lo = hyper_min(K, l);
    std::vector<unsigned> r(l + 1, 1);
    r[0] = 0;
    return build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0),
                                lmax_elements(lo.gram()));
}

QuadraticSpace odd_min(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    return build_standard_space(K, BlockProfile{l, r}, from_rows(K, {{1}}), {});
}

QuadraticSpace odd_max(const Ring& K, unsigned l) {
    QuadraticSpace lo = odd_min(K, l);
    std::vector<unsigned> r(l + 1, 1);
    return build_standard_space(K, BlockProfile{l, r}, from_rows(K, {{1}}),
                                lmax_elements(lo.gram()));
}

bool hz(const HElem& h) {
    return mat_is_zero(h.x) && mat_is_zero(h.y) && mat_is_zero(h.z);
}

std::vector<DoubleElem> class_mgens(const EndoContext& ctx, const AugLevel& L) {
    std::vector<DoubleElem> out;
    for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
        for (int j = -ctx.bl(); j <= ctx.bl(); ++j) {
            if (j == 0) continue;
            for (DoubleElem& a : L.I.block_gens(i, j)) out.push_back(std::move(a));
        }
    return out;
}

std::vector<HElem> class_helems(const EndoContext& ctx, const AugLevel& L) {
    std::vector<HElem> out;
    for (int i = -ctx.bl(); i <= ctx.bl(); ++i) {
        if (i == 0) continue;
        for (const HElem& h : L.gamma.block(i).elems())
            if (!hz(h)) out.push_back(h);
    }
    return out;
}

Mat rand_inv(const Ring& K, unsigned d, Rng& rng) {
    for (;;) {
        Mat m(K, d, d);
        for (unsigned r = 0; r < d; ++r)
            for (unsigned c = 0; c < d; ++c)
                m.at(r, c) = static_cast<Ring::Elem>(rng.below(K.size()));
        if (mat_inverse(m)) return m;
    }
}

// the form-parameter description of the odd parameter of the double: h is in
// block i of the parameter iff z = -inv(x) and every point of the block lands
// the pair (x p, B(p, y p)) inside the parameter of the space
bool lambda_direct(const EndoContext& ctx, int i, const HElem& h) {
    const QuadraticSpace& sp = ctx.space;
    const Ring& K = ctx.ring();
    Mat xf = h_embed_x(ctx, h.x);
    Mat zf = h_embed_z(ctx, h.z);
    if (zf != mat_neg(adjoint(ctx, xf))) return false;
    unsigned ri = sp.profile().block_rank(i);
    unsigned si = sp.profile().block_start(i);
    std::vector<Ring::Elem> codes(ri, 0);
    for (;;) {
        Vec p = vec_zero(sp.dim());
        for (unsigned t = 0; t < ri; ++t) p[si + t] = codes[t];
        Vec xp = mat_apply(xf, p);
        Vec yp = mat_apply(h.y, p);
        if (!sp.in_param(FormPoint{xp, sp.form(p, yp)})) return false;
        std::size_t t = 0;
        while (t < ri) {
            if (static_cast<std::size_t>(++codes[t]) < K.size()) break;
            codes[t] = 0;
            ++t;
        }
        if (t == ri) return true;
    }
}

} // namespace

TEST_CASE("odd parameter of the double matches the form-parameter description") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring F3 = Ring::build(RingSpec::modular(3));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    for (const QuadraticSpace& sp :
         {hyper_min(F2, 2), hyper_max(F2, 2), hyper_min(F3, 2), hyper_min(Z4, 2),
          odd_min(F2, 2), odd_max(F2, 2)}) {
        EndoContext ctx = make_endo_context(sp);
        GammaData lam = compute_lambda(ctx);
        for (int i = -ctx.bl(); i <= ctx.bl(); ++i) {
            if (i == 0) continue;
            std::size_t direct = 0;
            for (const HElem& h : hblock_carrier(ctx, i)) {
                bool want = lambda_direct(ctx, i, h);
                CHECK(want == lam.block(i).member(h));
                direct += want;
            }
            CHECK(direct == lam.block(i).size());
        }
    }

    SUBCASE("known block sizes over F2") {
        EndoContext mn = make_endo_context(hyper_min(F2, 2));
        EndoContext mx = make_endo_context(hyper_max(F2, 2));
        EndoContext om = make_endo_context(odd_min(F2, 2));
        GammaData ln = compute_lambda(mn), lx = compute_lambda(mx),
                  lo = compute_lambda(om);
        for (int i : {-2, -1, 1, 2}) {
            CHECK(ln.block(i).size() == 1);
            CHECK(lx.block(i).size() == 2);
            CHECK(lo.block(i).size() == 1);
        }
    }
}

TEST_CASE("alpha embedding and eps defect identities") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    for (const QuadraticSpace& sp :
         {hyper_min(F2, 2), odd_min(F2, 2), odd_min(Z4, 2)}) {
        EndoContext ctx = make_endo_context(sp);
        const Ring& K = ctx.ring();
        unsigned d = ctx.dim();
        HElem eps = eps_elem(ctx);

        SUBCASE("pi and tr of eps") {
            DoubleElem pe = h_pi(ctx, eps);
            CHECK(pe.x == ctx.eidem(0));
            CHECK(pe.y == ctx.eidem(0));
            DoubleElem te = h_tr(ctx, eps);
            CHECK(te.x == ctx.e_plus);
            CHECK(te.y == mat_neg(mat_add(ctx.eidem(0), ctx.e_minus)));
        }

        SUBCASE("group laws of alpha and the defect cocycle") {
            Rng rng(mix_seed(7, "alpha-laws"));
            for (int trial = 0; trial < 8; ++trial) {
                Mat g = rand_inv(K, d, rng), g2 = rand_inv(K, d, rng);
                Mat gi = *mat_inverse(g);
                DoubleElem one = dbl_one(ctx);
                DoubleElem ag = alpha_map(ctx, g), ah = alpha_map(ctx, g2);
                DoubleElem agi = alpha_map(ctx, gi);

                CHECK(dbl_sub(agi, one) == dbl_conj(ctx, dbl_sub(ag, one)));
                CHECK(dbl_sub(alpha_map(ctx, mat_mul(g, g2)), one) ==
                      dbl_add(dbl_mul(dbl_sub(ag, one), ah), dbl_sub(ah, one)));

                HElem dg = eps_defect(ctx, g), dh = eps_defect(ctx, g2);
                HElem dgi = eps_defect(ctx, gi);
                CHECK(dgi == h_act(ctx, h_neg(ctx, dg), agi));
                CHECK(eps_defect(ctx, mat_mul(g, g2)) ==
                      h_add(ctx, h_act(ctx, dg, ah), dh));
            }
        }

        SUBCASE("transvection values of alpha and the defect case table") {
            int l = ctx.bl();
            DoubleElem one = dbl_one(ctx);
            for (int i = -l; i <= l; ++i) {
                if (i == 0) continue;
                for (int j = -l; j <= l; ++j) {
                    if (j == 0 || j == i || j == -i) continue;
                    for (const DoubleElem& a : ablock_carrier(ctx, i, j)) {
                        Mat t = tau_short(ctx, i, j, a);
                        CHECK(alpha_map(ctx, t) ==
                              dbl_add(one, dbl_sub(a, dbl_conj(ctx, a))));
                        HElem def = eps_defect(ctx, t);
                        if (i < 0 && 0 < j)
                            CHECK(def == phi_H(ctx, dbl_conj(ctx, a)));
                        else if (i > 0 && 0 > j)
                            CHECK(def == phi_H(ctx, a));
                        else
                            CHECK(hz(def));
                    }
                }
                for (const HElem& h : hblock_carrier(ctx, i)) {
                    Mat t = tau_ultra(ctx, i, h);
                    DoubleElem p = h_pi(ctx, h);
                    CHECK(alpha_map(ctx, t) ==
                          dbl_sub(dbl_add(dbl_add(one, h_tr(ctx, h)), p),
                                  dbl_conj(ctx, p)));
                    HElem def = eps_defect(ctx, t);
                    if (i > 0) {
                        DoubleElem mone =
                            dbl_of(ctx, Mat::scalar(K, d, K.neg(K.one())));
                        HElem want = h_add(ctx, h_neg(ctx, h_act(ctx, h, mone)),
                                           h_neg(ctx, phi_H(ctx, p)));
                        CHECK(def == want);
                    } else {
                        CHECK(def == h);
                    }
                }
            }
        }
    }
}

TEST_CASE("principal membership at the base level is the isometry condition") {
    Ring F2 = Ring::build(RingSpec::modular(2));

    for (const QuadraticSpace& sp : {hyper_max(F2, 2), odd_min(F2, 2)}) {
        EndoContext ctx = make_endo_context(sp);
        const Ring& K = ctx.ring();
        AugLevel base = base_level(ctx);
        AugLevel full = full_level(ctx);
        AugLevel zero = zero_level(ctx);

        for (const Mat& g : eu_gens(ctx)) {
            CHECK(is_isometry(sp, g));
            CHECK(principal_membership(ctx, base, g));
        }

        Rng rng(mix_seed(11, "principal"));
        unsigned agree_iso = 0;
        for (int trial = 0; trial < 40; ++trial) {
            Mat g = rand_inv(K, ctx.dim(), rng);
            bool iso = is_isometry(sp, g);
            CHECK(principal_membership(ctx, base, g) == iso);
            CHECK(principal_membership(ctx, full, g));
            CHECK(principal_membership(ctx, zero, g) ==
                  (g == Mat::identity(K, ctx.dim())));
            agree_iso += iso;
        }
        CHECK(agree_iso < 40); // the samples saw actual non-isometries
        CHECK(principal_membership(ctx, zero, Mat::identity(K, ctx.dim())));
    }
}

TEST_CASE("interval of level classes between zero and full") {
    Ring F2 = Ring::build(RingSpec::modular(2));

    SUBCASE("minimal parameter, three hyperbolic pairs") {
        EndoContext ctx = make_endo_context(hyper_min(F2, 3));
        AugLevel zero = zero_level(ctx), full = full_level(ctx);
        std::vector<AugLevel> all = levels_between(ctx, zero, full);
        CHECK(all.size() == 4);

        std::set<std::string> keys;
        for (const AugLevel& L : all) {
            CHECK(check_aug_level(ctx, L).all_ok());
            CHECK(level_leq(ctx, zero, L));
            CHECK(level_leq(ctx, L, full));
            keys.insert(level_key(ctx, L));
        }
        CHECK(keys.size() == 4);
        CHECK(keys.count(level_key(ctx, zero)) == 1);
        CHECK(keys.count(level_key(ctx, full)) == 1);
        CHECK(keys.count(level_key(ctx, base_level(ctx))) == 1);

        // diagonal module part with the full group part is the fourth class
        std::vector<DoubleElem> mg = class_mgens(ctx, base_level(ctx));
        std::vector<HElem> hg;
        for (int i = -3; i <= 3; ++i) {
            if (i == 0) continue;
            for (const HElem& h : hblock_carrier(ctx, i))
                if (!hz(h)) hg.push_back(h);
        }
        AugLevel mid = complete_level(ctx, mg, hg);
        CHECK(keys.count(level_key(ctx, mid)) == 1);

        // sorted by key, deterministically
        std::vector<std::string> inorder;
        for (const AugLevel& L : all) inorder.push_back(level_key(ctx, L));
        CHECK(std::is_sorted(inorder.begin(), inorder.end()));
    }

    SUBCASE("maximal parameter, three hyperbolic pairs") {
        EndoContext ctx = make_endo_context(hyper_max(F2, 3));
        std::vector<AugLevel> all =
            levels_between(ctx, zero_level(ctx), full_level(ctx));
        CHECK(all.size() == 3);
        std::set<std::string> keys;
        for (const AugLevel& L : all) keys.insert(level_key(ctx, L));
        CHECK(keys.count(level_key(ctx, base_level(ctx))) == 1);
    }
}

TEST_CASE("enveloping, floor and ceiling calculus") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    for (const QuadraticSpace& sp : {odd_min(F2, 2), odd_min(Z4, 2)}) {
        EndoContext ctx = make_endo_context(sp);
        AugLevel base = base_level(ctx);
        AugLevel zero = zero_level(ctx);

        AugLevel env0 = enveloping_level(ctx, zero);
        CHECK(level_eq(ctx, env0, base));

        AugLevel env = enveloping_level(ctx, base);
        AugLevel env2 = enveloping_level(ctx, env);
        CHECK(env2.I.same(env.I));
        for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
            CHECK(env2.gamma.block(i).same(env.gamma.block(i)));

        AugLevel flo = floor_level(ctx, env);
        AugLevel cei = ceil_level(ctx, env);
        CHECK(level_eq(ctx, flo, env));
        CHECK(level_eq(ctx, cei, env));
        CHECK(env.I.contains(flo.I));
        CHECK(cei.I.contains(env.I));
        for (int i = -ctx.bl(); i <= ctx.bl(); ++i) {
            CHECK(env.gamma.block(i).contains(flo.gamma.block(i)));
            CHECK(cei.gamma.block(i).contains(env.gamma.block(i)));
        }
        CHECK(check_aug_level(ctx, flo).all_ok());
        CHECK(check_aug_level(ctx, cei).all_ok());

        // the floor is what completion forces from the class data alone
        AugLevel cmp = complete_level(ctx, class_mgens(ctx, env),
                                      class_helems(ctx, env));
        CHECK(cmp.I.same(flo.I));
        for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
            CHECK(cmp.gamma.block(i).same(flo.gamma.block(i)));

        // the ceiling only depends on the class
        AugLevel cei2 = ceil_level(ctx, flo);
        CHECK(cei2.I.same(cei.I));
        for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
            CHECK(cei2.gamma.block(i).same(cei.gamma.block(i)));
    }

    SUBCASE("ceiling of the zero class is proper at an odd block") {
        EndoContext ctx = make_endo_context(odd_min(Z4, 2));
        AugLevel zero = zero_level(ctx);
        AugLevel flo = floor_level(ctx, zero);
        AugLevel cei = ceil_level(ctx, zero);
        CHECK(level_eq(ctx, flo, cei));
        CHECK(level_key(ctx, flo) == level_key(ctx, cei));
        CHECK(cei.I.contains(flo.I));
        CHECK(!flo.I.same(cei.I));
        CHECK(level_text(ctx, flo) != level_text(ctx, cei));
    }
}

TEST_CASE("scaling by hermitian ring elements") {
    Ring Z4 = Ring::build(RingSpec::modular(4));
    EndoContext ctx = make_endo_context(hyper_max(Z4, 2));
    AugLevel base = base_level(ctx);

    AugLevel s1 = scale_level(ctx, base, Z4.one());
    CHECK(s1.I.same(base.I));
    for (int i = -ctx.bl(); i <= ctx.bl(); ++i)
        CHECK(s1.gamma.block(i).same(base.gamma.block(i)));

    AugLevel s0 = scale_level(ctx, base, Z4.zero());
    CHECK(level_eq(ctx, s0, zero_level(ctx)));

    Ring::Elem two = Z4.from_int(2);
    AugLevel s2 = scale_level(ctx, base, two);
    CHECK(check_aug_level(ctx, s2).all_ok());
    CHECK(level_leq(ctx, s2, base));
    CHECK(!level_eq(ctx, s2, base));
    CHECK(!level_eq(ctx, s2, zero_level(ctx)));

    AugLevel s22 = scale_level(ctx, s2, two);
    CHECK(level_eq(ctx, s22, zero_level(ctx))); // 2 * 2 = 0 in Z/4
}

TEST_CASE("root system and root subgroups") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_max(F2, 2));
    AugLevel base = base_level(ctx);

    SUBCASE("root bookkeeping") {
        CHECK(all_roots(2).size() == 12);
        CHECK(all_roots(3).size() == 24);
        unsigned shorts = 0, ultras = 0, longs = 0;
        for (const Root& a : all_roots(2)) {
            auto s = root_shape(a);
            REQUIRE(s.has_value());
            if (*s == RootLen::Short) ++shorts;
            if (*s == RootLen::Ultrashort) ++ultras;
            if (*s == RootLen::Long) ++longs;
            CHECK(root_shape(root_neg(a)) == s);
            CHECK(root_neg(root_neg(a)) == a);
        }
        CHECK(shorts == 4);
        CHECK(ultras == 4);
        CHECK(longs == 4);
        Root ea{{1, 0}}, eab{{1, -1}}, eb{{0, 1}};
        CHECK(root_madd(eab, eb, 1, 1) == ea);
        CHECK(root_shape(root_madd(ea, ea, 1, 1)) == RootLen::Long);
        CHECK(!root_shape(root_madd(eab, eb, 1, 3)).has_value());
    }

    SUBCASE("root subgroups of the base level are isometries") {
        for (const Root& a : all_roots(2))
            for (const Mat& g : root_subgroup(ctx, base, a)) {
                CHECK(is_isometry(ctx.space, g));
                CHECK(principal_membership(ctx, base, g));
            }
    }

    SUBCASE("long root subgroup embeds in the ultrashort one") {
        for (int s : {1, -1})
            for (unsigned a = 0; a < 2; ++a) {
                Root ultra{{0, 0}}, lng{{0, 0}};
                ultra.v[a] = s;
                lng.v[a] = 2 * s;
                std::set<std::string> ukeys;
                for (const Mat& g : root_subgroup(ctx, base, ultra))
                    ukeys.insert(mat_key(g));
                for (const Mat& g : root_subgroup(ctx, base, lng))
                    CHECK(ukeys.count(mat_key(g)) == 1);
            }
    }

    SUBCASE("commutators land in the span of the positive combinations") {
        Root alpha{{1, -1}}, beta{{0, 1}};
        std::vector<Mat> span_gens;
        for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
            Root c = root_madd(alpha, beta, m, n);
            if (!root_shape(c)) continue;
            for (const Mat& g : root_subgroup(ctx, base, c))
                span_gens.push_back(g);
        }
        FiniteGroup span = generate(F2, ctx.dim(), span_gens, 4096);
        for (const Mat& x : root_subgroup(ctx, base, alpha))
            for (const Mat& y : root_subgroup(ctx, base, beta)) {
                Mat com = mat_mul(mat_mul(x, y),
                                  mat_mul(*mat_inverse(x), *mat_inverse(y)));
                CHECK(contains(span, com));
            }
    }
}

TEST_CASE("level of a group round-trips") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_max(F2, 2));
    const Ring& K = ctx.ring();
    unsigned d = ctx.dim();
    AugLevel base = base_level(ctx);

    FiniteGroup eu = generate(K, d, eu_gens(ctx), 4096);
    CHECK(eu.order() == 720);

    AugLevel l1 = level_of_group(ctx, [&](const Mat& m) { return contains(eu, m); });
    CHECK(level_eq(ctx, l1, base));

    AugLevel l2 = level_of_group(
        ctx, [&](const Mat& m) { return is_isometry(ctx.space, m); });
    CHECK(level_eq(ctx, l2, base));

    AugLevel l3 = level_of_group(
        ctx, [&](const Mat& m) { return m == Mat::identity(K, d); });
    CHECK(level_eq(ctx, l3, zero_level(ctx)));

    AugLevel l4 = level_of_group(ctx, [&](const Mat&) { return true; });
    CHECK(level_eq(ctx, l4, full_level(ctx)));

    SUBCASE("rejects oracles without elementary normalization") {
        Vec e0 = vec_zero(d);
        e0[0] = K.one();
        auto stab = [&](const Mat& m) { return mat_apply(m, e0) == e0; };
        CHECK(error_kind([&] { (void)level_of_group(ctx, stab); }) == "NotALevel");

        auto noid = [&](const Mat& m) { return m != Mat::identity(K, d); };
        CHECK(error_kind([&] { (void)level_of_group(ctx, noid); }) == "NotALevel");
    }
}

TEST_CASE("relative normalizer membership") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_max(F2, 2));
    const Ring& K = ctx.ring();
    unsigned d = ctx.dim();
    AugLevel base = base_level(ctx);
    AugLevel zero = zero_level(ctx);

    GuChecker at_base(ctx, base);
    GuChecker at_zero(ctx, zero);

    std::vector<Mat> gens = eu_gens(ctx);
    for (const Mat& g : gens) CHECK(at_base.member(g, 4, 99));
    CHECK(at_base.member(Mat::identity(K, d)));
    CHECK(at_zero.member(Mat::identity(K, d)));

    // products of elementary generators stay inside
    Rng rng(mix_seed(23, "gu-products"));
    for (int trial = 0; trial < 6; ++trial) {
        Mat g = Mat::identity(K, d);
        for (int s = 0; s < 4; ++s)
            g = mat_mul(g, gens[rng.below(gens.size())]);
        CHECK(at_base.member(g, 2, trial));
    }

    // agreement with the commutator description on random units
    unsigned in_cnt = 0, out_cnt = 0;
    for (int trial = 0; trial < 25; ++trial) {
        Mat g = rand_inv(K, d, rng);
        Mat gi = *mat_inverse(g);
        bool honest = true;
        for (const Mat& e : gens) {
            Mat com = mat_mul(mat_mul(g, e), mat_mul(gi, *mat_inverse(e)));
            if (!principal_membership(ctx, base, com)) { honest = false; break; }
            if (!principal_membership(ctx, base, mat_mul(mat_mul(g, e), gi))) {
                honest = false;
                break;
            }
        }
        bool gu = at_base.member(g, 2, 1000 + trial);
        CHECK(gu == honest);
        (gu ? in_cnt : out_cnt) += 1;
    }
    CHECK(out_cnt > 0); // the sample saw genuine rejections

    // at the zero level only the center of the elementary group survives
    for (const Mat& g : gens)
        if (g != Mat::identity(K, d)) CHECK(!at_zero.member(g));

    CHECK(gu_membership(ctx, base, gens[0], 2, 5));
}

TEST_CASE("level groups generated by transvections") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_max(F2, 2));
    AugLevel base = base_level(ctx);

    std::vector<Mat> gens = eu_level_gens(ctx, base);
    CHECK(gens.size() == 12);
    for (const Mat& g : gens) CHECK(is_isometry(ctx.space, g));

    FiniteGroup grp = eu_level_group(ctx, base, 4096);
    CHECK(grp.order() == 720);

    FiniteGroup zg = eu_level_group(ctx, zero_level(ctx), 16);
    CHECK(zg.order() == 1);
}

TEST_CASE("serialization is stable and separates classes") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_min(F2, 2));
    AugLevel zero = zero_level(ctx);
    AugLevel base = base_level(ctx);
    AugLevel full = full_level(ctx);

    CHECK(level_text(ctx, zero) == "augmented level l=2 r0=0 ring=2\n");
    CHECK(level_key(ctx, zero).empty());
    CHECK(level_key(ctx, base) != level_key(ctx, zero));
    CHECK(level_key(ctx, base) != level_key(ctx, full));
    CHECK(level_key(ctx, base_level(ctx)) == level_key(ctx, base));

    AugLevel env0 = enveloping_level(ctx, zero);
    CHECK(level_key(ctx, env0) == level_key(ctx, base));
}

TEST_CASE("group part oracle beyond the additive case") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(odd_max(F2, 2));
    AugLevel base = base_level(ctx);
    GammaOracle oracle(ctx, base);

    std::vector<HElem> members = class_helems(ctx, base);
    REQUIRE(!members.empty());
    for (const HElem& h : members) CHECK(oracle.member(h));
    for (std::size_t s = 0; s + 1 < members.size(); ++s)
        CHECK(oracle.member(h_add(ctx, members[s], members[s + 1])));
    for (const HElem& h : members)
        CHECK(oracle.member(h_neg(ctx, h)));

    // defects of elementary products agree with the oracle
    Rng rng(mix_seed(5, "oracle-defects"));
    std::vector<Mat> gens = eu_gens(ctx);
    for (int trial = 0; trial < 10; ++trial) {
        Mat g = Mat::identity(ctx.ring(), ctx.dim());
        for (int s = 0; s < 3; ++s)
            g = mat_mul(g, gens[rng.below(gens.size())]);
        CHECK(oracle.member(eps_defect(ctx, g)));
    }

    CHECK(!oracle.member(eps_elem(ctx)));
    CHECK(error_kind([&] { GammaOracle tiny(ctx, base, 1); }) ==
          "GammaMembershipUndecidable");
}

TEST_CASE("level error paths") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z8 = Ring::build(RingSpec::modular(8));
    EndoContext ctx = make_endo_context(odd_min(F2, 2));

    SUBCASE("a lone row-zero generator closes to no level") {
        DoubleElem bad = ablock_carrier(ctx, 0, 1)[1];
        CHECK(error_kind([&] { (void)complete_level(ctx, {bad}, {}); }) ==
              "NotALevel");
    }

    SUBCASE("group generators must sit in one block") {
        HElem h1 = hblock_carrier(ctx, 1)[1];
        HElem h2 = hblock_carrier(ctx, 2)[1];
        HElem mixed = h_add(ctx, h1, h2);
        CHECK(error_kind([&] { (void)complete_level(ctx, {}, {mixed}); }) ==
              "BadBlock");
    }

    SUBCASE("carrier caps") {
        CHECK(error_kind([&] { (void)compute_lambda(ctx, 1); }) ==
              "CarrierTooLarge");
        EndoContext big = make_endo_context(odd_min(Z8, 2));
        CHECK(error_kind([&] { (void)ceil_level(big, zero_level(big)); }) ==
              "CarrierTooLarge");
    }

    SUBCASE("block set growth guards") {
        HBlockSet hb(ctx, 1);
        HElem h = hblock_carrier(ctx, 1)[1];
        CHECK(error_kind([&] { hb.grow(h, 1); }) == "CapExceeded");
        HBlockSet wrong(ctx, 2);
        CHECK(error_kind([&] { wrong.grow(h); }) == "BadBlock");
        CHECK(error_kind([&] { (void)ablock_carrier(ctx, 3, 0); }) == "BadBlock");
    }

    SUBCASE("interval bounds must nest") {
        CHECK(error_kind([&] {
                  (void)levels_between(ctx, full_level(ctx), zero_level(ctx));
              }) == "NotALevel");
    }

    SUBCASE("roots are validated") {
        AugLevel base = base_level(ctx);
        CHECK(error_kind([&] {
                  (void)root_subgroup(ctx, base, Root{{1, 0, 0}});
              }) == "BadBlock");
        CHECK(error_kind([&] {
                  (void)root_subgroup(ctx, base, Root{{1, 2}});
              }) == "BadBlock");
    }

    SUBCASE("checker reports a broken level instead of throwing") {
        AugLevel base = base_level(ctx);
        DoubleElem skew = ablock_carrier(ctx, 1, 2)[1];
        base.I.grow(skew);
        CheckReport rep = check_aug_level(ctx, base);
        CHECK(!rep.all_ok());
    }
}

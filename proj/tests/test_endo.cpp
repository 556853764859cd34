#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oddu/endo.hpp"

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

const CheckEntry* find_prefix(const CheckReport& rep, const std::string& pre) {
    for (const CheckEntry& e : rep.entries)
        if (e.law.rfind(pre, 0) == 0) return &e;
    return nullptr;
}

Mat from_rows(const Ring& K, const std::vector<std::vector<long long>>& rows) {
    Mat m(K, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = K.from_int(rows[i][j]);
    return m;
}

QuadraticSpace split_plane(const Ring& K) {
    return build_standard_space(K, BlockProfile{1, {0, 1}}, Mat(K, 0, 0), {});
}

// l hyperbolic pairs, no odd block, minimal parameter
QuadraticSpace hyper_space(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    r[0] = 0;
    return build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0), {});
}

// l hyperbolic pairs plus a rank-one odd block <<1>>
QuadraticSpace odd_space(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    return build_standard_space(K, BlockProfile{l, r}, from_rows(K, {{1}}), {});
}

Vec unit_vec(const Ring& K, unsigned d, unsigned s) {
    Vec v(d, K.zero());
    v[s] = K.one();
    return v;
}

} // namespace

TEST_CASE("endo context idempotents and adjoint") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("block idempotents mirror under the adjoint") {
        for (const QuadraticSpace& sp :
             {hyper_space(F2, 3), odd_space(Z4, 1), odd_space(F2, 1)}) {
            EndoContext ctx = make_endo_context(sp);
            const Ring& K = ctx.ring();
            unsigned d = ctx.dim();
            int l = ctx.bl();

            Mat sum(K, d, d);
            for (int i = -l; i <= l; ++i) sum = mat_add(sum, ctx.eidem(i));
            CHECK(sum == Mat::identity(K, d));
            for (int i = -l; i <= l; ++i) {
                CHECK(mat_mul(ctx.eidem(i), ctx.eidem(i)) == ctx.eidem(i));
                CHECK(adjoint(ctx, ctx.eidem(i)) == ctx.eidem(-i));
            }
            CHECK(adjoint(ctx, Mat::identity(K, d)) == Mat::identity(K, d));
            CHECK(ctx.lambda_E == K.lambda());

            Mat pos(K, d, d), negs(K, d, d);
            for (int i = 1; i <= l; ++i) {
                pos = mat_add(pos, ctx.eidem(i));
                negs = mat_add(negs, ctx.eidem(-i));
            }
            CHECK(ctx.e_plus == pos);
            CHECK(ctx.e_minus == negs);
        }
    }

    SUBCASE("adjoint transposes the form across random endomorphisms") {
        EndoContext ctx = make_endo_context(odd_space(Z4, 1));
        const Ring& K = ctx.ring();
        unsigned d = ctx.dim();
        Rng rng(mix_seed(7, "adjoint defining"));
        for (int t = 0; t < 50; ++t) {
            Mat a(K, d, d);
            for (unsigned i = 0; i < d; ++i)
                for (unsigned j = 0; j < d; ++j)
                    a.at(i, j) = static_cast<Ring::Elem>(rng.below(K.size()));
            Mat ad = adjoint(ctx, a);
            for (unsigned s = 0; s < d; ++s)
                for (unsigned u = 0; u < d; ++u) {
                    Vec es = unit_vec(K, d, s), eu = unit_vec(K, d, u);
                    CHECK(eval_form(ctx.space.gram(), mat_apply(a, es), eu) ==
                          eval_form(ctx.space.gram(), es, mat_apply(ad, eu)));
                }
        }
    }

    SUBCASE("split plane adjoint mirrors matrix units across the antidiagonal") {
        EndoContext ctx = make_endo_context(split_plane(F2));
        auto unit = [&](unsigned r, unsigned c) {
            Mat m(F2, 2, 2);
            m.at(r, c) = F2.one();
            return m;
        };
        CHECK(adjoint(ctx, unit(0, 0)) == unit(1, 1));
        CHECK(adjoint(ctx, unit(1, 1)) == unit(0, 0));
        CHECK(adjoint(ctx, unit(0, 1)) == unit(0, 1));
        CHECK(adjoint(ctx, unit(1, 0)) == unit(1, 0));
    }

    SUBCASE("degenerate gram is rejected") {
        Ring K = Ring::build(RingSpec::modular(4));
        QuadraticSpace sp = make_quadratic_bimodule(K, from_rows(K, {{2}}), {}, {K.zero()});
        CHECK(error_kind([&] { make_endo_context(sp); }) == "NotInvertible");
    }
}

TEST_CASE("block matrices and support checks") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_space(F2, 3));

    Mat m = block_matrix(ctx, 1, -2, {F2.one()});
    unsigned r = ctx.space.profile().block_start(1);
    unsigned c = ctx.space.profile().block_start(-2);
    CHECK(m.at(r, c) == F2.one());
    CHECK(block_supported(ctx, m, 1, -2));
    CHECK_FALSE(block_supported(ctx, m, 2, -2));
    CHECK(block_supported(ctx, Mat(F2, 6, 6), 1, 2)); // zero sits in every block

    CHECK(error_kind([&] { block_matrix(ctx, 4, 1, {F2.one()}); }) == "BadBlock");
    CHECK(error_kind([&] { block_matrix(ctx, 1, 2, {F2.one(), F2.one()}); }) == "BadBlock");
}

TEST_CASE("H is a group with a monoid action of the doubled algebra") {
    Ring Z4 = Ring::build(RingSpec::modular(4));
    EndoContext ctx = make_endo_context(odd_space(Z4, 1));
    const Ring& K = ctx.ring();
    unsigned d = ctx.dim(), r0 = ctx.r0();
    Rng rng(mix_seed(11, "h laws"));

    auto rand_mat = [&](unsigned rows, unsigned cols) {
        Mat m(K, rows, cols);
        for (unsigned i = 0; i < rows; ++i)
            for (unsigned j = 0; j < cols; ++j)
                m.at(i, j) = static_cast<Ring::Elem>(rng.below(K.size()));
        return m;
    };
    auto rand_h = [&] { return HElem{rand_mat(r0, d), rand_mat(d, d), rand_mat(d, r0)}; };
    auto rand_a = [&] { return DoubleElem{rand_mat(d, d), rand_mat(d, d)}; };

    SUBCASE("group laws") {
        for (int t = 0; t < 2000; ++t) {
            HElem h = rand_h(), g = rand_h(), f = rand_h();
            CHECK(h_add(ctx, h, h_zero(ctx)) == h);
            CHECK(h_add(ctx, h_zero(ctx), h) == h);
            CHECK(h_add(ctx, h, h_neg(ctx, h)) == h_zero(ctx));
            CHECK(h_add(ctx, h_neg(ctx, h), h) == h_zero(ctx));
            CHECK(h_add(ctx, h_add(ctx, h, g), f) == h_add(ctx, h, h_add(ctx, g, f)));
        }
    }

    SUBCASE("the twisted sum is not commutative") {
        bool found = false;
        for (int t = 0; t < 200 && !found; ++t) {
            HElem h = rand_h(), g = rand_h();
            if (!(h_add(ctx, h, g) == h_add(ctx, g, h))) found = true;
        }
        CHECK(found);
    }

    SUBCASE("monoid action") {
        for (int t = 0; t < 2000; ++t) {
            HElem h = rand_h();
            DoubleElem a = rand_a(), b = rand_a();
            CHECK(h_act(ctx, h, dbl_one(ctx)) == h);
            CHECK(h_act(ctx, h, dbl_zero(ctx)) == h_zero(ctx));
            CHECK(h_act(ctx, h_act(ctx, h, a), b) == h_act(ctx, h, dbl_mul(a, b)));
        }
    }

    SUBCASE("pi, phi and tr formulas") {
        for (int t = 0; t < 2000; ++t) {
            HElem h = rand_h();
            DoubleElem a = rand_a();
            CHECK(h_pi(ctx, phi_H(ctx, a)) == dbl_zero(ctx));
            CHECK(phi_H(ctx, dbl_conj(ctx, a)) == h_neg(ctx, phi_H(ctx, a)));
            CHECK(h_neg(ctx, phi_H(ctx, a)) == phi_H(ctx, dbl_neg(a)));
            CHECK(h_tr(ctx, phi_H(ctx, a)) == dbl_sub(a, dbl_conj(ctx, a)));

            DoubleElem pi = h_pi(ctx, h);
            CHECK(pi.x == h_embed_x(ctx, h.x));
            CHECK(pi.y == mat_neg(adjoint(ctx, h_embed_z(ctx, h.z))));
            DoubleElem tr = h_tr(ctx, h);
            CHECK(tr.x == h.y);
            CHECK(tr.y == adjoint(ctx, mat_sub(mat_mul(h.z, h.x), h.y)));
        }
    }

    SUBCASE("zeta is the idempotent (0, 1)") {
        DoubleElem z = dbl_zeta(ctx);
        CHECK(dbl_mul(z, z) == z);
        CHECK(dbl_add(z, dbl_conj(ctx, z)) == dbl_one(ctx));
    }
}

TEST_CASE("NQ laws hold and break when a map is corrupted") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));
    Ring SW = Ring::build(RingSpec::swap_product(2));

    SUBCASE("all ten laws pass") {
        for (const QuadraticSpace& sp : {hyper_space(F2, 3), odd_space(F2, 1),
                                         odd_space(Z4, 1), split_plane(SW)}) {
            EndoContext ctx = make_endo_context(sp);
            CheckReport rep = verify_NQ(ctx, 1, 4000);
            INFO(rep.to_string());
            CHECK(rep.all_ok());
            CHECK(rep.entries.size() == 10);
            for (const CheckEntry& e : rep.entries) CHECK(e.cases > 0);
        }
    }

    SUBCASE("sign-flipped pi is caught by NQ4") {
        EndoContext ctx = make_endo_context(odd_space(Z4, 1));
        HMaps maps = h_default_maps();
        maps.pi = [](const EndoContext& c, const HElem& h) {
            return DoubleElem{h_embed_x(c, h.x), adjoint(c, h_embed_z(c, h.z))};
        };
        CheckReport rep = verify_NQ(ctx, 1, 2000);
        CHECK(rep.all_ok());
        rep = verify_NQ(ctx, maps, 1, 2000);
        CHECK_FALSE(rep.all_ok());
        const CheckEntry* e = find_prefix(rep, "NQ4");
        REQUIRE(e != nullptr);
        CHECK_FALSE(e->ok);
        CHECK(!e->witness.empty());
    }

    SUBCASE("zeroed tr is caught by NQ10") {
        EndoContext ctx = make_endo_context(odd_space(Z4, 1));
        HMaps maps = h_default_maps();
        maps.tr = [](const EndoContext& c, const HElem&) { return dbl_zero(c); };
        CheckReport rep = verify_NQ(ctx, maps, 1, 2000);
        const CheckEntry* e = find_prefix(rep, "NQ10");
        REQUIRE(e != nullptr);
        CHECK_FALSE(e->ok);
    }
}

TEST_CASE("plain transvections satisfy the LT relations") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    EndoContext ctx = make_endo_context(hyper_space(F2, 3));
    unsigned d = ctx.dim();
    auto blk = [&](int i, int j) { return block_matrix(ctx, i, j, {F2.one()}); };
    auto comm = [&](const Mat& g, const Mat& h) {
        return mat_mul(mat_mul(g, h), mat_mul(*mat_inverse(g), *mat_inverse(h)));
    };

    CHECK(t_elem(ctx, 1, 2, Mat(F2, d, d)) == Mat::identity(F2, d));
    CHECK(mat_mul(t_elem(ctx, 1, 2, blk(1, 2)), t_elem(ctx, 1, 2, mat_neg(blk(1, 2)))) ==
          Mat::identity(F2, d));
    // additivity in the block argument
    CHECK(mat_mul(t_elem(ctx, 1, 2, blk(1, 2)), t_elem(ctx, 1, 2, blk(1, 2))) ==
          t_elem(ctx, 1, 2, mat_add(blk(1, 2), blk(1, 2))));
    // [t_{1,2}(x), t_{2,3}(y)] = t_{1,3}(x y)
    CHECK(comm(t_elem(ctx, 1, 2, blk(1, 2)), t_elem(ctx, 2, 3, blk(2, 3))) ==
          t_elem(ctx, 1, 3, mat_mul(blk(1, 2), blk(2, 3))));
    // [t_{2,1}(x), t_{3,2}(y)] = t_{3,1}(-y x)
    CHECK(comm(t_elem(ctx, 2, 1, blk(2, 1)), t_elem(ctx, 3, 2, blk(3, 2))) ==
          t_elem(ctx, 3, 1, mat_neg(mat_mul(blk(3, 2), blk(2, 1)))));
    // disjoint indices commute
    CHECK(comm(t_elem(ctx, 1, 2, blk(1, 2)), t_elem(ctx, 3, -1, blk(3, -1))) ==
          Mat::identity(F2, d));

    CHECK(error_kind([&] { t_elem(ctx, 1, 1, Mat(F2, d, d)); }) == "BadBlock");
    CHECK(error_kind([&] { t_elem(ctx, 1, 2, blk(1, 3)); }) == "BadBlock");

    // the odd block is a legal t_{i,j} index as long as i != j
    EndoContext octx = make_endo_context(odd_space(F2, 1));
    Mat t = t_elem(octx, 0, 1, block_matrix(octx, 0, 1, {F2.one()}));
    CHECK(t != Mat::identity(F2, octx.dim()));
}

TEST_CASE("short transvections: symmetry and the unitarity criterion") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("tau(0) = 1 and the guard rejects bad indices") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        CHECK(tau_short(ctx, 1, 2, dbl_zero(ctx)) == Mat::identity(F2, ctx.dim()));
        CHECK(error_kind([&] { tau_short(ctx, 1, -1, dbl_zero(ctx)); }) == "BadBlock");
        CHECK(error_kind([&] { tau_short(ctx, 0, 1, dbl_zero(ctx)); }) == "BadBlock");
        CHECK(error_kind([&] {
                  tau_short(ctx, 1, 2, DoubleElem{block_matrix(ctx, 1, 3, {F2.one()}),
                                                  Mat(F2, ctx.dim(), ctx.dim())});
              }) == "BadBlock");
    }

    SUBCASE("tau_{i,j}(a) = tau_{-j,-i}(-conj(a)) exhaustively on rank-one blocks") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        for (int i = -3; i <= 3; ++i)
            for (int j = -3; j <= 3; ++j) {
                if (i == 0 || j == 0 || i == j || i == -j) continue;
                for (unsigned cx = 0; cx < 2; ++cx)
                    for (unsigned cy = 0; cy < 2; ++cy) {
                        DoubleElem a{block_matrix(ctx, i, j, {static_cast<Ring::Elem>(cx)}),
                                     block_matrix(ctx, i, j, {static_cast<Ring::Elem>(cy)})};
                        CHECK(tau_short(ctx, i, j, a) ==
                              tau_short(ctx, -j, -i, dbl_neg(dbl_conj(ctx, a))));
                    }
            }
    }

    SUBCASE("unitary exactly on the diagonal copy of C") {
        for (const QuadraticSpace& sp :
             {hyper_space(F2, 3), build_standard_space(Z4, BlockProfile{2, {0, 1, 1}},
                                                       Mat(Z4, 0, 0), {})}) {
            EndoContext ctx = make_endo_context(sp);
            const Ring& K = ctx.ring();
            int l = ctx.bl();
            for (int i = -l; i <= l; ++i)
                for (int j = -l; j <= l; ++j) {
                    if (i == 0 || j == 0 || i == j || i == -j) continue;
                    for (unsigned cx = 0; cx < K.size(); ++cx)
                        for (unsigned cy = 0; cy < K.size(); ++cy) {
                            DoubleElem a{
                                block_matrix(ctx, i, j, {static_cast<Ring::Elem>(cx)}),
                                block_matrix(ctx, i, j, {static_cast<Ring::Elem>(cy)})};
                            bool unitary = is_isometry(ctx.space, tau_short(ctx, i, j, a));
                            CHECK(unitary == (a.x == a.y));
                        }
                }
        }
    }
}

TEST_CASE("ultra transvections: unitarity matches the parameter criterion") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    // tau_i(h) is unitary exactly when z = -conj(x) and every block-i vector p
    // lands with (x p, B(p, y p)) inside the parameter
    auto criterion = [](const EndoContext& ctx, int i, const HElem& h) {
        const Ring& K = ctx.ring();
        const QuadraticSpace& sp = ctx.space;
        unsigned d = ctx.dim(), r0 = ctx.r0();
        if (h_embed_z(ctx, h.z) != mat_neg(adjoint(ctx, h_embed_x(ctx, h.x)))) return false;
        unsigned s = sp.profile().block_start(i), r = sp.profile().block_rank(i);
        unsigned s0 = sp.profile().block_start(0);
        uint64_t count = 1;
        for (unsigned t = 0; t < r; ++t) count *= K.size();
        for (uint64_t pi = 0; pi < count; ++pi) {
            Vec p(d, K.zero());
            uint64_t rem = pi;
            for (unsigned t = 0; t < r; ++t) {
                p[s + t] = static_cast<Ring::Elem>(rem % K.size());
                rem /= K.size();
            }
            Vec xp(d, K.zero());
            for (unsigned t = 0; t < r0; ++t) {
                Ring::Elem acc = K.zero();
                for (unsigned c = 0; c < d; ++c) acc = K.add(acc, K.mul(h.x.at(t, c), p[c]));
                xp[s0 + t] = acc;
            }
            Ring::Elem val = eval_form(sp.gram(), p, mat_apply(h.y, p));
            if (!sp.param().contains(K, FormPoint{xp, val})) return false;
        }
        return true;
    };

    auto sweep = [&](const QuadraticSpace& sp) {
        EndoContext ctx = make_endo_context(sp);
        const Ring& K = ctx.ring();
        int l = ctx.bl();
        unsigned r0 = ctx.r0();
        for (int i = -l; i <= l; ++i) {
            if (i == 0) continue;
            unsigned ri = sp.profile().block_rank(i);
            uint64_t count = 1;
            for (unsigned t = 0; t < 2 * r0 * ri + ri * ri; ++t) count *= K.size();
            for (uint64_t idx = 0; idx < count; ++idx) {
                uint64_t rem = idx;
                HElem h = h_zero(ctx);
                unsigned cs = sp.profile().block_start(i);
                unsigned ns = sp.profile().block_start(-i);
                for (unsigned t = 0; t < r0; ++t)
                    for (unsigned c = 0; c < ri; ++c) {
                        h.x.at(t, cs + c) = static_cast<Ring::Elem>(rem % K.size());
                        rem /= K.size();
                    }
                for (unsigned rr = 0; rr < ri; ++rr)
                    for (unsigned c = 0; c < ri; ++c) {
                        h.y.at(ns + rr, cs + c) = static_cast<Ring::Elem>(rem % K.size());
                        rem /= K.size();
                    }
                for (unsigned rr = 0; rr < ri; ++rr)
                    for (unsigned t = 0; t < r0; ++t) {
                        h.z.at(ns + rr, t) = static_cast<Ring::Elem>(rem % K.size());
                        rem /= K.size();
                    }
                CHECK(is_isometry(ctx.space, tau_ultra(ctx, i, h)) == criterion(ctx, i, h));
            }
        }
    };

    SUBCASE("no odd block, minimal parameter") { sweep(hyper_space(F2, 3)); }
    SUBCASE("rank-one odd block over Z/4") { sweep(odd_space(Z4, 1)); }
    SUBCASE("rank-one odd block over F2") { sweep(odd_space(F2, 1)); }

    SUBCASE("hand examples") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        CHECK(tau_ultra(ctx, 1, h_zero(ctx)) == Mat::identity(F2, ctx.dim()));
        CHECK(error_kind([&] { tau_ultra(ctx, 0, h_zero(ctx)); }) == "BadBlock");

        // y = unit in block (-1, 1): rejected by the minimal parameter...
        HElem h = h_zero(ctx);
        h.y = block_matrix(ctx, -1, 1, {F2.one()});
        CHECK_FALSE(is_isometry(ctx.space, tau_ultra(ctx, 1, h)));

        // ...but accepted once the parameter is the full trace kernel
        QuadraticSpace spmin = hyper_space(F2, 3);
        QuadraticSpace spmax = build_standard_space(F2, spmin.profile(), Mat(F2, 0, 0),
                                                    lmax_elements(spmin.gram()));
        EndoContext mctx = make_endo_context(spmax);
        HElem hm = h_zero(mctx);
        hm.y = block_matrix(mctx, -1, 1, {F2.one()});
        CHECK(is_isometry(mctx.space, tau_ultra(mctx, 1, hm)));

        // wrong slot shapes are rejected
        HElem bad = h_zero(ctx);
        bad.y = Mat(F2, 2, 2);
        CHECK(error_kind([&] { tau_ultra(ctx, 1, bad); }) == "BadBlock");
    }
}

TEST_CASE("T relations hold as matrix identities") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("hyperbolic F2 space, all eight families") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        CheckReport rep = verify_T(ctx, {1, 2}, 1, 800);
        INFO(rep.to_string());
        CHECK(rep.all_ok());
        CHECK(rep.entries.size() == 8);
        for (const CheckEntry& e : rep.entries) CHECK(e.cases > 0);
    }

    SUBCASE("odd block present") {
        std::vector<unsigned> r{1, 1, 1, 1};
        Ring& K = F2;
        QuadraticSpace sp = build_standard_space(K, BlockProfile{3, r},
                                                 from_rows(K, {{1}}), {});
        EndoContext ctx = make_endo_context(sp);
        CheckReport rep = verify_T(ctx, {1, 2}, 1, 600);
        INFO(rep.to_string());
        CHECK(rep.all_ok());
    }

    SUBCASE("two hyperbolic pairs over Z/4") {
        QuadraticSpace sp = build_standard_space(Z4, BlockProfile{2, {0, 1, 1}},
                                                 Mat(Z4, 0, 0), {});
        EndoContext ctx = make_endo_context(sp);
        CheckReport rep = verify_T(ctx, {1, 2}, 1, 600);
        INFO(rep.to_string());
        CHECK(rep.all_ok());
    }

    SUBCASE("T5 spot value with the odd block in play") {
        QuadraticSpace sp = build_standard_space(F2, BlockProfile{3, {1, 1, 1, 1}},
                                                 from_rows(F2, {{1}}), {});
        EndoContext ctx = make_endo_context(sp);
        DoubleElem a{block_matrix(ctx, -1, 2, {F2.one()}),
                     block_matrix(ctx, -1, 2, {F2.zero()})};
        DoubleElem b{block_matrix(ctx, 2, 1, {F2.one()}),
                     block_matrix(ctx, 2, 1, {F2.one()})};
        Mat g = tau_short(ctx, -1, 2, a), h = tau_short(ctx, 2, 1, b);
        Mat c = mat_mul(mat_mul(g, h), mat_mul(*mat_inverse(g), *mat_inverse(h)));
        CHECK(c == tau_ultra(ctx, 1, phi_H(ctx, dbl_mul(a, b))));
    }

    SUBCASE("bad anchor pair is rejected") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        CHECK(error_kind([&] { verify_T(ctx, {3, -3}); }) == "BadBlock");
        CHECK(error_kind([&] { verify_T(ctx, {0, 1}); }) == "BadBlock");
    }

    SUBCASE("corrupted involution is caught by T2") {
        EndoContext ctx = make_endo_context(hyper_space(F2, 3));
        ConjFn plain = [](const EndoContext&, const Mat& m) {
            return mat_transpose(mat_conj(m));
        };
        CheckReport rep = verify_T(ctx, {1, 2}, plain, 1, 200);
        CHECK_FALSE(rep.all_ok());
        const CheckEntry* e = find_prefix(rep, "T2");
        REQUIRE(e != nullptr);
        CHECK_FALSE(e->ok);
        CHECK(!e->witness.empty());
    }
}

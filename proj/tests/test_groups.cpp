#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oddu/endo.hpp"
#include "oddu/forms.hpp"
#include "oddu/groups.hpp"

#include <sstream>
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

// every invertible d x d matrix over K, by scanning all entry codes
std::vector<Mat> brute_gl(const Ring& K, std::size_t d) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < d * d; ++i) total *= K.size();
    std::vector<Mat> out;
    for (std::size_t code = 0; code < total; ++code) {
        Mat m(K, d, d);
        std::size_t t = code;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                m.at(i, j) = static_cast<Ring::Elem>(t % K.size());
                t /= K.size();
            }
        if (mat_inverse(m)) out.push_back(m);
    }
    return out;
}

// l hyperbolic pairs over K with the maximal odd form parameter
QuadraticSpace max_hyper(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    r[0] = 0;
    QuadraticSpace base = build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0), {});
    return build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0),
                                lmax_elements(base.gram()));
}

QuadraticSpace min_hyper(const Ring& K, unsigned l) {
    std::vector<unsigned> r(l + 1, 1);
    r[0] = 0;
    return build_standard_space(K, BlockProfile{l, r}, Mat(K, 0, 0), {});
}

// the elementary generators: unit short transvections in every off-diagonal
// block pair, plus the unit ultrashort element of each block
std::vector<Mat> elementary_gens(const EndoContext& ctx) {
    const Ring& K = ctx.ring();
    int l = ctx.bl();
    std::vector<Mat> out;
    for (int i = -l; i <= l; ++i) {
        if (i == 0) continue;
        for (int j = -l; j <= l; ++j) {
            if (j == 0 || j == i || j == -i) continue;
            Mat u = block_matrix(ctx, i, j, {K.one()});
            out.push_back(tau_short(ctx, i, j, DoubleElem{u, u}));
        }
        HElem h = h_zero(ctx);
        h.y = block_matrix(ctx, -i, i, {K.one()});
        out.push_back(tau_ultra(ctx, i, h));
    }
    return out;
}

} // namespace

TEST_CASE("closure basics and canonical keys") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("no generators give the trivial group") {
        FiniteGroup G = generate(F2, 2, {}, 10);
        CHECK(G.order() == 1);
        CHECK(G.dim() == 2);
        CHECK(G.key_len() == 4);
        CHECK(contains(G, Mat::identity(F2, 2)));
        CHECK(G.element(0) == Mat::identity(F2, 2));
        CHECK_FALSE(contains(G, from_rows(F2, {{0, 1}, {1, 0}})));
    }

    SUBCASE("an involution closes to order two with a stable dump") {
        Mat swap = from_rows(F2, {{0, 1}, {1, 0}});
        FiniteGroup G = generate(F2, 2, {swap}, 10);
        CHECK(G.order() == 2);
        CHECK(contains(G, swap));
        std::ostringstream dump;
        G.dump_hex(dump);
        CHECK(dump.str() == "00010100\n01000001\n");
        CHECK(G.key_at(0) == std::string("\x00\x01\x01\x00", 4));
    }

    SUBCASE("a rotation of order four closes with its powers") {
        Mat rot = from_rows(Z4, {{0, 3}, {1, 0}});
        FiniteGroup G = generate(Z4, 2, {rot}, 10);
        CHECK(G.order() == 4);
        CHECK(contains(G, Mat::scalar(Z4, 2, Z4.from_int(3))));
        CHECK(generate(Z4, 2, {rot}, 4).order() == 4); // cap may be hit exactly
        CHECK(error_kind([&] { generate(Z4, 2, {rot}, 3); }) == "CapExceeded");
    }

    SUBCASE("bad inputs are rejected") {
        CHECK(error_kind([&] { generate(F2, 2, {}, 0); }) == "CapExceeded");
        CHECK(error_kind([&] { generate(Z4, 2, {from_rows(Z4, {{2, 0}, {0, 1}})}, 10); }) ==
              "NotInvertible");
        CHECK(error_kind([&] { generate(Z4, 2, {Mat::identity(F2, 2)}, 10); }) ==
              "RingMismatch");
        CHECK(error_kind([&] { generate(F2, 3, {Mat::identity(F2, 2)}, 10); }) ==
              "DimensionMismatch");
        CHECK(error_kind([&] { generate(F2, 0, {}, 10); }) == "DimensionMismatch");
    }
}

TEST_CASE("generate matches brute force enumeration") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("general linear group over F2") {
        std::vector<Mat> all = brute_gl(F2, 2);
        CHECK(all.size() == 6);
        FiniteGroup G =
            generate(F2, 2, {from_rows(F2, {{1, 1}, {0, 1}}), from_rows(F2, {{0, 1}, {1, 0}})},
                     100);
        CHECK(G.order() == 6);
        CHECK(equal_groups(G, generate(F2, 2, all, 100)));
        for (const Mat& m : all) CHECK(contains(G, m));
    }

    SUBCASE("general linear group over Z/4") {
        std::vector<Mat> all = brute_gl(Z4, 2);
        CHECK(all.size() == 96);
        FiniteGroup G = generate(Z4, 2,
                                 {from_rows(Z4, {{1, 1}, {0, 1}}),
                                  from_rows(Z4, {{1, 0}, {1, 1}}),
                                  from_rows(Z4, {{3, 0}, {0, 1}})},
                                 200);
        CHECK(G.order() == 96);
        CHECK(equal_groups(G, generate(Z4, 2, all, 200)));
    }

    SUBCASE("elements come back sorted and decode to their keys") {
        FiniteGroup G = generate(Z4, 2, {from_rows(Z4, {{0, 3}, {1, 0}})}, 10);
        for (std::size_t i = 0; i < G.order(); ++i) {
            Mat m = G.element(i);
            CHECK(mat_key(m) == G.key_at(i));
            CHECK(contains(G, m));
            if (i + 1 < G.order()) CHECK(G.key_at(i) < G.key_at(i + 1));
        }
        CHECK(error_kind([&] { G.element(G.order()); }) == "BadIndex");
        CHECK_FALSE(G.contains_key("too short"));
    }
}

TEST_CASE("isometry groups close to the classical orders") {
    Ring F2 = Ring::build(RingSpec::modular(2));

    SUBCASE("split plane with minimal parameter has two isometries") {
        QuadraticSpace sp =
            build_standard_space(F2, BlockProfile{1, {0, 1}}, Mat(F2, 0, 0), {});
        std::vector<Mat> iso = isometry_list(sp, 100);
        CHECK(iso.size() == 2);
        FiniteGroup G = generate(F2, 2, iso, 10);
        CHECK(G.order() == 2);
    }

    SUBCASE("elementary generators close to the full symplectic group") {
        QuadraticSpace sp = max_hyper(F2, 2);
        EndoContext ctx = make_endo_context(sp);
        FiniteGroup G = generate(F2, 4, elementary_gens(ctx), 10000);
        CHECK(G.order() == 720);

        std::vector<Mat> iso = isometry_list(sp, 10000);
        CHECK(iso.size() == 720);
        CHECK(equal_groups(G, generate(F2, 4, iso, 10000)));

        // group order divides |GL(4, 2)|
        std::size_t gl4 = (16 - 1) * (16 - 2) * (16 - 4) * (16 - 8);
        CHECK(gl4 == 20160);
        CHECK(gl4 % G.order() == 0);
    }

    SUBCASE("the minimal-parameter group embeds in the maximal one") {
        QuadraticSpace spmin = min_hyper(F2, 2);
        std::vector<Mat> iso = isometry_list(spmin, 10000);
        CHECK(iso.size() == 72);
        FiniteGroup O = generate(F2, 4, iso, 1000);
        CHECK(O.order() == 72);

        FiniteGroup Sp = generate(F2, 4, elementary_gens(make_endo_context(max_hyper(F2, 2))),
                                  10000);
        for (std::size_t i = 0; i < O.order(); ++i) CHECK(contains(Sp, O.element(i)));
    }
}

TEST_CASE("normal closure fixpoints") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("degenerate inputs") {
        Mat swap = from_rows(F2, {{0, 1}, {1, 0}});
        CHECK(normal_closure(F2, 2, {}, {swap}, 10).order() == 1);
        CHECK(equal_groups(normal_closure(F2, 2, {swap}, {}, 10), generate(F2, 2, {swap}, 10)));
    }

    SUBCASE("one transvection conjugates out to the whole symplectic group") {
        QuadraticSpace sp = max_hyper(F2, 2);
        EndoContext ctx = make_endo_context(sp);
        std::vector<Mat> gens = elementary_gens(ctx);
        FiniteGroup Sp = generate(F2, 4, gens, 10000);

        FiniteGroup N = normal_closure(F2, 4, {gens[0]}, gens, 10000);
        CHECK(equal_groups(N, Sp));
        CHECK(error_kind([&] { normal_closure(F2, 4, {gens[0]}, gens, 100); }) ==
              "CapExceeded");
    }

    SUBCASE("closures stay inside the ambient group and respect conjugation") {
        Mat e12 = from_rows(Z4, {{1, 1}, {0, 1}});
        Mat diag = from_rows(Z4, {{3, 0}, {0, 1}});
        FiniteGroup amb = generate(Z4, 2, {e12, diag}, 100);
        CHECK(amb.order() == 8);

        FiniteGroup N = normal_closure(Z4, 2, {e12}, {diag}, 100);
        CHECK(N.order() == 4);
        for (std::size_t i = 0; i < N.order(); ++i) CHECK(contains(amb, N.element(i)));

        Mat dinv = *mat_inverse(diag);
        for (const Mat& g : N.gens())
            CHECK(contains(N, mat_mul(mat_mul(diag, g), dinv)));
    }
}

TEST_CASE("regeneration from the element list is idempotent") {
    Ring F2 = Ring::build(RingSpec::modular(2));
    Ring Z4 = Ring::build(RingSpec::modular(4));

    SUBCASE("packed path") {
        FiniteGroup Sp = generate(F2, 4, elementary_gens(make_endo_context(max_hyper(F2, 2))),
                                  10000);
        std::vector<Mat> all;
        for (std::size_t i = 0; i < Sp.order(); ++i) all.push_back(Sp.element(i));
        CHECK(equal_groups(Sp, generate(F2, 4, all, 10000)));
    }

    SUBCASE("generic path") {
        std::vector<Mat> gens = {from_rows(Z4, {{1, 1}, {0, 1}}),
                                 from_rows(Z4, {{1, 0}, {1, 1}}),
                                 from_rows(Z4, {{3, 0}, {0, 1}})};
        FiniteGroup G = generate(Z4, 2, gens, 200);
        std::vector<Mat> all;
        for (std::size_t i = 0; i < G.order(); ++i) all.push_back(G.element(i));
        FiniteGroup H = generate(Z4, 2, all, 200);
        CHECK(equal_groups(G, H));

        std::ostringstream a, b;
        G.dump_hex(a);
        H.dump_hex(b);
        CHECK(a.str() == b.str());
        CHECK(a.str().size() == G.order() * (G.key_len() * 2 + 1));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oddu/ring.hpp"

#include <functional>

using namespace oddu;

namespace {

// exhaustive ring laws; only called on small carriers
void check_laws(const Ring& K) {
    auto all = K.all();
    for (auto x : all) {
        CHECK(K.add(x, K.zero()) == x);
        CHECK(K.mul(x, K.one()) == x);
        CHECK(K.add(x, K.neg(x)) == K.zero());
        for (auto y : all) {
            CHECK(K.add(x, y) == K.add(y, x));
            CHECK(K.mul(x, y) == K.mul(y, x));
            for (auto z : all) {
                CHECK(K.add(K.add(x, y), z) == K.add(x, K.add(y, z)));
                CHECK(K.mul(K.mul(x, y), z) == K.mul(x, K.mul(y, z)));
                CHECK(K.mul(x, K.add(y, z)) == K.add(K.mul(x, y), K.mul(x, z)));
            }
        }
    }
}

std::string error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

} // namespace

TEST_CASE("modular ring basics") {
    Ring K = Ring::build(RingSpec::modular(4));
    CHECK(K.size() == 4);
    CHECK(K.rank() == 1);
    check_laws(K);
    CHECK(K.units().size() == 2);           // 1, 3
    CHECK(K.from_int(-1) == K.from_int(3));
    CHECK(K.involve(K.from_int(3)) == K.from_int(3)); // trivial involution
    CHECK(K.hermitian_part().size() == 4);

    Ring K6 = Ring::build(RingSpec::modular(6));
    CHECK(K6.units().size() == 2);          // 1, 5
    CHECK(K6.from_int(7) == K6.one());
    CHECK(K6.inverse(K6.from_int(5)) == K6.from_int(5));
}

TEST_CASE("swap product ring") {
    Ring K = Ring::build(RingSpec::swap_product(2));
    CHECK(K.size() == 4);
    CHECK(K.rank() == 2);
    check_laws(K);
    CHECK(K.one() == K.encode({1, 1}));
    CHECK(K.involve(K.encode({1, 0})) == K.encode({0, 1}));
    // fixed points of the swap: the diagonal
    auto h = K.hermitian_part();
    REQUIRE(h.size() == 2);
    CHECK(h[0] == K.encode({0, 0}));
    CHECK(h[1] == K.encode({1, 1}));
    // (1,0)*(0,1) = 0: zero divisors
    CHECK(K.mul(K.encode({1, 0}), K.encode({0, 1})) == K.zero());
    CHECK(K.units().size() == 1);
    CHECK(K.from_int(3) == K.one());
    CHECK(K.from_int(2) == K.zero());
}

TEST_CASE("quadratic extension ring") {
    // Z/3[w]/(w^2+1) is the field with 9 elements
    Ring K = Ring::build(RingSpec::quad_ext(3, -1));
    CHECK(K.size() == 9);
    check_laws(K);
    CHECK(K.units().size() == 8);
    // w * involve(w) = -w^2 = 1
    auto w = K.encode({0, 1});
    CHECK(K.involve(w) == K.neg(w));
    CHECK(K.mul(w, K.involve(w)) == K.one());
    // hermitian part = Z/3
    CHECK(K.hermitian_part().size() == 3);

    // Z/2[w]/(w^2): w is nilpotent
    Ring D = Ring::build(RingSpec::quad_ext(2, 0));
    check_laws(D);
    auto wd = D.encode({0, 1});
    CHECK(D.mul(wd, wd) == D.zero());
    CHECK(D.units().size() == 2); // 1 and 1+w
}

TEST_CASE("lambda validation") {
    CHECK(error_kind([] { Ring::build(RingSpec::modular(4, 2)); }) == "InvalidLambda");
    CHECK(error_kind([] { Ring::build(RingSpec::modular(5, 2)); }) == "InvalidLambda");
    CHECK_NOTHROW(Ring::build(RingSpec::modular(4, 3)));  // 3*3 = 1 mod 4
    CHECK_NOTHROW(Ring::build(RingSpec::modular(5, -1)));
    // swap product: lambda=(a,b) needs a*b = 1
    CHECK_NOTHROW(Ring::build(RingSpec::swap_product(3, 2, 2)));
    CHECK(error_kind([] { Ring::build(RingSpec::swap_product(3, 2, 1)); }) == "InvalidLambda");
    // lambda = w in Z/3[w]/(w^2+1): w * (-w) = 1
    Ring K = Ring::build(RingSpec::quad_ext(3, -1, 0, 1));
    CHECK(K.lambda() == K.encode({0, 1}));
    CHECK(K.mul(K.lambda(), K.involve(K.lambda())) == K.one());
    CHECK(K.lambda_inv() == K.involve(K.lambda()));
}

TEST_CASE("carrier size cap") {
    CHECK(error_kind([] { Ring::build(RingSpec::modular(600)); }) == "CarrierTooLarge");
    CHECK(error_kind([] { Ring::build(RingSpec::quad_ext(23, 1)); }) == "CarrierTooLarge");
    CHECK_NOTHROW(Ring::build(RingSpec::modular(512)));
}

TEST_CASE("non-units throw") {
    Ring K = Ring::build(RingSpec::modular(6));
    CHECK(error_kind([&] { K.inverse(K.from_int(2)); }) == "NotInvertible");
    CHECK(!K.is_unit(K.from_int(3)));
    CHECK(K.is_unit(K.from_int(5)));
}

TEST_CASE("Z/n flattening matrices") {
    for (auto spec : {RingSpec::swap_product(2), RingSpec::quad_ext(3, -1),
                      RingSpec::quad_ext(4, 2)}) {
        Ring K = Ring::build(spec);
        unsigned n = K.modulus(), rk = K.rank();
        for (auto k : K.all()) {
            auto M = K.mul_matrix(k);
            REQUIRE(M.size() == rk * rk);
            for (auto x : K.all()) {
                auto cx = K.coords(x);
                auto want = K.coords(K.mul(k, x));
                for (unsigned i = 0; i < rk; ++i) {
                    unsigned got = 0;
                    for (unsigned j = 0; j < rk; ++j) got += M[i * rk + j] * cx[j];
                    CHECK(got % n == want[i]);
                }
            }
        }
        auto V = K.invol_matrix();
        for (auto x : K.all()) {
            auto cx = K.coords(x);
            auto want = K.coords(K.involve(x));
            for (unsigned i = 0; i < rk; ++i) {
                unsigned got = 0;
                for (unsigned j = 0; j < rk; ++j) got += V[i * rk + j] * cx[j];
                CHECK(got % n == want[i]);
            }
        }
        // basis matches coords
        auto bs = K.basis();
        REQUIRE(bs.size() == rk);
        for (unsigned t = 0; t < rk; ++t) {
            auto co = K.coords(bs[t]);
            for (unsigned s = 0; s < rk; ++s) CHECK(co[s] == (s == t ? 1u : 0u));
        }
    }
}

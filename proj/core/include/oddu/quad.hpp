#pragma once
// Quadratic structures on a finite ring: the Heisenberg pair group of the
// ring, abstract structure/ring/algebra carriers with their axiom checkers,
// the universal quadratic ring, and the integer polynomial model.

#include "oddu/common.hpp"
#include "oddu/ring.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oddu {

// pair (x, y) with the twisted addition (x,y) + (x',y') = (x+x', y+y'-conj(x)x')
struct HeisElem {
    Ring::Elem x = 0;
    Ring::Elem y = 0;
    friend bool operator==(const HeisElem&, const HeisElem&) = default;
};

HeisElem heis_add(const Ring& K, const HeisElem& a, const HeisElem& b);
HeisElem heis_neg(const Ring& K, const HeisElem& a);
HeisElem heis_sub(const Ring& K, const HeisElem& a, const HeisElem& b);
// monoid multiplication (x,y)(x',y') = (xx', conj(x)y'x + conj(x')yx' + yy' + conj(y)y')
HeisElem heis_mul(const Ring& K, const HeisElem& a, const HeisElem& b);
HeisElem heis_act(const Ring& K, const HeisElem& a, Ring::Elem k);
HeisElem heis_phi(const Ring& K, Ring::Elem k);
Ring::Elem heis_tr(const Ring& K, const HeisElem& a); // conj(x)x + y + conj(y)
std::string heis_to_string(const Ring& K, const HeisElem& a);

// Finite quadratic structure with enumerated carrier 0..size-1. Operations
// are plain std::function slots so a test can swap one out and watch the
// checker produce a witness.
struct QuadStructure {
    const Ring* R = nullptr;
    std::uint16_t size = 0;
    std::uint16_t zero = 0;
    std::function<std::uint16_t(std::uint16_t, std::uint16_t)> add;
    std::function<std::uint16_t(std::uint16_t)> neg;
    std::function<std::uint16_t(Ring::Elem)> phi;
    std::function<Ring::Elem(std::uint16_t)> tr;
    std::function<std::uint16_t(std::uint16_t, Ring::Elem)> act;
};

// quadratic structure whose carrier is itself a commutative ring
struct QuadRing {
    QuadStructure base;
    std::uint16_t one = 0;
    std::function<std::uint16_t(std::uint16_t, std::uint16_t)> mul;
};

// scalar action of a quadratic ring on a quadratic structure over the same
// ground ring
struct QuadAlgebraBinding {
    const QuadRing* scalars = nullptr;
    const QuadStructure* module = nullptr;
    std::function<std::uint16_t(std::uint16_t, std::uint16_t)> act;
};

// Universal quadratic ring of K: Heisenberg pairs modulo the subgroup
// {(0, k - conj(k))}, with lexicographically least coset representatives.
// Only defined when lambda = 1.
struct UniversalStructure {
    QuadRing ring;
    std::vector<HeisElem> reps;              // carrier code -> representative
    std::uint16_t class_of(const Ring& K, const HeisElem& h) const;

    std::vector<std::uint16_t> class_table;  // indexed by x * |K| + y
};

UniversalStructure universal_structure(const Ring& K);

// canonical action of the universal ring on any quadratic structure over K:
// class(x, y) sends a to a.x + phi(y tr(a))
QuadAlgebraBinding universal_binding(const UniversalStructure& AK, const QuadStructure& AR);

// Axiom checkers. Exhaustive when the tuple space is small, otherwise a
// seeded sample. Failures are recorded with witnesses, never thrown.
CheckReport verify_QS(const QuadStructure& S, std::uint64_t seed = 0, std::size_t samples = 10000);
CheckReport verify_QR(const QuadRing& Q, std::uint64_t seed = 0, std::size_t samples = 10000);
CheckReport verify_QA(const QuadAlgebraBinding& B, std::uint64_t seed = 0, std::size_t samples = 10000);

// Integer model: pairs over the rational integers embed into Z[T]/(T^2-2T)
// by (x, y) -> x + (y + x(x-1)/2) T, turning pair addition and multiplication
// into the ring operations.
struct ZPair {
    long long x = 0;
    long long y = 0;
};
struct ZPoly {
    long long c0 = 0;
    long long c1 = 0; // c0 + c1 T
    friend bool operator==(const ZPoly&, const ZPoly&) = default;
};

ZPair zpair_add(const ZPair& a, const ZPair& b);
ZPair zpair_mul(const ZPair& a, const ZPair& b);
ZPoly heis_poly_image(const ZPair& a);           // |x|, |y| <= 10^6
bool heis_poly_check(const ZPair& a, const ZPair& b);

} // namespace oddu

#pragma once
// The endomorphism algebra of a block-decomposed quadratic space: the
// b-adjoint involution, block idempotents, the doubled algebra A = C x C
// with the swap involution, the group H = e0*C x C x C*e0 under twisted
// addition, elementary transvections, and verifiers for the NQ and T
// relation families they satisfy.

#include "oddu/forms.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oddu {

// A quadratic space with invertible gram matrix plus the cached data the
// adjoint and the block calculus need.  Immutable after construction.
struct EndoContext {
    explicit EndoContext(QuadraticSpace s) : space(std::move(s)) {}

    QuadraticSpace space;
    Mat b_inv;             // inverse of the gram matrix
    std::vector<Mat> idem; // block idempotents, in block order -l..l
    Mat e_plus, e_minus;   // sums of the positive / negative block idempotents
    Ring::Elem lambda_E;   // scalar lambda; lambda_E itself is lambda * identity

    const Ring& ring() const { return space.ring(); }
    unsigned dim() const { return space.dim(); }
    int bl() const { return static_cast<int>(space.profile().l); }
    unsigned r0() const { return space.profile().block_rank(0); }
    const Mat& eidem(int i) const; // idempotent of block i, |i| <= l
};

// Validates at build time: the idempotents are a complete orthogonal family
// with adjoint(e_i) = e_{-i}, the adjoint is anti-multiplicative with
// adjoint^2 = conjugation by lambda, and B(a m, m') = B(m, adjoint(a) m')
// holds on a basis of the algebra.  Throws NotInvertible on degenerate gram.
EndoContext make_endo_context(const QuadraticSpace& sp);

// b^-1 conj(a)^T b, the unique a* with B(a m, m') = B(m, a* m')
Mat adjoint(const EndoContext& ctx, const Mat& a);

// true when every nonzero entry of a lies in block-i rows and block-j columns
bool block_supported(const EndoContext& ctx, const Mat& a, int i, int j);
// d x d matrix with the given r_i x r_j entries (row-major) placed in block (i, j)
Mat block_matrix(const EndoContext& ctx, int i, int j,
                 const std::vector<Ring::Elem>& entries);

// element (x, y) of the doubled algebra A = C x C; multiplication is
// componentwise, the involution swaps the slots and adjoints each
struct DoubleElem {
    Mat x, y;
    friend bool operator==(const DoubleElem&, const DoubleElem&) = default;
};

DoubleElem dbl_zero(const EndoContext& ctx);
DoubleElem dbl_one(const EndoContext& ctx);
DoubleElem dbl_zeta(const EndoContext& ctx);             // (0, 1)
DoubleElem dbl_of(const EndoContext& ctx, const Mat& c); // diagonal embedding
DoubleElem dbl_add(const DoubleElem& a, const DoubleElem& b);
DoubleElem dbl_sub(const DoubleElem& a, const DoubleElem& b);
DoubleElem dbl_neg(const DoubleElem& a);
DoubleElem dbl_mul(const DoubleElem& a, const DoubleElem& b);
DoubleElem dbl_conj(const EndoContext& ctx, const DoubleElem& a);

// element (x, y, z) of H = e0*C x C x C*e0; the x and z slots are stored in
// compact r0 x d and d x r0 shape (their only nonzero rows / columns)
struct HElem {
    Mat x, y, z;
    friend bool operator==(const HElem&, const HElem&) = default;
};

HElem h_zero(const EndoContext& ctx);
// (x, y, z) + (x', y', z') = (x + x', y + z x' + y', z + z')
HElem h_add(const EndoContext& ctx, const HElem& h, const HElem& g);
// -(x, y, z) = (-x, z x - y, -z)
HElem h_neg(const EndoContext& ctx, const HElem& h);
// (x, y, z) . (p, q) = (x p, conj(q) y p, conj(q) z), a monoid action of A
HElem h_act(const EndoContext& ctx, const HElem& h, const DoubleElem& a);
DoubleElem h_pi(const EndoContext& ctx, const HElem& h); // (x, -conj(z))
DoubleElem h_tr(const EndoContext& ctx, const HElem& h); // (y, conj(z x - y))
HElem phi_H(const EndoContext& ctx, const DoubleElem& a); // (0, x - conj(y), 0)

// full d x d embeddings of the compact x / z slots
Mat h_embed_x(const EndoContext& ctx, const Mat& x);
Mat h_embed_z(const EndoContext& ctx, const Mat& z);

// true when h lies in H.e_i: x supported in block-i columns, y in block
// (-i, i), z in block-(-i) rows
bool h_in_block(const EndoContext& ctx, const HElem& h, int i);

// 1 + x for x in block (i, j), i != j; throws BadBlock on bad indices or support
Mat t_elem(const EndoContext& ctx, int i, int j, const Mat& x);
// 1 + x - conj(y) for a = (x, y) in block (i, j), 0 != i != +-j != 0
Mat tau_short(const EndoContext& ctx, int i, int j, const DoubleElem& a);
// 1 + x + y + z for h in H.e_i, i != 0
Mat tau_ultra(const EndoContext& ctx, int i, const HElem& h);

// the maps of H wired into the law checker; override a slot to break it on
// purpose and watch the matching law fail
struct HMaps {
    std::function<DoubleElem(const EndoContext&, const HElem&)> pi;
    std::function<DoubleElem(const EndoContext&, const HElem&)> tr;
    std::function<HElem(const EndoContext&, const DoubleElem&)> phi;
};
HMaps h_default_maps();

// NQ1..NQ10: the compatibility laws tying +, ., pi, phi and tr together.
// Exhaustive when the tuple space is small, otherwise `trials` random tuples.
CheckReport verify_NQ(const EndoContext& ctx, uint64_t seed = 0,
                      uint64_t trials = 10000);
CheckReport verify_NQ(const EndoContext& ctx, const HMaps& maps, uint64_t seed,
                      uint64_t trials);

// T1..T8: the transvection identities, as d x d matrix equations.  The block
// pair anchors the index tuples; a third hyperbolic index joins in when the
// profile has one.  Throws BadBlock unless 0 != i != +-j != 0.
CheckReport verify_T(const EndoContext& ctx, std::pair<int, int> blocks,
                     uint64_t seed = 0, uint64_t trials = 2000);
using ConjFn = std::function<Mat(const EndoContext&, const Mat&)>;
CheckReport verify_T(const EndoContext& ctx, std::pair<int, int> blocks,
                     const ConjFn& conj, uint64_t seed, uint64_t trials);

} // namespace oddu

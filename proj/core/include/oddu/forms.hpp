#pragma once
// Quadratic spaces over a finite ring with involution: hermitian gram
// matrices, the Heisenberg group of a form, odd form parameters, and
// quotient-valued quadratic maps given by a basis table.
//
// Vectors are column vectors over the ring; endomorphisms act from the left,
// scalars from the right. B(m, m') = conj(m)^T b m'.

#include "oddu/mat.hpp"
#include "oddu/quad.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oddu {

inline constexpr std::size_t kDefaultParamCap = std::size_t{1} << 20;

// Basis is grouped into blocks -l..-1, 0, 1..l (in that order); blocks i and
// -i are paired hyperbolically and have equal rank r[|i|]; block 0 is the odd
// block of rank r[0].
struct BlockProfile {
    unsigned l = 0;
    std::vector<unsigned> r; // r[0..l]

    bool valid() const;
    unsigned dim() const;
    unsigned block_rank(int i) const;
    unsigned block_start(int i) const; // first basis index of block i
    int block_of(unsigned idx) const;

    static BlockProfile plain(unsigned d) { return BlockProfile{0, {d}}; }
};

// element (m, r) of the Heisenberg group of a form
struct FormPoint {
    std::vector<Ring::Elem> m;
    Ring::Elem r = 0;

    friend bool operator==(const FormPoint&, const FormPoint&) = default;
};

using Vec = std::vector<Ring::Elem>;

Ring::Elem eval_form(const Mat& b, const Vec& u, const Vec& v);
bool check_hermitian(const Mat& b);       // b_uv = involve(b_vu) * lambda
bool check_nondegenerate(const Mat& b);   // gram matrix invertible

Vec vec_zero(std::size_t d);
Vec vec_add(const Ring& K, const Vec& u, const Vec& v);
Vec vec_smul(const Ring& K, const Vec& u, Ring::Elem k);
Vec mat_apply(const Mat& a, const Vec& v);
std::string vec_key(const Ring& K, const Vec& v);

// Heis(B) group operations
FormPoint heisb_add(const Mat& b, const FormPoint& h, const FormPoint& g);
FormPoint heisb_neg(const Mat& b, const FormPoint& h);
FormPoint heisb_sub(const Mat& b, const FormPoint& h, const FormPoint& g);
FormPoint heisb_act(const Ring& K, const FormPoint& h, Ring::Elem k);
FormPoint heisb_phi(const Ring& K, std::size_t d, Ring::Elem r);
Ring::Elem heisb_tr(const Mat& b, const FormPoint& h);
std::string heisb_key(const Ring& K, const FormPoint& h);

// all of Ker(tr) inside Heis(B); the carrier |K|^(d+1) must stay small
std::vector<FormPoint> lmax_elements(const Mat& b, std::size_t cap = kDefaultParamCap);

// Odd form parameter: a subgroup L_min <= L <= L_max of Heis(B) closed under
// the scalar action.
class OddFormParameter {
public:
    // smallest parameter containing gens; throws NotInLMax if a generator has
    // nonzero trace, Overflow past cap
    static OddFormParameter closure(const Mat& b, const std::vector<FormPoint>& gens,
                                    std::size_t cap = kDefaultParamCap);
    // wraps an explicit element set, validating all parameter invariants
    static OddFormParameter from_elements(const Mat& b, std::vector<FormPoint> elems);

    const std::vector<FormPoint>& elements() const { return elems_; }
    const std::vector<FormPoint>& gens() const { return gens_; }
    std::size_t size() const { return elems_.size(); }
    bool contains(const Ring& K, const FormPoint& p) const;
    bool same_as(const Ring& K, const OddFormParameter& o) const;

private:
    std::vector<FormPoint> gens_;
    std::vector<FormPoint> elems_; // sorted by key
    std::vector<std::string> keys_;
    void index(const Ring& K);
};

class QuadraticSpace {
public:
    const Ring& ring() const { return *K_; }
    const BlockProfile& profile() const { return prof_; }
    const Mat& gram() const { return b_; }
    unsigned dim() const { return static_cast<unsigned>(b_.rows()); }
    const OddFormParameter& param() const { return param_; }
    const std::vector<FormPoint>& qtable() const { return qtable_; }
    bool nondegenerate() const { return nondeg_; }

    // representative of the class of q~(m) with m-part equal to m
    FormPoint qtilde_raw(const Vec& m) const;
    // canonical representative: lexicographically least element of the coset
    FormPoint qtilde(const Vec& m) const;
    FormPoint reduce_coset(const FormPoint& p) const;
    bool coset_eq(const FormPoint& p, const FormPoint& q) const;
    bool in_param(const FormPoint& p) const;

    Ring::Elem form(const Vec& u, const Vec& v) const { return eval_form(b_, u, v); }

    // validates every invariant: hermitian gram, parameter bounds, table trace
    static QuadraticSpace assemble(const Ring& K, BlockProfile prof, Mat b,
                                   OddFormParameter param, std::vector<FormPoint> qtable);

private:
    QuadraticSpace() = default;
    const Ring* K_ = nullptr;
    BlockProfile prof_;
    Mat b_;
    OddFormParameter param_;
    std::vector<FormPoint> qtable_;
    bool nondeg_ = false;
};

// free module with arbitrary hermitian gram matrix; q~(e_i) = (e_i, t_i)
QuadraticSpace make_quadratic_bimodule(const Ring& K, const Mat& b,
                                       const std::vector<FormPoint>& param_gens,
                                       const std::vector<Ring::Elem>& table_t,
                                       std::size_t cap = kDefaultParamCap);

// hyperbolic pairing between blocks i and -i, given odd-block form; the odd
// form parameter is the closure of the user generators together with the
// forced hyperbolic-basis elements (e_i, 0)
QuadraticSpace build_standard_space(const Ring& K, const BlockProfile& prof,
                                    const Mat& odd_block,
                                    const std::vector<FormPoint>& param_gens,
                                    std::size_t cap = kDefaultParamCap);

// metabolic space of P: dual block first, so B_P = 0 with vanishing q~ gives
// exactly the standard hyperbolic gram [[0, lambda I], [I, 0]]
QuadraticSpace metabolic(const QuadraticSpace& P, std::size_t cap = kDefaultParamCap);

QuadraticSpace orthogonal_sum(const std::vector<const QuadraticSpace*>& parts,
                              std::size_t cap = kDefaultParamCap);

// basis reindexing: new basis vector i is old basis vector perm[i]
QuadraticSpace reindex(const QuadraticSpace& sp, const std::vector<unsigned>& perm,
                       BlockProfile new_prof);

// The quotient Heis(B)/L as an abstract quadratic structure over the ring,
// with canonical coset representatives as the carrier. Keeps a copy of the
// space alive inside the returned closures.
QuadStructure space_structure(const QuadraticSpace& sp, std::size_t cap = kDefaultParamCap);

// B-preservation on basis pairs plus q~ class match on basis vectors;
// throws NotInvertible on singular input
bool is_isometry(const QuadraticSpace& sp, const Mat& g);

// exhaustive unitary group by basis-image backtracking; calls sink for every
// isometry; throws CapExceeded past cap
void enumerate_isometries(const QuadraticSpace& sp, std::size_t cap,
                          const std::function<void(const Mat&)>& sink);
std::vector<Mat> isometry_list(const QuadraticSpace& sp, std::size_t cap);

} // namespace oddu

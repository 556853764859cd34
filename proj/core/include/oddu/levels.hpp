#pragma once
// Levels of a block-decomposed quadratic space.  The module part of a level
// is a family of Howell bases, one per block pair of the doubled algebra; the
// group part is a family of enumerated subgroups of the blocks of H.  On top
// of that representation: the odd form parameter of the double, validity
// checking, a smallest-completion constructor, the enveloping / floor /
// ceiling calculus, scaling by hermitian ring scalars, root subgroups over
// the doubled root system BC_l, the alpha embedding with its eps defect, and
// membership tests for the principal and relative-normalizer level groups.

#include "oddu/endo.hpp"
#include "oddu/groups.hpp"
#include "oddu/zmodlin.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oddu {

// carriers (block enumerations) refuse to materialize past this many elements
inline constexpr std::size_t kCarrierCap = std::size_t{1} << 20;
// cap for the twisted-addition closure behind the global group-part oracle
inline constexpr std::size_t kGammaClosureCap = std::size_t{1} << 22;

// Module part: one Howell basis per block pair (i, j) of A, coordinates are
// the two slots of a block element flattened.  Kept closed under the
// involution, which maps block (i, j) onto (-j, -i).  Membership of a general
// element means membership of every block part; the represented set is graded.
class SubmoduleBasis {
public:
    explicit SubmoduleBasis(const EndoContext& ctx);

    // splits a into block parts and inserts each together with its involution
    // image; true when the span grew.  grown, when given, collects the blocks
    // whose span changed
    bool grow(const DoubleElem& a, std::vector<std::pair<int, int>>* grown = nullptr);
    bool member(const DoubleElem& a) const;
    bool contains(const SubmoduleBasis& o) const;
    bool same(const SubmoduleBasis& o) const;

    // canonical Howell generators of one block, embedded as full d x d pairs
    std::vector<DoubleElem> block_gens(int i, int j) const;
    std::vector<DoubleElem> gens() const; // all blocks, block order
    unsigned long long block_count(int i, int j) const;
    bool block_trivial(int i, int j) const;

private:
    const EndoContext* ctx_;
    int l_;
    std::vector<HowellBasis> blocks_; // (2l+1)^2 entries, (i+l)*(2l+1)+(j+l)

    const HowellBasis& at(int i, int j) const;
    HowellBasis& at(int i, int j);
    friend std::string level_text(const EndoContext&, const struct AugLevel&);
    friend std::string level_key(const EndoContext&, const struct AugLevel&);
};

// One block component of a subgroup of H, enumerated and kept closed under
// the twisted addition and negation.  Block 0 carries the augmented data.
class HBlockSet {
public:
    HBlockSet(const EndoContext& ctx, int i); // the trivial subgroup
    int block() const { return i_; }
    std::size_t size() const { return elems_.size(); }
    const std::vector<HElem>& elems() const { return elems_; }

    // adjoins h and recloses; throws BadBlock when h is outside H.e_i,
    // CapExceeded when the closure would pass cap.  True when the set grew.
    bool grow(const HElem& h, std::size_t cap = kCarrierCap);
    bool member(const HElem& h) const;
    bool contains(const HBlockSet& o) const;
    bool same(const HBlockSet& o) const;
    const std::set<std::string>& keys() const { return keys_; }

private:
    const EndoContext* ctx_;
    int i_;
    std::vector<HElem> elems_;
    std::set<std::string> keys_;
};

// Group part of a level: one HBlockSet per block of H.  The global subgroup
// of H the family describes is generated by the blocks together with the phi
// image of the paired module part; the phi image joins at use sites instead
// of being stored, see GammaOracle.
struct GammaData {
    std::vector<HBlockSet> blocks; // block i at index i + l

    HBlockSet& block(int i);
    const HBlockSet& block(int i) const;
};

// Augmented level: module part plus group part satisfying the level axioms.
// The class of an augmented level forgets the block-0 data (column 0 of the
// module part and the block-0 group component); level_eq and level_leq
// compare class data only.  Any augmented member represents its class.
struct AugLevel {
    SubmoduleBasis I;
    GammaData gamma;
};
using LevelClass = AugLevel;

GammaData make_gamma(const EndoContext& ctx); // all blocks trivial

// carriers: every element of block (i, j) of A, resp. of H.e_i; the order is
// the code odometer, so deterministic.  Throws CarrierTooLarge past cap.
std::vector<DoubleElem> ablock_carrier(const EndoContext& ctx, int i, int j,
                                       std::size_t cap = kCarrierCap);
std::vector<HElem> hblock_carrier(const EndoContext& ctx, int i,
                                  std::size_t cap = kCarrierCap);

// The odd form parameter of the double: block i collects the h with
// 1 + x + y + z an isometry.  Verifies the shape of every member (z = -inv x
// and the gram identity for y) and the closure laws the blocks must satisfy;
// violations throw Internal.
GammaData compute_lambda(const EndoContext& ctx,
                         std::size_t carrier_cap = kCarrierCap);

AugLevel zero_level(const EndoContext& ctx);
AugLevel full_level(const EndoContext& ctx, std::size_t carrier_cap = kCarrierCap);
// the level of the elementary unitary group: diagonal module part, group
// part the odd form parameter of the double
AugLevel base_level(const EndoContext& ctx, std::size_t carrier_cap = kCarrierCap);

// Smallest augmented level containing the given generators: closes under the
// level axioms by fixpoint, then validates.  Group generators must lie in a
// single block of H.  Throws NotALevel when no augmented level contains the
// generators (the column-0 equality cannot be forced from below).
AugLevel complete_level(const EndoContext& ctx,
                        const std::vector<DoubleElem>& module_gens,
                        const std::vector<HElem>& group_gens,
                        std::size_t carrier_cap = kCarrierCap);

// Every level axiom, checked generator-wise, one report entry per axiom with
// a witness on failure.  "span" in the entry names is the multiplier set
// I + K + (1-e0)C(1-e0) + pi(Lambda) + inv(pi(Lambda)).
CheckReport check_aug_level(const EndoContext& ctx, const AugLevel& L,
                            std::size_t carrier_cap = kCarrierCap);

bool level_eq(const EndoContext& ctx, const AugLevel& a, const AugLevel& b);
bool level_leq(const EndoContext& ctx, const AugLevel& a, const AugLevel& b);

// enveloping level: adjoins the diagonal copy of (1-e0)C(1-e0) and the odd
// form parameter of the double to the class data
AugLevel enveloping_level(const EndoContext& ctx, const AugLevel& L,
                          std::size_t carrier_cap = kCarrierCap);
// smallest augmented member of the class, by the direct product formulas
AugLevel floor_level(const EndoContext& ctx, const AugLevel& L,
                     std::size_t carrier_cap = kCarrierCap);
// biggest augmented member, by comprehension over the block-0 carriers; only
// offered while r0 <= 1 and |K| <= 4, otherwise CarrierTooLarge
AugLevel ceil_level(const EndoContext& ctx, const AugLevel& L,
                    std::size_t carrier_cap = kCarrierCap);
// the level L.s = (I s, Gamma.s + phi(I s)); s must be hermitian (BadScalar)
AugLevel scale_level(const EndoContext& ctx, const AugLevel& L, Ring::Elem s,
                     std::size_t carrier_cap = kCarrierCap);

// every level class between lo and hi, found by closing principal extensions;
// returned sorted by serialization key, lo and hi included
std::vector<AugLevel> levels_between(const EndoContext& ctx, const AugLevel& lo,
                                     const AugLevel& hi,
                                     std::size_t carrier_cap = kCarrierCap);

// The level of a subgroup of GL(P) normalized by the elementary unitary
// group, from a membership oracle: transvection filters fill the visible
// blocks, the remaining blocks are forced by the axioms.  Samples the
// normalization assumption and validates the result; throws NotALevel.
AugLevel level_of_group(const EndoContext& ctx,
                        const std::function<bool(const Mat&)>& member,
                        std::size_t carrier_cap = kCarrierCap);

// roots of BC_l as integer vectors: +-e_a +- e_b (short), +-e_a (ultrashort),
// +-2 e_a (long)
struct Root {
    std::vector<int> v;
    friend bool operator==(const Root&, const Root&) = default;
};
enum class RootLen { Ultrashort, Short, Long };

std::optional<RootLen> root_shape(const Root& a);
Root root_neg(const Root& a);
Root root_madd(const Root& a, const Root& b, int m, int n); // m a + n b
// all 2l^2 + 2l roots: per axis the ultrashort and long pairs, then the
// short roots per axis pair, sign combinations in a fixed order
std::vector<Root> all_roots(unsigned l);

// generators of the root subgroup U_alpha(L): short roots give two-index
// transvections over a module block, ultrashort give one-index transvections
// over a group block, long give the phi image of the antidiagonal module
// block.  Checks that the long subgroup embeds in the ultrashort one.
std::vector<Mat> root_subgroup(const EndoContext& ctx, const AugLevel& L,
                               const Root& alpha);

// the doubling embedding g -> (g, inv(g^-1)) and the distinguished element
// eps = (e0, e+, -e0) of H
DoubleElem alpha_map(const EndoContext& ctx, const Mat& g);
HElem eps_elem(const EndoContext& ctx);
// eps . alpha(g) - eps, the obstruction alpha(g) leaves on eps
HElem eps_defect(const EndoContext& ctx, const Mat& g);

struct EpsAlpha {
    HElem eps;
    DoubleElem zeta;
    Mat e_plus, e_minus;
};
EpsAlpha make_eps_alpha(const EndoContext& ctx);

// Membership oracle for the global group part of an augmented level: the
// subgroup of H generated by the Gamma blocks and phi of the module part.
// Exact Howell arithmetic when r0 = 0 (H is then the additive group of C);
// otherwise a capped closure that throws GammaMembershipUndecidable.
class GammaOracle {
public:
    GammaOracle(const EndoContext& ctx, const AugLevel& L,
                std::size_t closure_cap = kGammaClosureCap);
    bool member(const HElem& h) const;

private:
    void sift(HElem h, std::size_t budget);

    const EndoContext* ctx_;
    HowellBasis ky_;                  // central kernel on the y slot
    std::vector<HElem> tab_;          // echelon witnesses on the (x, z) row
    std::vector<ZRow> tab_rho_;
    std::vector<int> piv_;            // (x, z) column -> table index, -1 empty
    std::size_t ops_ = 0;
    std::size_t cap_;
};

// g lies in the principal group of L: alpha(g) - 1 in the module part and
// the eps defect in the global group part
bool principal_membership(const EndoContext& ctx, const AugLevel& L, const Mat& g,
                          std::size_t closure_cap = kGammaClosureCap);

// The three equation families cutting out the relative normalizer of a
// level: conjugation stability of the floored enveloping module part over
// the module data, and two eps-defect rules over the group data.  Families
// are checked on generators exactly; sum_trials extra random sums of
// generators probe the rest of the carrier.
class GuChecker {
public:
    GuChecker(const EndoContext& ctx, const AugLevel& L,
              std::size_t carrier_cap = kCarrierCap,
              std::size_t closure_cap = kGammaClosureCap);
    bool member(const Mat& g, unsigned sum_trials = 0, uint64_t seed = 0) const;

private:
    const EndoContext* ctx_;
    AugLevel L_;
    HElem eps_;
    std::vector<DoubleElem> fam1_, fam2_;
    std::vector<HElem> fam3_;
    GammaOracle oracle_;
};

bool gu_membership(const EndoContext& ctx, const AugLevel& L, const Mat& g,
                   unsigned sum_trials = 0, uint64_t seed = 0);

// transvection generators of EU(L): two-index over the visible module
// blocks, one-index over the group blocks
std::vector<Mat> eu_level_gens(const EndoContext& ctx, const AugLevel& L);
// generators of the elementary unitary group itself (the base level's)
std::vector<Mat> eu_gens(const EndoContext& ctx,
                         std::size_t carrier_cap = kCarrierCap);
// the elementary level group: normal closure of EU(L) under the elementary
// unitary group
FiniteGroup eu_level_group(const EndoContext& ctx, const AugLevel& L,
                           std::size_t group_cap,
                           std::size_t carrier_cap = kCarrierCap);

// stable text serialization: every block of the augmented data
std::string level_text(const EndoContext& ctx, const AugLevel& L);
// canonical key of the class data only
std::string level_key(const EndoContext& ctx, const AugLevel& L);

} // namespace oddu

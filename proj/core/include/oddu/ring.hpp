#pragma once

#include "oddu/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oddu {

// Finite commutative ring with involution and a distinguished unit lambda
// satisfying involve(lambda) = lambda^{-1}.  Three constructions:
//   modular(n)        Z/n, trivial involution
//   swap_product(n)   Z/n x Z/n, involution (a,b) -> (b,a)
//   quad_ext(n,d)     Z/n[w]/(w^2 - d), involution w -> -w
//
// Elements are dense codes in [0, size). All ring tables are precomputed,
// so element operations are table lookups. Rings are capped at 512 elements;
// everything here is meant for exhaustive desk-scale computation.

enum class RingKind { Modular, SwapProduct, QuadExt };

struct RingSpec {
    RingKind kind = RingKind::Modular;
    unsigned n = 2;                 // base modulus
    long long d = 0;                // defining constant for quad_ext: w^2 = d
    std::vector<long long> lambda{1}; // residue coordinates (length = rank)

    static RingSpec modular(unsigned n, long long lambda = 1);
    static RingSpec swap_product(unsigned n, long long la = 1, long long lb = 1);
    static RingSpec quad_ext(unsigned n, long long d, long long la = 1, long long lb = 0);
};

class Ring {
public:
    using Elem = uint16_t;
    static constexpr unsigned kMaxSize = 512;

    static Ring build(const RingSpec& spec);

    unsigned size() const { return size_; }
    RingKind kind() const { return kind_; }
    unsigned modulus() const { return n_; }
    unsigned rank() const { return rank_; } // rank as a free Z/n-module (1 or 2)
    const RingSpec& spec() const { return spec_; }

    Elem zero() const { return 0; }
    Elem one() const { return one_; }
    Elem lambda() const { return lambda_; }
    Elem lambda_inv() const { return inverse(lambda_); }

    Elem add(Elem a, Elem b) const { return add_[idx(a, b)]; }
    Elem sub(Elem a, Elem b) const { return add_[idx(a, neg_[b])]; }
    Elem mul(Elem a, Elem b) const { return mul_[idx(a, b)]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem involve(Elem a) const { return invol_[a]; }
    bool is_unit(Elem a) const { return inv_[a] != kNoInverse; }
    Elem inverse(Elem a) const {
        if (inv_[a] == kNoInverse) fail("NotInvertible", "element " + to_string(a) + " is not a unit");
        return inv_[a];
    }

    Elem from_int(long long v) const; // n-fold sum of 1, i.e. image of an integer
    Elem encode(const std::vector<long long>& coords) const;
    std::vector<unsigned> coords(Elem a) const; // residue coordinates, length = rank
    std::string to_string(Elem a) const;

    // Z/n-linear data used to flatten K-linear problems to Z/n.
    // mul_matrix(k): rank x rank matrix M with coords(k*x) = M * coords(x).
    std::vector<unsigned> mul_matrix(Elem k) const;
    std::vector<unsigned> invol_matrix() const;

    std::vector<Elem> all() const;
    std::vector<Elem> units() const;
    std::vector<Elem> hermitian_part() const; // { k : involve(k) == k }
    std::vector<Elem> basis() const;          // Z/n-module basis matching coords()

    bool same_as(const Ring& o) const { return this == &o; }

private:
    static constexpr Elem kNoInverse = 0xFFFF;
    size_t idx(Elem a, Elem b) const { return static_cast<size_t>(a) * size_ + b; }

    RingSpec spec_;
    RingKind kind_;
    unsigned n_ = 0, size_ = 0, rank_ = 1;
    Elem one_ = 0, lambda_ = 0;
    std::vector<Elem> add_, mul_, neg_, inv_, invol_;
};

} // namespace oddu

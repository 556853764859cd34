#pragma once
// Finite matrix groups as exact element sets: breadth-first closure, normal
// closure under a set of conjugators, and membership / equality on canonical
// byte keys.  Desk scale: element sets live in memory, no stabilizer chains.

#include "oddu/common.hpp"
#include "oddu/mat.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace oddu {

// Closed group of invertible d x d matrices over one ring.  The element key
// is mat_key: row-major entry codes, one byte per entry (two past ring size
// 256), injective at fixed shape.  Keys are kept sorted in one fixed-width
// blob, so equality and dumps are canonical.
class FiniteGroup {
public:
    const Ring& ring() const { return *K_; }
    std::size_t dim() const { return d_; }
    std::size_t order() const { return n_; }

    // generators as supplied; a normal closure appends the conjugates it had
    // to adjoin, so the list always generates the group together with inverses
    const std::vector<Mat>& gens() const { return gens_; }

    std::size_t key_len() const { return klen_; }
    std::string key_at(std::size_t idx) const;  // idx-th key in sorted order
    Mat element(std::size_t idx) const;         // decoded key_at(idx)
    bool contains_key(const std::string& key) const;

    // sorted hex keys, one per line; stable across runs for diffing
    void dump_hex(std::ostream& out) const;

private:
    FiniteGroup() = default;

    friend FiniteGroup generate(const Ring&, std::size_t, const std::vector<Mat>&, std::size_t);
    friend FiniteGroup normal_closure(const Ring&, std::size_t, const std::vector<Mat>&,
                                      const std::vector<Mat>&, std::size_t);
    friend bool equal_groups(const FiniteGroup&, const FiniteGroup&);

    const Ring* K_ = nullptr;
    std::size_t d_ = 0;
    std::size_t n_ = 0;
    std::size_t klen_ = 0;
    std::vector<Mat> gens_;
    std::string keys_; // n_ sorted records of klen_ bytes each
};

// breadth-first closure of gens under products and inverses.  Throws
// CapExceeded once the element count would pass cap (the partial set is
// discarded, never returned) and NotInvertible for a singular generator.
FiniteGroup generate(const Ring& K, std::size_t d, const std::vector<Mat>& gens,
                     std::size_t cap);

// smallest subgroup containing seed_gens that is closed under conjugation by
// every normalizer generator and its inverse
FiniteGroup normal_closure(const Ring& K, std::size_t d, const std::vector<Mat>& seed_gens,
                           const std::vector<Mat>& normalizer_gens, std::size_t cap);

// exact membership; false (not an error) for ring or shape mismatches
bool contains(const FiniteGroup& G, const Mat& g);
bool equal_groups(const FiniteGroup& G, const FiniteGroup& H);

} // namespace oddu

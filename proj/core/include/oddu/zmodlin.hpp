#pragma once
// Linear algebra over Z/n.  Row spans are kept in Howell normal form, which
// is canonical per span: equality of spans is equality of the row lists, and
// membership testing is a greedy left-to-right reduction.

#include <cstddef>
#include <optional>
#include <vector>

namespace oddu {

using ZRow = std::vector<unsigned>;

// Row span over Z/n in canonical (Howell) form.
class HowellBasis {
public:
    HowellBasis(unsigned n, std::size_t width);

    unsigned modulus() const { return n_; }
    std::size_t width() const { return m_; }

    void add(const ZRow& row);
    // add, reporting whether the span grew.
    bool grow(const ZRow& row);
    bool contains(const ZRow& row) const;
    bool contains_all(const HowellBasis& other) const;
    bool same_span(const HowellBasis& other) const;

    // canonical representative of row + span; rows in the same coset reduce
    // to the same vector.
    ZRow reduce(ZRow row) const;

    // number of elements in the span; throws Overflow past 2^62.
    unsigned long long count() const;

    // canonical rows in pivot-column order.
    std::vector<ZRow> rows() const;

private:
    unsigned n_;
    std::size_t m_;
    // piv_[j]: row with leading nonzero at column j (entry divides n), or empty.
    std::vector<ZRow> piv_;
    std::vector<bool> has_;

    void insert(ZRow row);
    void tidy();
};

// Solves x * G = target (rows of G are generators) and computes the left
// kernel {x : x * G = 0}.  Builds the Howell form of [G | I] once.
class LeftSolver {
public:
    LeftSolver(unsigned n, std::size_t width, const std::vector<ZRow>& gens);

    std::optional<ZRow> solve(const ZRow& target) const;
    std::vector<ZRow> kernel() const;

private:
    unsigned n_;
    std::size_t m_, ngens_;
    HowellBasis aug_;
};

} // namespace oddu

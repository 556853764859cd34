#pragma once
// Dense matrices over a table-driven finite ring.  Entries are ring codes;
// every matrix carries a pointer to its ring, and mixed-ring arithmetic is
// rejected.

#include "oddu/ring.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oddu {

class Mat {
public:
    Mat() : K_(nullptr), r_(0), c_(0) {}
    Mat(const Ring& K, std::size_t rows, std::size_t cols)
        : K_(&K), r_(rows), c_(cols), a_(rows * cols, 0) {}

    static Mat identity(const Ring& K, std::size_t d);
    static Mat scalar(const Ring& K, std::size_t d, Ring::Elem k);

    const Ring& ring() const { return *K_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Ring::Elem at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    Ring::Elem& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const std::vector<Ring::Elem>& data() const { return a_; }

    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    const Ring* K_;
    std::size_t r_, c_;
    std::vector<Ring::Elem> a_;
};

Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_neg(const Mat& x);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_smul(Ring::Elem k, const Mat& x); // k * x entrywise
Mat mat_smul(const Mat& x, Ring::Elem k); // x * k entrywise
Mat mat_conj(const Mat& x);               // entrywise involution
Mat mat_transpose(const Mat& x);
bool mat_is_zero(const Mat& x);

// inverse over the ring, via the Z/n image of the matrix; empty if singular.
std::optional<Mat> mat_inverse(const Mat& x);

// Z/n coordinate row of the matrix: entry coordinates, row-major.  Width is
// rows*cols*rank; mat_unflatten rebuilds the matrix.
std::vector<unsigned> mat_flatten(const Mat& x);
Mat mat_unflatten(const Ring& K, std::size_t rows, std::size_t cols,
                  const std::vector<unsigned>& coords);

// packed byte key for hashing and ordering; one code per entry, width from
// the ring size.
std::string mat_key(const Mat& x);

} // namespace oddu

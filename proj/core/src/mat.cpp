#include "oddu/mat.hpp"
#include "oddu/common.hpp"
#include "oddu/zmodlin.hpp"

#include <sstream>

namespace oddu {

namespace {

void check_same_ring(const Mat& x, const Mat& y) {
    if (!x.ring().same_as(y.ring()))
        fail("RingMismatch", "matrices over different rings");
}

void check_shape(const Mat& x, const Mat& y) {
    check_same_ring(x, y);
    if (x.rows() != y.rows() || x.cols() != y.cols())
        fail("DimensionMismatch", "matrix shapes differ");
}

} // namespace

Mat Mat::identity(const Ring& K, std::size_t d) {
    Mat m(K, d, d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = K.one();
    return m;
}

Mat Mat::scalar(const Ring& K, std::size_t d, Ring::Elem k) {
    Mat m(K, d, d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = k;
    return m;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
        if (i) os << "; ";
        for (std::size_t j = 0; j < c_; ++j) {
            if (j) os << " ";
            os << K_->to_string(at(i, j));
        }
    }
    os << "]";
    return os.str();
}

Mat mat_add(const Mat& x, const Mat& y) {
    check_shape(x, y);
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.add(x.at(i, j), y.at(i, j));
    return out;
}

Mat mat_sub(const Mat& x, const Mat& y) {
    check_shape(x, y);
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.sub(x.at(i, j), y.at(i, j));
    return out;
}

Mat mat_neg(const Mat& x) {
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.neg(x.at(i, j));
    return out;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    check_same_ring(x, y);
    if (x.cols() != y.rows())
        fail("DimensionMismatch", "matrix product shapes");
    const Ring& K = x.ring();
    Mat out(K, x.rows(), y.cols());
    if (K.size() == 2 && y.cols() <= 64) {
        // F2 fast path: rows of y as bitmasks, product rows by xor
        std::vector<std::uint64_t> yrow(y.rows(), 0);
        for (std::size_t k = 0; k < y.rows(); ++k)
            for (std::size_t j = 0; j < y.cols(); ++j)
                if (y.at(k, j)) yrow[k] |= (std::uint64_t{1} << j);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < x.cols(); ++k)
                if (x.at(i, k)) acc ^= yrow[k];
            for (std::size_t j = 0; j < y.cols(); ++j)
                out.at(i, j) = static_cast<Ring::Elem>((acc >> j) & 1);
        }
        return out;
    }
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            Ring::Elem xv = x.at(i, k);
            if (xv == K.zero()) continue;
            for (std::size_t j = 0; j < y.cols(); ++j)
                out.at(i, j) = K.add(out.at(i, j), K.mul(xv, y.at(k, j)));
        }
    return out;
}

Mat mat_smul(Ring::Elem k, const Mat& x) {
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.mul(k, x.at(i, j));
    return out;
}

Mat mat_smul(const Mat& x, Ring::Elem k) {
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.mul(x.at(i, j), k);
    return out;
}

Mat mat_conj(const Mat& x) {
    const Ring& K = x.ring();
    Mat out(K, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(i, j) = K.involve(x.at(i, j));
    return out;
}

Mat mat_transpose(const Mat& x) {
    Mat out(x.ring(), x.cols(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out.at(j, i) = x.at(i, j);
    return out;
}

bool mat_is_zero(const Mat& x) {
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (x.at(i, j) != x.ring().zero()) return false;
    return true;
}

std::optional<Mat> mat_inverse(const Mat& x) {
    if (x.rows() != x.cols()) fail("DimensionMismatch", "inverse of non-square");
    const Ring& K = x.ring();
    std::size_t d = x.rows(), rk = K.rank();
    unsigned n = K.modulus();
    std::size_t w = d * rk; // Z/n dimension of the free module K^d
    // the Z/n matrix of right multiplication v -> v * x on row vectors K^d
    std::vector<ZRow> gens;
    gens.reserve(w);
    auto bs = K.basis();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t t = 0; t < rk; ++t) {
            // image of basis row e_i * bs[t]
            ZRow img(w, 0);
            for (std::size_t j = 0; j < d; ++j) {
                Ring::Elem v = K.mul(bs[t], x.at(i, j));
                auto co = K.coords(v);
                for (std::size_t s = 0; s < rk; ++s) img[j * rk + s] = co[s];
            }
            gens.push_back(std::move(img));
        }
    LeftSolver solver(n, w, gens);
    Mat inv(K, d, d);
    auto one_co = K.coords(K.one());
    for (std::size_t i = 0; i < d; ++i) {
        // solve row_i(inv) * x = e_i
        ZRow target(w, 0);
        for (std::size_t s = 0; s < rk; ++s) target[i * rk + s] = one_co[s];
        auto sol = solver.solve(target);
        if (!sol) return std::nullopt;
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<long long> co(rk);
            for (std::size_t s = 0; s < rk; ++s) co[s] = (*sol)[j * rk + s];
            inv.at(i, j) = K.encode(co);
        }
    }
    return inv;
}

std::vector<unsigned> mat_flatten(const Mat& x) {
    const Ring& K = x.ring();
    std::size_t rk = K.rank();
    std::vector<unsigned> out;
    out.reserve(x.rows() * x.cols() * rk);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            auto co = K.coords(x.at(i, j));
            out.insert(out.end(), co.begin(), co.end());
        }
    return out;
}

Mat mat_unflatten(const Ring& K, std::size_t rows, std::size_t cols,
                  const std::vector<unsigned>& coords) {
    std::size_t rk = K.rank();
    if (coords.size() != rows * cols * rk)
        fail("DimensionMismatch", "coordinate width");
    Mat out(K, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<long long> co(rk);
            for (std::size_t s = 0; s < rk; ++s) co[s] = coords[(i * cols + j) * rk + s];
            out.at(i, j) = K.encode(co);
        }
    return out;
}

std::string mat_key(const Mat& x) {
    std::string key;
    bool wide = x.ring().size() > 256;
    key.reserve(x.data().size() * (wide ? 2 : 1));
    for (Ring::Elem e : x.data()) {
        key.push_back(static_cast<char>(e & 0xFF));
        if (wide) key.push_back(static_cast<char>((e >> 8) & 0xFF));
    }
    return key;
}

} // namespace oddu

#include "oddu/ring.hpp"

#include <algorithm>

namespace oddu {

namespace {

unsigned mod_ll(long long v, unsigned n) {
    long long r = v % static_cast<long long>(n);
    if (r < 0) r += n;
    return static_cast<unsigned>(r);
}

} // namespace

RingSpec RingSpec::modular(unsigned n, long long lambda) {
    RingSpec s;
    s.kind = RingKind::Modular;
    s.n = n;
    s.lambda = {lambda};
    return s;
}

RingSpec RingSpec::swap_product(unsigned n, long long la, long long lb) {
    RingSpec s;
    s.kind = RingKind::SwapProduct;
    s.n = n;
    s.lambda = {la, lb};
    return s;
}

RingSpec RingSpec::quad_ext(unsigned n, long long d, long long la, long long lb) {
    RingSpec s;
    s.kind = RingKind::QuadExt;
    s.n = n;
    s.d = d;
    s.lambda = {la, lb};
    return s;
}

Ring Ring::build(const RingSpec& spec) {
    if (spec.n < 2) fail("ParseError", "ring modulus must be >= 2");
    Ring r;
    r.spec_ = spec;
    r.kind_ = spec.kind;
    r.n_ = spec.n;
    r.rank_ = (spec.kind == RingKind::Modular) ? 1u : 2u;
    unsigned long long sz = 1;
    for (unsigned i = 0; i < r.rank_; ++i) sz *= spec.n;
    if (sz > kMaxSize) fail("CarrierTooLarge", "ring has " + std::to_string(sz) + " elements (cap " + std::to_string(kMaxSize) + ")");
    r.size_ = static_cast<unsigned>(sz);

    const unsigned n = r.n_;
    auto pack = [&](unsigned a, unsigned b) -> Elem {
        return static_cast<Elem>(r.rank_ == 1 ? a : a + n * b);
    };
    auto unpack = [&](Elem e, unsigned& a, unsigned& b) {
        a = e % n;
        b = r.rank_ == 1 ? 0u : e / n;
    };

    r.add_.assign(static_cast<size_t>(r.size_) * r.size_, 0);
    r.mul_.assign(static_cast<size_t>(r.size_) * r.size_, 0);
    r.neg_.assign(r.size_, 0);
    r.invol_.assign(r.size_, 0);
    r.inv_.assign(r.size_, kNoInverse);

    const unsigned d = (spec.kind == RingKind::QuadExt) ? mod_ll(spec.d, n) : 0;

    for (unsigned x = 0; x < r.size_; ++x) {
        unsigned xa, xb;
        unpack(static_cast<Elem>(x), xa, xb);
        r.neg_[x] = pack((n - xa) % n, (n - xb) % n);
        switch (spec.kind) {
        case RingKind::Modular: r.invol_[x] = static_cast<Elem>(x); break;
        case RingKind::SwapProduct: r.invol_[x] = pack(xb, xa); break;
        case RingKind::QuadExt: r.invol_[x] = pack(xa, (n - xb) % n); break;
        }
        for (unsigned y = 0; y < r.size_; ++y) {
            unsigned ya, yb;
            unpack(static_cast<Elem>(y), ya, yb);
            r.add_[r.idx(static_cast<Elem>(x), static_cast<Elem>(y))] = pack((xa + ya) % n, (xb + yb) % n);
            unsigned pa = 0, pb = 0;
            switch (spec.kind) {
            case RingKind::Modular:
                pa = (xa * ya) % n;
                pb = 0;
                break;
            case RingKind::SwapProduct:
                pa = (xa * ya) % n;
                pb = (xb * yb) % n;
                break;
            case RingKind::QuadExt:
                // (xa + xb w)(ya + yb w) = xa ya + d xb yb + (xa yb + xb ya) w
                pa = (xa * ya + d * xb * yb) % n;
                pb = (xa * yb + xb * ya) % n;
                break;
            }
            r.mul_[r.idx(static_cast<Elem>(x), static_cast<Elem>(y))] = pack(pa, pb);
        }
    }

    r.one_ = (spec.kind == RingKind::SwapProduct) ? pack(1 % n, 1 % n) : pack(1 % n, 0);
    for (unsigned x = 0; x < r.size_; ++x)
        for (unsigned y = 0; y < r.size_; ++y)
            if (r.mul_[r.idx(static_cast<Elem>(x), static_cast<Elem>(y))] == r.one_) {
                r.inv_[x] = static_cast<Elem>(y);
                break;
            }

    // involution sanity: additive, multiplicative, involutive, fixes 1
    for (unsigned x = 0; x < r.size_; ++x) {
        if (r.invol_[r.invol_[x]] != x)
            fail("InvalidInvolution", "involve is not an involution at " + std::to_string(x));
        for (unsigned y = 0; y < r.size_; ++y) {
            Elem ex = static_cast<Elem>(x), ey = static_cast<Elem>(y);
            if (r.invol_[r.add_[r.idx(ex, ey)]] != r.add_[r.idx(r.invol_[ex], r.invol_[ey])])
                fail("InvalidInvolution", "involve is not additive");
            if (r.invol_[r.mul_[r.idx(ex, ey)]] != r.mul_[r.idx(r.invol_[ey], r.invol_[ex])])
                fail("InvalidInvolution", "involve is not anti-multiplicative");
        }
    }
    if (r.invol_[r.one_] != r.one_) fail("InvalidInvolution", "involve does not fix 1");

    if (spec.lambda.size() != r.rank_)
        fail("InvalidLambda", "lambda needs " + std::to_string(r.rank_) + " coordinates");
    std::vector<long long> lc = spec.lambda;
    r.lambda_ = r.encode(lc);
    if (!r.is_unit(r.lambda_))
        fail("InvalidLambda", "lambda = " + r.to_string(r.lambda_) + " is not a unit");
    if (r.mul(r.lambda_, r.involve(r.lambda_)) != r.one_)
        fail("InvalidLambda", "lambda * involve(lambda) != 1 for lambda = " + r.to_string(r.lambda_));

    return r;
}

Ring::Elem Ring::from_int(long long v) const {
    // image of the integer v under Z -> K, i.e. v * 1.
    if (kind_ == RingKind::SwapProduct) return encode({v, v});
    return encode({v});
}

Ring::Elem Ring::encode(const std::vector<long long>& coords) const {
    unsigned a = coords.empty() ? 0 : mod_ll(coords[0], n_);
    unsigned b = coords.size() > 1 ? mod_ll(coords[1], n_) : 0;
    if (rank_ == 1) return static_cast<Elem>(a);
    return static_cast<Elem>(a + n_ * b);
}

std::vector<unsigned> Ring::coords(Elem a) const {
    if (rank_ == 1) return {a % n_};
    return {a % n_, a / n_};
}

std::string Ring::to_string(Elem a) const {
    auto c = coords(a);
    if (rank_ == 1) return std::to_string(c[0]);
    return "(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + ")";
}

std::vector<unsigned> Ring::mul_matrix(Elem k) const {
    // columns: coords(k * basis_j)
    std::vector<unsigned> m(rank_ * rank_, 0);
    auto bs = basis();
    for (unsigned j = 0; j < rank_; ++j) {
        auto col = coords(mul(k, bs[j]));
        for (unsigned i = 0; i < rank_; ++i) m[i * rank_ + j] = col[i];
    }
    return m;
}

std::vector<unsigned> Ring::invol_matrix() const {
    std::vector<unsigned> m(rank_ * rank_, 0);
    auto bs = basis();
    for (unsigned j = 0; j < rank_; ++j) {
        auto col = coords(involve(bs[j]));
        for (unsigned i = 0; i < rank_; ++i) m[i * rank_ + j] = col[i];
    }
    return m;
}

std::vector<Ring::Elem> Ring::all() const {
    std::vector<Elem> out(size_);
    for (unsigned i = 0; i < size_; ++i) out[i] = static_cast<Elem>(i);
    return out;
}

std::vector<Ring::Elem> Ring::units() const {
    std::vector<Elem> out;
    for (unsigned i = 0; i < size_; ++i)
        if (inv_[i] != kNoInverse) out.push_back(static_cast<Elem>(i));
    return out;
}

std::vector<Ring::Elem> Ring::hermitian_part() const {
    std::vector<Elem> out;
    for (unsigned i = 0; i < size_; ++i)
        if (invol_[i] == i) out.push_back(static_cast<Elem>(i));
    return out;
}

std::vector<Ring::Elem> Ring::basis() const {
    // Z/n-module basis matching coords(): coords(basis()[j]) is the j-th
    // standard vector.  mul_matrix relies on this.
    std::vector<Elem> out{encode({1})};
    if (rank_ == 2) out.push_back(encode({0, 1}));
    return out;
}

} // namespace oddu

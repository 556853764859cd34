#include "oddu/groups.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <ostream>
#include <unordered_set>
#include <utility>

namespace oddu {

namespace {

void check_gen(const Ring& K, std::size_t d, const Mat& g) {
    if (!g.ring().same_as(K)) fail("RingMismatch", "generator over a different ring");
    if (g.rows() != d || g.cols() != d) fail("DimensionMismatch", "generator is not d x d");
}

Mat inverse_of(const Mat& g) {
    auto inv = mat_inverse(g);
    if (!inv) fail("NotInvertible", "singular generator");
    return *inv;
}

// generators and their inverses, validated and deduped, in input order
std::vector<Mat> step_list(const Ring& K, std::size_t d, const std::vector<Mat>& gens) {
    std::vector<Mat> steps;
    std::unordered_set<std::string> seen;
    auto add = [&](const Mat& m) {
        if (seen.insert(mat_key(m)).second) steps.push_back(m);
    };
    for (const Mat& g : gens) {
        check_gen(K, d, g);
        Mat ginv = inverse_of(g);
        add(g);
        add(ginv);
    }
    return steps;
}

// Packed rep for F2 at d <= 8: row i of the matrix sits in byte i, column j
// in bit j.  The only ring of size 2 is Z/2 with codes = residues, so code
// arithmetic is XOR / AND.
std::uint64_t pack2(const Mat& m) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j)) v |= std::uint64_t(1) << (8 * i + j);
    return v;
}

std::uint64_t mul2(std::uint64_t a, std::uint64_t b, std::size_t d) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < d; ++i) {
        unsigned row = static_cast<unsigned>((a >> (8 * i)) & 0xFF);
        unsigned acc = 0;
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            acc ^= static_cast<unsigned>((b >> (8 * j)) & 0xFF);
        }
        c |= std::uint64_t(acc) << (8 * i);
    }
    return c;
}

Mat unpack2(const Ring& K, std::size_t d, std::uint64_t v) {
    Mat m(K, d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m.at(i, j) = static_cast<Ring::Elem>((v >> (8 * i + j)) & 1);
    return m;
}

bool use_packed(const Ring& K, std::size_t d) { return K.size() == 2 && d <= 8; }

// Breadth-first closure: elems[0..next) have been multiplied by every step
// known at the time they were processed; add_steps repairs the prefix by hand
// before resuming the queue, so after run() every element has met every step.
template <class Elem, class Key, class Mul, class KeyFn>
struct Closer {
    Mul mul;
    KeyFn key;
    std::size_t cap;
    std::vector<Elem> elems;
    std::unordered_set<Key> seen;
    std::vector<Elem> steps;
    std::size_t next = 0;

    void push(const Elem& e) {
        if (!seen.insert(key(e)).second) return;
        if (elems.size() >= cap)
            fail("CapExceeded", "group closure passes the cap of " + std::to_string(cap));
        elems.push_back(e);
    }

    void run() {
        while (next < elems.size()) {
            Elem x = elems[next++]; // copy: elems may reallocate under push
            for (const Elem& s : steps) push(mul(x, s));
        }
    }

    void add_steps(const std::vector<Elem>& ns) {
        std::size_t done = next;
        for (const Elem& s : ns) push(s);
        for (std::size_t i = 0; i < done; ++i)
            for (const Elem& s : ns) push(mul(elems[i], s));
        steps.insert(steps.end(), ns.begin(), ns.end());
        run();
    }
};

// Conjugation fixpoint: adjoin n s n^-1 for every step s and conjugator
// (n, n^-1) until all conjugates land inside the element set.  At the
// fixpoint the generated subgroup is invariant under every conjugator, hence
// under the whole group they generate.
template <class C, class Elem>
void conj_rounds(C& cl, const std::vector<std::pair<Elem, Elem>>& conj) {
    for (;;) {
        std::vector<Elem> batch;
        std::unordered_set<decltype(cl.key(std::declval<Elem>()))> batch_keys;
        std::size_t nsteps = cl.steps.size();
        for (const auto& [n, ninv] : conj) {
            for (std::size_t i = 0; i < nsteps; ++i) {
                Elem c = cl.mul(cl.mul(n, cl.steps[i]), ninv);
                auto k = cl.key(c);
                if (cl.seen.count(k) || !batch_keys.insert(k).second) continue;
                batch.push_back(c);
            }
        }
        if (batch.empty()) return;
        cl.add_steps(batch);
    }
}

std::string sort_records(std::string blob, std::size_t klen, std::size_t n) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    const char* p = blob.data();
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::memcmp(p + std::size_t(a) * klen, p + std::size_t(b) * klen, klen) < 0;
    });
    std::string out(blob.size(), '\0');
    for (std::size_t i = 0; i < n; ++i)
        std::memcpy(out.data() + i * klen, p + std::size_t(idx[i]) * klen, klen);
    return out;
}

std::string packed_blob(const std::vector<std::uint64_t>& elems, std::size_t d) {
    std::string blob;
    blob.reserve(elems.size() * d * d);
    for (std::uint64_t v : elems)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                blob.push_back(static_cast<char>((v >> (8 * i + j)) & 1));
    return blob;
}

std::string mat_blob(const std::vector<Mat>& elems) {
    std::string blob;
    for (const Mat& m : elems) blob += mat_key(m);
    return blob;
}

auto packed_mul(std::size_t d) {
    return [d](std::uint64_t a, std::uint64_t b) { return mul2(a, b, d); };
}
constexpr auto packed_key = [](std::uint64_t v) { return v; };
const auto generic_mul = [](const Mat& a, const Mat& b) { return mat_mul(a, b); };
const auto generic_key = [](const Mat& m) { return mat_key(m); };

using PackedCloser =
    Closer<std::uint64_t, std::uint64_t, decltype(packed_mul(0)), decltype(packed_key)>;
using GenericCloser =
    Closer<Mat, std::string, decltype(generic_mul), decltype(generic_key)>;

} // namespace

std::string FiniteGroup::key_at(std::size_t idx) const {
    if (idx >= n_) fail("BadIndex", "element index " + std::to_string(idx) + " out of range");
    return keys_.substr(idx * klen_, klen_);
}

Mat FiniteGroup::element(std::size_t idx) const {
    std::string k = key_at(idx);
    Mat m(*K_, d_, d_);
    bool wide = K_->size() > 256;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) {
            unsigned code = static_cast<unsigned char>(k[pos++]);
            if (wide) code |= static_cast<unsigned>(static_cast<unsigned char>(k[pos++])) << 8;
            m.at(i, j) = static_cast<Ring::Elem>(code);
        }
    return m;
}

bool FiniteGroup::contains_key(const std::string& key) const {
    if (key.size() != klen_) return false;
    std::size_t lo = 0, hi = n_;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        int c = std::memcmp(keys_.data() + mid * klen_, key.data(), klen_);
        if (c < 0)
            lo = mid + 1;
        else if (c > 0)
            hi = mid;
        else
            return true;
    }
    return false;
}

void FiniteGroup::dump_hex(std::ostream& out) const {
    static const char* digits = "0123456789abcdef";
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t b = 0; b < klen_; ++b) {
            unsigned char c = static_cast<unsigned char>(keys_[i * klen_ + b]);
            out << digits[c >> 4] << digits[c & 15];
        }
        out << '\n';
    }
}

FiniteGroup generate(const Ring& K, std::size_t d, const std::vector<Mat>& gens,
                     std::size_t cap) {
    if (d == 0) fail("DimensionMismatch", "group dimension must be positive");
    std::vector<Mat> steps = step_list(K, d, gens);

    FiniteGroup G;
    G.K_ = &K;
    G.d_ = d;
    G.klen_ = d * d * (K.size() > 256 ? 2 : 1);
    G.gens_ = gens;

    std::string blob;
    if (use_packed(K, d)) {
        PackedCloser cl{packed_mul(d), packed_key, cap, {}, {}, {}};
        cl.push(pack2(Mat::identity(K, d)));
        std::vector<std::uint64_t> ps;
        ps.reserve(steps.size());
        for (const Mat& m : steps) ps.push_back(pack2(m));
        cl.add_steps(ps);
        G.n_ = cl.elems.size();
        blob = packed_blob(cl.elems, d);
    } else {
        GenericCloser cl{generic_mul, generic_key, cap, {}, {}, {}};
        cl.push(Mat::identity(K, d));
        cl.add_steps(steps);
        G.n_ = cl.elems.size();
        blob = mat_blob(cl.elems);
    }
    G.keys_ = sort_records(std::move(blob), G.klen_, G.n_);
    return G;
}

FiniteGroup normal_closure(const Ring& K, std::size_t d, const std::vector<Mat>& seed_gens,
                           const std::vector<Mat>& normalizer_gens, std::size_t cap) {
    if (d == 0) fail("DimensionMismatch", "group dimension must be positive");
    std::vector<Mat> steps = step_list(K, d, seed_gens);
    std::size_t base = steps.size();

    std::vector<std::pair<Mat, Mat>> conj;
    std::unordered_set<std::string> ck;
    for (const Mat& n : normalizer_gens) {
        check_gen(K, d, n);
        Mat ninv = inverse_of(n);
        if (ck.insert(mat_key(n)).second) conj.push_back({n, ninv});
        if (ck.insert(mat_key(ninv)).second) conj.push_back({ninv, n});
    }

    FiniteGroup G;
    G.K_ = &K;
    G.d_ = d;
    G.klen_ = d * d * (K.size() > 256 ? 2 : 1);
    G.gens_ = seed_gens;

    std::string blob;
    if (use_packed(K, d)) {
        PackedCloser cl{packed_mul(d), packed_key, cap, {}, {}, {}};
        cl.push(pack2(Mat::identity(K, d)));
        std::vector<std::uint64_t> ps;
        ps.reserve(steps.size());
        for (const Mat& m : steps) ps.push_back(pack2(m));
        cl.add_steps(ps);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pc;
        pc.reserve(conj.size());
        for (const auto& [n, ninv] : conj) pc.push_back({pack2(n), pack2(ninv)});
        conj_rounds<PackedCloser, std::uint64_t>(cl, pc);
        for (std::size_t i = base; i < cl.steps.size(); ++i)
            G.gens_.push_back(unpack2(K, d, cl.steps[i]));
        G.n_ = cl.elems.size();
        blob = packed_blob(cl.elems, d);
    } else {
        GenericCloser cl{generic_mul, generic_key, cap, {}, {}, {}};
        cl.push(Mat::identity(K, d));
        cl.add_steps(steps);
        conj_rounds<GenericCloser, Mat>(cl, conj);
        for (std::size_t i = base; i < cl.steps.size(); ++i) G.gens_.push_back(cl.steps[i]);
        G.n_ = cl.elems.size();
        blob = mat_blob(cl.elems);
    }
    G.keys_ = sort_records(std::move(blob), G.klen_, G.n_);
    return G;
}

bool contains(const FiniteGroup& G, const Mat& g) {
    if (!g.ring().same_as(G.ring()) || g.rows() != G.dim() || g.cols() != G.dim()) return false;
    return G.contains_key(mat_key(g));
}

bool equal_groups(const FiniteGroup& G, const FiniteGroup& H) {
    return G.K_->same_as(*H.K_) && G.d_ == H.d_ && G.n_ == H.n_ && G.keys_ == H.keys_;
}

} // namespace oddu

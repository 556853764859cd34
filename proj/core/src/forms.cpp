#include "oddu/forms.hpp"

#include "oddu/common.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <map>
#include <memory>
#include <set>

namespace oddu {

namespace {

void check_vec(const Mat& b, const Vec& v) {
    if (v.size() != b.rows()) fail("DimensionMismatch", "vector length does not match form");
}

} // namespace

bool BlockProfile::valid() const {
    if (r.size() != static_cast<std::size_t>(l) + 1) return false;
    for (unsigned i = 1; i <= l; ++i)
        if (r[i] == 0) return false;
    return dim() >= 1;
}

unsigned BlockProfile::dim() const {
    unsigned d = r.empty() ? 0 : r[0];
    for (unsigned i = 1; i < r.size(); ++i) d += 2 * r[i];
    return d;
}

unsigned BlockProfile::block_rank(int i) const {
    unsigned a = static_cast<unsigned>(i < 0 ? -i : i);
    if (a >= r.size()) fail("BadBlock", "block index out of range");
    return r[a];
}

unsigned BlockProfile::block_start(int i) const {
    if (i < -static_cast<int>(l) || i > static_cast<int>(l)) fail("BadBlock", "block index out of range");
    unsigned s = 0;
    for (int j = -static_cast<int>(l); j < i; ++j) s += block_rank(j);
    return s;
}

int BlockProfile::block_of(unsigned idx) const {
    unsigned s = 0;
    for (int j = -static_cast<int>(l); j <= static_cast<int>(l); ++j) {
        s += block_rank(j);
        if (idx < s) return j;
    }
    fail("DimensionMismatch", "basis index out of range");
}

Ring::Elem eval_form(const Mat& b, const Vec& u, const Vec& v) {
    const Ring& K = b.ring();
    check_vec(b, u);
    check_vec(b, v);
    Ring::Elem acc = K.zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == K.zero()) continue;
        Ring::Elem ui = K.involve(u[i]);
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] == K.zero() || b.at(i, j) == K.zero()) continue;
            acc = K.add(acc, K.mul(K.mul(ui, b.at(i, j)), v[j]));
        }
    }
    return acc;
}

bool check_hermitian(const Mat& b) {
    const Ring& K = b.ring();
    if (b.rows() != b.cols()) return false;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (b.at(i, j) != K.mul(K.involve(b.at(j, i)), K.lambda())) return false;
    return true;
}

bool check_nondegenerate(const Mat& b) {
    if (b.rows() != b.cols()) return false;
    return mat_inverse(b).has_value();
}

Vec vec_zero(std::size_t d) { return Vec(d, 0); }

Vec vec_add(const Ring& K, const Vec& u, const Vec& v) {
    if (u.size() != v.size()) fail("DimensionMismatch", "vector length mismatch");
    Vec w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = K.add(u[i], v[i]);
    return w;
}

Vec vec_smul(const Ring& K, const Vec& u, Ring::Elem k) {
    Vec w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = K.mul(u[i], k);
    return w;
}

Vec mat_apply(const Mat& a, const Vec& v) {
    const Ring& K = a.ring();
    if (v.size() != a.cols()) fail("DimensionMismatch", "vector length mismatch");
    Vec w(a.rows(), K.zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Ring::Elem acc = K.zero();
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.at(i, j) == K.zero() || v[j] == K.zero()) continue;
            acc = K.add(acc, K.mul(a.at(i, j), v[j]));
        }
        w[i] = acc;
    }
    return w;
}

std::string vec_key(const Ring& K, const Vec& v) {
    bool wide = K.size() > 256;
    std::string s;
    s.reserve(v.size() * (wide ? 2 : 1));
    for (Ring::Elem e : v) {
        if (wide) s.push_back(static_cast<char>(e >> 8));
        s.push_back(static_cast<char>(e & 0xff));
    }
    return s;
}

FormPoint heisb_add(const Mat& b, const FormPoint& h, const FormPoint& g) {
    const Ring& K = b.ring();
    FormPoint out;
    out.m = vec_add(K, h.m, g.m);
    out.r = K.sub(K.add(h.r, g.r), eval_form(b, h.m, g.m));
    return out;
}

FormPoint heisb_neg(const Mat& b, const FormPoint& h) {
    const Ring& K = b.ring();
    FormPoint out;
    out.m.resize(h.m.size());
    for (std::size_t i = 0; i < h.m.size(); ++i) out.m[i] = K.neg(h.m[i]);
    out.r = K.sub(K.neg(h.r), eval_form(b, h.m, h.m));
    return out;
}

FormPoint heisb_sub(const Mat& b, const FormPoint& h, const FormPoint& g) {
    return heisb_add(b, h, heisb_neg(b, g));
}

FormPoint heisb_act(const Ring& K, const FormPoint& h, Ring::Elem k) {
    FormPoint out;
    out.m = vec_smul(K, h.m, k);
    out.r = K.mul(K.mul(K.involve(k), h.r), k);
    return out;
}

FormPoint heisb_phi(const Ring& K, std::size_t d, Ring::Elem r) {
    FormPoint out;
    out.m.assign(d, K.zero());
    out.r = r;
    return out;
}

Ring::Elem heisb_tr(const Mat& b, const FormPoint& h) {
    const Ring& K = b.ring();
    return K.add(eval_form(b, h.m, h.m), K.add(h.r, K.mul(K.involve(h.r), K.lambda())));
}

std::string heisb_key(const Ring& K, const FormPoint& h) {
    std::string s = vec_key(K, h.m);
    if (K.size() > 256) s.push_back(static_cast<char>(h.r >> 8));
    s.push_back(static_cast<char>(h.r & 0xff));
    return s;
}

std::vector<FormPoint> lmax_elements(const Mat& b, std::size_t cap) {
    const Ring& K = b.ring();
    std::size_t d = b.rows();
    double total = 1;
    for (std::size_t i = 0; i <= d; ++i) total *= static_cast<double>(K.size());
    if (total > static_cast<double>(cap)) fail("CarrierTooLarge", "Heis(B) carrier exceeds cap");
    std::vector<FormPoint> out;
    FormPoint p;
    p.m.assign(d, 0);
    // odometer over all (m, r)
    for (;;) {
        for (Ring::Elem r = 0; r < K.size(); ++r) {
            p.r = r;
            if (heisb_tr(b, p) == K.zero()) out.push_back(p);
        }
        std::size_t i = 0;
        while (i < d && ++p.m[i] == K.size()) p.m[i++] = 0;
        if (i == d) break;
    }
    return out;
}

void OddFormParameter::index(const Ring& K) {
    std::vector<std::size_t> order(elems_.size());
    std::vector<std::string> keys(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i) {
        order[i] = i;
        keys[i] = heisb_key(K, elems_[i]);
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t c) { return keys[a] < keys[c]; });
    std::vector<FormPoint> es;
    es.reserve(elems_.size());
    keys_.clear();
    keys_.reserve(elems_.size());
    for (std::size_t i : order) {
        if (!keys_.empty() && keys_.back() == keys[i]) fail("BadBlock", "duplicate parameter element");
        es.push_back(std::move(elems_[i]));
        keys_.push_back(std::move(keys[i]));
    }
    elems_ = std::move(es);
}

bool OddFormParameter::contains(const Ring& K, const FormPoint& p) const {
    std::string k = heisb_key(K, p);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    return it != keys_.end() && *it == k;
}

bool OddFormParameter::same_as(const Ring& K, const OddFormParameter& o) const {
    (void)K;
    return keys_ == o.keys_;
}

OddFormParameter OddFormParameter::closure(const Mat& b, const std::vector<FormPoint>& gens,
                                           std::size_t cap) {
    const Ring& K = b.ring();
    std::size_t d = b.rows();
    for (const FormPoint& g : gens) {
        check_vec(b, g.m);
        if (heisb_tr(b, g) != K.zero()) fail("NotInLMax", "parameter generator has nonzero trace");
    }
    // seed: generators plus phi(r - conj(r) lambda) for a module basis of K
    std::vector<FormPoint> seed = gens;
    for (Ring::Elem e : K.basis()) {
        Ring::Elem v = K.sub(e, K.mul(K.involve(e), K.lambda()));
        seed.push_back(heisb_phi(K, d, v));
    }

    std::set<std::string> seen;
    std::vector<FormPoint> elems;
    std::deque<FormPoint> work;
    FormPoint zero = heisb_phi(K, d, K.zero());
    auto push = [&](const FormPoint& p) {
        if (seen.insert(heisb_key(K, p)).second) {
            if (seen.size() > cap) fail("Overflow", "form parameter closure exceeds cap");
            elems.push_back(p);
            work.push_back(p);
        }
    };
    // the scalar action distributes over the group law, so the closure is the
    // subgroup generated by the action orbit of the seed; an orbit walk over
    // that generator list avoids pairing every element against every other
    std::vector<FormPoint> gen_list;
    {
        std::set<std::string> gseen;
        auto gpush = [&](const FormPoint& p) {
            if (gseen.insert(heisb_key(K, p)).second) gen_list.push_back(p);
        };
        for (const FormPoint& s : seed)
            for (Ring::Elem k = 0; k < K.size(); ++k) {
                gpush(heisb_act(K, s, k));
                gpush(heisb_act(K, heisb_neg(b, s), k));
            }
    }
    push(zero);
    for (const FormPoint& s : seed) push(s);
    while (!work.empty()) {
        FormPoint p = work.front();
        work.pop_front();
        push(heisb_neg(b, p));
        for (Ring::Elem k = 0; k < K.size(); ++k) push(heisb_act(K, p, k));
        for (const FormPoint& g : gen_list) {
            push(heisb_add(b, p, g));
            push(heisb_add(b, g, p));
        }
    }
    OddFormParameter out;
    out.gens_ = gens;
    out.elems_ = std::move(elems);
    out.index(K);
    return out;
}

OddFormParameter OddFormParameter::from_elements(const Mat& b, std::vector<FormPoint> elems) {
    const Ring& K = b.ring();
    std::size_t d = b.rows();
    OddFormParameter out;
    out.gens_ = elems;
    out.elems_ = std::move(elems);
    out.index(K);
    for (const FormPoint& p : out.elems_) {
        check_vec(b, p.m);
        if (heisb_tr(b, p) != K.zero()) fail("NotInLMax", "parameter element has nonzero trace");
        if (!out.contains(K, heisb_neg(b, p))) fail("BadBlock", "parameter set not closed under negation");
        for (Ring::Elem k = 0; k < K.size(); ++k)
            if (!out.contains(K, heisb_act(K, p, k)))
                fail("BadBlock", "parameter set not closed under scalar action");
        for (const FormPoint& q : out.elems_)
            if (!out.contains(K, heisb_add(b, p, q))) fail("BadBlock", "parameter set not closed under addition");
    }
    for (Ring::Elem e : K.basis()) {
        Ring::Elem v = K.sub(e, K.mul(K.involve(e), K.lambda()));
        if (!out.contains(K, heisb_phi(K, d, v))) fail("BadBlock", "parameter set misses minimal parameter");
    }
    return out;
}

FormPoint QuadraticSpace::qtilde_raw(const Vec& m) const {
    const Ring& K = *K_;
    check_vec(b_, m);
    // q~(sum e_i c_i) expands as sum of acted table entries and phi of the
    // pairwise form values; accumulate left to right
    FormPoint acc = heisb_phi(K, m.size(), K.zero());
    Vec prefix = vec_zero(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == K.zero()) continue;
        Vec term(m.size(), K.zero());
        term[i] = m[i];
        Ring::Elem cross = eval_form(b_, prefix, term);
        acc = heisb_add(b_, acc, heisb_phi(K, m.size(), cross));
        acc = heisb_add(b_, acc, heisb_act(K, qtable_[i], m[i]));
        prefix = vec_add(K, prefix, term);
    }
    return acc;
}

FormPoint QuadraticSpace::reduce_coset(const FormPoint& p) const {
    const Ring& K = *K_;
    const FormPoint* best = nullptr;
    std::string bestk;
    FormPoint cur;
    std::vector<FormPoint> cands;
    cands.reserve(param_.size());
    for (const FormPoint& s : param_.elements()) {
        cur = heisb_add(b_, p, s);
        std::string k = heisb_key(K, cur);
        if (best == nullptr || k < bestk) {
            cands.push_back(cur);
            best = &cands.back();
            bestk = std::move(k);
        }
    }
    return best ? *best : p;
}

FormPoint QuadraticSpace::qtilde(const Vec& m) const { return reduce_coset(qtilde_raw(m)); }

bool QuadraticSpace::coset_eq(const FormPoint& p, const FormPoint& q) const {
    return param_.contains(*K_, heisb_sub(b_, p, q));
}

bool QuadraticSpace::in_param(const FormPoint& p) const { return param_.contains(*K_, p); }

QuadraticSpace QuadraticSpace::assemble(const Ring& K, BlockProfile prof, Mat b,
                                        OddFormParameter param, std::vector<FormPoint> qtable) {
    if (!prof.valid() || prof.dim() != b.rows()) fail("DimensionMismatch", "profile does not match gram matrix");
    if (!b.ring().same_as(K)) fail("RingMismatch", "gram matrix over a different ring");
    if (!check_hermitian(b)) fail("BadBlock", "gram matrix is not hermitian");
    if (qtable.size() != b.rows()) fail("DimensionMismatch", "table size does not match dimension");
    for (std::size_t i = 0; i < qtable.size(); ++i) {
        check_vec(b, qtable[i].m);
        // table representative must carry the basis vector itself
        for (std::size_t j = 0; j < qtable[i].m.size(); ++j) {
            Ring::Elem want = (i == j) ? K.one() : K.zero();
            if (qtable[i].m[j] != want) fail("BadBlock", "table entry must be (e_i, t_i)");
        }
        Vec ei(b.rows(), K.zero());
        ei[i] = K.one();
        if (heisb_tr(b, qtable[i]) != eval_form(b, ei, ei))
            fail("BadBlock", "table trace does not match diagonal form value");
    }
    for (const FormPoint& p : param.elements())
        if (heisb_tr(b, p) != K.zero()) fail("NotInLMax", "parameter element has nonzero trace");
    QuadraticSpace sp;
    sp.K_ = &K;
    sp.prof_ = std::move(prof);
    sp.b_ = std::move(b);
    sp.param_ = std::move(param);
    sp.qtable_ = std::move(qtable);
    sp.nondeg_ = check_nondegenerate(sp.b_);
    return sp;
}

QuadraticSpace make_quadratic_bimodule(const Ring& K, const Mat& b,
                                       const std::vector<FormPoint>& param_gens,
                                       const std::vector<Ring::Elem>& table_t,
                                       std::size_t cap) {
    if (table_t.size() != b.rows()) fail("DimensionMismatch", "table size does not match dimension");
    std::vector<FormPoint> table;
    for (std::size_t i = 0; i < table_t.size(); ++i) {
        FormPoint p;
        p.m.assign(b.rows(), K.zero());
        p.m[i] = K.one();
        p.r = table_t[i];
        table.push_back(std::move(p));
    }
    OddFormParameter param = OddFormParameter::closure(b, param_gens, cap);
    return QuadraticSpace::assemble(K, BlockProfile::plain(static_cast<unsigned>(b.rows())),
                                    b, std::move(param), std::move(table));
}

QuadraticSpace build_standard_space(const Ring& K, const BlockProfile& prof,
                                    const Mat& odd_block,
                                    const std::vector<FormPoint>& param_gens,
                                    std::size_t cap) {
    if (!prof.valid() || prof.l < 1) fail("BadBlock", "standard space needs at least one hyperbolic pair");
    unsigned d = prof.dim();
    unsigned r0 = prof.r[0];
    if (odd_block.rows() != r0 || odd_block.cols() != r0) fail("DimensionMismatch", "odd block has wrong shape");
    if (!odd_block.ring().same_as(K)) fail("RingMismatch", "odd block over a different ring");
    if (r0 > 0) {
        if (!check_hermitian(odd_block)) fail("BadBlock", "odd block is not hermitian");
        if (!check_nondegenerate(odd_block)) fail("NotInvertible", "odd block is degenerate");
    }

    Mat b(K, d, d);
    for (int i = 1; i <= static_cast<int>(prof.l); ++i) {
        unsigned sp_ = prof.block_start(i), sm = prof.block_start(-i), rk = prof.block_rank(i);
        for (unsigned t = 0; t < rk; ++t) {
            b.at(sp_ + t, sm + t) = K.one();            // B(e_i, e_-i) = 1
            b.at(sm + t, sp_ + t) = K.lambda();         // B(e_-i, e_i) = lambda
        }
    }
    unsigned s0 = prof.block_start(0);
    for (unsigned i = 0; i < r0; ++i)
        for (unsigned j = 0; j < r0; ++j) b.at(s0 + i, s0 + j) = odd_block.at(i, j);

    std::vector<FormPoint> gens = param_gens;
    for (unsigned idx = 0; idx < d; ++idx) {
        if (prof.block_of(idx) == 0) continue;
        FormPoint p;
        p.m.assign(d, K.zero());
        p.m[idx] = K.one();
        p.r = K.zero();
        gens.push_back(std::move(p));
    }
    OddFormParameter param = OddFormParameter::closure(b, gens, cap);

    std::vector<FormPoint> table;
    for (unsigned i = 0; i < d; ++i) {
        FormPoint p;
        p.m.assign(d, K.zero());
        p.m[i] = K.one();
        p.r = K.zero();
        table.push_back(std::move(p));
    }
    return QuadraticSpace::assemble(K, prof, std::move(b), std::move(param), std::move(table));
}

QuadraticSpace metabolic(const QuadraticSpace& P, std::size_t cap) {
    const Ring& K = P.ring();
    unsigned p = P.dim();
    unsigned d = 2 * p;
    // basis: dual block first, then P itself
    Mat b(K, d, d);
    for (unsigned i = 0; i < p; ++i) {
        b.at(i, p + i) = K.lambda(); // B(fbar_i, p_i)
        b.at(p + i, i) = K.one();    // B(p_i, fbar_i)
    }
    for (unsigned i = 0; i < p; ++i)
        for (unsigned j = 0; j < p; ++j) b.at(p + i, p + j) = P.gram().at(i, j);

    // parameter: kernel of the evaluation map Heis(B_met) -> A_P sending
    // (m, r) to q~(m) + phi(r), where q~ on the dual block vanishes
    double total = 1;
    for (unsigned i = 0; i <= d; ++i) total *= static_cast<double>(K.size());
    if (total > static_cast<double>(cap)) fail("Overflow", "metabolic carrier exceeds cap");

    std::vector<FormPoint> kernel;
    FormPoint probe;
    probe.m.assign(d, 0);
    for (;;) {
        // evaluate the image of (probe.m, *) inside Heis(B_P)
        FormPoint acc = heisb_phi(K, p, K.zero());
        Vec prefix = vec_zero(d);
        for (unsigned i = 0; i < d; ++i) {
            if (probe.m[i] == K.zero()) continue;
            Vec term(d, K.zero());
            term[i] = probe.m[i];
            Ring::Elem cross = eval_form(b, prefix, term);
            acc = heisb_add(P.gram(), acc, heisb_phi(K, p, cross));
            if (i >= p) acc = heisb_add(P.gram(), acc, heisb_act(K, P.qtable()[i - p], probe.m[i]));
            prefix = vec_add(K, prefix, term);
        }
        for (Ring::Elem r = 0; r < K.size(); ++r) {
            FormPoint img = heisb_add(P.gram(), acc, heisb_phi(K, p, r));
            if (P.in_param(img)) {
                probe.r = r;
                kernel.push_back(probe);
            }
        }
        unsigned i = 0;
        while (i < d && ++probe.m[i] == K.size()) probe.m[i++] = 0;
        if (i == d) break;
    }
    OddFormParameter param = OddFormParameter::from_elements(b, std::move(kernel));

    std::vector<FormPoint> table;
    for (unsigned i = 0; i < d; ++i) {
        FormPoint q;
        q.m.assign(d, K.zero());
        q.m[i] = K.one();
        q.r = K.zero();
        table.push_back(std::move(q));
    }
    return QuadraticSpace::assemble(K, BlockProfile::plain(d), std::move(b), std::move(param),
                                    std::move(table));
}

QuadraticSpace orthogonal_sum(const std::vector<const QuadraticSpace*>& parts, std::size_t cap) {
    if (parts.empty()) fail("DimensionMismatch", "empty orthogonal sum");
    const Ring& K = parts[0]->ring();
    unsigned d = 0;
    for (const QuadraticSpace* sp : parts) {
        if (!sp->ring().same_as(K)) fail("RingMismatch", "orthogonal sum parts over different rings");
        d += sp->dim();
    }
    Mat b(K, d, d);
    std::vector<unsigned> offs;
    unsigned off = 0;
    for (const QuadraticSpace* sp : parts) {
        offs.push_back(off);
        for (unsigned i = 0; i < sp->dim(); ++i)
            for (unsigned j = 0; j < sp->dim(); ++j) b.at(off + i, off + j) = sp->gram().at(i, j);
        off += sp->dim();
    }

    // parameter of the sum: image of the product of the part parameters
    std::size_t count = 1;
    for (const QuadraticSpace* sp : parts) {
        count *= sp->param().size();
        if (count > cap) fail("Overflow", "orthogonal sum parameter exceeds cap");
    }
    std::vector<FormPoint> elems;
    std::vector<std::size_t> idx(parts.size(), 0);
    for (;;) {
        FormPoint acc = heisb_phi(K, d, K.zero());
        for (std::size_t t = 0; t < parts.size(); ++t) {
            const FormPoint& s = parts[t]->param().elements()[idx[t]];
            FormPoint emb;
            emb.m.assign(d, K.zero());
            for (unsigned i = 0; i < parts[t]->dim(); ++i) emb.m[offs[t] + i] = s.m[i];
            emb.r = s.r;
            acc = heisb_add(b, acc, emb); // cross terms vanish, blocks are orthogonal
        }
        elems.push_back(std::move(acc));
        std::size_t t = 0;
        while (t < parts.size() && ++idx[t] == parts[t]->param().size()) idx[t++] = 0;
        if (t == parts.size()) break;
    }
    OddFormParameter param = OddFormParameter::from_elements(b, std::move(elems));

    std::vector<FormPoint> table;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        for (unsigned i = 0; i < parts[t]->dim(); ++i) {
            FormPoint q;
            q.m.assign(d, K.zero());
            q.m[offs[t] + i] = K.one();
            q.r = parts[t]->qtable()[i].r;
            table.push_back(std::move(q));
        }
    }
    return QuadraticSpace::assemble(K, BlockProfile::plain(d), std::move(b), std::move(param),
                                    std::move(table));
}

QuadraticSpace reindex(const QuadraticSpace& sp, const std::vector<unsigned>& perm,
                       BlockProfile new_prof) {
    const Ring& K = sp.ring();
    unsigned d = sp.dim();
    if (perm.size() != d) fail("DimensionMismatch", "permutation has wrong length");
    std::vector<bool> hit(d, false);
    for (unsigned v : perm) {
        if (v >= d || hit[v]) fail("BadBlock", "not a permutation");
        hit[v] = true;
    }
    Mat b(K, d, d);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) b.at(i, j) = sp.gram().at(perm[i], perm[j]);
    std::vector<unsigned> inv(d);
    for (unsigned i = 0; i < d; ++i) inv[perm[i]] = i;
    auto remap = [&](const FormPoint& p) {
        FormPoint q;
        q.m.assign(d, K.zero());
        for (unsigned i = 0; i < d; ++i) q.m[inv[i]] = p.m[i];
        q.r = p.r;
        return q;
    };
    std::vector<FormPoint> elems;
    for (const FormPoint& p : sp.param().elements()) elems.push_back(remap(p));
    OddFormParameter param = OddFormParameter::from_elements(b, std::move(elems));
    std::vector<FormPoint> table;
    for (unsigned i = 0; i < d; ++i) table.push_back(remap(sp.qtable()[perm[i]]));
    return QuadraticSpace::assemble(K, std::move(new_prof), std::move(b), std::move(param),
                                    std::move(table));
}

namespace {

struct SpaceQuotient {
    explicit SpaceQuotient(QuadraticSpace s) : sp(std::move(s)) {}
    QuadraticSpace sp;
    std::vector<FormPoint> reps;          // carrier code -> canonical representative
    std::map<std::string, std::uint16_t> codes;
    std::uint16_t cls(const FormPoint& p) const {
        auto it = codes.find(heisb_key(sp.ring(), sp.reduce_coset(p)));
        return it->second;
    }
};

} // namespace

QuadStructure space_structure(const QuadraticSpace& sp, std::size_t cap) {
    const Ring& K = sp.ring();
    std::size_t d = sp.dim();
    double total = 1;
    for (std::size_t i = 0; i <= d; ++i) total *= static_cast<double>(K.size());
    if (total > static_cast<double>(cap)) fail("CarrierTooLarge", "Heis(B) carrier exceeds cap");

    auto q = std::make_shared<SpaceQuotient>(sp);
    FormPoint p;
    p.m.assign(d, 0);
    for (;;) {
        for (p.r = 0; p.r < K.size(); ++p.r) {
            FormPoint rep = sp.reduce_coset(p);
            std::string key = heisb_key(K, rep);
            if (q->codes.count(key)) continue;
            if (q->reps.size() >= 0xffff) fail("CarrierTooLarge", "too many classes");
            q->codes.emplace(std::move(key), static_cast<std::uint16_t>(q->reps.size()));
            q->reps.push_back(std::move(rep));
        }
        std::size_t i = 0;
        while (i < d && ++p.m[i] == K.size()) p.m[i++] = 0;
        if (i == d) break;
    }

    QuadStructure S;
    S.R = &K;
    S.size = static_cast<std::uint16_t>(q->reps.size());
    S.zero = q->cls(heisb_phi(K, d, K.zero()));
    S.add = [q](std::uint16_t a, std::uint16_t b) {
        return q->cls(heisb_add(q->sp.gram(), q->reps[a], q->reps[b]));
    };
    S.neg = [q](std::uint16_t a) { return q->cls(heisb_neg(q->sp.gram(), q->reps[a])); };
    S.phi = [q](Ring::Elem r) { return q->cls(heisb_phi(q->sp.ring(), q->sp.dim(), r)); };
    S.tr = [q](std::uint16_t a) { return heisb_tr(q->sp.gram(), q->reps[a]); };
    S.act = [q](std::uint16_t a, Ring::Elem k) {
        return q->cls(heisb_act(q->sp.ring(), q->reps[a], k));
    };
    return S;
}

bool is_isometry(const QuadraticSpace& sp, const Mat& g) {
    if (g.rows() != sp.dim() || g.cols() != sp.dim()) fail("DimensionMismatch", "endomorphism has wrong shape");
    if (!mat_inverse(g).has_value()) fail("NotInvertible", "isometry candidate is singular");
    Mat lhs = mat_mul(mat_mul(mat_transpose(mat_conj(g)), sp.gram()), g);
    if (!(lhs == sp.gram())) return false;
    for (unsigned i = 0; i < sp.dim(); ++i) {
        Vec img(sp.dim());
        for (unsigned r = 0; r < sp.dim(); ++r) img[r] = g.at(r, i);
        if (!sp.coset_eq(sp.qtilde_raw(img), sp.qtable()[i])) return false;
    }
    return true;
}

namespace {

// backtracking over basis images: candidates for slot i are the vectors whose
// q~ class matches the table, filtered by the form constraints against the
// slots already chosen
struct IsoSearch {
    const QuadraticSpace& sp;
    const Ring& K;
    unsigned d;
    std::size_t cap;
    const std::function<void(const Mat&)>& sink;
    std::vector<std::vector<Vec>> buckets; // per slot
    std::vector<Vec> chosen;
    std::vector<Vec> rows; // conj(v_j)^T b, cached per chosen slot
    std::size_t found = 0;
    bool need_inv_check;
    // packed fast path for |K| = 2 and d <= 64
    bool packed;
    std::vector<std::vector<std::uint64_t>> pbuckets;
    std::vector<std::uint64_t> prows;
    std::vector<std::uint64_t> pb; // columns of b as masks

    IsoSearch(const QuadraticSpace& s, std::size_t c, const std::function<void(const Mat&)>& f)
        : sp(s), K(s.ring()), d(s.dim()), cap(c), sink(f) {
        need_inv_check = !sp.nondegenerate();
        packed = (K.size() == 2 && d <= 64);
        // group all vectors by q~ class key
        std::map<std::string, std::vector<Vec>> classes;
        Vec v(d, 0);
        for (;;) {
            classes[heisb_key(K, sp.reduce_coset(sp.qtilde_raw(v)))].push_back(v);
            unsigned i = 0;
            while (i < d && ++v[i] == K.size()) v[i++] = 0;
            if (i == d) break;
        }
        for (unsigned i = 0; i < d; ++i) {
            std::string want = heisb_key(K, sp.reduce_coset(sp.qtable()[i]));
            auto it = classes.find(want);
            buckets.push_back(it == classes.end() ? std::vector<Vec>{} : it->second);
        }
        if (packed) {
            for (unsigned i = 0; i < d; ++i) {
                pbuckets.emplace_back();
                for (const Vec& u : buckets[i]) pbuckets.back().push_back(pack(u));
            }
            for (unsigned j = 0; j < d; ++j) {
                std::uint64_t col = 0;
                for (unsigned i = 0; i < d; ++i)
                    if (sp.gram().at(i, j) != 0) col |= std::uint64_t{1} << i;
                pb.push_back(col);
            }
        }
    }

    std::uint64_t pack(const Vec& v) const {
        std::uint64_t w = 0;
        for (unsigned i = 0; i < d; ++i)
            if (v[i] != 0) w |= std::uint64_t{1} << i;
        return w;
    }

    Vec form_row(const Vec& v) const {
        Vec w(d, K.zero());
        for (unsigned j = 0; j < d; ++j) {
            Ring::Elem acc = K.zero();
            for (unsigned i = 0; i < d; ++i) {
                if (v[i] == K.zero() || sp.gram().at(i, j) == K.zero()) continue;
                acc = K.add(acc, K.mul(K.involve(v[i]), sp.gram().at(i, j)));
            }
            w[j] = acc;
        }
        return w;
    }

    void emit() {
        Mat g(K, d, d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned r = 0; r < d; ++r) g.at(r, i) = chosen[i][r];
        if (need_inv_check && !mat_inverse(g).has_value()) return;
        if (++found > cap) fail("CapExceeded", "isometry enumeration exceeds cap");
        sink(g);
    }

    void descend(unsigned i) {
        if (i == d) {
            emit();
            return;
        }
        if (packed) {
            for (std::uint64_t pv : pbuckets[i]) {
                bool ok = true;
                for (unsigned j = 0; j < i && ok; ++j) {
                    unsigned lhs = __builtin_parityll(prows[j] & pv);
                    ok = (lhs == (sp.gram().at(j, i) & 1));
                }
                if (!ok) continue;
                std::uint64_t rowmask = 0;
                for (unsigned j = 0; j < d; ++j)
                    if (__builtin_parityll(pv & pb[j])) rowmask |= std::uint64_t{1} << j;
                prows.push_back(rowmask);
                chosen.push_back(unpack(pv));
                descend(i + 1);
                chosen.pop_back();
                prows.pop_back();
            }
            return;
        }
        for (const Vec& v : buckets[i]) {
            bool ok = true;
            for (unsigned j = 0; j < i && ok; ++j) {
                Ring::Elem acc = K.zero();
                for (unsigned t = 0; t < d; ++t) {
                    if (rows[j][t] == K.zero() || v[t] == K.zero()) continue;
                    acc = K.add(acc, K.mul(rows[j][t], v[t]));
                }
                ok = (acc == sp.gram().at(j, i));
            }
            if (!ok) continue;
            rows.push_back(form_row(v));
            chosen.push_back(v);
            descend(i + 1);
            chosen.pop_back();
            rows.pop_back();
        }
    }

    Vec unpack(std::uint64_t w) const {
        Vec v(d, 0);
        for (unsigned i = 0; i < d; ++i) v[i] = (w >> i) & 1;
        return v;
    }
};

} // namespace

void enumerate_isometries(const QuadraticSpace& sp, std::size_t cap,
                          const std::function<void(const Mat&)>& sink) {
    IsoSearch search(sp, cap, sink);
    search.descend(0);
}

std::vector<Mat> isometry_list(const QuadraticSpace& sp, std::size_t cap) {
    std::vector<Mat> out;
    enumerate_isometries(sp, cap, [&](const Mat& g) { out.push_back(g); });
    return out;
}

} // namespace oddu

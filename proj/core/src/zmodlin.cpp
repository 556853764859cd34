#include "oddu/zmodlin.hpp"
#include "oddu/common.hpp"

#include <algorithm>
#include <numeric>

namespace oddu {

namespace {

unsigned egcd(long long a, long long b, long long& p, long long& q) {
    // p*a + q*b = gcd(a,b) >= 0
    if (b == 0) { p = (a < 0) ? -1 : 1; q = 0; return static_cast<unsigned>(a < 0 ? -a : a); }
    long long p1, q1;
    unsigned g = egcd(b, a % b, p1, q1);
    p = q1;
    q = p1 - (a / b) * q1;
    return g;
}

} // namespace

HowellBasis::HowellBasis(unsigned n, std::size_t width)
    : n_(n), m_(width), piv_(width), has_(width, false) {
    if (n < 2) fail("BadBlock", "modulus must be >= 2");
}

void HowellBasis::insert(ZRow row) {
    // worklist of rows still to be placed
    std::vector<ZRow> work;
    work.push_back(std::move(row));
    while (!work.empty()) {
        ZRow r = std::move(work.back());
        work.pop_back();
        for (auto& x : r) x %= n_;
        std::size_t col = 0;
        while (col < m_) {
            if (r[col] == 0) { ++col; continue; }
            if (!has_[col]) {
                // normalize leading entry to gcd(r[col], n) by a unit
                unsigned g = std::gcd(r[col], n_);
                if (r[col] != g) {
                    unsigned u = 0;
                    for (unsigned c = 1; c < n_; ++c) {
                        if (std::gcd(c, n_) == 1 &&
                            (static_cast<unsigned long long>(c) * r[col]) % n_ == g) {
                            u = c;
                            break;
                        }
                    }
                    for (auto& x : r)
                        x = static_cast<unsigned>((static_cast<unsigned long long>(u) * x) % n_);
                }
                piv_[col] = r;
                has_[col] = true;
                // Howell shadow: (n/g) * r has leading zero here and keeps
                // prefix-supported span elements reachable greedily.
                unsigned shadow_mult = n_ / g;
                if (shadow_mult > 1) {
                    ZRow s(m_);
                    bool nz = false;
                    for (std::size_t j = 0; j < m_; ++j) {
                        s[j] = static_cast<unsigned>(
                            (static_cast<unsigned long long>(shadow_mult) * r[j]) % n_);
                        nz |= (s[j] != 0);
                    }
                    if (nz) work.push_back(std::move(s));
                }
                break;
            }
            unsigned a = piv_[col][col], b = r[col];
            if (b % a == 0) {
                unsigned q = b / a;
                for (std::size_t j = col; j < m_; ++j) {
                    unsigned sub = static_cast<unsigned>(
                        (static_cast<unsigned long long>(q) * piv_[col][j]) % n_);
                    r[j] = (r[j] + n_ - sub) % n_;
                }
                continue;
            }
            // combine rows: new pivot row p*H + q*r has leading entry g
            long long p, q;
            unsigned g = egcd(a, b, p, q);
            long long pm = ((p % n_) + n_) % n_, qm = ((q % n_) + n_) % n_;
            ZRow h(m_);
            for (std::size_t j = 0; j < m_; ++j)
                h[j] = static_cast<unsigned>(
                    (static_cast<unsigned long long>(pm) * piv_[col][j] +
                     static_cast<unsigned long long>(qm) * r[j]) % n_);
            // residuals of the old rows against the new pivot keep the span equal
            ZRow old = piv_[col];
            piv_[col] = h;
            unsigned qa = a / g, qb = b / g;
            ZRow res1(m_), res2(m_);
            bool nz1 = false, nz2 = false;
            for (std::size_t j = 0; j < m_; ++j) {
                unsigned s1 = static_cast<unsigned>(
                    (static_cast<unsigned long long>(qa) * h[j]) % n_);
                unsigned s2 = static_cast<unsigned>(
                    (static_cast<unsigned long long>(qb) * h[j]) % n_);
                res1[j] = (old[j] + n_ - s1) % n_;
                res2[j] = (r[j] + n_ - s2) % n_;
                nz1 |= (res1[j] != 0);
                nz2 |= (res2[j] != 0);
            }
            if (nz1) work.push_back(std::move(res1));
            if (nz2) work.push_back(std::move(res2));
            unsigned shadow_mult = n_ / std::gcd(h[col], n_);
            if (shadow_mult > 1) {
                ZRow s(m_);
                bool nz = false;
                for (std::size_t j = 0; j < m_; ++j) {
                    s[j] = static_cast<unsigned>(
                        (static_cast<unsigned long long>(shadow_mult) * h[j]) % n_);
                    nz |= (s[j] != 0);
                }
                if (nz) work.push_back(std::move(s));
            }
            r.clear();
            break;
        }
    }
}

void HowellBasis::tidy() {
    // reduce entries above each pivot into [0, pivot)
    for (std::size_t j = 0; j < m_; ++j) {
        if (!has_[j]) continue;
        unsigned d = piv_[j][j];
        for (std::size_t i = 0; i < j; ++i) {
            if (!has_[i] || piv_[i][j] == 0) continue;
            unsigned q = piv_[i][j] / d;
            if (q == 0) continue;
            for (std::size_t c = j; c < m_; ++c) {
                unsigned sub = static_cast<unsigned>(
                    (static_cast<unsigned long long>(q) * piv_[j][c]) % n_);
                piv_[i][c] = (piv_[i][c] + n_ - sub) % n_;
            }
        }
    }
}

void HowellBasis::add(const ZRow& row) {
    if (row.size() != m_) fail("DimensionMismatch", "row width");
    insert(row);
    tidy();
}

bool HowellBasis::grow(const ZRow& row) {
    if (contains(row)) return false;
    add(row);
    return true;
}

bool HowellBasis::contains(const ZRow& row) const {
    if (row.size() != m_) fail("DimensionMismatch", "row width");
    ZRow r = row;
    for (auto& x : r) x %= n_;
    for (std::size_t j = 0; j < m_; ++j) {
        if (r[j] == 0) continue;
        if (!has_[j]) return false;
        unsigned d = piv_[j][j];
        if (r[j] % d != 0) return false;
        unsigned q = r[j] / d;
        for (std::size_t c = j; c < m_; ++c) {
            unsigned sub = static_cast<unsigned>(
                (static_cast<unsigned long long>(q) * piv_[j][c]) % n_);
            r[c] = (r[c] + n_ - sub) % n_;
        }
    }
    return true;
}

bool HowellBasis::contains_all(const HowellBasis& other) const {
    if (other.m_ != m_ || other.n_ != n_) fail("DimensionMismatch", "span shape");
    for (std::size_t j = 0; j < m_; ++j)
        if (other.has_[j] && !contains(other.piv_[j])) return false;
    return true;
}

bool HowellBasis::same_span(const HowellBasis& other) const {
    if (other.m_ != m_ || other.n_ != n_) return false;
    return has_ == other.has_ && piv_ == other.piv_;
}

ZRow HowellBasis::reduce(ZRow row) const {
    if (row.size() != m_) fail("DimensionMismatch", "row width");
    for (auto& x : row) x %= n_;
    for (std::size_t j = 0; j < m_; ++j) {
        if (!has_[j] || row[j] == 0) continue;
        unsigned d = piv_[j][j];
        unsigned q = row[j] / d; // leaves row[j] mod d in place
        if (q == 0) continue;
        for (std::size_t c = j; c < m_; ++c) {
            unsigned sub = static_cast<unsigned>(
                (static_cast<unsigned long long>(q) * piv_[j][c]) % n_);
            row[c] = (row[c] + n_ - sub) % n_;
        }
    }
    return row;
}

unsigned long long HowellBasis::count() const {
    unsigned __int128 total = 1;
    for (std::size_t j = 0; j < m_; ++j) {
        if (!has_[j]) continue;
        total *= (n_ / piv_[j][j]);
        if (total > (static_cast<unsigned __int128>(1) << 62))
            fail("Overflow", "span too large to count");
    }
    return static_cast<unsigned long long>(total);
}

std::vector<ZRow> HowellBasis::rows() const {
    std::vector<ZRow> out;
    for (std::size_t j = 0; j < m_; ++j)
        if (has_[j]) out.push_back(piv_[j]);
    return out;
}

LeftSolver::LeftSolver(unsigned n, std::size_t width, const std::vector<ZRow>& gens)
    : n_(n), m_(width), ngens_(gens.size()), aug_(n, width + gens.size()) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].size() != width) fail("DimensionMismatch", "generator width");
        ZRow r(width + gens.size(), 0);
        std::copy(gens[i].begin(), gens[i].end(), r.begin());
        r[width + i] = 1;
        aug_.add(r);
    }
}

std::optional<ZRow> LeftSolver::solve(const ZRow& target) const {
    if (target.size() != m_) fail("DimensionMismatch", "target width");
    ZRow r(m_ + ngens_, 0);
    for (std::size_t j = 0; j < m_; ++j) r[j] = target[j] % n_;
    auto all = aug_.rows();
    // reduce against rows pivoting inside the first m_ columns only
    for (const auto& h : all) {
        std::size_t p = 0;
        while (p < m_ + ngens_ && h[p] == 0) ++p;
        if (p >= m_) break; // rows are in pivot order
        if (r[p] == 0) continue;
        unsigned d = h[p];
        if (r[p] % d != 0) return std::nullopt;
        unsigned q = r[p] / d;
        for (std::size_t c = p; c < m_ + ngens_; ++c) {
            unsigned sub = static_cast<unsigned>(
                (static_cast<unsigned long long>(q) * h[c]) % n_);
            r[c] = (r[c] + n_ - sub) % n_;
        }
    }
    for (std::size_t j = 0; j < m_; ++j)
        if (r[j] != 0) return std::nullopt;
    // residual is [0 | -x] with x * G = target
    ZRow x(ngens_);
    for (std::size_t i = 0; i < ngens_; ++i) x[i] = (n_ - r[m_ + i]) % n_;
    return x;
}

std::vector<ZRow> LeftSolver::kernel() const {
    std::vector<ZRow> out;
    for (const auto& h : aug_.rows()) {
        bool zero_prefix = true;
        for (std::size_t j = 0; j < m_; ++j)
            if (h[j] != 0) { zero_prefix = false; break; }
        if (!zero_prefix) continue;
        out.emplace_back(h.begin() + static_cast<long>(m_), h.end());
    }
    return out;
}

} // namespace oddu

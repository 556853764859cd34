#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oddu {

// Library-wide error with a stable machine-readable kind tag
// ("InvalidLambda", "CapExceeded", ...). Tests match on the kind.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(std::string kind, const std::string& msg) {
    throw Error(std::move(kind), msg);
}

// Deterministic RNG. Every randomized check derives its stream from the
// experiment seed plus a per-check tag so reports are reproducible.
inline uint64_t mix_seed(uint64_t base, std::string_view tag) {
    uint64_t h = base ^ 0x9e3779b97f4a7c15ull;
    for (char c : tag) {
        h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    }
    return h;
}

// One verified law. A failed law keeps the first counterexample found so a
// report can point at concrete inputs.
struct CheckEntry {
    std::string law;
    uint64_t cases = 0;
    bool ok = true;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    bool all_ok() const {
        for (const CheckEntry& e : entries)
            if (!e.ok) return false;
        return true;
    }
    const CheckEntry* find(std::string_view law) const {
        for (const CheckEntry& e : entries)
            if (e.law == law) return &e;
        return nullptr;
    }
    std::string to_string() const {
        std::string s;
        for (const CheckEntry& e : entries) {
            s += e.ok ? "ok   " : "FAIL ";
            s += e.law + " (" + std::to_string(e.cases) + " cases)";
            if (!e.ok) s += " witness: " + e.witness;
            s += "\n";
        }
        return s;
    }
};

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    uint64_t next() { return gen_(); }
    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        return n <= 1 ? 0 : gen_() % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace oddu

#pragma once
// End-to-end verification campaigns over one configured quadratic space: the
// axiom and relation suites, the form-parameter lemma, level calculus round
// trips, perfection and boundary generation, sandwich inclusions at the
// enumerable and the sampled tier, and the classical-group specializations.
// Campaigns consume a declarative ExperimentConfig and emit CampaignReports
// with stable field order, so two runs with the same config and seed agree
// byte for byte once timings are suppressed.

#include "oddu/levels.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oddu {

// Declarative description of a campaign run.  The space fields mirror
// build_standard_space; leave odd_gram empty for r0 = 0.  Level constructor
// strings use the grammar
//   zero | base | full | gen(i,j) | ceil(E) | floor(E) | envelope(E)
//   | scale(E,s)
// where E is again a constructor and s an integer ring scalar.  gen(i,j) is
// the smallest level containing the diagonal unit of module block (i, j).
struct ExperimentConfig {
    RingSpec ring = RingSpec::modular(2);
    BlockProfile profile{3, {1, 1, 1, 1}};
    std::vector<std::vector<long long>> odd_gram = {{1}};
    std::string param = "minimal"; // "minimal" or "maximal"
    // extra parameter generators (m entries, r) joined to the minimal seed
    std::vector<std::pair<std::vector<long long>, long long>> param_gens;

    std::vector<std::string> levels = {"base"};
    std::vector<std::string> campaigns = {"relations"};
    // seeded defect for sensitivity runs: none | flat_add | adjoint_transpose
    // | pi_conj | phi_drop
    std::string mutation = "none";

    uint64_t seed = 0;
    uint64_t trials = 10000;   // sample count for the sampled law checks
    unsigned sum_trials = 2;   // extra random generator sums per gu test

    std::size_t carrier_cap = kCarrierCap;
    std::size_t group_cap = std::size_t{1} << 22;
    std::size_t param_cap = kDefaultParamCap;
    std::size_t closure_cap = kGammaClosureCap;

    bool deterministic = false; // zero out timings, drop the timestamp
};

// One verified check inside a campaign.  status is "pass", "fail" or
// "error"; a fail carries the first witness, an error the thrown kind and
// message.  ms is wall clock and is zeroed under config.deterministic.
struct CheckRecord {
    std::string name;
    std::string status;
    std::string witness;
    uint64_t cases = 0;
    double ms = 0.0;
};

struct CampaignReport {
    std::string campaign;
    std::vector<std::string> notes; // tier statements and context lines
    std::vector<std::pair<std::string, std::string>> facts; // ordered key/value
    std::vector<CheckRecord> checks;

    bool all_ok() const {
        for (const CheckRecord& c : checks)
            if (c.status != "pass") return false;
        return true;
    }
    const CheckRecord* find(std::string_view name) const {
        for (const CheckRecord& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    const std::string* fact(std::string_view key) const {
        for (const auto& [k, v] : facts)
            if (k == key) return &v;
        return nullptr;
    }
};

// space and level construction shared by campaigns, the command line front
// end and the acceptance runs
QuadraticSpace build_space(const ExperimentConfig& cfg);
std::vector<std::pair<std::string, AugLevel>> build_levels(const EndoContext& ctx,
                                                           const ExperimentConfig& cfg);

// quadratic structure axioms of the universal structure of the ring plus the
// integer polynomial model of Heisenberg pairs
CampaignReport run_axiom_suite(const ExperimentConfig& cfg);
// NQ and T / LT relation families, the Chevalley containments of the doubled
// root system, and the closure laws of the odd form parameter of the double
CampaignReport run_relation_suite(const ExperimentConfig& cfg);
// the form parameter of the double on its own: every lemma clause, one
// record per clause, plus the block sizes as facts
CampaignReport run_lambda_suite(const ExperimentConfig& cfg);
// level axioms, calculus sanity and the group round trip
// level_of_group(eu_level_group(L)) = L for every configured level
CampaignReport run_level_suite(const ExperimentConfig& cfg);
// perfection [EU(P,L), EU(P)] = EU(P,L) and boundary generation, exact group
// computation per configured level
CampaignReport run_group_suite(const ExperimentConfig& cfg);

// Sandwich inclusions EU(P, L(G)) <= G <= GU(P, floor L(G)).  The exhaustive
// tier enumerates G; it runs where the unitary group is enumerable and
// records that the classification hypothesis l >= 4 is not met.  The sampled
// tier checks generators and random words only and says so.
CampaignReport sandwich_exhaustive(const ExperimentConfig& cfg);
CampaignReport sandwich_sampled(const ExperimentConfig& cfg);

// the classical specializations: split orthogonal and symplectic groups
// against textbook generator closures, the odd orthogonal pointwise-fix law,
// and the overgroup data extracted from levels between the even and the odd
// elementary level
CampaignReport classical_identify(const ExperimentConfig& cfg);

// dispatch on cfg.campaigns; "sandwich" picks the tier by profile.l
std::vector<CampaignReport> run_campaigns(const ExperimentConfig& cfg);

// stable-order JSON document: config echo then campaigns; the timestamp is
// emitted only when with_timestamp is set and cfg.deterministic is not
std::string report_json(const ExperimentConfig& cfg,
                        const std::vector<CampaignReport>& reports,
                        bool with_timestamp);
// one line per check, terminal friendly
std::string report_summary(const std::vector<CampaignReport>& reports);

} // namespace oddu

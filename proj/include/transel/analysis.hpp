#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "transel/evidence.hpp"
#include "transel/priors.hpp"
#include "transel/sampler.hpp"

namespace transel {

enum class PriorChoice { A, B, Both };

struct AnalysisConfig {
    std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
    PriorChoice prior = PriorChoice::Both;
    MhConfig mh;
    int chib_j = 2000;
    std::vector<EvidenceMethod> methods{EvidenceMethod::Chib, EvidenceMethod::LaplaceMetropolis,
                                        EvidenceMethod::Quadrature};
    std::optional<std::size_t> n_star;  // defaults to n
    ImaginarySource imaginary_source = ImaginarySource::SimulatedStandardNormal;
    std::uint64_t seed = 1;
    bool keep_chains = false;

    void validate() const;
    std::vector<PriorKind> prior_kinds() const;
    bool needs_mcmc() const;
};

struct LambdaSummary {
    double mode = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double accept_rate = 0.0;
    double step_sd = 0.0;
};

struct FamilyResult {
    Family family = Family::Id;
    std::map<EvidenceMethod, EvidenceEstimate> evidence;  // keyed by requested method
    std::optional<LambdaSummary> lambda;
    std::map<EvidenceMethod, double> probability;         // per requested method
    std::optional<double> prior_scale;                    // prior B sigma
    std::optional<double> prior_location;                 // prior B location
    std::optional<double> prior_log_norm_const;           // prior A normalizer
};

struct SelectionReport {
    PriorKind prior = PriorKind::PowerPrior;
    EvidenceMethod primary = EvidenceMethod::Chib;
    std::vector<EvidenceMethod> methods;
    std::vector<FamilyResult> families;
    std::vector<Family> ranking;  // by the primary method

    const FamilyResult& result(Family f) const;
    double probability(Family f) const;                          // primary method
    double probability(Family f, EvidenceMethod method) const;
    Family winner() const { return ranking.front(); }
};

struct ChainRecord {
    Family family;
    PriorKind prior;
    PosteriorChain chain;
};

struct AnalysisResult {
    PreparedData data;
    std::shared_ptr<const ImaginaryData> imaginary;
    DualAnchor dual_anchor;
    double log_constant = 0.0;  // C(n), included in every reported log-marginal
    std::vector<SelectionReport> reports;
    std::vector<ChainRecord> chains;

    const SelectionReport& report(PriorKind kind) const;
};

/// Full pipeline on raw observations: prepare, build both priors from one imaginary
/// sample, sample each parametric family, estimate evidence, normalize.
AnalysisResult analyze_data(std::span<const double> raw, const AnalysisConfig& config);

}  // namespace transel

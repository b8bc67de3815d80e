#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transel/posterior.hpp"
#include "transel/sampler.hpp"

namespace transel {

enum class EvidenceMethod { Chib, LaplaceMetropolis, Quadrature, ClosedForm };

std::string_view name(EvidenceMethod method);  // "chib", "laplace_metropolis", "quadrature", "closed_form"
std::optional<EvidenceMethod> method_from_name(std::string_view name);

struct EvidenceEstimate {
    double log_marginal = 0.0;
    EvidenceMethod method = EvidenceMethod::ClosedForm;
    std::optional<double> mc_se;
    std::map<std::string, double> diagnostics;
    bool include_constant = true;
};

/// Id and Log: the marginalized likelihood itself.
EvidenceEstimate evidence_closed_form(const MarginalLikelihood& likelihood);

/// Candidate-identity estimate at the chain mode:
///   log f(y|lambda*) + log pi(theta*) - log pi_hat(theta*|y),
/// with the ordinate from M chain draws (numerator) and J proposal draws (denominator).
/// Throws OrdinateUnderflow when either average is zero.
EvidenceEstimate evidence_chib(const PosteriorTarget& target, const PosteriorChain& chain, int j_draws = 2000,
                               std::uint64_t seed = 1);

/// Gaussian approximation around the chain mode with the chain variance, on the
/// sampling scale.
EvidenceEstimate evidence_laplace_metropolis(const PosteriorTarget& target, const PosteriorChain& chain);

/// (1/2) log(2 pi) + (1/2) log variance + log prior + log likelihood.
double laplace_log_evidence(double log_likelihood, double log_prior, double variance);

/// log of the integral of likelihood times prior over theta. For the power prior this is
/// the ratio of the joint power-likelihood integral to the prior normalizer.
EvidenceEstimate evidence_quadrature(const PosteriorTarget& target);
EvidenceEstimate evidence_quadrature(const PosteriorTarget& target, const QuadratureOptions& options);

struct FamilyEvidence {
    Family family;
    EvidenceEstimate estimate;
};

struct ModelProbabilities {
    std::vector<Family> families;      // input order
    std::vector<double> probabilities; // aligned with families
    std::vector<Family> ranking;       // descending probability, ties by family order

    double probability(Family f) const;
};

/// Posterior model probabilities under a uniform prior over the supplied families.
/// Throws InconsistentEvidence when constant conventions differ, InvalidArgument on
/// duplicates or an empty input.
ModelProbabilities posterior_model_probs(std::span<const FamilyEvidence> estimates);

/// Probabilities from raw log-evidence values (same ordering as the input).
std::vector<double> normalize_log_evidence(std::span<const double> log_evidence);

}  // namespace transel

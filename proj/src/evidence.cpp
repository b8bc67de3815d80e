#include "transel/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "transel/errors.hpp"
#include "transel/numerics.hpp"

namespace transel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_normal_pdf(double x, double mean, double sd) {
    const double u = (x - mean) / sd;
    return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sd) - 0.5 * u * u;
}

}  // namespace

std::string_view name(EvidenceMethod method) {
    switch (method) {
        case EvidenceMethod::Chib: return "chib";
        case EvidenceMethod::LaplaceMetropolis: return "laplace_metropolis";
        case EvidenceMethod::Quadrature: return "quadrature";
        case EvidenceMethod::ClosedForm: return "closed_form";
    }
    return "unknown";
}

std::optional<EvidenceMethod> method_from_name(std::string_view s) {
    if (s == "chib") return EvidenceMethod::Chib;
    if (s == "laplace_metropolis" || s == "lm" || s == "laplace") return EvidenceMethod::LaplaceMetropolis;
    if (s == "quadrature" || s == "quad") return EvidenceMethod::Quadrature;
    if (s == "closed_form") return EvidenceMethod::ClosedForm;
    return std::nullopt;
}

EvidenceEstimate evidence_closed_form(const MarginalLikelihood& likelihood) {
    if (traits(likelihood.family()).has_lambda) {
        throw Error(ErrorCode::InvalidArgument, "closed-form evidence applies only to Id and Log");
    }
    EvidenceEstimate e;
    e.method = EvidenceMethod::ClosedForm;
    e.log_marginal = likelihood(0.0);
    e.include_constant = likelihood.include_constant();
    return e;
}

EvidenceEstimate evidence_chib(const PosteriorTarget& target, const PosteriorChain& chain, int j_draws,
                               std::uint64_t seed) {
    if (j_draws < 500) throw Error(ErrorCode::InvalidArgument, "Chib estimator needs J >= 500");
    if (chain.sampling_draws.size() < 100) throw Error(ErrorCode::InvalidArgument, "chain too short");
    const double theta_star = chain.mode_sampling;
    const double sd = chain.step_sd;
    const double k_star = target.chib_log_kernel(theta_star);
    if (k_star == kNegInf) throw Error(ErrorCode::OrdinateUnderflow, "kernel vanishes at the chain mode");

    const std::size_t m = chain.sampling_draws.size();
    std::vector<double> num_terms(m);
    double num_max = kNegInf;
    std::vector<double> log_terms(m);
    for (std::size_t g = 0; g < m; ++g) {
        const double theta = chain.sampling_draws[g];
        const double k = target.chib_log_kernel(theta);
        const double log_alpha = std::min(0.0, k_star - k);
        log_terms[g] = log_alpha + log_normal_pdf(theta_star, theta, sd);
        num_max = std::max(num_max, log_terms[g]);
    }
    if (num_max == kNegInf) throw Error(ErrorCode::OrdinateUnderflow, "numerator average underflowed");
    for (std::size_t g = 0; g < m; ++g) num_terms[g] = std::exp(log_terms[g] - num_max);
    const double num_mean = mean(num_terms);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(theta_star, sd);
    std::vector<double> den_terms(static_cast<std::size_t>(j_draws));
    for (double& t : den_terms) {
        const double k = target.chib_log_kernel(normal(rng));
        t = k == kNegInf ? 0.0 : std::exp(std::min(0.0, k - k_star));
    }
    const double den_mean = mean(den_terms);
    if (!(num_mean > 0.0) || !(den_mean > 0.0)) {
        throw Error(ErrorCode::OrdinateUnderflow, "posterior ordinate averages underflowed");
    }
    const double log_ordinate = num_max + std::log(num_mean) - std::log(den_mean);
    const double lambda_star = target.to_lambda(theta_star);

    EvidenceEstimate e;
    e.method = EvidenceMethod::Chib;
    e.include_constant = target.likelihood().include_constant();
    const double log_lik = target.likelihood()(lambda_star);
    const double log_prior = target.log_prior(theta_star);
    e.log_marginal = log_lik + log_prior - log_ordinate;
    const double rel_num = batch_means_se(num_terms, 50) / num_mean;
    const double rel_den = sample_sd(den_terms) / std::sqrt(static_cast<double>(j_draws)) / den_mean;
    e.mc_se = std::sqrt(rel_num * rel_num + rel_den * rel_den);
    e.diagnostics = {{"J", j_draws},
                     {"M", static_cast<double>(m)},
                     {"k_star", sd * sd},
                     {"lambda_star", lambda_star},
                     {"theta_star", theta_star},
                     {"log_ordinate", log_ordinate},
                     {"log_likelihood", log_lik},
                     {"log_prior", log_prior}};
    return e;
}

double laplace_log_evidence(double log_likelihood, double log_prior, double variance) {
    if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "Laplace-Metropolis needs positive variance");
    return 0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * std::log(variance) + log_prior + log_likelihood;
}

EvidenceEstimate evidence_laplace_metropolis(const PosteriorTarget& target, const PosteriorChain& chain) {
    if (chain.sampling_draws.size() < 2) throw Error(ErrorCode::InvalidArgument, "chain too short");
    const double theta_star = chain.mode_sampling;
    const double variance = sample_variance(chain.sampling_draws);
    const double log_lik = target.log_likelihood(theta_star);
    const double log_prior = target.log_prior(theta_star);
    EvidenceEstimate e;
    e.method = EvidenceMethod::LaplaceMetropolis;
    e.include_constant = target.likelihood().include_constant();
    e.log_marginal = laplace_log_evidence(log_lik, log_prior, variance);
    e.diagnostics = {{"theta_star", theta_star},
                     {"lambda_star", target.to_lambda(theta_star)},
                     {"variance", variance},
                     {"M", static_cast<double>(chain.sampling_draws.size())}};
    return e;
}

EvidenceEstimate evidence_quadrature(const PosteriorTarget& target) {
    return evidence_quadrature(target, target.quadrature_window());
}

EvidenceEstimate evidence_quadrature(const PosteriorTarget& target, const QuadratureOptions& options) {
    EvidenceEstimate e;
    e.method = EvidenceMethod::Quadrature;
    e.include_constant = target.likelihood().include_constant();
    if (const auto* power = std::get_if<PowerPriorSpec>(&target.prior().kind)) {
        // Joint power-likelihood integral over the prior normalizer.
        const MarginalLikelihood& imag = *power->imaginary_likelihood;
        const double ns = static_cast<double>(imag.n());
        const bool log_scale = target.log_scale();
        auto joint = [&](double theta) {
            const double lambda = target.to_lambda(theta);
            if (!in_domain(target.family(), lambda)) return kNegInf;
            try {
                return target.likelihood()(lambda) + imag(lambda) / ns + (log_scale ? theta : 0.0);
            } catch (const Error& err) {
                if (err.code() == ErrorCode::DegenerateTransform) return kNegInf;
                throw;
            }
        };
        const QuadratureResult r = log_integrate(joint, options);
        e.log_marginal = r.log_value - power->log_norm_const;
        e.diagnostics = {{"log_numerator", r.log_value},
                         {"log_norm_const", power->log_norm_const},
                         {"lo", r.lo},
                         {"hi", r.hi},
                         {"evaluations", r.evaluations}};
        return e;
    }
    const QuadratureResult r = log_integrate([&](double theta) { return target.log_kernel(theta); }, options);
    e.log_marginal = r.log_value;
    e.diagnostics = {{"lo", r.lo}, {"hi", r.hi}, {"evaluations", r.evaluations}};
    return e;
}

double ModelProbabilities::probability(Family f) const {
    for (std::size_t i = 0; i < families.size(); ++i) {
        if (families[i] == f) return probabilities[i];
    }
    throw Error(ErrorCode::InvalidArgument, "family not present in the comparison");
}

std::vector<double> normalize_log_evidence(std::span<const double> log_evidence) {
    if (log_evidence.empty()) throw Error(ErrorCode::InvalidArgument, "no evidence values");
    for (double v : log_evidence) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
            throw Error(ErrorCode::InvalidArgument, "log evidence must be finite or -inf");
        }
    }
    const double total = log_sum_exp(log_evidence);
    if (total == kNegInf) throw Error(ErrorCode::InvalidArgument, "every model has zero evidence");
    std::vector<double> p(log_evidence.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_evidence[i] - total);
    // Renormalize so the rounded values sum to one as closely as possible.
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= s;
    return p;
}

ModelProbabilities posterior_model_probs(std::span<const FamilyEvidence> estimates) {
    if (estimates.empty()) throw Error(ErrorCode::InvalidArgument, "no families to compare");
    ModelProbabilities out;
    std::vector<double> logs;
    for (const auto& fe : estimates) {
        if (std::find(out.families.begin(), out.families.end(), fe.family) != out.families.end()) {
            throw Error(ErrorCode::InvalidArgument, "duplicate family in the comparison");
        }
        if (fe.estimate.include_constant != estimates.front().estimate.include_constant) {
            throw Error(ErrorCode::InconsistentEvidence, "families mix constant conventions");
        }
        out.families.push_back(fe.family);
        logs.push_back(fe.estimate.log_marginal);
    }
    out.probabilities = normalize_log_evidence(logs);
    std::vector<std::size_t> order(out.families.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (out.probabilities[a] != out.probabilities[b]) return out.probabilities[a] > out.probabilities[b];
        return static_cast<int>(out.families[a]) < static_cast<int>(out.families[b]);
    });
    for (std::size_t i : order) out.ranking.push_back(out.families[i]);
    return out;
}

}  // namespace transel

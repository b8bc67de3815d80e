#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "transel/likelihood.hpp"
#include "transel/numerics.hpp"
#include "transel/transform.hpp"

namespace transel {

enum class ImaginarySource { SimulatedStandardNormal, EmpiricalCopy };

std::string_view name(ImaginarySource source);

/// Common imaginary sample grounding both priors. Values are standardized and carry
/// their own shift for the families that need positive input.
struct ImaginaryData {
    PreparedData data;
    ImaginarySource source = ImaginarySource::SimulatedStandardNormal;
    std::uint64_t seed = 0;

    std::size_t n_star() const { return data.n(); }
    double discount() const { return 1.0 / static_cast<double>(n_star()); }
    std::span<const double> values() const { return data.standardized; }
};

/// Simulated: n_star iid N(0, 1) draws, then standardized. Empirical: a standardized
/// copy of `observed` (n_star is taken from it).
ImaginaryData make_imaginary(std::size_t n_star, ImaginarySource source, std::uint64_t seed,
                             std::span<const double> observed = {});

inline constexpr double kDefaultDualAnchor = 1.2;

/// Dual-family parameter value playing the role of "no transformation".
struct DualAnchor {
    double value = kDefaultDualAnchor;
    bool fallback = true;   // true when the search failed and the default was used
};

/// argmax over (0, 20] of log f(y* | lambda, Dual): grid scan then golden section.
DualAnchor estimate_dual_anchor(const ImaginaryData& imaginary);

enum class PriorKind { PowerPrior, UnitInfo };

std::string_view name(PriorKind kind);  // "A" / "B"

struct PowerPriorSpec {
    std::shared_ptr<const ImaginaryData> imaginary;
    std::shared_ptr<const MarginalLikelihood> imaginary_likelihood;
    double log_norm_const = std::numeric_limits<double>::quiet_NaN();
};

struct UnitInfoSpec {
    double location = 1.0;   // on the lambda~ scale (log lambda for Dual)
    double scale = 1.0;
    bool on_log_scale = false;
};

struct PriorSpec {
    Family family = Family::BoxCox;
    std::variant<PowerPriorSpec, UnitInfoSpec> kind;

    PriorKind prior_kind() const {
        return std::holds_alternative<PowerPriorSpec>(kind) ? PriorKind::PowerPrior : PriorKind::UnitInfo;
    }
};

/// (1/n*) log f(y* | lambda, T): the unnormalized log power-prior.
double log_power_prior_kernel(Family family, const ImaginaryData& imaginary, double lambda);

/// Quadrature window used for the lambda~ integrals of `family`.
QuadratureOptions lambda_window(Family family);

/// log of the power-prior normalizer, integral of f(y*|lambda,T)^(1/n*) d lambda.
double power_prior_log_norm_const(Family family, const ImaginaryData& imaginary);
double power_prior_log_norm_const(const MarginalLikelihood& imaginary_likelihood);

/// Closed-form pieces of the observed Fisher information of (1/n*) log f(y*|lambda~).
struct FisherTerms {
    std::vector<double> z, w, d, r;
    double q = 0.0;                // second derivative of the Dual log-Jacobian; 0 otherwise
    double anchor = 1.0;           // lambda~ at which everything is evaluated
    double second_derivative = 0.0;
};

/// Vectors z, w, d, r and q at lambda = 1 (Box-Cox, Modulus, Yeo-Johnson) or at
/// log(dual_anchor) (Dual), and the resulting second derivative.
FisherTerms fisher_terms(Family family, const ImaginaryData& imaginary, double dual_anchor = kDefaultDualAnchor);

/// Unit-information prior scale sigma_lambda~ = (-second derivative)^(-1/2).
/// Throws NonPositiveCurvature when the curvature has the wrong sign.
double fisher_scale(Family family, const ImaginaryData& imaginary, double dual_anchor = kDefaultDualAnchor);

PriorSpec make_power_prior(Family family, std::shared_ptr<const ImaginaryData> imaginary);
PriorSpec make_unit_info_prior(Family family, const ImaginaryData& imaginary, double dual_anchor);
/// Unit-information prior with explicit location and scale on the lambda~ scale.
PriorSpec make_unit_info_prior(Family family, double location, double scale);

/// Normalized log density of lambda (on the lambda scale, including the 1/lambda factor
/// of the log-normal). -inf outside the support of the log-normal.
double log_prior_density(const PriorSpec& spec, double lambda);

/// Normalized log density of the sampling coordinate (lambda, or log lambda for Dual).
double log_prior_density_sampling(const PriorSpec& spec, double theta);

}  // namespace transel

#include "transel/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transel/errors.hpp"

namespace transel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

PosteriorTarget::PosteriorTarget(std::shared_ptr<const MarginalLikelihood> likelihood, PriorSpec prior)
    : likelihood_(std::move(likelihood)), prior_(std::move(prior)), log_scale_(traits(prior_.family).log_scale) {
    if (!likelihood_) throw Error(ErrorCode::InvalidArgument, "posterior target without likelihood");
    if (likelihood_->family() != prior_.family) {
        throw Error(ErrorCode::InvalidArgument, "likelihood and prior refer to different families");
    }
    if (!traits(prior_.family).has_lambda) {
        throw Error(ErrorCode::InvalidArgument, "posterior target needs a family with a transformation parameter");
    }
}

double PosteriorTarget::to_lambda(double theta) const { return log_scale_ ? std::exp(theta) : theta; }

double PosteriorTarget::to_sampling(double lambda) const { return log_scale_ ? std::log(lambda) : lambda; }

double PosteriorTarget::log_likelihood(double theta) const { return (*likelihood_)(to_lambda(theta)); }

double PosteriorTarget::log_prior(double theta) const { return log_prior_density_sampling(prior_, theta); }

double PosteriorTarget::log_kernel(double theta) const {
    if (!std::isfinite(theta)) return kNegInf;
    const double lambda = to_lambda(theta);
    if (!in_domain(family(), lambda)) return kNegInf;
    try {
        const double lp = log_prior(theta);
        if (lp == kNegInf) return kNegInf;
        const double v = (*likelihood_)(lambda) + lp;
        return std::isnan(v) ? kNegInf : v;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateTransform) return kNegInf;
        throw;
    }
}

double PosteriorTarget::chib_log_kernel(double theta) const {
    if (!std::isfinite(theta)) return kNegInf;
    const double lambda = to_lambda(theta);
    if (!in_domain(family(), lambda)) return kNegInf;
    try {
        const double h = (static_cast<double>(likelihood_->n()) - 1.0) / 2.0;
        double k = -h * likelihood_->log_sum_squares(lambda) + likelihood_->log_jacobian(lambda);
        if (const auto* power = std::get_if<PowerPriorSpec>(&prior_.kind)) {
            const MarginalLikelihood& imag = *power->imaginary_likelihood;
            const double ns = static_cast<double>(imag.n());
            const double hs = (ns - 1.0) / 2.0;
            k += (-hs * imag.log_sum_squares(lambda) + imag.log_jacobian(lambda)) / ns;
        } else {
            const auto& unit = std::get<UnitInfoSpec>(prior_.kind);
            const double u = (theta - unit.location) / unit.scale;
            k += -0.5 * u * u;
        }
        if (log_scale_ && std::holds_alternative<PowerPriorSpec>(prior_.kind)) k += theta;
        return std::isnan(k) ? kNegInf : k;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateTransform) return kNegInf;
        throw;
    }
}

QuadratureOptions PosteriorTarget::quadrature_window() const {
    QuadratureOptions opt = lambda_window(family());
    if (const auto* unit = std::get_if<UnitInfoSpec>(&prior_.kind)) {
        opt.hints.push_back(unit->location);
        // Narrow priors need the scan to land inside their support.
        for (double k : {-3.0, -1.0, 1.0, 3.0}) opt.hints.push_back(unit->location + k * unit->scale);
        opt.hard_lo = std::min(opt.hard_lo, unit->location - 40.0 * unit->scale);
        opt.hard_hi = std::max(opt.hard_hi, unit->location + 40.0 * unit->scale);
    }
    return opt;
}

double log_posterior_kernel(const MarginalLikelihood& likelihood, const PriorSpec& prior, double lambda) {
    if (likelihood.family() != prior.family) {
        throw Error(ErrorCode::InvalidArgument, "likelihood and prior refer to different families");
    }
    if (!in_domain(prior.family, lambda)) return kNegInf;
    const double lp = log_prior_density(prior, lambda);
    if (lp == kNegInf) return kNegInf;
    try {
        return likelihood(lambda) + lp;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateTransform) return kNegInf;
        throw;
    }
}

}  // namespace transel

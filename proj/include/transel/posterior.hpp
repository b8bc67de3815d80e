#pragma once

#include <memory>

#include "transel/likelihood.hpp"
#include "transel/numerics.hpp"
#include "transel/priors.hpp"

namespace transel {

/// Posterior of lambda for one (family, prior) pair, expressed on the sampling
/// coordinate theta: theta = lambda, or theta = log lambda for Dual.
class PosteriorTarget {
public:
    PosteriorTarget(std::shared_ptr<const MarginalLikelihood> likelihood, PriorSpec prior);

    const MarginalLikelihood& likelihood() const { return *likelihood_; }
    const PriorSpec& prior() const { return prior_; }
    Family family() const { return prior_.family; }
    bool log_scale() const { return log_scale_; }

    double to_lambda(double theta) const;
    double to_sampling(double lambda) const;

    /// log f(y | lambda(theta), T).
    double log_likelihood(double theta) const;
    /// Normalized prior log density of theta.
    double log_prior(double theta) const;
    /// log_likelihood + log_prior; -inf where the transformed data degenerate.
    double log_kernel(double theta) const;

    /// log K(theta): SS^(-(n-1)/2) |J| times the unnormalized prior factor
    /// (power likelihood of the imaginary data, or the normal kernel), plus the
    /// log-scale Jacobian for Dual. Differs from log_kernel by a theta-free constant.
    double chib_log_kernel(double theta) const;

    /// Quadrature window for integrals over theta.
    QuadratureOptions quadrature_window() const;

private:
    std::shared_ptr<const MarginalLikelihood> likelihood_;
    PriorSpec prior_;
    bool log_scale_;
};

/// log f(y | lambda, T) + log pi(lambda), on the lambda scale.
double log_posterior_kernel(const MarginalLikelihood& likelihood, const PriorSpec& prior, double lambda);

}  // namespace transel

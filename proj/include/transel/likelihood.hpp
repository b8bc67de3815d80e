#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "transel/transform.hpp"

namespace transel {

/// log C(n) = log Gamma((n-1)/2) - ((n-1)/2) log(pi) - (1/2) log(n): the factor left
/// after integrating (mu, sigma^2) out under the 1/sigma^2 reference prior.
double marginal_log_constant(std::size_t n);

/// log f(y | lambda, T) with location and scale integrated out:
///   C(n) - ((n-1)/2) log sum_i (y_i^(lambda) - mean)^2 + log|J(y, lambda | T)|.
/// The input vector is captured at construction (shifted for the families that need it)
/// together with the per-element logarithms the transforms are built from.
class MarginalLikelihood {
public:
    MarginalLikelihood(Family family, const PreparedData& data, bool include_constant = true);
    /// `input` is used as given; shift-requiring families need it strictly positive.
    MarginalLikelihood(Family family, std::span<const double> input, bool include_constant = true);

    double operator()(double lambda) const;

    /// log of the sum of squared deviations of the transformed data.
    double log_sum_squares(double lambda) const;
    double log_jacobian(double lambda) const;

    Family family() const { return family_; }
    std::size_t n() const { return input_.size(); }
    bool include_constant() const { return include_constant_; }
    double constant() const { return include_constant_ ? constant_ : 0.0; }
    std::span<const double> input() const { return input_; }

private:
    double transformed(std::size_t i, double lambda) const;

    Family family_;
    bool include_constant_;
    double constant_;
    std::vector<double> input_;
    std::vector<double> base_;       // y (Id), log y, or log(1 + |y|) depending on family
    std::vector<bool> negative_;
    double base_sum_pos_ = 0.0;      // sum of base_ over non-negative inputs
    double base_sum_neg_ = 0.0;
};

}  // namespace transel

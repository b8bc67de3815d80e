#include "transel/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "transel/errors.hpp"

namespace transel {

namespace {

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace

double marginal_log_constant(std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "marginal constant needs n >= 2");
    const double h = (static_cast<double>(n) - 1.0) / 2.0;
    return std::lgamma(h) - h * std::log(std::numbers::pi) - 0.5 * std::log(static_cast<double>(n));
}

MarginalLikelihood::MarginalLikelihood(Family family, const PreparedData& data, bool include_constant)
    : MarginalLikelihood(family, std::span<const double>(data.input_for(family)), include_constant) {}

MarginalLikelihood::MarginalLikelihood(Family family, std::span<const double> input, bool include_constant)
    : family_(family),
      include_constant_(include_constant),
      constant_(marginal_log_constant(input.size())),
      input_(input.begin(), input.end()) {
    if (input_.size() < 3) throw Error(ErrorCode::DegenerateData, "at least three observations are required");
    base_.resize(input_.size());
    negative_.resize(input_.size());
    const bool needs_positive = traits(family).requires_shift;
    for (std::size_t i = 0; i < input_.size(); ++i) {
        const double y = input_[i];
        if (!std::isfinite(y)) throw Error(ErrorCode::InvalidArgument, "non-finite observation");
        if (needs_positive && !(y > 0.0)) {
            std::ostringstream msg;
            msg << traits(family).label << " requires strictly positive input, got " << y << " at index " << i;
            throw Error(ErrorCode::NonPositiveInput, msg.str());
        }
        negative_[i] = y < 0.0;
        switch (family) {
            case Family::Id: base_[i] = y; break;
            case Family::Log:
            case Family::BoxCox:
            case Family::Dual: base_[i] = std::log(y); break;
            case Family::Modulus:
            case Family::YeoJohnson: base_[i] = std::log1p(std::abs(y)); break;
        }
        (negative_[i] ? base_sum_neg_ : base_sum_pos_) += base_[i];
    }
}

double MarginalLikelihood::transformed(std::size_t i, double lambda) const {
    if (lambda == 1.0) {
        if (family_ == Family::BoxCox) return input_[i] - 1.0;
        if (family_ == Family::Modulus || family_ == Family::YeoJohnson) return input_[i];
    }
    const double l = base_[i];
    switch (family_) {
        case Family::Id:
        case Family::Log:
            return l;
        case Family::BoxCox:
            return std::abs(lambda) < kBranchThreshold ? l : std::expm1(lambda * l) / lambda;
        case Family::Modulus: {
            const double v = std::abs(lambda) < kBranchThreshold ? l : std::expm1(lambda * l) / lambda;
            return negative_[i] ? -v : v;
        }
        case Family::YeoJohnson: {
            if (!negative_[i]) return std::abs(lambda) < kBranchThreshold ? l : std::expm1(lambda * l) / lambda;
            const double mu = 2.0 - lambda;
            return std::abs(mu) < kBranchThreshold ? -l : -std::expm1(mu * l) / mu;
        }
        case Family::Dual:
            return lambda < kBranchThreshold ? l : std::sinh(lambda * l) / lambda;
    }
    return l;
}

double MarginalLikelihood::log_sum_squares(double lambda) const {
    if (!in_domain(family_, lambda)) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " outside the domain of the " << traits(family_).label << " family";
        throw Error(ErrorCode::DomainError, msg.str());
    }
    thread_local std::vector<double> buffer;
    buffer.resize(input_.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < input_.size(); ++i) {
        buffer[i] = transformed(i, lambda);
        scale = std::max(scale, std::abs(buffer[i]));
    }
    if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
    if (scale == 0.0) throw Error(ErrorCode::DegenerateTransform, "transformed data are identically zero");
    double m = 0.0;
    for (double& v : buffer) {
        v /= scale;
        m += v;
    }
    m /= static_cast<double>(buffer.size());
    double ss = 0.0;
    for (double v : buffer) ss += (v - m) * (v - m);
    if (!(ss > 0.0)) throw Error(ErrorCode::DegenerateTransform, "transformed data have zero variance");
    return std::log(ss) + 2.0 * std::log(scale);
}

double MarginalLikelihood::log_jacobian(double lambda) const {
    switch (family_) {
        case Family::Id:
            return 0.0;
        case Family::Log:
            return -base_sum_pos_;
        case Family::BoxCox:
        case Family::Modulus:
            return (lambda - 1.0) * (base_sum_pos_ + base_sum_neg_);
        case Family::YeoJohnson:
            return (lambda - 1.0) * base_sum_pos_ + (1.0 - lambda) * base_sum_neg_;
        case Family::Dual: {
            double s = -base_sum_pos_;
            if (lambda >= kBranchThreshold) {
                for (double l : base_) s += log_cosh(lambda * l);
            }
            return s;
        }
    }
    return 0.0;
}

double MarginalLikelihood::operator()(double lambda) const {
    const double log_ss = log_sum_squares(lambda);
    if (!std::isfinite(log_ss)) return -std::numeric_limits<double>::infinity();
    const double h = (static_cast<double>(input_.size()) - 1.0) / 2.0;
    return constant() - h * log_ss + log_jacobian(lambda);
}

}  // namespace transel

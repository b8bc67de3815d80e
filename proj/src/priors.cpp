#include "transel/priors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "transel/errors.hpp"

namespace transel {

namespace {

constexpr double kDualSearchHi = 20.0;
constexpr int kDualGrid = 2000;

double normal_log_pdf(double x, double location, double scale) {
    const double u = (x - location) / scale;
    return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(scale) - 0.5 * u * u;
}

const MarginalLikelihood& imaginary_likelihood(const PowerPriorSpec& spec) {
    if (!spec.imaginary_likelihood) throw Error(ErrorCode::InvalidArgument, "power prior without imaginary data");
    return *spec.imaginary_likelihood;
}

double power_kernel(const MarginalLikelihood& lik, double lambda) {
    return lik(lambda) / static_cast<double>(lik.n());
}

}  // namespace

std::string_view name(ImaginarySource source) {
    return source == ImaginarySource::SimulatedStandardNormal ? "simulated" : "empirical";
}

std::string_view name(PriorKind kind) { return kind == PriorKind::PowerPrior ? "A" : "B"; }

ImaginaryData make_imaginary(std::size_t n_star, ImaginarySource source, std::uint64_t seed,
                             std::span<const double> observed) {
    ImaginaryData out;
    out.source = source;
    out.seed = seed;
    if (source == ImaginarySource::EmpiricalCopy) {
        if (observed.size() < 10) throw Error(ErrorCode::InvalidArgument, "empirical imaginary data need n* >= 10");
        out.data = prepare(observed);
        return out;
    }
    if (n_star < 10) throw Error(ErrorCode::InvalidArgument, "imaginary sample size n* must be >= 10");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> draws(n_star);
    for (double& v : draws) v = normal(rng);
    out.data = prepare(draws);
    return out;
}

DualAnchor estimate_dual_anchor(const ImaginaryData& imaginary) {
    const MarginalLikelihood lik(Family::Dual, imaginary.data, false);
    const double step = kDualSearchHi / kDualGrid;
    int best = 1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kDualGrid; ++k) {
        const double v = lik(step * k);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    if (best == 1 || best == kDualGrid || !std::isfinite(best_value)) return {};
    const double refined =
        golden_section_max([&](double l) { return lik(l); }, step * (best - 1), step * (best + 1), 1e-6);
    DualAnchor out;
    out.fallback = false;
    out.value = lik(refined) >= best_value ? refined : step * best;
    return out;
}

double log_power_prior_kernel(Family family, const ImaginaryData& imaginary, double lambda) {
    if (!in_domain(family, lambda)) throw Error(ErrorCode::DomainError, "lambda outside the family domain");
    return power_kernel(MarginalLikelihood(family, imaginary.data, true), lambda);
}

QuadratureOptions lambda_window(Family family) {
    QuadratureOptions opt;
    if (traits(family).log_scale) {
        opt.scan_lo = std::log(1e-4);
        opt.scan_hi = std::log(kDualSearchHi);
        opt.hard_lo = -60.0;
        opt.hard_hi = std::log(500.0);
    } else {
        opt.scan_lo = -5.0;
        opt.scan_hi = 7.0;
        opt.hard_lo = -200.0;
        opt.hard_hi = 200.0;
    }
    opt.step = 0.01;
    return opt;
}

double power_prior_log_norm_const(const MarginalLikelihood& lik) {
    const Family family = lik.family();
    if (!traits(family).has_lambda) {
        throw Error(ErrorCode::InvalidArgument, "power prior requires a family with a transformation parameter");
    }
    if (traits(family).log_scale) {
        return log_integrate([&](double eta) { return power_kernel(lik, std::exp(eta)) + eta; },
                             lambda_window(family))
            .log_value;
    }
    return log_integrate([&](double l) { return power_kernel(lik, l); }, lambda_window(family)).log_value;
}

double power_prior_log_norm_const(Family family, const ImaginaryData& imaginary) {
    return power_prior_log_norm_const(MarginalLikelihood(family, imaginary.data, true));
}

FisherTerms fisher_terms(Family family, const ImaginaryData& imaginary, double dual_anchor) {
    if (!traits(family).has_lambda) {
        throw Error(ErrorCode::InvalidArgument, "Fisher scale is defined only for parametric families");
    }
    if (family == Family::Dual && !(dual_anchor > 0.0)) {
        throw Error(ErrorCode::DomainError, "Dual anchor must be positive");
    }
    const std::vector<double> y = imaginary.data.input_for(family);
    const std::size_t n = y.size();
    FisherTerms t;
    t.z.resize(n);
    t.w.resize(n);
    t.d.resize(n);
    t.r.resize(n);
    switch (family) {
        case Family::BoxCox:
            for (std::size_t i = 0; i < n; ++i) {
                const double l = std::log(y[i]);
                t.z[i] = y[i] - 1.0;
                t.w[i] = y[i] * l;
                t.d[i] = t.z[i];
                t.r[i] = t.w[i] * l - 2.0 * (t.w[i] - t.z[i]);
            }
            break;
        case Family::Modulus:
            for (std::size_t i = 0; i < n; ++i) {
                const double s = y[i] < 0.0 ? -1.0 : 1.0;
                const double l = std::log1p(std::abs(y[i]));
                t.z[i] = y[i];
                t.w[i] = s * (std::abs(y[i]) + 1.0) * l;
                t.d[i] = t.z[i];
                t.r[i] = t.w[i] * l - 2.0 * (t.w[i] - t.z[i]);
            }
            break;
        case Family::YeoJohnson:
            for (std::size_t i = 0; i < n; ++i) {
                const double s = y[i] < 0.0 ? -1.0 : 1.0;
                const double l = std::log1p(std::abs(y[i]));
                t.z[i] = y[i];
                t.w[i] = (std::abs(y[i]) + 1.0) * l;
                t.d[i] = std::abs(t.z[i]);
                t.r[i] = s * t.w[i] * l - 2.0 * (s * t.w[i] - t.z[i]);
            }
            break;
        case Family::Dual: {
            const double lam = dual_anchor;
            t.anchor = std::log(lam);
            for (std::size_t i = 0; i < n; ++i) {
                const double l = std::log(y[i]);
                const double a = lam * l;
                t.z[i] = std::sinh(a) / lam;
                t.w[i] = std::cosh(a) * l;
                t.d[i] = t.z[i];
                t.r[i] = t.z[i] * lam * lam * l * l - (t.w[i] - t.z[i]);
                // d^2/d eta^2 of log cosh(lam log y), eta = log lam
                const double c = std::cosh(a);
                t.q += l * (std::sinh(2.0 * a) + 2.0 * a) / (2.0 * c * c);
            }
            t.q *= lam;
            break;
        }
        default:
            break;
    }
    std::vector<double> w_minus_d(n);
    for (std::size_t i = 0; i < n; ++i) w_minus_d[i] = t.w[i] - t.d[i];
    const double s2z = sample_variance(t.z);
    const double s2wd = sample_variance(w_minus_d);
    const double szr = sample_covariance(t.z, t.r);
    const double szw = sample_covariance(t.z, t.w);
    const double szd = sample_covariance(t.z, t.d);
    const double ns = static_cast<double>(n);
    const double ratio = (szw - szd) / s2z;
    t.second_derivative = t.q / ns - ((ns - 1.0) / ns) * ((s2wd + szr) / s2z - 2.0 * ratio * ratio);
    return t;
}

double fisher_scale(Family family, const ImaginaryData& imaginary, double dual_anchor) {
    const FisherTerms t = fisher_terms(family, imaginary, dual_anchor);
    if (!(t.second_derivative < 0.0) || !std::isfinite(t.second_derivative)) {
        std::ostringstream msg;
        msg << "non-negative curvature " << t.second_derivative << " for " << traits(family).label
            << " at lambda~ = " << t.anchor;
        throw Error(ErrorCode::NonPositiveCurvature, msg.str());
    }
    return 1.0 / std::sqrt(-t.second_derivative);
}

PriorSpec make_power_prior(Family family, std::shared_ptr<const ImaginaryData> imaginary) {
    if (!imaginary) throw Error(ErrorCode::InvalidArgument, "power prior needs imaginary data");
    PowerPriorSpec spec;
    spec.imaginary_likelihood = std::make_shared<const MarginalLikelihood>(family, imaginary->data, true);
    spec.imaginary = std::move(imaginary);
    spec.log_norm_const = power_prior_log_norm_const(*spec.imaginary_likelihood);
    return PriorSpec{family, std::move(spec)};
}

PriorSpec make_unit_info_prior(Family family, const ImaginaryData& imaginary, double dual_anchor) {
    const double location = family == Family::Dual ? std::log(dual_anchor) : 1.0;
    return make_unit_info_prior(family, location, fisher_scale(family, imaginary, dual_anchor));
}

PriorSpec make_unit_info_prior(Family family, double location, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(location)) {
        throw Error(ErrorCode::InvalidArgument, "unit-information prior needs finite location and positive scale");
    }
    return PriorSpec{family, UnitInfoSpec{location, scale, traits(family).log_scale}};
}

double log_prior_density(const PriorSpec& spec, double lambda) {
    if (const auto* unit = std::get_if<UnitInfoSpec>(&spec.kind)) {
        if (!unit->on_log_scale) return normal_log_pdf(lambda, unit->location, unit->scale);
        if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
        const double l = std::log(lambda);
        return normal_log_pdf(l, unit->location, unit->scale) - l;
    }
    const auto& power = std::get<PowerPriorSpec>(spec.kind);
    if (!in_domain(spec.family, lambda)) throw Error(ErrorCode::DomainError, "lambda outside the family domain");
    if (std::isnan(power.log_norm_const)) throw Error(ErrorCode::InvalidArgument, "power prior not normalized");
    return power_kernel(imaginary_likelihood(power), lambda) - power.log_norm_const;
}

double log_prior_density_sampling(const PriorSpec& spec, double theta) {
    if (!traits(spec.family).log_scale) return log_prior_density(spec, theta);
    if (const auto* unit = std::get_if<UnitInfoSpec>(&spec.kind)) {
        return normal_log_pdf(theta, unit->location, unit->scale);
    }
    return log_prior_density(spec, std::exp(theta)) + theta;
}

}  // namespace transel

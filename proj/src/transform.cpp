#include "transel/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "transel/errors.hpp"
#include "transel/numerics.hpp"

namespace transel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<FamilyTraits, 6> kTraits = {{
    {Family::Id, "id", "Id", false, false, 0.0, 0.0, false},
    {Family::Log, "log", "Log", false, true, 0.0, 0.0, false},
    {Family::BoxCox, "boxcox", "Box-Cox", true, true, -kInf, kInf, false},
    {Family::Modulus, "modulus", "Modulus", true, false, -kInf, kInf, false},
    {Family::YeoJohnson, "yj", "Yeo-Johnson", true, false, -kInf, kInf, false},
    {Family::Dual, "dual", "Dual", true, true, 0.0, kInf, true},
}};

// log(cosh(x)) without overflow.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

void check_lambda(Family family, double lambda) {
    if (!in_domain(family, lambda)) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " outside the domain of the " << traits(family).label << " family";
        throw Error(ErrorCode::DomainError, msg.str());
    }
}

void check_input(Family family, double y) {
    const bool needs_positive = family == Family::Log || family == Family::BoxCox || family == Family::Dual;
    if (!std::isfinite(y)) throw Error(ErrorCode::InvalidArgument, "non-finite observation");
    if (needs_positive && !(y > 0.0)) {
        std::ostringstream msg;
        msg << traits(family).label << " requires strictly positive input, got " << y;
        throw Error(ErrorCode::NonPositiveInput, msg.str());
    }
}

double transform_unchecked(Family family, double y, double lambda) {
    switch (family) {
        case Family::Id:
            return y;
        case Family::Log:
            return std::log(y);
        case Family::BoxCox: {
            if (lambda == 1.0) return y - 1.0;
            const double l = std::log(y);
            return std::abs(lambda) < kBranchThreshold ? l : std::expm1(lambda * l) / lambda;
        }
        case Family::Modulus: {
            if (lambda == 1.0) return y;
            const double s = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
            const double l = std::log1p(std::abs(y));
            return std::abs(lambda) < kBranchThreshold ? s * l : s * std::expm1(lambda * l) / lambda;
        }
        case Family::YeoJohnson: {
            if (lambda == 1.0) return y;
            if (y >= 0.0) {
                const double l = std::log1p(y);
                return std::abs(lambda) < kBranchThreshold ? l : std::expm1(lambda * l) / lambda;
            }
            const double l = std::log1p(-y);
            const double mu = 2.0 - lambda;
            return std::abs(mu) < kBranchThreshold ? -l : -std::expm1(mu * l) / mu;
        }
        case Family::Dual: {
            const double l = std::log(y);
            // (y^lambda - y^-lambda) / (2 lambda) == sinh(lambda log y) / lambda
            return lambda < kBranchThreshold ? l : std::sinh(lambda * l) / lambda;
        }
    }
    return y;
}

double log_derivative_unchecked(Family family, double y, double lambda) {
    switch (family) {
        case Family::Id:
            return 0.0;
        case Family::Log:
            return -std::log(y);
        case Family::BoxCox:
            return (lambda - 1.0) * std::log(y);
        case Family::Modulus:
            return (lambda - 1.0) * std::log1p(std::abs(y));
        case Family::YeoJohnson:
            return y >= 0.0 ? (lambda - 1.0) * std::log1p(y) : (1.0 - lambda) * std::log1p(-y);
        case Family::Dual: {
            const double l = std::log(y);
            return -l + (lambda < kBranchThreshold ? 0.0 : log_cosh(lambda * l));
        }
    }
    return 0.0;
}

}  // namespace

const FamilyTraits& traits(Family family) { return kTraits[static_cast<std::size_t>(family)]; }

std::string_view name(Family family) { return traits(family).name; }

std::optional<Family> family_from_name(std::string_view name) {
    for (const auto& t : kTraits) {
        if (t.name == name) return t.family;
    }
    if (name == "box-cox" || name == "bc") return Family::BoxCox;
    if (name == "mod") return Family::Modulus;
    if (name == "yeojohnson" || name == "yeo-johnson") return Family::YeoJohnson;
    if (name == "identity") return Family::Id;
    return std::nullopt;
}

bool in_domain(Family family, double lambda) {
    const auto& t = traits(family);
    if (!t.has_lambda) return true;
    return std::isfinite(lambda) && lambda >= t.lambda_lo && lambda <= t.lambda_hi;
}

std::vector<double> PreparedData::input_for(Family f) const {
    if (!traits(f).requires_shift) return standardized;
    if (!shift_set) throw Error(ErrorCode::InvalidArgument, "shift not computed for prepared data");
    std::vector<double> out(standardized);
    for (double& v : out) v += shift_xi;
    return out;
}

PreparedData standardize(std::span<const double> raw) {
    if (raw.size() < 3) throw Error(ErrorCode::DegenerateData, "at least three observations are required");
    for (double v : raw) {
        if (!std::isfinite(v)) throw Error(ErrorCode::DegenerateData, "observations must be finite");
    }
    const double m = mean(raw);
    const double sd = sample_sd(raw);
    if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateData, "observations have zero variance");
    PreparedData out;
    out.raw.assign(raw.begin(), raw.end());
    out.standardized.reserve(raw.size());
    for (double v : raw) out.standardized.push_back((v - m) / sd);
    return out;
}

Shift compute_shift(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "cannot shift an empty vector");
    const double lo = *std::min_element(values.begin(), values.end());
    if (lo > 0.0) return {};
    double gap = std::numeric_limits<double>::infinity();
    for (double v : values) {
        const double d = v - lo;
        if (d > 0.0) gap = std::min(gap, d);
    }
    if (!std::isfinite(gap)) throw Error(ErrorCode::DegenerateData, "all values are equal; no positive gap");
    Shift s;
    s.epsilon = gap / 2.0;
    s.xi = std::abs(lo) + s.epsilon;
    return s;
}

PreparedData prepare(std::span<const double> raw) {
    PreparedData out = standardize(raw);
    const Shift s = compute_shift(out.standardized);
    out.shift_xi = s.xi;
    out.epsilon = s.epsilon;
    out.shift_set = true;
    return out;
}

double transform_value(Family family, double y, double lambda) {
    check_lambda(family, lambda);
    check_input(family, y);
    return transform_unchecked(family, y, lambda);
}

double log_abs_derivative(Family family, double y, double lambda) {
    check_lambda(family, lambda);
    check_input(family, y);
    return log_derivative_unchecked(family, y, lambda);
}

std::vector<double> forward(Family family, std::span<const double> values, double lambda) {
    check_lambda(family, lambda);
    std::vector<double> out;
    out.reserve(values.size());
    for (double y : values) {
        check_input(family, y);
        out.push_back(transform_unchecked(family, y, lambda));
    }
    return out;
}

std::vector<double> forward(Family family, const PreparedData& data, double lambda) {
    return forward(family, std::span<const double>(data.input_for(family)), lambda);
}

double log_jacobian(Family family, std::span<const double> values, double lambda) {
    check_lambda(family, lambda);
    double s = 0.0;
    for (double y : values) {
        check_input(family, y);
        s += log_derivative_unchecked(family, y, lambda);
    }
    return s;
}

double log_jacobian(Family family, const PreparedData& data, double lambda) {
    return log_jacobian(family, std::span<const double>(data.input_for(family)), lambda);
}

}  // namespace transel

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace transel {

/// The six candidate families, in the fixed order used for tie-breaking.
enum class Family { Id, Log, BoxCox, Modulus, YeoJohnson, Dual };

inline constexpr std::array<Family, 6> kAllFamilies = {
    Family::Id, Family::Log, Family::BoxCox, Family::Modulus, Family::YeoJohnson, Family::Dual};

struct FamilyTraits {
    Family family;
    std::string_view name;      // short machine name, e.g. "boxcox"
    std::string_view label;     // display name, e.g. "Box-Cox"
    bool has_lambda;
    bool requires_shift;
    double lambda_lo;           // closed lower bound of the parameter domain
    double lambda_hi;
    bool log_scale;             // sampled and integrated on log(lambda)
};

const FamilyTraits& traits(Family family);
std::string_view name(Family family);
std::optional<Family> family_from_name(std::string_view name);

/// Whether lambda lies in the family's parameter domain (always true for Id and Log).
bool in_domain(Family family, double lambda);

/// Observations after z-scoring, plus the shift applied to the families that need
/// strictly positive input.
struct PreparedData {
    std::vector<double> raw;
    std::vector<double> standardized;
    double shift_xi = 0.0;
    double epsilon = 0.0;
    bool shift_set = false;

    std::size_t n() const { return standardized.size(); }

    /// The vector family `f` is applied to: standardized data, shifted by xi for
    /// Log, Box-Cox and Dual.
    std::vector<double> input_for(Family f) const;
};

struct Shift {
    double xi = 0.0;
    double epsilon = 0.0;
};

/// z-scores with the unbiased sample standard deviation. Shift fields are left unset.
PreparedData standardize(std::span<const double> raw);

/// xi = |min| + eps with eps half the smallest strictly positive gap to the minimum;
/// no shift when every value is already positive.
Shift compute_shift(std::span<const double> values);

/// standardize() followed by compute_shift() on the standardized values.
PreparedData prepare(std::span<const double> raw);

// Elementwise maps on an already shifted value.
double transform_value(Family family, double y, double lambda);
double log_abs_derivative(Family family, double y, double lambda);

std::vector<double> forward(Family family, std::span<const double> values, double lambda);
std::vector<double> forward(Family family, const PreparedData& data, double lambda);

/// log|J| = sum_i log|d y_i^(lambda) / d y_i|.
double log_jacobian(Family family, std::span<const double> values, double lambda);
double log_jacobian(Family family, const PreparedData& data, double lambda);

/// Below these distances the lambda = 0 (and Yeo-Johnson lambda = 2) branches are used.
inline constexpr double kBranchThreshold = 1e-10;

}  // namespace transel

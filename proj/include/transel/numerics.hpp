#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace transel {

// Plain sample statistics (unbiased, n - 1 denominators).
double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);
double sample_skewness(std::span<const double> x);

/// log(sum(exp(x))) without overflow. Returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x);

/// Standard error of the mean of a (possibly autocorrelated) series by
/// non-overlapping batch means. Trailing elements that do not fill a batch are dropped.
double batch_means_se(std::span<const double> x, int batches = 50);

/// Maximizer of f on [lo, hi] by golden-section search; f must be unimodal there.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-8);

struct QuadratureOptions {
    double scan_lo = -5.0;     // coarse scan window used to locate the mass
    double scan_hi = 7.0;
    double step = 0.01;        // coarse scan spacing
    double hard_lo = -60.0;    // limits the support search may not cross
    double hard_hi = 60.0;
    double tail_tol = 1e-12;   // endpoint density relative to the peak
    double rel_tol = 1e-11;    // Simpson refinement stopping rule
    std::vector<double> hints; // extra abscissae scanned in addition to the grid
};

struct QuadratureResult {
    double log_value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double peak = 0.0;         // abscissa of the largest integrand value seen
    int evaluations = 0;
};

/// log of the integral of exp(log_f(x)) over the real line (restricted to the hard
/// limits). The support is located by a coarse scan plus an outward doubling search
/// from the peak, then integrated by composite Simpson refinement in a scaled space.
/// Throws IntegrationFailure when the integrand has not decayed at the hard limits.
QuadratureResult log_integrate(const std::function<double(double)>& log_f,
                               const QuadratureOptions& options = {});

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

}  // namespace transel

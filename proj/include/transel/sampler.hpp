#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "transel/posterior.hpp"

namespace transel {

struct MhConfig {
    int burn_in = 4000;
    int draws = 16000;           // M, post burn-in
    double initial_step = 0.5;   // proposal sd on the sampling scale
    double target_lo = 0.3;
    double target_hi = 0.5;
    int adapt_window = 50;
    std::uint64_t seed = 1;
    std::optional<double> initial;  // starting theta; grid argmax of the kernel when unset

    /// Throws InvalidArgument on an unusable configuration.
    void validate() const;
};

struct PosteriorChain {
    std::vector<double> draws;            // lambda scale
    std::vector<double> sampling_draws;   // theta scale (log lambda for Dual)
    std::vector<double> log_posterior;    // log kernel at each draw
    double accept_rate = 0.0;
    double step_sd = 0.0;                 // tuned proposal sd, sqrt(k*)
    double mode = 0.0;                    // lambda*
    double mode_sampling = 0.0;           // theta*
    double posterior_sd = 0.0;            // sd of the lambda draws
    bool log_scale = false;
};

/// Random-walk core on an arbitrary log density. Draws, mode and sd are left on the
/// theta scale (draws == sampling_draws).
PosteriorChain sample_random_walk(const std::function<double(double)>& log_density, double start,
                                  const MhConfig& config);

/// Gaussian random-walk Metropolis-Hastings on theta. The proposal sd is adapted by a
/// Robbins-Monro recursion on windowed acceptance during burn-in, then frozen.
/// Throws MixingFailure when post burn-in acceptance is outside [0.05, 0.95].
PosteriorChain run_mh(const PosteriorTarget& target, const MhConfig& config);

struct PosteriorSummary {
    double mode = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

/// Mode from the chain; mean and unbiased sd of the lambda draws.
PosteriorSummary posterior_summary(const PosteriorChain& chain);

/// Grid argmax of the kernel over the family's scan window.
double kernel_grid_argmax(const PosteriorTarget& target);

}  // namespace transel

#include "transel/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "transel/errors.hpp"
#include "transel/numerics.hpp"

namespace transel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void MhConfig::validate() const {
    if (draws < 1000) throw Error(ErrorCode::InvalidArgument, "MH needs at least 1000 post burn-in draws");
    if (burn_in < 0) throw Error(ErrorCode::InvalidArgument, "burn-in must be non-negative");
    if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
        throw Error(ErrorCode::InvalidArgument, "initial proposal sd must be positive");
    }
    if (!(target_lo > 0.0 && target_lo < target_hi && target_hi < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "target acceptance band must lie inside (0, 1)");
    }
    if (adapt_window < 1) throw Error(ErrorCode::InvalidArgument, "adaptation window must be positive");
    if (initial && !std::isfinite(*initial)) throw Error(ErrorCode::InvalidArgument, "initial value must be finite");
}

double kernel_grid_argmax(const PosteriorTarget& target) {
    const double lo = target.log_scale() ? -8.0 : -5.0;
    const double hi = target.log_scale() ? 3.0 : 7.0;
    std::vector<double> grid;
    for (int i = 0; lo + 0.1 * i <= hi + 1e-12; ++i) grid.push_back(lo + 0.1 * i);
    if (const auto* unit = std::get_if<UnitInfoSpec>(&target.prior().kind)) grid.push_back(unit->location);
    double best = grid.front();
    double best_value = kNegInf;
    for (double x : grid) {
        const double v = target.log_kernel(x);
        if (v > best_value) {
            best_value = v;
            best = x;
        }
    }
    if (best_value == kNegInf) throw Error(ErrorCode::DegenerateTransform, "posterior kernel vanishes on the start grid");
    return best;
}

PosteriorChain sample_random_walk(const std::function<double(double)>& log_density, double start,
                                  const MhConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    double theta = start;
    double current = log_density(theta);
    if (!(current > kNegInf)) throw Error(ErrorCode::InvalidArgument, "MH start has zero posterior density");

    double log_step = std::log(config.initial_step);
    const double target_rate = 0.5 * (config.target_lo + config.target_hi);
    int window_accepts = 0;
    int window_count = 0;
    int adaptations = 0;

    auto step = [&]() {
        const double proposal = theta + std::exp(log_step) * normal(rng);
        const double value = log_density(proposal);
        const double u = uniform(rng);
        if (value > kNegInf && std::log(u) < value - current) {
            theta = proposal;
            current = value;
            return true;
        }
        return false;
    };

    for (int it = 0; it < config.burn_in; ++it) {
        window_accepts += step() ? 1 : 0;
        if (++window_count == config.adapt_window) {
            const double rate = static_cast<double>(window_accepts) / window_count;
            ++adaptations;
            log_step += 1.5 / std::sqrt(static_cast<double>(adaptations)) * (rate - target_rate);
            log_step = std::clamp(log_step, std::log(1e-6), std::log(1e3));
            window_accepts = 0;
            window_count = 0;
        }
    }

    PosteriorChain chain;
    chain.step_sd = std::exp(log_step);
    const auto m = static_cast<std::size_t>(config.draws);
    chain.sampling_draws.reserve(m);
    chain.log_posterior.reserve(m);
    std::size_t accepts = 0;
    for (std::size_t it = 0; it < m; ++it) {
        accepts += step() ? 1 : 0;
        chain.sampling_draws.push_back(theta);
        chain.log_posterior.push_back(current);
    }
    chain.accept_rate = static_cast<double>(accepts) / static_cast<double>(m);
    if (chain.accept_rate < 0.05 || chain.accept_rate > 0.95) {
        std::ostringstream msg;
        msg << "post burn-in acceptance " << chain.accept_rate << " with proposal sd " << chain.step_sd;
        throw Error(ErrorCode::MixingFailure, msg.str());
    }

    const auto best = static_cast<std::size_t>(
        std::max_element(chain.log_posterior.begin(), chain.log_posterior.end()) - chain.log_posterior.begin());
    double mode = chain.sampling_draws[best];
    const double width = 3.0 * chain.step_sd;
    const double refined = golden_section_max(log_density, mode - width, mode + width, 1e-9);
    if (log_density(refined) >= chain.log_posterior[best]) mode = refined;
    chain.mode_sampling = mode;
    chain.mode = mode;
    chain.draws = chain.sampling_draws;
    chain.posterior_sd = sample_sd(chain.draws);
    return chain;
}

PosteriorChain run_mh(const PosteriorTarget& target, const MhConfig& config) {
    config.validate();
    const double start = config.initial ? *config.initial : kernel_grid_argmax(target);
    PosteriorChain chain;
    try {
        chain = sample_random_walk([&](double x) { return target.log_kernel(x); }, start, config);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::MixingFailure) throw;
        throw Error(ErrorCode::MixingFailure, std::string(traits(target.family()).label) + ": " + e.what());
    }
    chain.log_scale = target.log_scale();
    if (chain.log_scale) {
        for (double& v : chain.draws) v = std::exp(v);
        chain.mode = std::exp(chain.mode_sampling);
        chain.posterior_sd = sample_sd(chain.draws);
    }
    return chain;
}

PosteriorSummary posterior_summary(const PosteriorChain& chain) {
    if (chain.draws.empty()) throw Error(ErrorCode::InvalidArgument, "empty chain");
    PosteriorSummary s;
    s.mode = chain.mode;
    s.mean = mean(chain.draws);
    s.sd = chain.draws.size() > 1 ? sample_sd(chain.draws) : 0.0;
    return s;
}

}  // namespace transel

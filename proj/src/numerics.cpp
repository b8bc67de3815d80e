#include "transel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "transel/errors.hpp"

namespace transel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double finite_or_neg_inf(double v) { return std::isfinite(v) || v == kNegInf ? v : kNegInf; }

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "mean of empty vector");
    // Deviations from the first element keep constant vectors exact.
    const double pivot = x.front();
    double s = 0.0;
    for (double v : x) s += v - pivot;
    return pivot + s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "variance needs at least two values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "covariance needs two equal-length vectors of size >= 2");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

double sample_skewness(std::span<const double> x) {
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

double log_sum_exp(std::span<const double> x) {
    double hi = kNegInf;
    for (double v : x) hi = std::max(hi, v);
    if (hi == kNegInf) return kNegInf;
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double v : x) s += std::exp(v - hi);
    return hi + std::log(s);
}

double batch_means_se(std::span<const double> x, int batches) {
    if (batches < 2) throw Error(ErrorCode::InvalidArgument, "batch means needs at least two batches");
    const std::size_t size = x.size() / static_cast<std::size_t>(batches);
    if (size == 0) throw Error(ErrorCode::InvalidArgument, "series shorter than the number of batches");
    std::vector<double> means(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b) {
        means[static_cast<std::size_t>(b)] = mean(x.subspan(static_cast<std::size_t>(b) * size, size));
    }
    return std::sqrt(sample_variance(means) / batches);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "golden section needs lo < hi");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = finite_or_neg_inf(f(c));
    double fd = finite_or_neg_inf(f(d));
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = finite_or_neg_inf(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = finite_or_neg_inf(f(d));
        }
    }
    return 0.5 * (a + b);
}

QuadratureResult log_integrate(const std::function<double(double)>& log_f, const QuadratureOptions& opt) {
    if (!(opt.scan_lo < opt.scan_hi) || !(opt.step > 0.0) || !(opt.hard_lo <= opt.scan_lo) ||
        !(opt.hard_hi >= opt.scan_hi)) {
        throw Error(ErrorCode::InvalidArgument, "inconsistent quadrature window");
    }
    QuadratureResult out;
    auto eval = [&](double x) {
        ++out.evaluations;
        return finite_or_neg_inf(log_f(x));
    };

    // Coarse scan.
    std::vector<std::pair<double, double>> scanned;
    const auto steps = static_cast<std::size_t>(std::ceil((opt.scan_hi - opt.scan_lo) / opt.step));
    scanned.reserve(steps + 1 + opt.hints.size());
    for (std::size_t i = 0; i <= steps; ++i) {
        const double x = std::min(opt.scan_lo + static_cast<double>(i) * opt.step, opt.scan_hi);
        scanned.emplace_back(x, eval(x));
    }
    for (double h : opt.hints) {
        if (h > opt.hard_lo && h < opt.hard_hi) scanned.emplace_back(h, eval(h));
    }
    auto best = std::max_element(scanned.begin(), scanned.end(),
                                 [](const auto& l, const auto& r) { return l.second < r.second; });
    if (best->second == kNegInf) {
        throw Error(ErrorCode::IntegrationFailure, "integrand vanishes on the whole scan window");
    }
    double peak_x = best->first;
    double peak = best->second;
    const double cut_gap = 50.0;
    const double tail_gap = -std::log(opt.tail_tol);

    // Walk outward from the peak with doubling steps until the integrand is negligible.
    auto walk = [&](double dir) {
        double s = 1e-7 * std::max(1.0, std::abs(peak_x));
        for (;;) {
            double x = peak_x + dir * s;
            const double limit = dir < 0 ? opt.hard_lo : opt.hard_hi;
            if ((dir < 0 && x <= limit) || (dir > 0 && x >= limit)) {
                const double g = eval(limit);
                if (g > peak - tail_gap) {
                    std::ostringstream msg;
                    msg << "integrand has not decayed at the integration limit " << limit;
                    throw Error(ErrorCode::IntegrationFailure, msg.str());
                }
                return limit;
            }
            const double g = eval(x);
            if (g > peak) {
                peak = g;
                peak_x = x;
            }
            if (g < peak - cut_gap) return x;
            s *= 2.0;
        }
    };
    double lo = walk(-1.0);
    double hi = walk(+1.0);

    // Secondary regions seen in the scan but outside the bracket.
    for (const auto& [x, g] : scanned) {
        if (g >= peak - cut_gap) {
            lo = std::min(lo, std::max(opt.hard_lo, x - opt.step));
            hi = std::max(hi, std::min(opt.hard_hi, x + opt.step));
        }
    }
    for (int guard = 0; guard < 200; ++guard) {
        bool moved = false;
        const double width = hi - lo;
        if (lo > opt.hard_lo && eval(lo) >= peak - cut_gap) {
            lo = std::max(opt.hard_lo, lo - 0.5 * width);
            moved = true;
        }
        if (hi < opt.hard_hi && eval(hi) >= peak - cut_gap) {
            hi = std::min(opt.hard_hi, hi + 0.5 * width);
            moved = true;
        }
        if (!moved) break;
    }
    if (eval(lo) > peak - tail_gap || eval(hi) > peak - tail_gap) {
        throw Error(ErrorCode::IntegrationFailure, "integrand has not decayed at the integration limits");
    }

    // Composite Simpson with interval doubling on exp(log_f - peak).
    std::vector<double> values;
    std::size_t intervals = 128;
    values.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
        values[i] = std::exp(eval(x) - peak);
    }
    auto simpson = [&]() {
        double s = values.front() + values.back();
        for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
        return s * (hi - lo) / static_cast<double>(intervals) / 3.0;
    };
    double previous = simpson();
    constexpr std::size_t kMaxIntervals = std::size_t{1} << 20;
    for (;;) {
        std::vector<double> refined(2 * intervals + 1);
        for (std::size_t i = 0; i <= intervals; ++i) refined[2 * i] = values[i];
        for (std::size_t i = 0; i < intervals; ++i) {
            const double x = lo + (hi - lo) * (static_cast<double>(2 * i + 1)) / static_cast<double>(2 * intervals);
            refined[2 * i + 1] = std::exp(eval(x) - peak);
        }
        values = std::move(refined);
        intervals *= 2;
        const double current = simpson();
        if (std::abs(current - previous) <= opt.rel_tol * std::abs(current) && intervals >= 512) {
            previous = current;
            break;
        }
        previous = current;
        if (intervals >= kMaxIntervals) {
            throw Error(ErrorCode::IntegrationFailure, "Simpson refinement did not converge");
        }
    }
    if (!(previous > 0.0)) throw Error(ErrorCode::IntegrationFailure, "integral underflowed");
    out.log_value = peak + std::log(previous);
    out.lo = lo;
    out.hi = hi;
    out.peak = peak_x;
    return out;
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix_seed(base);
    for (std::uint64_t p : path) s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return s;
}

}  // namespace transel

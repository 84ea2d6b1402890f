#include "pvcomp/rng.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ (index + 1) * 0xD6E8FEB86659FD93ULL));
}

double Rng::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 shifted away from 0 to keep the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

long Rng::binomial(long n, double p) {
    if (n < 0) throw InvalidInput("binomial: n < 0");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;

    const double u = uniform01();
    const long mode = static_cast<long>(std::floor((n + 1) * p));
    const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                                std::lgamma(n - mode + 1.0) + mode * std::log(p) +
                                (n - mode) * std::log1p(-p);
    const double pmf_mode = std::exp(log_pmf_mode);

    // Walk outward from the mode, alternating up/down; the enumeration
    // order is fixed, so this is a well-defined inverse-CDF sampler.
    double cum = pmf_mode;
    if (u < cum) return mode;
    double up = pmf_mode, down = pmf_mode;
    long hi = mode, lo = mode;
    const double ratio = p / (1.0 - p);
    while (hi < n || lo > 0) {
        if (hi < n) {
            up *= ratio * (n - hi) / (hi + 1.0);
            ++hi;
            cum += up;
            if (u < cum) return hi;
        }
        if (lo > 0) {
            down *= (1.0 / ratio) * lo / (n - lo + 1.0);
            --lo;
            cum += down;
            if (u < cum) return lo;
        }
    }
    return mode;  // cumulative shortfall from rounding; mode is the safe answer
}

std::vector<long> Rng::multinomial(long n, std::span<const double> probs) {
    std::vector<long> out(probs.size(), 0);
    long rem = n;
    double mass = 1.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        if (rem == 0) break;
        double p = probs[k] / mass;
        if (p > 1.0) p = 1.0;
        if (p < 0.0) p = 0.0;
        const long draw = binomial(rem, p);
        out[k] = draw;
        rem -= draw;
        mass -= probs[k];
        if (mass <= 0.0) break;
    }
    if (!probs.empty()) out[probs.size() - 1] = rem;
    return out;
}

}  // namespace pvcomp

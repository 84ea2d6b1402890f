#ifndef PVCOMP_RNG_HPP
#define PVCOMP_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pvcomp {

/// Deterministic random source. All variate mappings are hand-rolled on
/// top of the raw mt19937_64 stream so that identical seeds give
/// identical draws on every platform (the std distribution objects are
/// implementation-defined and would break that).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Independent substream keyed by (seed, index); used to make
    /// parallel replicates schedule-invariant.
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    double uniform01();  // [0, 1)
    double normal();     // standard normal, Box-Muller

    /// Binomial(n, p) by inversion anchored at the mode, so large n and
    /// mid-range p do not underflow the k=0 start.
    long binomial(long n, double p);

    /// One multinomial draw by sequential binomial conditioning.
    std::vector<long> multinomial(long n, std::span<const double> probs);

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pvcomp

#endif

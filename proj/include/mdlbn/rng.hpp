#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace mdlbn
{

/// Seedable generator with a platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so uniform doubles are built directly from the top
/// 53 bits of each draw. One Rng is created per run and consumed in row-major
/// order by the samplers.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n). Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Index drawn from a probability row by inverse CDF.
    std::size_t categorical(std::span<const double> probs)
    {
        const double u = uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            acc += probs[k];
            if (u < acc)
                return k;
        }
        // rounding left u above the accumulated mass; take the last nonzero entry
        for (std::size_t k = probs.size(); k-- > 0;)
            if (probs[k] > 0.0)
                return k;
        return probs.size() - 1;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace mdlbn

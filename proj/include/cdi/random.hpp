#ifndef CDI_RANDOM_HPP
#define CDI_RANDOM_HPP

#include <cstdint>
#include <random>

namespace cdi {

// mt19937_64 with platform-independent derived streams and draws. The
// standard distributions are implementation-defined, so they are avoided.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0)
        : engine_(mix(mix(mix(seed) ^ stream_a) ^ stream_b)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace cdi

#endif // CDI_RANDOM_HPP

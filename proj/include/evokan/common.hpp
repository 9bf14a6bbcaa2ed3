#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace evokan {

// Error categories. Validation problems (bad arguments, malformed configs)
// are invalid_argument; broken runtime preconditions are contract_error;
// blow-ups and singular systems are numerical_error; file trouble is io_error.
class invalid_argument : public std::invalid_argument {
public:
    explicit invalid_argument(const std::string& msg) : std::invalid_argument(msg) {}
};

class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Small deterministic PRNG (splitmix64 seeding a xoshiro-style stream).
// Used everywhere seeds appear so runs reproduce bit-for-bit regardless of
// the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
        for (auto& s : state_) {
            z += 0x9e3779b97f4a7c15ull;
            std::uint64_t w = z;
            w = (w ^ (w >> 30)) * 0xbf58476d1ce4e5b9ull;
            w = (w ^ (w >> 27)) * 0x94d049bb133111ebull;
            s = w ^ (w >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace evokan

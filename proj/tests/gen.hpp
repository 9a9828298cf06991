#pragma once

// Seeded generators for property tests. Each property draws its cases from a
// fixed seed so failures reproduce exactly.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))]; }

    // Printable text biased toward characters that need CSV quoting.
    std::string text(int max_len) {
        static const std::string alphabet = "ab,\"\n\r xyz;'=";
        std::string s;
        const int n = integer(0, max_len);
        for (int i = 0; i < n; ++i) s += alphabet[static_cast<std::size_t>(integer(0, static_cast<int>(alphabet.size()) - 1))];
        return s;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace gen

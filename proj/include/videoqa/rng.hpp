#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace videoqa {

// Deterministic random source. All randomness in the library flows through
// this class so that runs are reproducible bit-for-bit: the raw engine output
// is mapped to doubles by hand instead of going through the (implementation
// defined) standard distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    int uniform_int(int n);

    // Standard normal via Box-Muller; caches the spare deviate.
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derives an independent stream seed, e.g. for per-iteration retraining.
    static uint64_t derive(uint64_t seed, uint64_t stream);

    // Engine + spare state as text, for bit-consistent resume.
    std::string state() const;
    void set_state(const std::string& s);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace videoqa

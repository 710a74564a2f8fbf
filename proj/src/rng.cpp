#include "videoqa/rng.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "videoqa/errors.hpp"

namespace videoqa {

int Rng::uniform_int(int n) {
    if (n <= 0) throw ContractError("Rng::uniform_int requires n > 0");
    // Negligible modulo bias for desk-scale n; fully deterministic.
    return static_cast<int>(uniform() * n);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    has_spare_ = true;
    return mag * std::cos(two_pi * u2);
}

uint64_t Rng::derive(uint64_t seed, uint64_t stream) {
    // splitmix64 finalizer over the combined words
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string Rng::state() const {
    std::ostringstream os;
    uint64_t spare_bits = 0;
    std::memcpy(&spare_bits, &spare_, sizeof(spare_bits));
    os << (has_spare_ ? 1 : 0) << ' ' << spare_bits << ' ' << engine_;
    return os.str();
}

void Rng::set_state(const std::string& s) {
    std::istringstream is(s);
    int flag = 0;
    uint64_t spare_bits = 0;
    if (!(is >> flag >> spare_bits)) throw ContractError("Rng::set_state: bad state string");
    has_spare_ = flag != 0;
    std::memcpy(&spare_, &spare_bits, sizeof(spare_));
    if (!(is >> engine_)) throw ContractError("Rng::set_state: bad engine state");
}

}  // namespace videoqa

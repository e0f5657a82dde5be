#include "randsrc/stochastic_paths.hpp"

#include <cmath>
#include <stdexcept>

namespace randsrc {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t stream_key(const SeedSpec& seed) {
    std::uint64_t k = mix64(seed.master_seed);
    k = mix64(k ^ seed.path_index);
    k = mix64(k ^ static_cast<std::uint64_t>(seed.tag));
    return k;
}

double NoiseStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = uniform_sym();
        v = uniform_sym();
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

IncrementSeries brownian_increments(const SeedSpec& seed, int nt, double ht) {
    if (nt < 1 || !(ht > 0.0)) throw std::invalid_argument("brownian_increments: need nt >= 1, ht > 0");
    NoiseStream stream(seed);
    IncrementSeries out;
    out.ht = ht;
    out.values.resize(nt);
    const double scale = std::sqrt(ht);
    for (int j = 0; j < nt; ++j) out.values[j] = scale * stream.normal();
    return out;
}

std::vector<double> uniform_noise(const SeedSpec& seed, int count) {
    if (count < 0) throw std::invalid_argument("uniform_noise: count must be nonnegative");
    NoiseStream stream(seed);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = stream.uniform_sym();
    return out;
}

}  // namespace randsrc

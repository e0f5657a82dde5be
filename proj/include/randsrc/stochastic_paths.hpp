#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace randsrc {

/// Purpose tag of a noise stream. Each (master_seed, path_index, tag) triple
/// keys its own statistically independent stream.
enum class StreamTag : std::uint64_t {
    brownian = 0x62726f776e69616eull,
    measurement_noise = 0x6d6561732d756e69ull,
};

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    StreamTag tag = StreamTag::brownian;
};

/// Stateless avalanche mix (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derives the engine seed from a SeedSpec. Splittable scheme: path p gets the
/// same stream regardless of execution order or thread count.
std::uint64_t stream_key(const SeedSpec& seed);

/// Deterministic per-stream generator: mt19937_64 keyed by stream_key, with
/// uniforms taken as (x >> 11) * 2^-53 and normals from the Marsaglia polar
/// method. Bit-reproducible for a fixed SeedSpec.
class NoiseStream {
   public:
    explicit NoiseStream(const SeedSpec& seed) : engine_(stream_key(seed)) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1].
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    double normal();

   private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Brownian increments dW(t_j), j = 0..nt-1: i.i.d. N(0, ht).
struct IncrementSeries {
    double ht = 0.0;
    std::vector<double> values;
};

IncrementSeries brownian_increments(const SeedSpec& seed, int nt, double ht);

/// i.i.d. uniform draws on [-1, 1].
std::vector<double> uniform_noise(const SeedSpec& seed, int count);

}  // namespace randsrc

#pragma once

#include <cstdint>
#include <initializer_list>

namespace qrt {

// SplitMix64 finalizer (Steele/Lea/Flood 2014, constants from Vigna's
// reference implementation). Also used as the stream-derivation hash so
// substreams are reproducible across any implementation of this layout.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 generator. State advances by the golden-ratio increment and
// each output is the finalizer of the new state.
class Splitmix64 {
  public:
    explicit Splitmix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // uniform in [0,1) with 53 random bits
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

    uint64_t state() const { return state_; }

  private:
    uint64_t state_;
};

// Stateless substream derivation: fold (seed, component...) through mix64.
// Used to give every (pixel, sample), (pixel, channel), ... an independent
// stream so parallel schedules reproduce identical outputs.
inline uint64_t derive_stream(uint64_t seed, std::initializer_list<uint64_t> components) {
    uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
    for (uint64_t c : components) {
        h = mix64(h ^ (c + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    }
    return h;
}

}  // namespace qrt

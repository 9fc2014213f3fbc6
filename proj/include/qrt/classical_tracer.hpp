#pragma once

#include <cstdint>
#include <utility>

#include "qrt/image.hpp"
#include "qrt/rng.hpp"
#include "qrt/scene.hpp"

namespace qrt {

struct TracerConfig {
    int max_depth = 2;        // path length in segments, D >= 1
    int rays_per_pixel = 64;  // R >= 1
    uint64_t seed = 0;
};

// Uniform hemisphere direction around frame.normal and its density 1/(2*pi).
// Consumes exactly two doubles from rng (azimuth coordinate first).
std::pair<Vec3, double> sample_direction_uniform(Splitmix64& rng, const Basis& frame);

// One path: accumulate emission weighted by throughput at each hit, multiply
// throughput by albedo/pi * cos / pdf per bounce, stop at depth D or on a
// miss (a miss adds the background emission). No Russian roulette and no
// radiance clamping.
Vec3 trace_path_mc(Ray ray, const Scene& scene, const TracerConfig& cfg, Splitmix64& rng);

// Per pixel, averages R independent jittered paths. Substreams are derived
// statelessly from (seed, pixel index, sample index), so the image is
// byte-identical for any thread count.
Image render_classical(const Scene& scene, const TracerConfig& cfg, int threads = 0);

}  // namespace qrt

#include "qrt/classical_tracer.hpp"

#include <numbers>

#include "qrt/errors.hpp"
#include "qrt/parallel.hpp"
#include "qrt/superposed_paths.hpp"

namespace qrt {

std::pair<Vec3, double> sample_direction_uniform(Splitmix64& rng, const Basis& frame) {
    const double u = rng.next_double();
    const double v = rng.next_double();
    // same equal-area parameterization as the lattice map; uniform (u, v)
    // makes the direction uniform over the hemisphere
    return {map_hemisphere(u, v, frame).first, 1.0 / (2.0 * std::numbers::pi)};
}

Vec3 trace_path_mc(Ray ray, const Scene& scene, const TracerConfig& cfg, Splitmix64& rng) {
    constexpr double inv_pi = 1.0 / std::numbers::pi;
    Vec3 radiance{};
    Vec3 throughput{1.0, 1.0, 1.0};
    for (int depth = 1; depth <= cfg.max_depth; ++depth) {
        const Intersection hit = nearest_chain(ray, scene);
        if (!hit.exists) {
            radiance += throughput * scene.background_emission;
            break;
        }
        const Material& mat = scene.materials[hit.material_id];
        radiance += throughput * mat.emission;
        if (depth == cfg.max_depth) break;

        const auto [dir, pdf] = sample_direction_uniform(rng, orthonormal_basis(hit.normal));
        const double cos_theta = dot(dir, hit.normal);
        throughput = throughput * mat.albedo * (inv_pi * cos_theta / pdf);
        ray = {hit.position, dir};
    }
    return radiance;
}

Image render_classical(const Scene& scene, const TracerConfig& cfg, int threads) {
    if (cfg.max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (cfg.rays_per_pixel < 1) throw ConfigError("rays_per_pixel must be >= 1");

    const int w = scene.camera.width;
    const int h = scene.camera.height;
    Image img(w, h);
    parallel_for(
        int64_t(w) * h,
        [&](int64_t p) {
            const int px = int(p % w);
            const int py = int(p / w);
            Vec3 acc{};
            for (int s = 0; s < cfg.rays_per_pixel; ++s) {
                Splitmix64 rng(derive_stream(cfg.seed, {uint64_t(p), uint64_t(s)}));
                const double ju = rng.next_double();
                const double jv = rng.next_double();
                acc += trace_path_mc(primary_ray(scene.camera, px, py, ju, jv), scene, cfg, rng);
            }
            img.at(px, py) = acc / double(cfg.rays_per_pixel);
        },
        threads);
    return img;
}

}  // namespace qrt

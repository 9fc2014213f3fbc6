#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrt/classical_tracer.hpp"
#include "qrt/image.hpp"
#include "qrt/scene.hpp"

using namespace qrt;

namespace {

// one big triangle covering the whole frustum at z = 1
Scene wall_scene(const Material& mat, const Vec3& background) {
    Scene s;
    s.camera.position = {0, 0, -2};
    s.camera.width = s.camera.height = 4;
    s.camera.vertical_fov = 1.0;
    s.triangles.push_back({{-40, -40, 1}, {40, -40, 1}, {0, 60, 1}, 0});
    s.materials.push_back(mat);
    s.background_emission = background;
    return s;
}

}  // namespace

TEST_CASE("sample_direction_uniform stays in the hemisphere with constant pdf") {
    Splitmix64 rng(5);
    const Basis frame = orthonormal_basis(normalize(Vec3{0.3, -0.5, 0.8}));
    for (int i = 0; i < 2000; ++i) {
        const auto [dir, pdf] = sample_direction_uniform(rng, frame);
        CHECK(dot(dir, frame.normal) >= 0.0);
        CHECK(std::abs(length(dir) - 1.0) < 1e-9);
        CHECK(pdf == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-15));
    }
}

TEST_CASE("sample_direction_uniform mean cosine is one half") {
    Splitmix64 rng(17);
    const Basis frame = orthonormal_basis({0, 0, 1});
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += dot(sample_direction_uniform(rng, frame).first, frame.normal);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));  // abs tol 0.01
}

TEST_CASE("trace_path_mc direct emissive hit returns the emission") {
    const Vec3 E{0.7, 0.2, 0.1};
    const Scene s = wall_scene({{0.5, 0.5, 0.5}, E}, {0, 0, 0});
    Splitmix64 rng(1);
    const Vec3 v = trace_path_mc({{0, 0, -2}, {0, 0, 1}}, s, {1, 1, 0}, rng);
    CHECK(length(v - E) < 1e-12);
}

TEST_CASE("trace_path_mc miss returns the background") {
    Scene s;
    s.camera.width = s.camera.height = 2;
    s.background_emission = {0.1, 0.4, 0.9};
    Splitmix64 rng(1);
    const Vec3 v = trace_path_mc({{0, 0, 0}, {0, 0, 1}}, s, {3, 1, 0}, rng);
    CHECK(length(v - s.background_emission) < 1e-12);
}

TEST_CASE("trace_path_mc furnace converges to L(1+albedo)") {
    const double L = 0.5, rho = 0.5;
    const Scene s = wall_scene({{rho, rho, rho}, {L, L, L}}, {L, L, L});
    const TracerConfig cfg{2, 1, 0};
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        Splitmix64 rng(derive_stream(99, {uint64_t(i)}));
        sum += trace_path_mc({{0, 0, -2}, {0, 0, 1}}, s, cfg, rng).x;
    }
    const double expected = L * (1.0 + rho);
    CHECK(std::abs(sum / n - expected) / expected < 0.02);
}

TEST_CASE("trace_path_mc with zero albedo is direct lighting only") {
    const Vec3 E{0.3, 0.3, 0.3};
    Scene s = wall_scene({{0, 0, 0}, E}, {0.8, 0.8, 0.8});
    for (int depth : {1, 2, 5}) {
        Splitmix64 rng(3);
        const Vec3 v = trace_path_mc({{0, 0, -2}, {0, 0, 1}}, s, {depth, 1, 0}, rng);
        CHECK(length(v - E) < 1e-12);
    }
}

TEST_CASE("render_classical is deterministic and thread-count invariant") {
    Scene s = wall_scene({{0.6, 0.6, 0.6}, {0.2, 0.2, 0.2}}, {0.25, 0.25, 0.25});
    const TracerConfig cfg{2, 8, 42};
    const Image a = render_classical(s, cfg, 1);
    const Image b = render_classical(s, cfg, 4);
    const Image c = render_classical(s, cfg);
    REQUIRE(a.pixels.size() == b.pixels.size());
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        CHECK(length(a.pixels[i] - b.pixels[i]) == 0.0);
        CHECK(length(a.pixels[i] - c.pixels[i]) == 0.0);
    }
    CHECK(encode_ppm(a) == encode_ppm(b));
}

TEST_CASE("render_classical pure emissive wall gives the emission at any R") {
    const Vec3 E{0.45, 0.2, 0.85};
    Scene s = wall_scene({{0.0, 0.0, 0.0}, E}, {0, 0, 0});
    for (int rays : {1, 7, 32}) {
        const Image img = render_classical(s, {2, rays, 9});
        for (const Vec3& p : img.pixels) CHECK(length(p - E) < 1e-12);
    }
}

TEST_CASE("render_classical radiance is non-negative") {
    Scene s = wall_scene({{0.9, 0.5, 0.2}, {0.0, 0.1, 0.0}}, {0.3, 0.0, 0.6});
    const Image img = render_classical(s, {3, 16, 7});
    for (const Vec3& p : img.pixels) CHECK(min_component(p) >= 0.0);
}

TEST_CASE("render_classical of an empty scene is background everywhere") {
    Scene s;
    s.camera.width = s.camera.height = 2;
    s.background_emission = {0.15, 0.6, 0.35};
    const Image img = render_classical(s, {2, 3, 1});
    for (const Vec3& p : img.pixels) CHECK(length(p - s.background_emission) < 1e-12);
}

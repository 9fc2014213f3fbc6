#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qrt/classical_tracer.hpp"
#include "qrt/errors.hpp"
#include "qrt/rng.hpp"
#include "qrt/superposed_paths.hpp"

using namespace qrt;

namespace {

Scene emissive_wall(const Vec3& albedo, const Vec3& emission, const Vec3& background) {
    Scene s;
    s.camera.position = {0, 0, -2};
    s.camera.width = s.camera.height = 2;
    s.camera.vertical_fov = 1.0;
    s.triangles.push_back({{-40, -40, 1}, {40, -40, 1}, {0, 60, 1}, 0});
    s.materials.push_back({albedo, emission});
    s.background_emission = background;
    return s;
}

}  // namespace

TEST_CASE("lattice_point cell centers") {
    CHECK(lattice_point(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(lattice_point(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(lattice_point(5, 3) == doctest::Approx(0.6875).epsilon(1e-15));
    CHECK(lattice_point(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("map_hemisphere landmark directions") {
    const Basis frame = orthonormal_basis({0, 0, 1});
    // v -> 1 approaches the normal
    CHECK(length(map_hemisphere(0.37, 1.0 - 1e-12, frame).first - frame.normal) < 1e-5);
    // (0, 0) is the tangent axis, (0.25, 0) a quarter turn
    CHECK(length(map_hemisphere(0.0, 0.0, frame).first - frame.tangent) < 1e-12);
    CHECK(length(map_hemisphere(0.25, 0.0, frame).first - frame.bitangent) < 1e-12);
    CHECK(map_hemisphere(0.5, 0.5, frame).second ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("map_hemisphere output is unit length in the hemisphere") {
    Splitmix64 rng(2);
    const Basis frame = orthonormal_basis(normalize(Vec3{-0.4, 0.7, 0.3}));
    for (int i = 0; i < 1000; ++i) {
        const Vec3 d = map_hemisphere(rng.next_double(), rng.next_double(), frame).first;
        CHECK(std::abs(length(d) - 1.0) < 1e-9);
        CHECK(dot(d, frame.normal) >= 0.0);
    }
}

TEST_CASE("map_hemisphere is measure preserving (chi-squared over equal-area bins)") {
    const Basis frame = orthonormal_basis({0, 0, 1});
    // 7 x 9 equal-solid-angle bins deliberately not divisible into the lattice
    const int z_bins = 7, az_bins = 9;
    std::vector<int> counts(z_bins * az_bins, 0);
    const int axis = 256;  // 2^16 lattice points in total
    for (int i = 0; i < axis; ++i) {
        for (int j = 0; j < axis; ++j) {
            const Vec3 d = map_hemisphere(lattice_point(i, 8), lattice_point(j, 8), frame).first;
            int zb = int(d.z * z_bins);
            if (zb == z_bins) --zb;
            double az = std::atan2(d.y, d.x) / (2.0 * std::numbers::pi);
            if (az < 0) az += 1.0;
            int ab = int(az * az_bins);
            if (ab == az_bins) --ab;
            ++counts[zb * az_bins + ab];
        }
    }
    const double expected = double(axis) * axis / counts.size();
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // dof = 62; Wilson-Hilferty critical value at p = 0.01
    const double dof = counts.size() - 1;
    const double z99 = 2.3263478740408408;
    const double crit = dof * std::pow(1.0 - 2.0 / (9.0 * dof) + z99 * std::sqrt(2.0 / (9.0 * dof)), 3);
    CHECK(chi2 < crit);
}

TEST_CASE("path id decompose/compose round-trips") {
    PathIdLayout layout;
    layout.bits_per_depth = {4, 6, 2};
    layout.comparator_bits = 3;
    CHECK(layout.path_bits() == 12);
    CHECK(layout.total_bits() == 15);
    // exhaustive over the full range
    for (uint64_t raw = 0; raw < layout.path_count(); ++raw) {
        const auto idx = decompose_path_id(raw, layout);
        CHECK(compose_path_id(idx, layout) == raw);
    }
    // spot-check the placement: depth 1 in the high bits, u above v
    const auto idx = decompose_path_id(uint64_t(0b1011'001101'10), layout);
    CHECK(idx[0].u == 0b10);
    CHECK(idx[0].v == 0b11);
    CHECK(idx[1].u == 0b001);
    CHECK(idx[1].v == 0b101);
    CHECK(idx[2].u == 0b1);
    CHECK(idx[2].v == 0b0);
}

TEST_CASE("PathIdLayout validation") {
    CHECK_THROWS_AS(PathIdLayout::even_split(9, 2, 4), ConfigError);   // does not divide
    CHECK_THROWS_AS(PathIdLayout::even_split(6, 2, 4), ConfigError);   // odd per depth
    CHECK_THROWS_AS(PathIdLayout::even_split(24, 1, 0), ConfigError);  // above the cap
    const PathIdLayout ok = PathIdLayout::even_split(8, 2, 6);
    CHECK(ok.bits_per_depth == std::vector<int>{4, 4});
    CHECK(ok.path_count() == 256);
}

TEST_CASE("all-emissive scene is id independent at depth 1") {
    const Vec3 E{0.3, 0.5, 0.7};
    Scene s = emissive_wall({0.2, 0.2, 0.2}, E, {0, 0, 0});
    const PathIdLayout layout = PathIdLayout::even_split(6, 1, 0);
    for (uint64_t id = 0; id < layout.path_count(); ++id)
        CHECK(length(trace_path_deterministic(id, 0, 0, s, layout) - E) < 1e-12);
}

TEST_CASE("zero albedo makes the color independent of bounce indices") {
    Scene s = emissive_wall({0, 0, 0}, {0.4, 0.1, 0.2}, {0.9, 0.9, 0.9});
    const PathIdLayout layout = PathIdLayout::even_split(8, 2, 0);
    // fix the jitter bits, sweep the bounce bits
    const Vec3 base = trace_path_deterministic(0, 1, 1, s, layout);
    for (uint64_t bounce = 0; bounce < 16; ++bounce)
        CHECK(length(trace_path_deterministic(bounce, 1, 1, s, layout) - base) < 1e-12);
}

TEST_CASE("r = 0 layout yields a single path") {
    Scene s = emissive_wall({0.5, 0.5, 0.5}, {0.3, 0.3, 0.3}, {0.1, 0.1, 0.1});
    const PathIdLayout layout = PathIdLayout::even_split(0, 1, 0);
    const auto table = evaluate_oracle_table(0, 0, 0, s, layout);
    CHECK(table.size() == 1);
    CHECK(table[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("oracle table equals a streaming fold of the tracer and is pure") {
    const Scene s = load_scene(std::string(QRT_SCENE_DIR) + "/fixture.scene");
    const PathIdLayout layout = PathIdLayout::even_split(8, 2, 0);
    const auto table = evaluate_oracle_table(3, 4, 1, s, layout);

    double streamed = 0.0;
    for (uint64_t id = 0; id < layout.path_count(); ++id)
        streamed += trace_path_deterministic(id, 3, 4, s, layout).y;
    streamed /= double(layout.path_count());
    double table_mean = 0.0;
    for (double v : table) table_mean += v;
    table_mean /= double(table.size());
    CHECK(table_mean == doctest::Approx(streamed).epsilon(1e-12));

    const auto again = evaluate_oracle_table(3, 4, 1, s, layout);
    REQUIRE(again.size() == table.size());
    for (size_t i = 0; i < table.size(); ++i) CHECK(again[i] == table[i]);
}

TEST_CASE("lattice mean matches a large MC estimate on the fixture pixel") {
    const Scene s = load_scene(std::string(QRT_SCENE_DIR) + "/fixture.scene");
    const PathIdLayout layout = PathIdLayout::even_split(8, 2, 0);
    const int px = 2, py = 5;
    const auto table = evaluate_oracle_table_rgb(px, py, s, layout);
    Vec3 lattice_mean{};
    for (const Vec3& v : table) lattice_mean += v;
    lattice_mean = lattice_mean / double(table.size());

    const TracerConfig cfg{2, 1, 0};
    const int n = 1000000;
    Vec3 sum{}, sumsq{};
    for (int i = 0; i < n; ++i) {
        Splitmix64 rng(derive_stream(31337, {uint64_t(i)}));
        const double ju = rng.next_double(), jv = rng.next_double();
        const Vec3 v = trace_path_mc(primary_ray(s.camera, px, py, ju, jv), s, cfg, rng);
        sum += v;
        sumsq += v * v;
    }
    for (int ch = 0; ch < 3; ++ch) {
        const double mean = sum[ch] / n;
        const double var = sumsq[ch] / n - mean * mean;
        const double se = std::sqrt(var / n);
        CHECK(std::abs(lattice_mean[ch] - mean) <= 3.0 * se);
    }
}

TEST_CASE("lattice error vs MC reference shrinks with r on the cornell scene") {
    Scene s = load_scene(std::string(QRT_SCENE_DIR) + "/cornell.scene");
    s.camera.width = s.camera.height = 2;  // four pixels keep the MC reference cheap

    // MC reference per pixel, one channel
    const int n = 400000;
    const TracerConfig cfg{2, 1, 0};
    std::vector<double> reference(4, 0.0);
    for (int p = 0; p < 4; ++p) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            Splitmix64 rng(derive_stream(555, {uint64_t(p), uint64_t(i)}));
            const double ju = rng.next_double(), jv = rng.next_double();
            sum += trace_path_mc(primary_ray(s.camera, p % 2, p / 2, ju, jv), s, cfg, rng).x;
        }
        reference[p] = sum / n;
    }

    std::vector<double> errs;
    for (int r : {4, 8, 12, 16}) {
        const PathIdLayout layout = PathIdLayout::even_split(r, 2, 0);
        double err = 0.0;
        for (int p = 0; p < 4; ++p) {
            const auto table = evaluate_oracle_table(p % 2, p / 2, 0, s, layout);
            double mean = 0.0;
            for (double v : table) mean += v;
            mean /= double(table.size());
            err += std::abs(mean - reference[p]);
        }
        errs.push_back(err / 4.0);
    }
    // Riemann-sum trend: monotone shrink with at most one violation
    int violations = 0;
    for (size_t i = 1; i < errs.size(); ++i)
        if (errs[i] > errs[i - 1]) ++violations;
    CHECK(violations <= 1);
    CHECK(errs.back() < errs.front());
}

TEST_CASE("oracle table cap raises a config error naming r") {
    Scene s = emissive_wall({0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}, {0, 0, 0});
    PathIdLayout layout;
    layout.bits_per_depth = {22};
    try {
        evaluate_oracle_table(0, 0, 0, s, layout);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("22") != std::string::npos);
        CHECK(msg.find("20") != std::string::npos);
    }
}

TEST_CASE("oracle table CSV dump") {
    std::ostringstream os;
    dump_oracle_table_csv(os, {0.25, 0.5});
    CHECK(os.str() == "id,color\n0,0.25\n1,0.5\n");
}

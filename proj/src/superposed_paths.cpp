#include "qrt/superposed_paths.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "qrt/errors.hpp"

namespace qrt {

PathIdLayout PathIdLayout::even_split(int path_bits, int depth, int comparator_bits) {
    if (depth < 1) throw ConfigError("layout depth must be >= 1");
    if (path_bits < 0 || path_bits % depth != 0)
        throw ConfigError("path bits must divide evenly across " + std::to_string(depth) +
                          " depths");
    PathIdLayout layout;
    layout.bits_per_depth.assign(depth, path_bits / depth);
    layout.comparator_bits = comparator_bits;
    layout.validate();
    return layout;
}

int PathIdLayout::path_bits() const {
    int r = 0;
    for (int d : bits_per_depth) r += d;
    return r;
}

void PathIdLayout::validate() const {
    if (bits_per_depth.empty()) throw ConfigError("layout needs at least one depth");
    for (int d : bits_per_depth) {
        if (d < 0 || d % 2 != 0)
            throw ConfigError("per-depth bits must be even and non-negative, got " +
                              std::to_string(d));
    }
    if (comparator_bits < 0) throw ConfigError("comparator bits must be non-negative");
    if (path_bits() > kOracleTableBitCap)
        throw ConfigError("path bits " + std::to_string(path_bits()) + " exceed the table cap " +
                          std::to_string(kOracleTableBitCap));
}

std::vector<DepthIndices> decompose_path_id(uint64_t raw, const PathIdLayout& layout) {
    const int depth = layout.depth();
    std::vector<DepthIndices> out(depth);
    for (int k = depth - 1; k >= 0; --k) {
        const int d = layout.bits_per_depth[k];
        const uint64_t idx = raw & ((uint64_t(1) << d) - 1);
        raw >>= d;
        const int half = d / 2;
        out[k].u = uint32_t(idx >> half);
        out[k].v = uint32_t(idx & ((uint64_t(1) << half) - 1));
    }
    return out;
}

uint64_t compose_path_id(const std::vector<DepthIndices>& indices, const PathIdLayout& layout) {
    uint64_t raw = 0;
    for (int k = 0; k < layout.depth(); ++k) {
        const int d = layout.bits_per_depth[k];
        const int half = d / 2;
        raw = (raw << d) | (uint64_t(indices[k].u) << half) | indices[k].v;
    }
    return raw;
}

double lattice_point(uint64_t index, int axis_bits) {
    return (double(index) + 0.5) / double(uint64_t(1) << axis_bits);
}

std::pair<Vec3, double> map_hemisphere(double u, double v, const Basis& frame) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double z = v;
    const double r = std::sqrt(std::fmax(0.0, 1.0 - z * z));
    const double phi = two_pi * u;
    const Vec3 dir = frame.tangent * (r * std::cos(phi)) + frame.bitangent * (r * std::sin(phi)) +
                     frame.normal * z;
    return {dir, two_pi};
}

Vec3 trace_path_deterministic(uint64_t raw_path_id, int px, int py, const Scene& scene,
                              const PathIdLayout& layout) {
    constexpr double inv_pi = 1.0 / std::numbers::pi;
    const std::vector<DepthIndices> idx = decompose_path_id(raw_path_id, layout);
    const int max_depth = layout.depth();

    const int jitter_bits = layout.bits_per_depth[0] / 2;
    const double ju = lattice_point(idx[0].u, jitter_bits);
    const double jv = lattice_point(idx[0].v, jitter_bits);
    Ray ray = primary_ray(scene.camera, px, py, ju, jv);

    Vec3 radiance{};
    Vec3 throughput{1.0, 1.0, 1.0};
    for (int depth = 1; depth <= max_depth; ++depth) {
        const Intersection hit = nearest_chain(ray, scene);
        if (!hit.exists) {
            radiance += throughput * scene.background_emission;
            break;
        }
        const Material& mat = scene.materials[hit.material_id];
        radiance += throughput * mat.emission;
        if (depth == max_depth) break;

        const int axis_bits = layout.bits_per_depth[depth] / 2;
        const double u = lattice_point(idx[depth].u, axis_bits);
        const double v = lattice_point(idx[depth].v, axis_bits);
        const auto [dir, jacobian] = map_hemisphere(u, v, orthonormal_basis(hit.normal));
        const double cos_theta = dot(dir, hit.normal);
        throughput = throughput * mat.albedo * (inv_pi * cos_theta * jacobian);
        ray = {hit.position, dir};
    }
    return radiance;
}

std::vector<Vec3> evaluate_oracle_table_rgb(int px, int py, const Scene& scene,
                                            const PathIdLayout& layout) {
    layout.validate();
    const uint64_t n = layout.path_count();
    std::vector<Vec3> table(n);
    for (uint64_t id = 0; id < n; ++id)
        table[id] = trace_path_deterministic(id, px, py, scene, layout);
    return table;
}

std::vector<double> evaluate_oracle_table(int px, int py, int channel, const Scene& scene,
                                          const PathIdLayout& layout) {
    if (channel < 0 || channel > 2) throw ConfigError("channel must be 0, 1 or 2");
    const std::vector<Vec3> rgb = evaluate_oracle_table_rgb(px, py, scene, layout);
    std::vector<double> table(rgb.size());
    for (size_t i = 0; i < rgb.size(); ++i) table[i] = rgb[i][channel];
    return table;
}

void dump_oracle_table_csv(std::ostream& os, const std::vector<double>& table) {
    os << "id,color\n";
    os.precision(17);
    for (size_t i = 0; i < table.size(); ++i) os << i << "," << table[i] << "\n";
}

}  // namespace qrt

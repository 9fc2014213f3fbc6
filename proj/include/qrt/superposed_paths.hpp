#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "qrt/scene.hpp"

namespace qrt {

// Tables have 2^r entries; this bounds r to keep memory desk-scale.
constexpr int kOracleTableBitCap = 20;

// Bit budget of the path id register. Depth 1 is the screen jitter lattice,
// depths >= 2 are hemisphere lattices; each depth's bits split evenly into
// two axes, so every d_k must be even (0 is allowed and collapses that depth
// to the single cell-centered point).
struct PathIdLayout {
    std::vector<int> bits_per_depth;
    int comparator_bits = 0;

    static PathIdLayout even_split(int path_bits, int depth, int comparator_bits);

    int depth() const { return int(bits_per_depth.size()); }
    int path_bits() const;                               // r
    int total_bits() const { return path_bits() + comparator_bits; }  // n = r + c
    uint64_t path_count() const { return uint64_t(1) << path_bits(); }

    void validate() const;  // throws ConfigError
};

// Lattice coordinates of one depth, split off a raw path id.
struct DepthIndices {
    uint32_t u = 0;
    uint32_t v = 0;
};

// Raw layout: depth 1 occupies the most significant bits, the last depth the
// least; within a depth u is the high half and v the low half.
std::vector<DepthIndices> decompose_path_id(uint64_t raw, const PathIdLayout& layout);
uint64_t compose_path_id(const std::vector<DepthIndices>& indices, const PathIdLayout& layout);

// Cell-centered lattice point: (index + 0.5) / 2^axis_bits.
double lattice_point(uint64_t index, int axis_bits);

// Lambert cylindrical equal-area map [0,1)^2 -> upper hemisphere of `frame`:
// local z = v, azimuth = 2*pi*u. The area scale factor is the constant 2*pi,
// returned as the second element so the caller can weight lattice sums.
std::pair<Vec3, double> map_hemisphere(double u, double v, const Basis& frame);

// Deterministic analogue of trace_path_mc: jitter and bounce directions come
// from the id's lattice coordinates, and the constant map jacobian replaces
// 1/pdf in the throughput.
Vec3 trace_path_deterministic(uint64_t raw_path_id, int px, int py, const Scene& scene,
                              const PathIdLayout& layout);

// color for every raw path id in index order, all three channels in one pass.
std::vector<Vec3> evaluate_oracle_table_rgb(int px, int py, const Scene& scene,
                                            const PathIdLayout& layout);

// Single-channel table (channel 0 = r, 1 = g, 2 = b).
std::vector<double> evaluate_oracle_table(int px, int py, int channel, const Scene& scene,
                                          const PathIdLayout& layout);

// CSV `id,color` dump for fixture debugging.
void dump_oracle_table_csv(std::ostream& os, const std::vector<double>& table);

}  // namespace qrt

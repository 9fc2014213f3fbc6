#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qrt/quantum_counting.hpp"
#include "qrt/rng.hpp"

namespace qrt {

// Fixed-point value scheme: values live in [0, 2^b) on a grid of spacing
// 2^(b-c), with C = 2^c comparator thresholds placed at cell midpoints
// (y + 1/2) * 2^(b-c). Midpoint thresholds round each value to the nearest
// grid point, which keeps the mean error strictly below half a spacing and
// makes the count exact for grid-aligned values.
struct FixedPointFormat {
    int range_bits = 0;       // b
    int comparator_bits = 8;  // c >= 1

    double spacing() const { return std::ldexp(1.0, range_bits - comparator_bits); }
    uint64_t comparator_count() const { return uint64_t(1) << comparator_bits; }
    // largest representable value, also the clamp ceiling
    double max_value() const { return std::ldexp(1.0, range_bits) - spacing(); }
    double threshold(uint64_t y) const { return spacing() * (double(y) + 0.5); }
};

// f(x, y) = 1 iff x > y (strict).
inline bool comparator_f(double x, double y) { return x > y; }

struct ComparatorOracleSpec {
    std::vector<double> color_table;  // length 2^r, values already clamped to [0, 2^b)
    FixedPointFormat format;

    int path_bits() const;  // r, validates power-of-two length
    uint64_t domain_size() const { return uint64_t(1) << (path_bits() + format.comparator_bits); }
};

// Explicit oracle over n = r + c qubits. Comparator bits are the low-order
// bits of the id: id = (path_raw << c) | comparator_raw.
BooleanOracle build_comparator_oracle(const ComparatorOracleSpec& spec);

// Mark count of the comparator oracle in closed form,
// sum_x #{y : x > threshold(y)}; equals popcount of the explicit table.
uint64_t comparator_mark_count(const std::vector<double>& table, const FixedPointFormat& format);

// 2^(b - (r+c)) * S.
double mean_from_count(double S, int path_bits, const FixedPointFormat& format);

struct PosteriorEstimate {
    double theta_map = 0.0;
    uint64_t s_map = 0;
    double mean = 0.0;  // filled by estimate_mean; bayesian_map leaves it 0
    // log posterior over the full S grid (uniform prior, so equal to the
    // log likelihood up to a constant); empty on the windowed large-N path
    std::vector<double> log_posterior;
};

// MAP over the discrete grid {theta_S = theta_from_count(S, N) : S = 0..N}
// with a uniform prior. Log-space accumulation; zero-likelihood points get
// -inf; ties break toward smaller S. Dispatches to a windowed search above
// kBayesianFullScanLimit hypotheses.
constexpr uint64_t kBayesianFullScanLimit = uint64_t(1) << 20;
PosteriorEstimate bayesian_map(const std::vector<CountingOutcome>& outcomes, uint64_t N,
                               uint64_t T);
// Large-N path, exposed for equivalence testing against the full scan.
PosteriorEstimate bayesian_map_windowed(const std::vector<CountingOutcome>& outcomes, uint64_t N,
                                        uint64_t T);

struct EstimateDiagnostics {
    uint64_t s_true = 0;  // exact mark count of the comparator oracle
    uint64_t s_map = 0;
    double theta_map = 0.0;
    uint64_t clamp_count = 0;  // table entries clamped into range
    std::vector<double> outcomes;
};

// Full pipeline: clamp the table into [0, max_value], build the comparator
// oracle, run counting B times (analytic sampler, or the statevector circuit
// when so configured and within the qubit cap), take the Bayesian MAP and
// convert it back to a mean. Deterministic given rng state.
std::pair<double, EstimateDiagnostics> estimate_mean(std::vector<double> color_table,
                                                     const FixedPointFormat& format,
                                                     const CountingConfig& cfg, Splitmix64& rng);

}  // namespace qrt

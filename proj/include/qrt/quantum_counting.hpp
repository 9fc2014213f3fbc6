#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qrt/rng.hpp"

namespace qrt {

// Full statevector simulation is capped at this many total qubits (t + n).
constexpr int kStatevectorQubitCap = 22;

enum class CountingBackend {
    analytic,     // exact sampler of the closed-form outcome distribution
    statevector,  // full circuit simulation; validation sizes only
};

struct CountingConfig {
    int id_bits = 0;        // n, N = 2^n; 0 lets estimate_mean derive it from the table
    int counting_bits = 1;  // t, T = 2^t
    int repetitions = 1;    // B
    uint64_t seed = 0;
    CountingBackend backend = CountingBackend::analytic;
};

// Membership table of the marked set over [0, 2^n).
struct BooleanOracle {
    int id_bits = 0;
    std::vector<uint8_t> marks;  // size 2^id_bits, values 0/1

    uint64_t domain_size() const { return uint64_t(1) << id_bits; }
    uint64_t mark_count() const;
};

// Folded phase fraction: an integer multiple of 1/T in [0, 1/2].
struct CountingOutcome {
    double theta_tilde = 0.0;
};

using StateVector = std::vector<std::complex<double>>;

// theta = arcsin(sqrt(S/N)) / pi, monotone in S. Throws on S > N.
double theta_from_count(uint64_t S, uint64_t N);

// Inverse on the grid: N * sin^2(pi * theta).
double count_from_theta(double theta, uint64_t N);

// Phase-estimation kernel (sin(T pi x) / (T sin(pi x)))^2 with the removable
// singularity at integer x evaluated as 1 (proximity test at 1e-12).
double phase_kernel(double x, uint64_t T);

// log P(theta_tilde = m/T | theta): two kernel terms at theta_tilde -+ theta
// for interior grid points, one at the endpoints m = 0 and m = T/2.
double log_outcome_likelihood(uint64_t m, uint64_t T, double theta);

// pmf of the folded measurement over {0, 1/T, ..., 1/2}; index m holds
// P(theta_tilde = m/T). Sums to 1 within 1e-9.
std::vector<double> counting_distribution(double theta, uint64_t T);

// Inverse-CDF draw from counting_distribution.
CountingOutcome sample_outcome(double theta, uint64_t T, Splitmix64& rng);
CountingOutcome sample_outcome(const std::vector<double>& pmf, uint64_t T, Splitmix64& rng);
CountingOutcome sample_outcome_from_cdf(const std::vector<double>& cdf, uint64_t T, Splitmix64& rng);

// One Grover iteration G = (2|psi><psi| - I) O_f on an id-register column:
// flip the sign of marked amplitudes, then reflect every amplitude about the
// mean. Norm preserving.
void grover_iteration(std::span<std::complex<double>> amplitudes, const BooleanOracle& oracle);

// Counting circuit on t + n qubits: uniform initial state, controlled G^(2^j)
// from counting qubit j applied as 2^j sequential iterations, then the
// inverse Fourier transform on the counting register. State index layout is
// (m << n) | x with m the counting value and x the id value.
StateVector run_counting_statevector(const BooleanOracle& oracle, int counting_bits);

// P(measured m) for m in [0, T), read off the statevector.
std::vector<double> statevector_measurement_pmf(const StateVector& state, int counting_bits,
                                                int id_bits);

// Merge the +-theta eigenbranches: m -> min(m, T - m) / T.
double fold_measurement(uint64_t m, uint64_t T);
std::vector<double> fold_measurement_pmf(const std::vector<double>& pmf_m);

// Full simulation followed by one folded measurement.
CountingOutcome simulate_counting_circuit(const BooleanOracle& oracle, const CountingConfig& cfg,
                                          Splitmix64& rng);

// Count-error radius implied by a one-grid-step phase error:
// 2 pi sqrt(S (N - S)) / T + pi^2 N / T^2. A counting run lands inside it
// with probability at least 8/pi^2.
double counting_error_bound(double S, uint64_t N, uint64_t T);

// |S_est - S| < counting_error_bound(S, N, T)?
bool error_bound_check(double S_est, double S, uint64_t N, uint64_t T);

}  // namespace qrt

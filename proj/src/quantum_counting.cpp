#include "qrt/quantum_counting.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qrt/errors.hpp"

namespace qrt {

namespace {
constexpr double kPi = std::numbers::pi;

void check_power_of_two(uint64_t v, const char* what) {
    if (v == 0 || !std::has_single_bit(v)) throw ConfigError(std::string(what) + " must be a power of two");
}
}  // namespace

uint64_t BooleanOracle::mark_count() const {
    uint64_t s = 0;
    for (uint8_t m : marks) s += m;
    return s;
}

double theta_from_count(uint64_t S, uint64_t N) {
    if (N == 0) throw ConfigError("theta_from_count: N must be positive");
    if (S > N) throw ConfigError("theta_from_count: S exceeds N");
    return std::asin(std::sqrt(double(S) / double(N))) / kPi;
}

double count_from_theta(double theta, uint64_t N) {
    const double s = std::sin(kPi * theta);
    return double(N) * s * s;
}

double phase_kernel(double x, uint64_t T) {
    // (sin(T pi x) / (T sin(pi x)))^2, periodic in x with period 1 for even T.
    if (std::abs(x - std::round(x)) < 1e-12) return 1.0;  // removable singularity
    const double num = std::sin(double(T) * kPi * x);
    const double den = double(T) * std::sin(kPi * x);
    const double ratio = num / den;
    return ratio * ratio;
}

double log_outcome_likelihood(uint64_t m, uint64_t T, double theta) {
    const double tt = double(m) / double(T);
    double p = phase_kernel(tt - theta, T);
    if (m != 0 && m != T / 2) p += phase_kernel(tt + theta, T);
    return std::log(p);  // log(0) = -inf marks impossible outcomes
}

std::vector<double> counting_distribution(double theta, uint64_t T) {
    check_power_of_two(T, "T");
    if (T < 2) throw ConfigError("T must be >= 2");
    if (theta < 0.0 || theta > 0.5) throw ConfigError("theta must be in [0, 1/2]");

    const uint64_t half = T / 2;
    std::vector<double> pmf(half + 1);
    pmf[0] = phase_kernel(theta, T);  // the two branches coincide at the endpoints
    pmf[half] = phase_kernel(0.5 - theta, T);
    for (uint64_t m = 1; m < half; ++m) {
        const double tt = double(m) / double(T);
        pmf[m] = phase_kernel(tt - theta, T) + phase_kernel(tt + theta, T);
    }
    return pmf;
}

CountingOutcome sample_outcome_from_cdf(const std::vector<double>& cdf, uint64_t T,
                                        Splitmix64& rng) {
    const double u = rng.next_double();
    size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (u < cdf[mid]) hi = mid;
        else lo = mid + 1;
    }
    return {double(lo) / double(T)};
}

CountingOutcome sample_outcome(const std::vector<double>& pmf, uint64_t T, Splitmix64& rng) {
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;  // guard against rounding in the tail
    return sample_outcome_from_cdf(cdf, T, rng);
}

CountingOutcome sample_outcome(double theta, uint64_t T, Splitmix64& rng) {
    return sample_outcome(counting_distribution(theta, T), T, rng);
}

void grover_iteration(std::span<std::complex<double>> amplitudes, const BooleanOracle& oracle) {
    const size_t n = amplitudes.size();
    if (n != oracle.domain_size() || n != oracle.marks.size())
        throw ConfigError("grover_iteration: oracle/state size mismatch");

    std::complex<double> sum{0.0, 0.0};
    for (size_t i = 0; i < n; ++i) {
        if (oracle.marks[i]) amplitudes[i] = -amplitudes[i];  // phase oracle
        sum += amplitudes[i];
    }
    const std::complex<double> twice_mean = 2.0 * sum / double(n);
    for (size_t i = 0; i < n; ++i) amplitudes[i] = twice_mean - amplitudes[i];
}

StateVector run_counting_statevector(const BooleanOracle& oracle, int counting_bits) {
    const int n = oracle.id_bits;
    const int t = counting_bits;
    if (t < 1 || n < 1) throw ConfigError("counting circuit needs t >= 1 and n >= 1");
    if (t + n > kStatevectorQubitCap)
        throw ConfigError("statevector size " + std::to_string(t + n) +
                          " qubits exceeds the cap " + std::to_string(kStatevectorQubitCap));

    const uint64_t T = uint64_t(1) << t;
    const uint64_t N = uint64_t(1) << n;
    StateVector state(T * N, std::complex<double>(1.0 / std::sqrt(double(T) * double(N)), 0.0));

    // controlled-G^(2^j) from counting qubit j, applied as 2^j plain iterations
    for (int j = 0; j < t; ++j) {
        for (uint64_t rep = 0; rep < (uint64_t(1) << j); ++rep) {
            for (uint64_t m = 0; m < T; ++m) {
                if ((m >> j) & 1)
                    grover_iteration(std::span(&state[m * N], N), oracle);
            }
        }
    }

    // inverse Fourier transform on the counting register, one id column at a
    // time: out[k] = (1/sqrt(T)) sum_m exp(-2 pi i m k / T) in[m]
    std::vector<std::complex<double>> twiddle(T);
    for (uint64_t r = 0; r < T; ++r)
        twiddle[r] = std::polar(1.0, -2.0 * kPi * double(r) / double(T));
    const double scale = 1.0 / std::sqrt(double(T));
    std::vector<std::complex<double>> column(T);
    for (uint64_t x = 0; x < N; ++x) {
        for (uint64_t m = 0; m < T; ++m) column[m] = state[m * N + x];
        for (uint64_t k = 0; k < T; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (uint64_t m = 0; m < T; ++m) acc += twiddle[(m * k) % T] * column[m];
            state[k * N + x] = acc * scale;
        }
    }
    return state;
}

std::vector<double> statevector_measurement_pmf(const StateVector& state, int counting_bits,
                                                int id_bits) {
    const uint64_t T = uint64_t(1) << counting_bits;
    const uint64_t N = uint64_t(1) << id_bits;
    if (state.size() != T * N) throw ConfigError("statevector size mismatch");
    std::vector<double> pmf(T, 0.0);
    for (uint64_t m = 0; m < T; ++m)
        for (uint64_t x = 0; x < N; ++x) pmf[m] += std::norm(state[m * N + x]);
    return pmf;
}

double fold_measurement(uint64_t m, uint64_t T) {
    const uint64_t folded = std::min(m, T - m);
    return double(folded) / double(T);
}

std::vector<double> fold_measurement_pmf(const std::vector<double>& pmf_m) {
    const uint64_t T = pmf_m.size();
    std::vector<double> folded(T / 2 + 1, 0.0);
    for (uint64_t m = 0; m < T; ++m) folded[std::min(m, T - m)] += pmf_m[m];
    return folded;
}

CountingOutcome simulate_counting_circuit(const BooleanOracle& oracle, const CountingConfig& cfg,
                                          Splitmix64& rng) {
    const StateVector state = run_counting_statevector(oracle, cfg.counting_bits);
    const std::vector<double> pmf = statevector_measurement_pmf(state, cfg.counting_bits,
                                                                oracle.id_bits);
    const uint64_t T = uint64_t(1) << cfg.counting_bits;
    // inverse-CDF draw of the raw measurement m, then fold
    const double u = rng.next_double();
    double acc = 0.0;
    uint64_t m = T - 1;
    for (uint64_t i = 0; i < T; ++i) {
        acc += pmf[i];
        if (u < acc) {
            m = i;
            break;
        }
    }
    return {fold_measurement(m, T)};
}

double counting_error_bound(double S, uint64_t N, uint64_t T) {
    const double n = double(N);
    const double t = double(T);
    return 2.0 * kPi * std::sqrt(std::fmax(0.0, S * (n - S))) / t + kPi * kPi * n / (t * t);
}

bool error_bound_check(double S_est, double S, uint64_t N, uint64_t T) {
    return std::abs(S_est - S) < counting_error_bound(S, N, T);
}

}  // namespace qrt

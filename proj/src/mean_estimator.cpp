#include "qrt/mean_estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "qrt/errors.hpp"

namespace qrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// theta_from_count over the whole S grid, shared across scans; insertion is
// the only write and is serialized
const std::vector<double>& theta_grid(uint64_t N) {
    static std::mutex mutex;
    static std::map<uint64_t, std::unique_ptr<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[N];
    if (!slot) {
        slot = std::make_unique<std::vector<double>>(N + 1);
        for (uint64_t S = 0; S <= N; ++S) (*slot)[S] = theta_from_count(S, N);
    }
    return *slot;
}

}  // namespace

int ComparatorOracleSpec::path_bits() const {
    const size_t n = color_table.size();
    if (n == 0 || !std::has_single_bit(n))
        throw ConfigError("color table length must be a power of two, got " + std::to_string(n));
    return std::countr_zero(n);
}

BooleanOracle build_comparator_oracle(const ComparatorOracleSpec& spec) {
    const int r = spec.path_bits();
    const int c = spec.format.comparator_bits;
    if (c < 1) throw ConfigError("comparator bits must be >= 1");
    const uint64_t C = spec.format.comparator_count();

    BooleanOracle oracle;
    oracle.id_bits = r + c;
    oracle.marks.resize(uint64_t(1) << (r + c));
    for (uint64_t path = 0; path < spec.color_table.size(); ++path) {
        const double x = spec.color_table[path];
        for (uint64_t y = 0; y < C; ++y)
            oracle.marks[(path << c) | y] = comparator_f(x, spec.format.threshold(y)) ? 1 : 0;
    }
    return oracle;
}

uint64_t comparator_mark_count(const std::vector<double>& table, const FixedPointFormat& format) {
    // x beats threshold(y) = sp*(y + 1/2) iff y < x/sp - 1/2; the scaling by a
    // power of two is exact, so this matches the explicit table bit for bit.
    const uint64_t C = format.comparator_count();
    const double inv_spacing = std::ldexp(1.0, format.comparator_bits - format.range_bits);
    uint64_t total = 0;
    for (double x : table) {
        const double q = x * inv_spacing - 0.5;
        if (q <= 0.0) continue;
        const double count = std::ceil(q);
        total += count >= double(C) ? C : uint64_t(count);
    }
    return total;
}

double mean_from_count(double S, int path_bits, const FixedPointFormat& format) {
    return std::ldexp(S, format.range_bits - path_bits - format.comparator_bits);
}

namespace {

// outcome histogram on the 1/T grid: (grid index, multiplicity)
std::vector<std::pair<uint64_t, int>> outcome_histogram(const std::vector<CountingOutcome>& outcomes,
                                                        uint64_t T) {
    std::vector<std::pair<uint64_t, int>> hist;
    for (const CountingOutcome& o : outcomes) {
        const double scaled = o.theta_tilde * double(T);
        const uint64_t m = uint64_t(std::llround(scaled));
        if (std::abs(scaled - double(m)) > 1e-9 || m > T / 2)
            throw ConfigError("outcome is not on the 1/T grid in [0, 1/2]");
        bool found = false;
        for (auto& [idx, cnt] : hist) {
            if (idx == m) {
                ++cnt;
                found = true;
                break;
            }
        }
        if (!found) hist.emplace_back(m, 1);
    }
    return hist;
}

double histogram_loglik(const std::vector<std::pair<uint64_t, int>>& hist, uint64_t T,
                        double theta) {
    double ll = 0.0;
    for (const auto& [m, cnt] : hist) ll += double(cnt) * log_outcome_likelihood(m, T, theta);
    return ll;
}

PosteriorEstimate bayesian_map_full(const std::vector<std::pair<uint64_t, int>>& hist, uint64_t N,
                                    uint64_t T) {
    const std::vector<double>& thetas = theta_grid(N);
    PosteriorEstimate est;
    est.log_posterior.resize(N + 1);
    double best = kNegInf;
    uint64_t best_s = 0;
    bool have_best = false;
    for (uint64_t S = 0; S <= N; ++S) {
        const double ll = histogram_loglik(hist, T, thetas[S]);
        est.log_posterior[S] = ll;
        if (!have_best || ll > best) {  // ties keep the smaller S seen first
            best = ll;
            best_s = S;
            have_best = true;
        }
    }
    est.s_map = best_s;
    est.theta_map = thetas[best_s];
    return est;
}

}  // namespace

PosteriorEstimate bayesian_map_windowed(const std::vector<CountingOutcome>& outcomes, uint64_t N,
                                        uint64_t T) {
    if (outcomes.empty()) throw ConfigError("bayesian_map: no outcomes");
    const auto hist = outcome_histogram(outcomes, T);
    const auto loglik = [&](double theta) { return histogram_loglik(hist, T, theta); };

    // coarse scan of theta in [0, 1/2]; the likelihood structure lives on the
    // 1/T scale, so 8 points per 1/T resolves every lobe
    const uint64_t coarse_n = 4 * T;
    std::vector<double> coarse(coarse_n + 1);
    for (uint64_t i = 0; i <= coarse_n; ++i)
        coarse[i] = loglik(0.5 * double(i) / double(coarse_n));

    // top local maxima as refinement brackets
    std::vector<uint64_t> peaks;
    for (uint64_t i = 0; i <= coarse_n; ++i) {
        const bool left_ok = i == 0 || coarse[i] >= coarse[i - 1];
        const bool right_ok = i == coarse_n || coarse[i] >= coarse[i + 1];
        if (left_ok && right_ok && coarse[i] > kNegInf) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(),
              [&](uint64_t a, uint64_t b) { return coarse[a] > coarse[b]; });
    if (peaks.size() > 3) peaks.resize(3);

    std::vector<uint64_t> candidates{0, N};
    const auto add_window = [&](uint64_t center) {
        const uint64_t lo = center > 8 ? center - 8 : 0;
        const uint64_t hi = std::min(N, center + 8);
        for (uint64_t s = lo; s <= hi; ++s) candidates.push_back(s);
    };

    for (uint64_t peak : peaks) {
        // golden-section refinement around the coarse peak
        const double step = 0.5 / double(coarse_n);
        double a = peak == 0 ? 0.0 : (double(peak) - 1.0) * step;
        double b = peak == coarse_n ? 0.5 : (double(peak) + 1.0) * step;
        constexpr double inv_phi = 0.6180339887498949;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = loglik(x1), f2 = loglik(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = loglik(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = loglik(x1);
            }
        }
        const double theta_star = 0.5 * (a + b);
        add_window(uint64_t(std::llround(std::clamp(count_from_theta(theta_star, N), 0.0,
                                                    double(N)))));
    }
    // plug-in snap of each distinct outcome, in case a peak sits under a lobe
    // the coarse scan ranked low
    for (const auto& [m, cnt] : hist)
        add_window(uint64_t(std::llround(count_from_theta(double(m) / double(T), N))));

    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    PosteriorEstimate est;
    double best = kNegInf;
    uint64_t best_s = 0;
    bool have_best = false;
    for (uint64_t S : candidates) {  // ascending, so strict > keeps the smaller tie
        const double ll = histogram_loglik(hist, T, theta_from_count(S, N));
        if (!have_best || ll > best) {
            best = ll;
            best_s = S;
            have_best = true;
        }
    }
    est.s_map = best_s;
    est.theta_map = theta_from_count(best_s, N);
    return est;
}

PosteriorEstimate bayesian_map(const std::vector<CountingOutcome>& outcomes, uint64_t N,
                               uint64_t T) {
    if (outcomes.empty()) throw ConfigError("bayesian_map: no outcomes");
    if (N + 1 > kBayesianFullScanLimit) return bayesian_map_windowed(outcomes, N, T);
    return bayesian_map_full(outcome_histogram(outcomes, T), N, T);
}

std::pair<double, EstimateDiagnostics> estimate_mean(std::vector<double> color_table,
                                                     const FixedPointFormat& format,
                                                     const CountingConfig& cfg, Splitmix64& rng) {
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (cfg.counting_bits < 1) throw ConfigError("counting bits must be >= 1");
    if (format.comparator_bits < 1) throw ConfigError("comparator bits must be >= 1");

    ComparatorOracleSpec spec{std::move(color_table), format};
    const int r = spec.path_bits();
    const int n = r + format.comparator_bits;
    if (cfg.id_bits != 0 && cfg.id_bits != n)
        throw ConfigError("id bits " + std::to_string(cfg.id_bits) +
                          " inconsistent with table (" + std::to_string(n) + ")");

    EstimateDiagnostics diag;
    const double ceiling = format.max_value();
    for (double& x : spec.color_table) {
        if (x < 0.0 || x > ceiling) {
            x = std::clamp(x, 0.0, ceiling);
            ++diag.clamp_count;
        }
    }

    const uint64_t N = uint64_t(1) << n;
    const uint64_t T = uint64_t(1) << cfg.counting_bits;

    std::vector<CountingOutcome> outcomes;
    outcomes.reserve(cfg.repetitions);
    if (cfg.backend == CountingBackend::statevector) {
        if (n + cfg.counting_bits > kStatevectorQubitCap)
            throw ConfigError("statevector backend needs r + c + t <= " +
                              std::to_string(kStatevectorQubitCap));
        const BooleanOracle oracle = build_comparator_oracle(spec);
        diag.s_true = oracle.mark_count();
        CountingConfig run = cfg;
        run.id_bits = n;
        for (int k = 0; k < cfg.repetitions; ++k)
            outcomes.push_back(simulate_counting_circuit(oracle, run, rng));
    } else {
        diag.s_true = comparator_mark_count(spec.color_table, format);
        const std::vector<double> pmf =
            counting_distribution(theta_from_count(diag.s_true, N), T);
        for (int k = 0; k < cfg.repetitions; ++k)
            outcomes.push_back(sample_outcome(pmf, T, rng));
    }

    PosteriorEstimate est = bayesian_map(outcomes, N, T);
    est.mean = mean_from_count(double(est.s_map), r, format);

    diag.s_map = est.s_map;
    diag.theta_map = est.theta_map;
    diag.outcomes.reserve(outcomes.size());
    for (const CountingOutcome& o : outcomes) diag.outcomes.push_back(o.theta_tilde);
    return {est.mean, std::move(diag)};
}

}  // namespace qrt

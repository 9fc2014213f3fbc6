#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrt/classical_tracer.hpp"
#include "qrt/image.hpp"
#include "qrt/mean_estimator.hpp"
#include "qrt/scene.hpp"
#include "qrt/superposed_paths.hpp"

namespace qrt {

enum class RenderMode { quantum, classical, reference };

struct RenderJob {
    RenderMode mode = RenderMode::quantum;
    PathIdLayout layout;       // path bits + comparator bits
    FixedPointFormat format;   // must agree with layout.comparator_bits
    int counting_bits = 10;    // t
    int repetitions = 8;       // B
    CountingBackend backend = CountingBackend::analytic;
    TracerConfig tracer;       // classical mode
    uint64_t seed = 0;
    int threads = 0;

    void validate() const;  // throws ConfigError on cap or consistency violations
};

// One row per pixel-channel of a quantum render.
struct PixelChannelDiagnostics {
    int x = 0;
    int y = 0;
    int channel = 0;
    EstimateDiagnostics estimate;
};

struct QuantumRenderResult {
    Image image;
    std::vector<PixelChannelDiagnostics> diagnostics;  // row-major, channel fastest
};

// Per pixel and channel: oracle table -> comparator counting -> MAP mean.
// Per-pixel-channel seeds derive from (job.seed, pixel index, channel), so
// the result is byte-identical across runs and thread counts.
QuantumRenderResult render_quantum(const Scene& scene, const RenderJob& job);

// Ground truth of the counting estimand: the exact mean of the clamped
// oracle table per pixel/channel. Deterministic and seed-independent.
Image render_reference(const Scene& scene, const RenderJob& job);

void write_diagnostics_csv(std::ostream& os, const QuantumRenderResult& result);
void write_diagnostics_csv(const std::string& path, const QuantumRenderResult& result);

// CSV `theta_tilde,probability` of counting_distribution(theta, 2^t_bits).
void emit_distribution(std::ostream& os, double theta, int t_bits);
void emit_distribution(const std::string& path, double theta, int t_bits);

struct ScalingConfig {
    PathIdLayout layout = PathIdLayout::even_split(16, 2, 10);
    FixedPointFormat format{0, 10};
    std::vector<int> t_bits = {4, 5, 6, 7, 8, 9, 10};
    // B is fixed across the sweep. A single phase-estimation outcome has
    // heavy sidelobe tails that drag the RMSE toward 1/sqrt(T); from three
    // repetitions on, the MAP outvotes outliers and the RMSE scales as 1/T.
    int repetitions = 4;
    int trials = 20;
    uint64_t seed = 1;
    int threads = 0;
};

struct ScalingRow {
    std::string arm;     // "quantum" | "classical"
    double budget = 0;   // oracle queries per pixel-channel: (T-1)*B, classical R
    double rmse = 0;
    double bound_rms = 0;  // rms of the per-pixel counting error bound; quantum rows only
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double quantum_slope = 0.0;
    double classical_slope = 0.0;
    double bound_envelope_fraction = 0.0;  // fraction of quantum points with rmse <= bound_rms
};

// Error-vs-budget comparison. The quantum arm sweeps T at fixed B; the
// classical arm runs R = (T-1)*B paths per pixel so both arms spend the same
// number of oracle queries (one path trace per query). RMSE is pooled over
// pixels, channels and trials against the reference image, and the report
// carries the fitted log-log slope per arm.
ScalingReport run_scaling_experiment(const Scene& scene, const ScalingConfig& cfg);

void write_scaling_csv(std::ostream& os, const ScalingReport& report);
void write_scaling_csv(const std::string& path, const ScalingReport& report);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace qrt

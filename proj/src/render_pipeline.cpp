#include "qrt/render_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qrt/errors.hpp"
#include "qrt/parallel.hpp"
#include "qrt/quantum_counting.hpp"

namespace qrt {

void RenderJob::validate() const {
    if (mode == RenderMode::classical) {
        if (tracer.max_depth < 1 || tracer.rays_per_pixel < 1)
            throw ConfigError("classical mode needs depth >= 1 and rays >= 1");
        return;
    }
    layout.validate();
    if (layout.comparator_bits != format.comparator_bits)
        throw ConfigError("layout and format disagree on comparator bits");
    if (mode == RenderMode::quantum) {
        if (counting_bits < 1) throw ConfigError("counting bits must be >= 1");
        if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
        if (backend == CountingBackend::statevector &&
            layout.total_bits() + counting_bits > kStatevectorQubitCap)
            throw ConfigError("statevector backend needs r + c + t <= " +
                              std::to_string(kStatevectorQubitCap));
    }
}

namespace {

std::vector<double> channel_of(const std::vector<Vec3>& rgb, int channel) {
    std::vector<double> out(rgb.size());
    for (size_t i = 0; i < rgb.size(); ++i) out[i] = rgb[i][channel];
    return out;
}

double clamped_table_mean(const std::vector<double>& table, const FixedPointFormat& format) {
    const double ceiling = format.max_value();
    double sum = 0.0;
    for (double x : table) sum += std::clamp(x, 0.0, ceiling);
    return sum / double(table.size());
}

}  // namespace

QuantumRenderResult render_quantum(const Scene& scene, const RenderJob& job) {
    job.validate();
    const int w = scene.camera.width;
    const int h = scene.camera.height;
    QuantumRenderResult result;
    result.image = Image(w, h);
    result.diagnostics.resize(size_t(w) * h * 3);

    parallel_for(
        int64_t(w) * h,
        [&](int64_t p) {
            const int px = int(p % w);
            const int py = int(p / w);
            const std::vector<Vec3> rgb = evaluate_oracle_table_rgb(px, py, scene, job.layout);
            for (int ch = 0; ch < 3; ++ch) {
                CountingConfig cc;
                cc.id_bits = job.layout.total_bits();
                cc.counting_bits = job.counting_bits;
                cc.repetitions = job.repetitions;
                cc.seed = job.seed;
                cc.backend = job.backend;
                Splitmix64 rng(derive_stream(job.seed, {uint64_t(p), uint64_t(ch)}));
                auto [mean, diag] = estimate_mean(channel_of(rgb, ch), job.format, cc, rng);
                result.image.at(px, py).set(ch, mean);
                result.diagnostics[size_t(p) * 3 + ch] = {px, py, ch, std::move(diag)};
            }
        },
        job.threads);
    return result;
}

Image render_reference(const Scene& scene, const RenderJob& job) {
    job.layout.validate();
    const int w = scene.camera.width;
    const int h = scene.camera.height;
    Image img(w, h);
    parallel_for(
        int64_t(w) * h,
        [&](int64_t p) {
            const int px = int(p % w);
            const int py = int(p / w);
            const std::vector<Vec3> rgb = evaluate_oracle_table_rgb(px, py, scene, job.layout);
            for (int ch = 0; ch < 3; ++ch)
                img.at(px, py).set(ch, clamped_table_mean(channel_of(rgb, ch), job.format));
        },
        job.threads);
    return img;
}

void write_diagnostics_csv(std::ostream& os, const QuantumRenderResult& result) {
    os << "x,y,channel,s_true,s_map,theta_map,clamp_count,outcomes\n";
    os.precision(17);
    for (const PixelChannelDiagnostics& d : result.diagnostics) {
        os << d.x << "," << d.y << "," << d.channel << "," << d.estimate.s_true << ","
           << d.estimate.s_map << "," << d.estimate.theta_map << "," << d.estimate.clamp_count
           << ",";
        for (size_t i = 0; i < d.estimate.outcomes.size(); ++i) {
            if (i) os << ";";
            os << d.estimate.outcomes[i];
        }
        os << "\n";
    }
}

void write_diagnostics_csv(const std::string& path, const QuantumRenderResult& result) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_diagnostics_csv(os, result);
    if (!os) throw IoError("write failed: " + path);
}

void emit_distribution(std::ostream& os, double theta, int t_bits) {
    if (t_bits < 1) throw ConfigError("t bits must be >= 1");
    const uint64_t T = uint64_t(1) << t_bits;
    const std::vector<double> pmf = counting_distribution(theta, T);
    os << "theta_tilde,probability\n";
    os.precision(17);
    for (size_t m = 0; m < pmf.size(); ++m)
        os << double(m) / double(T) << "," << pmf[m] << "\n";
}

void emit_distribution(const std::string& path, double theta, int t_bits) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    emit_distribution(os, theta, t_bits);
    if (!os) throw IoError("write failed: " + path);
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ConfigError("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double lx = std::log(x);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingReport run_scaling_experiment(const Scene& scene, const ScalingConfig& cfg) {
    cfg.layout.validate();
    if (cfg.layout.comparator_bits != cfg.format.comparator_bits)
        throw ConfigError("layout and format disagree on comparator bits");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");

    const int w = scene.camera.width;
    const int h = scene.camera.height;
    const int64_t cells = int64_t(w) * h * 3;  // pixel-channels
    const int r = cfg.layout.path_bits();
    const uint64_t N = uint64_t(1) << cfg.layout.total_bits();

    // one table pass: exact mark count and reference mean per pixel-channel
    std::vector<uint64_t> s_true(cells);
    std::vector<double> reference(cells);
    parallel_for(
        int64_t(w) * h,
        [&](int64_t p) {
            const std::vector<Vec3> rgb =
                evaluate_oracle_table_rgb(int(p % w), int(p / w), scene, cfg.layout);
            for (int ch = 0; ch < 3; ++ch) {
                std::vector<double> table = channel_of(rgb, ch);
                const double ceiling = cfg.format.max_value();
                for (double& x : table) x = std::clamp(x, 0.0, ceiling);
                s_true[p * 3 + ch] = comparator_mark_count(table, cfg.format);
                reference[p * 3 + ch] = clamped_table_mean(table, cfg.format);
            }
        },
        cfg.threads);

    ScalingReport report;
    std::vector<std::pair<double, double>> quantum_points, classical_points;
    int envelope_hits = 0;

    for (int tb : cfg.t_bits) {
        const uint64_t T = uint64_t(1) << tb;
        const double budget = double(T - 1) * cfg.repetitions;

        // per-distinct-S outcome CDFs
        std::map<uint64_t, std::vector<double>> cdf_by_s;
        for (int64_t cell = 0; cell < cells; ++cell) {
            if (cdf_by_s.count(s_true[cell])) continue;
            std::vector<double> cdf = counting_distribution(theta_from_count(s_true[cell], N), T);
            for (size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
            cdf.back() = 1.0;
            cdf_by_s[s_true[cell]] = std::move(cdf);
        }

        double sq_err = 0.0;
        double sq_bound = 0.0;
        std::vector<double> trial_err(size_t(cfg.trials) * cells);
        parallel_for(
            cfg.trials,
            [&](int64_t trial) {
                for (int64_t cell = 0; cell < cells; ++cell) {
                    Splitmix64 rng(derive_stream(
                        cfg.seed, {0xABu, uint64_t(tb), uint64_t(trial), uint64_t(cell)}));
                    std::vector<CountingOutcome> outcomes(cfg.repetitions);
                    const std::vector<double>& cdf = cdf_by_s.at(s_true[cell]);
                    for (auto& o : outcomes) o = sample_outcome_from_cdf(cdf, T, rng);
                    const PosteriorEstimate est = bayesian_map(outcomes, N, T);
                    trial_err[size_t(trial) * cells + cell] =
                        mean_from_count(double(est.s_map), r, cfg.format) - reference[cell];
                }
            },
            cfg.threads);
        for (double e : trial_err) sq_err += e * e;
        for (int64_t cell = 0; cell < cells; ++cell) {
            const double b =
                mean_from_count(counting_error_bound(double(s_true[cell]), N, T), r, cfg.format);
            sq_bound += b * b;
        }

        ScalingRow row;
        row.arm = "quantum";
        row.budget = budget;
        row.rmse = std::sqrt(sq_err / double(trial_err.size()));
        row.bound_rms = std::sqrt(sq_bound / double(cells));
        if (row.rmse <= row.bound_rms) ++envelope_hits;
        quantum_points.emplace_back(row.budget, row.rmse);
        report.rows.push_back(row);
    }

    for (int tb : cfg.t_bits) {
        const uint64_t T = uint64_t(1) << tb;
        const int rays = int((T - 1) * uint64_t(cfg.repetitions));  // matched query budget
        double sq_err = 0.0;
        std::vector<double> trial_sq(cfg.trials);
        parallel_for(
            cfg.trials,
            [&](int64_t trial) {
                TracerConfig tr;
                tr.max_depth = cfg.layout.depth();
                tr.rays_per_pixel = rays;
                tr.seed = derive_stream(cfg.seed, {0xCDu, uint64_t(tb), uint64_t(trial)});
                const Image img = render_classical(scene, tr, 1);
                double acc = 0.0;
                for (int64_t cell = 0; cell < cells; ++cell) {
                    const double e =
                        img.pixels[cell / 3][int(cell % 3)] - reference[cell];
                    acc += e * e;
                }
                trial_sq[trial] = acc;
            },
            cfg.threads);
        for (double e : trial_sq) sq_err += e;

        ScalingRow row;
        row.arm = "classical";
        row.budget = double(rays);
        row.rmse = std::sqrt(sq_err / (double(cfg.trials) * double(cells)));
        classical_points.emplace_back(row.budget, row.rmse);
        report.rows.push_back(row);
    }

    report.quantum_slope = fit_loglog_slope(quantum_points);
    report.classical_slope = fit_loglog_slope(classical_points);
    report.bound_envelope_fraction = double(envelope_hits) / double(cfg.t_bits.size());
    return report;
}

void write_scaling_csv(std::ostream& os, const ScalingReport& report) {
    os << "arm,budget,rmse,bound_rms\n";
    os.precision(17);
    for (const ScalingRow& row : report.rows) {
        os << row.arm << "," << row.budget << "," << row.rmse << ",";
        if (row.arm == "quantum") os << row.bound_rms;
        os << "\n";
    }
}

void write_scaling_csv(const std::string& path, const ScalingReport& report) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_scaling_csv(os, report);
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace qrt

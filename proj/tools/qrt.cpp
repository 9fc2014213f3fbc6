#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qrt/errors.hpp"
#include "qrt/render_pipeline.hpp"

namespace {

int run_render(const std::string& mode, const std::string& scene_path, const std::string& out,
               int depth, int path_bits, int comparator_bits, int counting_bits, int reps,
               int rays, uint64_t seed, const std::string& diag, const std::string& csv,
               int range_bits, const std::string& backend, int threads) {
    const qrt::Scene scene = qrt::load_scene(scene_path);

    qrt::RenderJob job;
    job.format = {range_bits, comparator_bits};
    job.counting_bits = counting_bits;
    job.repetitions = reps;
    job.backend = backend == "statevector" ? qrt::CountingBackend::statevector
                                           : qrt::CountingBackend::analytic;
    job.tracer = {depth, rays, seed};
    job.seed = seed;
    job.threads = threads;
    if (mode != "classical")
        job.layout = qrt::PathIdLayout::even_split(path_bits, depth, comparator_bits);

    qrt::Image img;
    if (mode == "quantum") {
        job.mode = qrt::RenderMode::quantum;
        qrt::QuantumRenderResult result = qrt::render_quantum(scene, job);
        if (!diag.empty()) qrt::write_diagnostics_csv(diag, result);
        img = std::move(result.image);
    } else if (mode == "classical") {
        job.mode = qrt::RenderMode::classical;
        job.validate();
        img = qrt::render_classical(scene, job.tracer, threads);
    } else if (mode == "reference") {
        job.mode = qrt::RenderMode::reference;
        img = qrt::render_reference(scene, job);
    } else {
        throw qrt::ConfigError("unknown mode '" + mode + "'");
    }

    qrt::write_ppm(out, img);
    if (!csv.empty()) qrt::write_linear_csv(csv, img);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-counting ray tracer"};
    app.require_subcommand(1);

    // render
    auto* render = app.add_subcommand("render", "render a scene");
    std::string mode = "quantum", scene_path, out, diag, csv, backend = "analytic";
    int depth = 2, path_bits = 8, comparator_bits = 8, counting_bits = 10, reps = 8, rays = 64;
    int range_bits = 0, threads = 0;
    uint64_t seed = 1;
    render->add_option("--mode", mode, "quantum|classical|reference")->capture_default_str();
    render->add_option("--scene", scene_path, "scene file")->required();
    render->add_option("--out", out, "output PPM path")->required();
    render->add_option("--depth", depth, "path depth D")->capture_default_str();
    render->add_option("--path-bits", path_bits, "path id bits r")->capture_default_str();
    render->add_option("--comparator-bits", comparator_bits, "comparator bits c")
        ->capture_default_str();
    render->add_option("--counting-bits", counting_bits, "counting qubits t")
        ->capture_default_str();
    render->add_option("--reps", reps, "counting repetitions B")->capture_default_str();
    render->add_option("--rays", rays, "classical rays per pixel R")->capture_default_str();
    render->add_option("--seed", seed, "rng seed")->capture_default_str();
    render->add_option("--diag", diag, "diagnostics CSV path (quantum mode)");
    render->add_option("--csv", csv, "raw linear means CSV path");
    render->add_option("--range-bits", range_bits, "value range bits b")->capture_default_str();
    render->add_option("--backend", backend, "analytic|statevector")->capture_default_str();
    render->add_option("--threads", threads, "worker threads (0 = auto)")->capture_default_str();

    // scaling
    auto* scaling = app.add_subcommand("scaling", "error-vs-budget comparison");
    std::string s_scene, s_out;
    qrt::ScalingConfig scfg;
    int s_depth = 2, s_path_bits = 16, s_comparator_bits = 10, s_reps = 4;
    scaling->add_option("--scene", s_scene, "scene file")->required();
    scaling->add_option("--out", s_out, "output CSV path")->required();
    scaling->add_option("--trials", scfg.trials, "trials per budget point")
        ->capture_default_str();
    scaling->add_option("--depth", s_depth, "path depth D")->capture_default_str();
    scaling->add_option("--path-bits", s_path_bits, "path id bits r")->capture_default_str();
    scaling->add_option("--comparator-bits", s_comparator_bits, "comparator bits c")
        ->capture_default_str();
    scaling->add_option("--reps", s_reps, "counting repetitions B")->capture_default_str();
    scaling->add_option("--seed", scfg.seed, "rng seed")->capture_default_str();
    scaling->add_option("--threads", scfg.threads, "worker threads (0 = auto)")
        ->capture_default_str();

    // distribution
    auto* distribution = app.add_subcommand("distribution", "counting outcome pmf as CSV");
    std::string d_out;
    double d_theta = 0.0;
    int d_t_bits = 10;
    distribution->add_option("--theta", d_theta, "phase fraction in [0, 1/2]")->required();
    distribution->add_option("--t-bits", d_t_bits, "counting qubits t")->capture_default_str();
    distribution->add_option("--out", d_out, "output CSV path")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "dump one pixel-channel oracle table as CSV");
    std::string o_scene, o_out;
    int o_px = 0, o_py = 0, o_channel = 0, o_depth = 2, o_path_bits = 8;
    oracle->add_option("--scene", o_scene, "scene file")->required();
    oracle->add_option("--out", o_out, "output CSV path")->required();
    oracle->add_option("--x", o_px, "pixel x")->capture_default_str();
    oracle->add_option("--y", o_py, "pixel y")->capture_default_str();
    oracle->add_option("--channel", o_channel, "0=r 1=g 2=b")->capture_default_str();
    oracle->add_option("--depth", o_depth, "path depth D")->capture_default_str();
    oracle->add_option("--path-bits", o_path_bits, "path id bits r")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (render->parsed()) {
            return run_render(mode, scene_path, out, depth, path_bits, comparator_bits,
                              counting_bits, reps, rays, seed, diag, csv, range_bits, backend,
                              threads);
        }
        if (scaling->parsed()) {
            scfg.layout = qrt::PathIdLayout::even_split(s_path_bits, s_depth, s_comparator_bits);
            scfg.format = {0, s_comparator_bits};
            scfg.repetitions = s_reps;
            const qrt::Scene scene = qrt::load_scene(s_scene);
            const qrt::ScalingReport report = qrt::run_scaling_experiment(scene, scfg);
            qrt::write_scaling_csv(s_out, report);
            std::cout << "quantum slope:   " << report.quantum_slope << "\n"
                      << "classical slope: " << report.classical_slope << "\n"
                      << "bound envelope:  " << report.bound_envelope_fraction * 100.0
                      << "% of quantum points under the counting bound\n";
            return 0;
        }
        if (distribution->parsed()) {
            qrt::emit_distribution(d_out, d_theta, d_t_bits);
            return 0;
        }
        if (oracle->parsed()) {
            const qrt::Scene scene = qrt::load_scene(o_scene);
            const auto layout = qrt::PathIdLayout::even_split(o_path_bits, o_depth, 0);
            if (o_px < 0 || o_px >= scene.camera.width || o_py < 0 ||
                o_py >= scene.camera.height)
                throw qrt::ConfigError("pixel outside the scene resolution");
            const std::vector<double> table =
                qrt::evaluate_oracle_table(o_px, o_py, o_channel, scene, layout);
            std::ofstream os(o_out);
            if (!os) throw qrt::IoError("cannot open for writing: " + o_out);
            qrt::dump_oracle_table_csv(os, table);
            return 0;
        }
    } catch (const qrt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qrt::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slicefix/correct.hpp"
#include "slicefix/orient.hpp"
#include "slicefix/parallel.hpp"
#include "slicefix/raster.hpp"
#include "slicefix/skeleton.hpp"
#include "slicefix/volume.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 input geometry error, 4 internal error
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitInternal = 4;

struct RunConfig {
    std::string input;
    std::string output;
    double diameter_mm = 1.0;
    double layer_height_mm = 0.2;
    double pitch_mm = 0.0;  // 0 -> defaults to layer height
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool optimize = false;
    bool apply_best = false;
    bool no_spur_removal = false;
    double clamp_min_mm = 0.6;
    double clamp_max_mm = 1.2;
    std::string report_path;
    std::string diff_prefix;
    std::string slice_dump_dir;
    std::string trace_path;
    std::string summary_path;
    // anneal overrides
    double initial_temperature = 0.0;
    double cooling_rate = 0.97;
    int max_iterations = 300;
    double proposal_scale = 0.7853981633974483;
    std::uint64_t seed = 0;
    double eval_pitch_mm = 0.0;  // 0 -> same as pitch
    int threads = 0;             // 0 -> env var or hardware default

    double pitch() const { return pitch_mm > 0.0 ? pitch_mm : layer_height_mm; }
    int thread_count() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("SLICEFIX_THREADS")) {
            const int n = std::atoi(env);
            if (n > 0) return n;
        }
        return slicefix::default_thread_count();
    }
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("-i,--input", cfg.input, "Input mesh (STL or OBJ)")->required();
    cmd->add_option("-d,--diameter", cfg.diameter_mm,
                    "Minimum printable feature diameter in mm")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--layer-height", cfg.layer_height_mm, "Layer height in mm")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pitch", cfg.pitch_mm, "In-plane pixel pitch in mm (default: layer height)");
    cmd->add_option("--theta1", cfg.theta1, "Build rotation about x, radians in [-pi/2, pi/2]");
    cmd->add_option("--theta2", cfg.theta2, "Build rotation about z, radians in [0, pi]");
    cmd->add_option("-j,--threads", cfg.threads,
                    "Worker threads (default: SLICEFIX_THREADS or hardware)");
}

void dump_slices(const slicefix::SliceStack& stack, const std::string& dir,
                 const std::string& prefix) {
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < stack.slices.size(); ++i) {
        std::ostringstream name;
        name << dir << "/" << prefix << "_" << i << ".pgm";
        slicefix::write_pgm(stack.slices[i], name.str());
    }
}

slicefix::CorrectionResult run_correction(const RunConfig& cfg, const slicefix::TriangleMesh& mesh,
                                          slicefix::SliceStack* input_stack_out) {
    const slicefix::Orientation o(cfg.theta1, cfg.theta2);
    const slicefix::TriangleMesh rotated = slicefix::rotate_mesh(mesh, o);
    const auto f = slicefix::StructuringElement::from_diameter(cfg.diameter_mm, cfg.pitch());

    slicefix::VoxelizeStats stats;
    slicefix::SliceStack stack =
        slicefix::voxelize(rotated, cfg.layer_height_mm, cfg.pitch(), f.radius_px + 1, &stats);
    if (!stats.watertight()) {
        std::cerr << "warning: mesh is not watertight (" << stats.open_edges
                  << " open edges, " << stats.odd_parity_rows
                  << " odd-parity scanlines); using best-effort parity fill\n";
    }

    slicefix::CorrectOptions opts;
    opts.spur_removal = !cfg.no_spur_removal;
    opts.threads = cfg.thread_count();
    slicefix::CorrectionResult result = slicefix::correct_model(stack, f, opts);
    result.report.parameters.theta1 = cfg.theta1;
    result.report.parameters.theta2 = cfg.theta2;
    if (input_stack_out) *input_stack_out = std::move(stack);
    return result;
}

int cmd_correct(const RunConfig& cfg) {
    const slicefix::TriangleMesh mesh = slicefix::load_mesh(cfg.input);
    slicefix::SliceStack input_stack;
    slicefix::CorrectionResult result = run_correction(cfg, mesh, &input_stack);

    if (!cfg.output.empty())
        slicefix::save_mesh(slicefix::extract_surface(result.corrected), cfg.output);
    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        out << result.report.to_json() << "\n";
        if (!out) throw std::runtime_error("cannot write report " + cfg.report_path);
    }
    if (!cfg.diff_prefix.empty()) {
        const slicefix::StackDiff diff = slicefix::diff_stacks(input_stack, result.corrected);
        if (diff.added > 0)
            slicefix::save_mesh(slicefix::extract_surface(diff.added_stack),
                                cfg.diff_prefix + "_added.stl");
        if (diff.removed > 0)
            slicefix::save_mesh(slicefix::extract_surface(diff.removed_stack),
                                cfg.diff_prefix + "_removed.stl");
    }
    if (!cfg.slice_dump_dir.empty()) {
        dump_slices(input_stack, cfg.slice_dump_dir, "input");
        dump_slices(result.corrected, cfg.slice_dump_dir, "corrected");
    }
    std::cout << "objective " << result.report.objective << " voxels (added "
              << result.report.total_added << ", removed " << result.report.total_removed
              << ") over " << result.report.per_layer.size() << " layers\n";
    return kExitOk;
}

int cmd_analyze(const RunConfig& cfg) {
    const slicefix::TriangleMesh mesh = slicefix::load_mesh(cfg.input);
    const slicefix::Orientation o(cfg.theta1, cfg.theta2);
    const slicefix::TriangleMesh rotated = slicefix::rotate_mesh(mesh, o);
    const auto f = slicefix::StructuringElement::from_diameter(cfg.diameter_mm, cfg.pitch());
    const slicefix::SliceStack stack =
        slicefix::voxelize(rotated, cfg.layer_height_mm, cfg.pitch(), f.radius_px + 1);

    const auto entries = slicefix::element_size_report(stack, cfg.clamp_min_mm, cfg.clamp_max_mm,
                                                       cfg.thread_count());
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!cfg.report_path.empty()) {
        file.open(cfg.report_path);
        if (!file) throw std::runtime_error("cannot write report " + cfg.report_path);
        out = &file;
    }
    *out << "{\n  \"layers\": [\n";
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        *out << "    {\"index\": " << e.index << ", \"z_mm\": " << e.z_mm << ", \"raw_px\": ";
        if (e.raw_px)
            *out << *e.raw_px << ", \"raw_mm\": " << *e.raw_mm;
        else
            *out << "null, \"raw_mm\": null";
        *out << ", \"clamped_mm\": " << e.clamped_mm << "}"
             << (i + 1 < entries.size() ? "," : "") << "\n";
    }
    *out << "  ]\n}\n";
    return kExitOk;
}

int cmd_orient(RunConfig cfg) {
    const slicefix::TriangleMesh mesh = slicefix::load_mesh(cfg.input);

    slicefix::AnnealConfig anneal_cfg;
    anneal_cfg.initial_temperature = cfg.initial_temperature;
    anneal_cfg.cooling_rate = cfg.cooling_rate;
    anneal_cfg.max_iterations = cfg.max_iterations;
    anneal_cfg.proposal_scale = cfg.proposal_scale;
    anneal_cfg.rng_seed = cfg.seed;
    anneal_cfg.initial = slicefix::Orientation(cfg.theta1, cfg.theta2);
    anneal_cfg.eval.min_feature_diameter_mm = cfg.diameter_mm;
    anneal_cfg.eval.pitch_mm = cfg.eval_pitch_mm > 0.0 ? cfg.eval_pitch_mm : cfg.pitch();
    anneal_cfg.eval.layer_height_mm = anneal_cfg.eval.pitch_mm;
    anneal_cfg.eval.threads = cfg.thread_count();

    const auto start = std::chrono::steady_clock::now();
    const slicefix::AnnealTrace trace = slicefix::anneal(mesh, anneal_cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!cfg.trace_path.empty()) trace.write_csv(cfg.trace_path);
    if (!cfg.summary_path.empty()) {
        std::ofstream out(cfg.summary_path);
        out << trace.summary_json(seconds) << "\n";
        if (!out) throw std::runtime_error("cannot write summary " + cfg.summary_path);
    }
    std::cout << "initial objective " << trace.initial_objective << ", optimized "
              << trace.best_objective << " at theta=[" << trace.best.theta1 << ", "
              << trace.best.theta2 << "]\n";

    if (cfg.apply_best) {
        cfg.theta1 = trace.best.theta1;
        cfg.theta2 = trace.best.theta2;
        return cmd_correct(cfg);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corrects a 3D model for additive-manufacturing printability"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read options from a config file; use a [subcommand] section");

    RunConfig cfg;

    CLI::App* correct = app.add_subcommand(
        "correct", "Correct a model at a fixed build orientation");
    add_common_options(correct, cfg);
    correct->add_option("-o,--output", cfg.output, "Corrected mesh output (STL or OBJ)");
    correct->add_option("--report", cfg.report_path, "Write correction report JSON");
    correct->add_option("--diff-meshes", cfg.diff_prefix,
                        "Write <prefix>_added.stl / <prefix>_removed.stl");
    correct->add_option("--slice-dump", cfg.slice_dump_dir, "Dump slices as PGM into directory");
    correct->add_flag("--no-spur-removal", cfg.no_spur_removal,
                      "Disable spur-pixel removal in the skeleton step");

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Report per-layer maximum structuring element size");
    add_common_options(analyze, cfg);
    analyze->add_option("--report", cfg.report_path, "Write element-size report JSON");
    analyze->add_option("--clamp-min", cfg.clamp_min_mm, "Clamp range minimum in mm");
    analyze->add_option("--clamp-max", cfg.clamp_max_mm, "Clamp range maximum in mm");

    CLI::App* orient = app.add_subcommand(
        "orient", "Optimize the build orientation by simulated annealing");
    add_common_options(orient, cfg);
    orient->add_option("--trace", cfg.trace_path, "Write per-iteration trace CSV");
    orient->add_option("--summary", cfg.summary_path, "Write summary JSON");
    orient->add_option("--seed", cfg.seed, "RNG seed");
    orient->add_option("--max-iterations", cfg.max_iterations, "Annealing iteration budget");
    orient->add_option("--cooling", cfg.cooling_rate, "Exponential cooling rate in (0,1)");
    orient->add_option("--initial-temperature", cfg.initial_temperature,
                       "Initial temperature (0 = objective at initial orientation)");
    orient->add_option("--proposal-scale", cfg.proposal_scale,
                       "Gaussian step scale in radians per unit temperature");
    orient->add_option("--eval-pitch", cfg.eval_pitch_mm,
                       "Coarser pitch for objective evaluations (mm)");
    orient->add_option("-o,--output", cfg.output, "Corrected mesh output when applying theta*");
    orient->add_option("--report", cfg.report_path, "Report JSON when applying theta*");
    orient->add_flag("--apply", cfg.apply_best, "Run the correction at theta* afterwards");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (correct->parsed()) return cmd_correct(cfg);
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (orient->parsed()) return cmd_orient(cfg);
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

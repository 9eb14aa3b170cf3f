#include "slicefix/orient.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace slicefix {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;
}  // namespace

long long evaluate_objective(const TriangleMesh& m, const Orientation& o,
                             const ObjectiveParams& params) {
    const TriangleMesh rotated = rotate_mesh(m, o);
    const StructuringElement f =
        StructuringElement::from_diameter(params.min_feature_diameter_mm, params.pitch_mm);
    SliceStack stack;
    try {
        stack = voxelize(rotated, params.layer_height_mm, params.pitch_mm, f.radius_px + 1);
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "evaluate_objective at theta=[" << o.theta1 << ", " << o.theta2
            << "]: " << e.what();
        throw std::runtime_error(msg.str());
    }
    CorrectOptions opts;
    opts.threads = params.threads;
    opts.compute_element_sizes = false;
    return correct_model(stack, f, opts).report.objective;
}

Orientation propose(const Orientation& current, double temperature,
                    double initial_temperature, double proposal_scale,
                    std::mt19937_64& rng) {
    if (!(temperature > 0.0)) throw std::invalid_argument("propose: temperature must be > 0");
    const double sigma = proposal_scale * temperature / initial_temperature;
    std::normal_distribution<double> step(0.0, sigma);
    Orientation next;
    next.theta1 = std::clamp(current.theta1 + step(rng), -kHalfPi, kHalfPi);
    next.theta2 = std::clamp(current.theta2 + step(rng), 0.0, kPi);
    return next;
}

bool accept(double delta, double temperature, std::mt19937_64& rng) {
    if (!(temperature > 0.0)) throw std::invalid_argument("accept: temperature must be > 0");
    if (delta <= 0.0) return true;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < std::exp(-delta / temperature);
}

AnnealTrace anneal(const std::function<double(const Orientation&)>& objective,
                   const AnnealConfig& config) {
    if (!(config.cooling_rate > 0.0) || !(config.cooling_rate < 1.0))
        throw std::invalid_argument("anneal: cooling_rate must be in (0,1)");
    if (config.max_iterations < 1)
        throw std::invalid_argument("anneal: max_iterations must be >= 1");
    if (!(config.proposal_scale > 0.0))
        throw std::invalid_argument("anneal: proposal_scale must be > 0");

    std::mt19937_64 rng(config.rng_seed);
    AnnealTrace trace;
    Orientation current = config.initial;
    double current_obj = objective(current);
    trace.initial_objective = current_obj;
    trace.best = current;
    trace.best_objective = current_obj;

    const double t0 = config.initial_temperature > 0.0
                          ? config.initial_temperature
                          : std::max(current_obj, 1.0);
    trace.initial_temperature = t0;

    for (int t = 0; t < config.max_iterations; ++t) {
        const double temperature = t0 * std::pow(config.cooling_rate, t);
        const Orientation candidate =
            propose(current, temperature, t0, config.proposal_scale, rng);
        const double obj = objective(candidate);
        const bool acc = accept(obj - current_obj, temperature, rng);

        AnnealRecord rec;
        rec.iteration = t;
        rec.theta1 = candidate.theta1;
        rec.theta2 = candidate.theta2;
        rec.objective = obj;
        rec.temperature = temperature;
        rec.accepted = acc;
        trace.records.push_back(rec);

        if (obj < trace.best_objective) {
            trace.best_objective = obj;
            trace.best = candidate;
        }
        if (acc) {
            current = candidate;
            current_obj = obj;
        }
    }
    return trace;
}

AnnealTrace anneal(const TriangleMesh& m, const AnnealConfig& config) {
    return anneal(
        [&](const Orientation& o) {
            return static_cast<double>(evaluate_objective(m, o, config.eval));
        },
        config);
}

void AnnealTrace::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "iteration,theta1,theta2,objective,temperature,accepted\n";
    out.precision(12);
    for (const auto& r : records) {
        out << r.iteration << "," << r.theta1 << "," << r.theta2 << "," << r.objective
            << "," << r.temperature << "," << (r.accepted ? 1 : 0) << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

std::string AnnealTrace::summary_json(double wall_seconds) const {
    nlohmann::json j;
    j["initial_objective"] = initial_objective;
    j["optimized_objective"] = best_objective;
    j["theta"] = {best.theta1, best.theta2};
    j["initial_temperature"] = initial_temperature;
    j["iterations"] = records.size();
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

}  // namespace slicefix

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "slicefix/correct.hpp"
#include "slicefix/volume.hpp"

namespace slicefix {

struct ObjectiveParams {
    double min_feature_diameter_mm = 1.0;
    double layer_height_mm = 0.2;
    double pitch_mm = 0.2;
    int threads = 1;
};

struct AnnealConfig {
    /// 0 means self-scaling: the objective at the initial orientation.
    double initial_temperature = 0.0;
    double cooling_rate = 0.97;
    int max_iterations = 300;
    double proposal_scale = 0.7853981633974483;  // pi/4 radians per unit temperature
    std::uint64_t rng_seed = 0;
    Orientation initial{0.0, 0.0};
    /// Evaluation resolution; may be coarser than the final correction.
    ObjectiveParams eval;
};

struct AnnealRecord {
    int iteration = 0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double objective = 0.0;
    double temperature = 0.0;
    bool accepted = false;
};

struct AnnealTrace {
    std::vector<AnnealRecord> records;
    Orientation best{0.0, 0.0};
    double best_objective = 0.0;
    double initial_objective = 0.0;
    double initial_temperature = 0.0;

    void write_csv(const std::string& path) const;
    std::string summary_json(double wall_seconds) const;
};

/// Rotate, voxelize (padded so dilation cannot clip), correct, and return the
/// total added + removed voxel count.
long long evaluate_objective(const TriangleMesh& m, const Orientation& o,
                             const ObjectiveParams& params);

/// Gaussian step per component with sigma = proposal_scale * T / T0,
/// clipped to the orientation box.
Orientation propose(const Orientation& current, double temperature,
                    double initial_temperature, double proposal_scale, std::mt19937_64& rng);

/// Metropolis rule: always accept improvements, otherwise accept with
/// probability exp(-delta / temperature).
bool accept(double delta, double temperature, std::mt19937_64& rng);

/// Simulated annealing over an arbitrary objective with exponential cooling.
/// Returns the best evaluated candidate, not the final chain state.
AnnealTrace anneal(const std::function<double(const Orientation&)>& objective,
                   const AnnealConfig& config);

/// Convenience wrapper evaluating the shape-correction objective on a mesh.
AnnealTrace anneal(const TriangleMesh& m, const AnnealConfig& config);

}  // namespace slicefix

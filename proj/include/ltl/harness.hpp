#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltl/automaton.hpp"
#include "ltl/grid.hpp"
#include "ltl/kernel.hpp"
#include "ltl/lifeform.hpp"

namespace ltl {

struct HarnessOptions {
    Backend backend = Backend::Auto;
    int threads = 1;
};

/// One resolution level of a refinement ladder.
struct LadderLevel {
    double epsilon = 0.0;
    int steps = 0;
    /// l1 distance between this level's result and the finest level's,
    /// both block-averaged onto the coarsest grid.
    double gap_to_finest = 0.0;
    /// l1 distance between one further step and the level's result.
    double self_gap = 0.0;
};

struct LadderResult {
    std::string shape_id;
    std::string kernel_id;
    ThresholdQuad quad;
    std::vector<LadderLevel> levels;  ///< ordered as eps_list (coarse to fine)
};

/// Rasterizes the shape at every epsilon in eps_list (strictly decreasing;
/// the coarsest must be an integer multiple of every level, else
/// ConfigurationError), runs T steps at each level, block-averages each
/// result onto the coarsest grid, and reports gaps against the finest
/// level.  Levels use a common centered lattice so block averaging is
/// exact (no resampling).
LadderResult refinement_ladder(const AnalyticShape& shape, const ThresholdQuad& quad,
                               const KernelSpec& kernel, const std::vector<double>& eps_list,
                               int steps, const HarnessOptions& opts = {});

enum class PerturbationKind { Threshold, Kernel };

struct PerturbationRow {
    double size = 0.0;
    double gap = 0.0;  ///< l1 distance between perturbed and base one-step output
};

struct PerturbationResult {
    std::vector<PerturbationRow> rows;
    /// Margin probe of the base input at delta = smallest perturbation
    /// size: the final gap is bounded by ms + mb.
    MarginReport final_margin;
};

/// One step from the same input under perturbed rules.  Threshold kind
/// shifts all four thresholds by +size (invalid shifted quads raise
/// ThresholdOrderError); Kernel kind rediscretizes `kernel` with radius
/// scaled by (1 + size).  Sizes must be strictly decreasing.
PerturbationResult perturbation_study(PerturbationKind kind, const BinaryConfig& a,
                                      const AutomatonSpec& spec, const KernelSpec& kernel,
                                      const std::vector<double>& sizes);

/// Life-form detection across resolutions.
struct EvolutionLevel {
    double epsilon = 0.0;
    LifeFormReport report;
    /// displacement x epsilon (per period), for velocity comparison.
    std::vector<double> displacement_physical;
};

struct EvolutionTrack {
    std::vector<EvolutionLevel> levels;
    bool consistent = false;  ///< same kind at every level, none unresolved
    LifeFormReport::Kind kind = LifeFormReport::Kind::Unresolved;
};

EvolutionTrack lifeform_evolution_track(const AnalyticShape& shape, const ThresholdQuad& quad,
                                        const KernelSpec& kernel,
                                        const std::vector<double>& eps_list, int max_steps,
                                        const HarnessOptions& opts = {});

/// Batch experiment description (JSON, schema 1).  Exactly one seed source
/// is used: an analytic shape, an inline/external pattern, or a seeded
/// random blob.
struct Experiment {
    std::string mode;  ///< run | construct | detect | ladder | perturb | verify
    int dim = 2;

    ThresholdQuad quad;
    KernelSpec kernel;
    bool kernel_is_uniform = false;  ///< uniform count kernel requested
    long uniform_n = 1;              ///< radius for the uniform kernel

    double epsilon = 1.0;
    std::optional<AnalyticShape> shape;
    double ribbon_length = 2.0;
    std::optional<std::string> pattern_path;
    std::optional<std::vector<long>> random_extent;  ///< random blob box
    double random_density = 0.5;

    int steps = 0;
    int max_steps = 64;
    int max_period = 32;
    std::vector<double> eps_list;
    PerturbationKind perturb_kind = PerturbationKind::Threshold;
    std::vector<double> perturb_sizes;

    Backend backend = Backend::Auto;
    int threads = 1;
    std::uint64_t seed = 1;
    bool frames = false;
    int render_scale = 1;

    /// Discrete kernel implied by the experiment (uniform_kernel or
    /// discretize_kernel at `epsilon`).
    DiscreteKernel make_kernel() const;
    AutomatonSpec make_spec() const;
    /// Seed configuration on a growable (or ribbon-periodic) domain.
    BinaryConfig make_seed() const;
};

/// Parses and validates an experiment config.  ParseError for malformed
/// JSON, ConfigurationError for missing/invalid fields (message names the
/// field).
Experiment parse_experiment_text(const std::string& json_text);
Experiment load_experiment(const std::string& path);

}  // namespace ltl

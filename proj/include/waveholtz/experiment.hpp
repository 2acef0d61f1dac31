#ifndef WAVEHOLTZ_EXPERIMENT_HPP
#define WAVEHOLTZ_EXPERIMENT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "waveholtz/dg.hpp"
#include "waveholtz/fd.hpp"
#include "waveholtz/iteration.hpp"
#include "waveholtz/spectral.hpp"

namespace wh
{
    enum class Discretization
    {
        FD,
        DG
    };

    enum class ForcingPreset
    {
        Zero,
        GaussianPointSource,
        ImplicitFromInitialError // F = 0, the initial state is the initial error
    };

    enum class InitialPreset
    {
        Zero,
        SlowStart // u0 = 2 sin^2(pi x) sin(omega x), right-moving
    };

    struct OmegaSweep
    {
        double start = 0.0;
        double stop = 0.0;
        int count = 0;

        std::vector<double> values() const;
    };

    struct ExperimentConfig
    {
        Discretization discretization = Discretization::FD;
        int degree = 1;
        FluxKind flux = FluxKind::Central;
        int dimension = 1;
        double omega = 0.0;
        std::optional<OmegaSweep> sweep;
        double resolution_constant = 10.0;
        std::array<BoundaryCondition, 4> boundary {BoundaryCondition::Neumann, BoundaryCondition::Outflow,
                                                   BoundaryCondition::Neumann, BoundaryCondition::Outflow};
        ForcingPreset forcing = ForcingPreset::GaussianPointSource;
        std::array<double, 2> source_center {-0.7, -0.1};
        InitialPreset initial = InitialPreset::Zero;
        double cfl = default_cfl;
        int min_steps = default_min_steps;
        int n_steps = 0; // 0: choose from cfl and min_steps
        double tol = 1e-6;
        int max_iters = 5000;
        bool stop_at_tol = true;
        int rate_window = 1000;
        bool spectrum = false;
        bool oracle_error = false;
        bool eigen_coefficients = false;
        std::size_t dense_cap = default_dense_cap;
        bool allow_large_2d = false; // 2D runs above omega = 10 pi

        std::vector<double> omegas() const;
    };

    /// the defaults as a JSON document; every tunable appears.
    nlohmann::json default_config_json();

    // Parses a configuration on top of the defaults. Frequencies may be numbers
    // or strings such as "10pi". Unknown keys and invalid values throw
    // Configuration errors.
    ExperimentConfig parse_config(const nlohmann::json& j);
    nlohmann::json to_json(const ExperimentConfig& c);

    /// applies "a.b.c=value" to a JSON document; value is parsed as JSON when
    /// possible and kept as a string otherwise.
    void apply_override(nlohmann::json& j, const std::string& assignment);

    double parse_omega(const nlohmann::json& v);

    DiscreteSystem build_system(const ExperimentConfig& c, double omega);
    Vector initial_state(const ExperimentConfig& c, const DiscreteSystem& system);
    TimeGrid time_grid(const ExperimentConfig& c, const DiscreteSystem& system);

    struct PointResult
    {
        double omega = 0.0;
        std::size_t dofs = 0;
        int n_steps = 0;
        IterationReport report;
        std::optional<SpectralReport> spectrum;
        std::optional<int> N;
        double rate_first = std::numeric_limits<double>::quiet_NaN();
        double rate_avg_e = std::numeric_limits<double>::quiet_NaN();
        double rate_avg_mu = std::numeric_limits<double>::quiet_NaN();
        int rate_window_used = 0;
        std::string error; // nonempty if the point failed
    };

    /// one WaveHoltz run with the configured diagnostics.
    PointResult run_point(const ExperimentConfig& c, double omega);

    /// spectral diagnostics only.
    SpectralReport run_spectrum(const ExperimentConfig& c, double omega);

    /// runs every omega of the sweep with up to `workers` concurrent points;
    /// failures are recorded per point.
    std::vector<PointResult> run_sweep(const ExperimentConfig& c, int workers);
} // namespace wh

#endif

#include "waveholtz/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <thread>

#include "waveholtz/errors.hpp"
#include "waveholtz/presets.hpp"

namespace wh
{
    using nlohmann::json;

    static constexpr double pi = std::numbers::pi;

    std::vector<double> OmegaSweep::values() const
    {
        std::vector<double> w(count);
        for (int k = 0; k < count; ++k)
            w[k] = (count == 1) ? start : start + (stop - start) * k / (count - 1);
        return w;
    }

    std::vector<double> ExperimentConfig::omegas() const
    {
        return sweep ? sweep->values() : std::vector<double>{omega};
    }

    static const char * side_names[4] = {"left", "right", "bottom", "top"};

    json default_config_json()
    {
        ExperimentConfig c;
        c.omega = 10.0 * pi;
        return to_json(c);
    }

    static std::string to_string(BoundaryCondition bc)
    {
        return bc == BoundaryCondition::Neumann ? "neumann" : "outflow";
    }

    static std::string to_string(ForcingPreset f)
    {
        switch (f)
        {
        case ForcingPreset::Zero: return "zero";
        case ForcingPreset::GaussianPointSource: return "gaussian-point-source";
        case ForcingPreset::ImplicitFromInitialError: return "implicit-from-initial-error";
        }
        return "zero";
    }

    json to_json(const ExperimentConfig& c)
    {
        json j;
        j["discretization"] = (c.discretization == Discretization::FD) ? "fd" : "dg";
        j["degree"] = c.degree;
        j["flux"] = (c.flux == FluxKind::Central) ? "central" : "upwind";
        j["dimension"] = c.dimension;
        j["omega"] = c.omega;
        if (c.sweep)
            j["sweep"] = {{"start", c.sweep->start}, {"stop", c.sweep->stop}, {"count", c.sweep->count}};
        else
            j["sweep"] = nullptr;
        j["resolution_constant"] = c.resolution_constant;
        for (int s = 0; s < 4; ++s)
            j["boundary"][side_names[s]] = to_string(c.boundary[s]);
        j["forcing"] = {{"preset", to_string(c.forcing)}, {"center", {c.source_center[0], c.source_center[1]}}};
        j["initial_condition"] = (c.initial == InitialPreset::Zero) ? "zero" : "paper-1d-ic";
        j["time"] = {{"cfl", c.cfl}, {"min_steps", c.min_steps}, {"n_steps", c.n_steps}};
        j["tol"] = c.tol;
        j["max_iters"] = c.max_iters;
        j["stop_at_tol"] = c.stop_at_tol;
        j["rate_window"] = c.rate_window;
        j["diagnostics"] = {{"spectrum", c.spectrum}, {"oracle_error", c.oracle_error}, {"eigen_coefficients", c.eigen_coefficients}};
        j["dense_cap"] = c.dense_cap;
        j["allow_large_2d"] = c.allow_large_2d;
        return j;
    }

    double parse_omega(const json& v)
    {
        if (v.is_number())
            return v.get<double>();
        if (v.is_string())
        {
            std::string s = v.get<std::string>();
            std::erase(s, ' ');
            double scale = 1.0;
            if (s.size() >= 2 && s.substr(s.size() - 2) == "pi")
            {
                scale = pi;
                s.resize(s.size() - 2);
                if (!s.empty() && s.back() == '*')
                    s.pop_back();
                if (s.empty())
                    s = "1";
            }
            try
            {
                std::size_t used = 0;
                const double x = std::stod(s, &used);
                if (used == s.size())
                    return x * scale;
            }
            catch (const std::exception&)
            {
            }
        }
        throw Error(ErrorKind::Configuration, "cannot read a frequency from " + v.dump());
    }

    // Recursively merges `src` into `dst`, rejecting keys absent from `dst`.
    static void merge_known(json& dst, const json& src, const std::string& path)
    {
        if (!src.is_object())
            throw Error(ErrorKind::Configuration, "configuration section '" + path + "' must be an object");

        for (auto it = src.begin(); it != src.end(); ++it)
        {
            const std::string key = path.empty() ? it.key() : path + "." + it.key();
            if (!dst.contains(it.key()))
                throw Error(ErrorKind::Configuration, "unknown configuration key '" + key + "'");

            json& d = dst[it.key()];
            if (d.is_object() && it.value().is_object() && it.key() != "sweep")
                merge_known(d, it.value(), key);
            else
                d = it.value();
        }
    }

    template <typename T>
    static T get(const json& j, const char * key)
    {
        try
        {
            return j.at(key).get<T>();
        }
        catch (const json::exception&)
        {
            throw Error(ErrorKind::Configuration, std::string("invalid value for '") + key + "': " + j.at(key).dump());
        }
    }

    ExperimentConfig parse_config(const json& input)
    {
        json j = default_config_json();
        merge_known(j, input, "");

        ExperimentConfig c;

        const auto disc = get<std::string>(j, "discretization");
        if (disc == "fd")
            c.discretization = Discretization::FD;
        else if (disc == "dg")
            c.discretization = Discretization::DG;
        else
            throw Error(ErrorKind::Configuration, "discretization must be 'fd' or 'dg'");

        c.degree = get<int>(j, "degree");
        const auto flux = get<std::string>(j, "flux");
        if (flux == "central")
            c.flux = FluxKind::Central;
        else if (flux == "upwind")
            c.flux = FluxKind::Upwind;
        else
            throw Error(ErrorKind::Configuration, "flux must be 'central' or 'upwind'");

        c.dimension = get<int>(j, "dimension");
        if (c.dimension != 1 && c.dimension != 2)
            throw Error(ErrorKind::Configuration, "dimension must be 1 or 2");
        if (c.degree < 1)
            throw Error(ErrorKind::Configuration, "degree must be at least 1");

        c.omega = parse_omega(j.at("omega"));

        if (!j.at("sweep").is_null())
        {
            const json& s = j.at("sweep");
            if (!s.is_object() || !s.contains("start") || !s.contains("stop") || !s.contains("count"))
                throw Error(ErrorKind::Configuration, "sweep needs start, stop and count");
            for (auto it = s.begin(); it != s.end(); ++it)
                if (it.key() != "start" && it.key() != "stop" && it.key() != "count")
                    throw Error(ErrorKind::Configuration, "unknown configuration key 'sweep." + it.key() + "'");

            OmegaSweep sw;
            sw.start = parse_omega(s.at("start"));
            sw.stop = parse_omega(s.at("stop"));
            sw.count = get<int>(s, "count");
            if (sw.count < 2)
                throw Error(ErrorKind::Configuration, "a sweep needs count >= 2");
            if (!(sw.start > 0.0) || !(sw.stop > sw.start))
                throw Error(ErrorKind::Configuration, "a sweep needs 0 < start < stop");
            c.sweep = sw;
        }

        for (double w : c.omegas())
            require_positive_frequency(w);

        c.resolution_constant = get<double>(j, "resolution_constant");
        if (!(c.resolution_constant > 0.0))
            throw Error(ErrorKind::Configuration, "resolution_constant must be positive");

        for (int s = 0; s < 4; ++s)
        {
            const auto b = get<std::string>(j.at("boundary"), side_names[s]);
            if (b == "neumann")
                c.boundary[s] = BoundaryCondition::Neumann;
            else if (b == "outflow")
                c.boundary[s] = BoundaryCondition::Outflow;
            else
                throw Error(ErrorKind::Configuration, "boundary conditions are 'neumann' or 'outflow'");
        }

        const json& forcing = j.at("forcing");
        const auto fp = get<std::string>(forcing, "preset");
        if (fp == "zero")
            c.forcing = ForcingPreset::Zero;
        else if (fp == "gaussian-point-source")
            c.forcing = ForcingPreset::GaussianPointSource;
        else if (fp == "implicit-from-initial-error")
            c.forcing = ForcingPreset::ImplicitFromInitialError;
        else
            throw Error(ErrorKind::Configuration, "unknown forcing preset '" + fp + "'");

        const auto center = get<std::vector<double>>(forcing, "center");
        if (center.size() != 2)
            throw Error(ErrorKind::Configuration, "forcing.center needs two coordinates");
        c.source_center = {center[0], center[1]};

        const auto ic = get<std::string>(j, "initial_condition");
        if (ic == "zero")
            c.initial = InitialPreset::Zero;
        else if (ic == "paper-1d-ic")
            c.initial = InitialPreset::SlowStart;
        else
            throw Error(ErrorKind::Configuration, "unknown initial condition '" + ic + "'");

        if (c.forcing == ForcingPreset::ImplicitFromInitialError && c.initial != InitialPreset::SlowStart)
            throw Error(ErrorKind::Configuration, "implicit-from-initial-error forcing needs a nonzero initial condition");
        if (c.initial == InitialPreset::SlowStart && c.dimension != 1)
            throw Error(ErrorKind::Configuration, "paper-1d-ic is one dimensional");

        const json& t = j.at("time");
        c.cfl = get<double>(t, "cfl");
        c.min_steps = get<int>(t, "min_steps");
        c.n_steps = get<int>(t, "n_steps");
        if (!(c.cfl > 0.0) || c.min_steps < 2 || (c.n_steps != 0 && c.n_steps < 2))
            throw Error(ErrorKind::Configuration, "time: need cfl > 0, min_steps >= 2 and n_steps = 0 or >= 2");

        c.tol = get<double>(j, "tol");
        c.max_iters = get<int>(j, "max_iters");
        c.stop_at_tol = get<bool>(j, "stop_at_tol");
        c.rate_window = get<int>(j, "rate_window");
        if (!(c.tol > 0.0) || c.max_iters < 1 || c.rate_window < 1)
            throw Error(ErrorKind::Configuration, "need tol > 0, max_iters >= 1, rate_window >= 1");

        const json& d = j.at("diagnostics");
        c.spectrum = get<bool>(d, "spectrum");
        c.oracle_error = get<bool>(d, "oracle_error");
        c.eigen_coefficients = get<bool>(d, "eigen_coefficients");

        c.dense_cap = get<std::size_t>(j, "dense_cap");
        c.allow_large_2d = get<bool>(j, "allow_large_2d");

        if (c.dimension == 2)
        {
            const std::vector<double> omegas = c.omegas();
            const double w_max = *std::max_element(omegas.begin(), omegas.end());
            if (w_max > 10.0 * pi * (1.0 + 1e-12) && !c.allow_large_2d)
                throw Error(ErrorKind::Configuration, "2D runs above omega = 10 pi are long; set allow_large_2d=true to run them");
        }

        return c;
    }

    void apply_override(json& j, const std::string& assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::Configuration, "override must look like key=value, got '" + assignment + "'");

        const std::string key = assignment.substr(0, eq);
        const std::string text = assignment.substr(eq + 1);

        json value = json::parse(text, nullptr, false);
        if (value.is_discarded())
            value = text;

        json * node = &j;
        std::size_t start = 0;
        while (true)
        {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty())
                throw Error(ErrorKind::Configuration, "malformed override key '" + key + "'");
            if (!node->is_object())
                *node = json::object();
            node = &(*node)[part];
            if (dot == std::string::npos)
                break;
            start = dot + 1;
        }
        *node = value;
    }

    DiscreteSystem build_system(const ExperimentConfig& c, double omega)
    {
        require_positive_frequency(omega);

        BoundarySpec bc;
        bc.dim = c.dimension;
        bc.sides = c.boundary;

        SourceFunction f;
        if (c.forcing == ForcingPreset::GaussianPointSource)
            f = gaussian_point_source(omega, c.dimension, c.source_center[0], c.source_center[1]);

        if (c.discretization == Discretization::FD)
            return build_fd(omega, fd_resolution(omega, c.resolution_constant, c.dimension), bc, f);
        return build_dg(omega, dg_resolution(omega, c.degree, c.resolution_constant, c.dimension), c.flux, bc, f);
    }

    Vector initial_state(const ExperimentConfig& c, const DiscreteSystem& system)
    {
        if (c.initial == InitialPreset::SlowStart)
            return slow_start_initial_error(system);
        return Vector(system.size(), 0.0);
    }

    TimeGrid time_grid(const ExperimentConfig& c, const DiscreteSystem& system)
    {
        if (c.n_steps > 0)
            return TimeGrid::over_period(system.omega, c.n_steps);
        return choose_time_grid(system, c.cfl, c.min_steps);
    }

    // mean one-step ratio over the first min(K, available) steps
    static double windowed_rate(const std::vector<double>& h, int K, int& used)
    {
        int k = std::min<int>(K, int(h.size()) - 1);
        while (k > 0 && h[k - 1] == 0.0)
            --k;
        used = k;
        if (k < 1)
            return std::numeric_limits<double>::quiet_NaN();
        return average_rate(h, k);
    }

    PointResult run_point(const ExperimentConfig& c, double omega)
    {
        PointResult r;
        r.omega = omega;

        const DiscreteSystem system = build_system(c, omega);
        const TimeGrid grid = time_grid(c, system);
        r.dofs = system.size();
        r.n_steps = grid.n_steps;

        std::optional<EigenDecomposition> eig;
        if (c.spectrum || c.eigen_coefficients)
        {
            eig = eigendecompose(system, c.dense_cap);
            r.spectrum = spectral_report(*eig, omega);
        }

        std::optional<ComplexVector> oracle;
        if (c.oracle_error || c.eigen_coefficients)
            oracle = system.has_forcing() ? direct_helmholtz_solve(system) : ComplexVector(system.size(), 0.0);

        std::optional<ComplexLU> lu;
        if (c.eigen_coefficients)
            lu.emplace(eig->R);

        const Vector w0 = initial_state(c, system);
        IterationOptions opts{c.tol, c.max_iters, c.stop_at_tol};
        r.report = waveholtz_iterate(system, w0, grid, opts, oracle ? &*oracle : nullptr, lu ? &*lu : nullptr);
        r.N = r.report.iterations_to_tol;

        if (!r.report.err_e.empty())
        {
            if (r.report.err_e.size() >= 2 && r.report.err_e[0] > 0.0)
                r.rate_first = r.report.first_rate;
            r.rate_avg_e = windowed_rate(r.report.err_e, c.rate_window, r.rate_window_used);
        }
        if (!r.report.err_mu.empty())
        {
            int used = 0;
            r.rate_avg_mu = windowed_rate(r.report.err_mu, c.rate_window, used);
        }
        return r;
    }

    SpectralReport run_spectrum(const ExperimentConfig& c, double omega)
    {
        const DiscreteSystem system = build_system(c, omega);
        return spectral_report(system, c.dense_cap);
    }

    std::vector<PointResult> run_sweep(const ExperimentConfig& c, int workers)
    {
        const std::vector<double> omegas = c.omegas();
        std::vector<PointResult> results(omegas.size());

        std::atomic<std::size_t> next {0};
        auto worker = [&]()
        {
            for (std::size_t k = next++; k < omegas.size(); k = next++)
            {
                try
                {
                    results[k] = run_point(c, omegas[k]);
                }
                catch (const std::exception& e)
                {
                    results[k] = PointResult {};
                    results[k].omega = omegas[k];
                    results[k].error = e.what();
                }
            }
        };

        const int n = std::max(1, std::min<int>(workers, int(omegas.size())));
        std::vector<std::thread> pool;
        for (int t = 1; t < n; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto& t : pool)
            t.join();

        return results;
    }
} // namespace wh

#include "waveholtz/time_integration.hpp"

#include <cmath>
#include <numbers>

#include "waveholtz/errors.hpp"
#include "waveholtz/filter.hpp"

namespace wh
{
    TimeGrid TimeGrid::over_period(double omega, int n_steps)
    {
        require_positive_frequency(omega);
        if (n_steps < 2)
            throw Error(ErrorKind::Configuration, "time grid needs at least 2 steps");

        TimeGrid g;
        g.T = 2.0 * std::numbers::pi / omega;
        g.n_steps = n_steps;
        g.dt = g.T / n_steps;
        return g;
    }

    TimeGrid choose_time_grid(const DiscreteSystem& system, double cfl, int min_steps)
    {
        if (!(cfl > 0.0))
            throw Error(ErrorKind::Configuration, "cfl must be positive");
        if (min_steps < 2)
            throw Error(ErrorKind::Configuration, "min_steps must be at least 2");

        const double T = 2.0 * std::numbers::pi / system.omega;
        const double dt_stable = cfl * system.dt_scale;
        const int cfl_steps = int(std::ceil(T / dt_stable));
        return TimeGrid::over_period(system.omega, std::max(min_steps, cfl_steps));
    }

    static void axpy_into(std::span<double> out, std::span<const double> w, double a, std::span<const double> k)
    {
        const std::size_t n = out.size();
        #pragma omp parallel for
        for (std::size_t i = 0; i < n; ++i)
            out[i] = w[i] + a * k[i];
    }

    // k = A x - F phase(omega t)
    static void rhs(const DiscreteSystem& system, std::span<const double> x, double t, bool forced, std::span<double> k)
    {
        system.apply(x, k);
        if (!forced)
            return;

        const double c = system.phase_value(t);
        const double * F = system.forcing.data();
        const std::size_t n = k.size();
        #pragma omp parallel for
        for (std::size_t i = 0; i < n; ++i)
            k[i] -= c * F[i];
    }

    Vector rk4_step(const DiscreteSystem& system, std::span<const double> w, double t, double dt)
    {
        if (w.size() != system.size())
            throw Error(ErrorKind::Dimension, "rk4_step: state length mismatch");
        if (!(dt > 0.0))
            throw Error(ErrorKind::Configuration, "rk4_step: dt must be positive");

        const std::size_t n = w.size();
        Vector k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);

        rhs(system, w, t, true, k1);
        axpy_into(tmp, w, 0.5 * dt, k1);
        rhs(system, tmp, t + 0.5 * dt, true, k2);
        axpy_into(tmp, w, 0.5 * dt, k2);
        rhs(system, tmp, t + 0.5 * dt, true, k3);
        axpy_into(tmp, w, dt, k3);
        rhs(system, tmp, t + dt, true, k4);

        for (std::size_t i = 0; i < n; ++i)
            out[i] = w[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return out;
    }

    FilteredPropagator::FilteredPropagator(const DiscreteSystem& system, const TimeGrid& grid) : sys(system), tg(grid)
    {
        const std::size_t n = system.size();
        w.resize(n);
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }

    void FilteredPropagator::step(double t, bool forced)
    {
        const double dt = tg.dt;
        rhs(sys, w, t, forced, k1);
        axpy_into(tmp, w, 0.5 * dt, k1);
        rhs(sys, tmp, t + 0.5 * dt, forced, k2);
        axpy_into(tmp, w, 0.5 * dt, k2);
        rhs(sys, tmp, t + 0.5 * dt, forced, k3);
        axpy_into(tmp, w, dt, k3);
        rhs(sys, tmp, t + dt, forced, k4);

        const std::size_t n = w.size();
        const double c = dt / 6.0;
        #pragma omp parallel for
        for (std::size_t i = 0; i < n; ++i)
            w[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    void FilteredPropagator::apply(std::span<const double> w0, std::span<double> out, Forcing forcing)
    {
        if (w0.size() != sys.size() || out.size() != sys.size())
            throw Error(ErrorKind::Dimension, "propagate_and_filter: state length mismatch");

        const bool forced = (forcing == Forcing::Include) && sys.has_forcing();
        const double omega = sys.omega;
        const double scale = 2.0 / tg.T * tg.dt;
        const std::size_t n = w.size();

        std::copy(w0.begin(), w0.end(), w.begin());

        auto accumulate = [&](double c, bool first)
        {
            #pragma omp parallel for
            for (std::size_t i = 0; i < n; ++i)
                out[i] = (first ? 0.0 : out[i]) + c * w[i];
        };

        accumulate(0.5 * scale * filter_weight(0.0, omega), true);
        for (int k = 1; k <= tg.n_steps; ++k)
        {
            step((k - 1) * tg.dt, forced);
            const double c = (k == tg.n_steps) ? 0.5 : 1.0;
            accumulate(c * scale * filter_weight(k * tg.dt, omega), false);
        }
    }

    Vector propagate_and_filter(const DiscreteSystem& system, std::span<const double> w0, const TimeGrid& grid, Forcing forcing)
    {
        FilteredPropagator prop(system, grid);
        Vector out(system.size());
        prop.apply(w0, out, forcing);
        return out;
    }
} // namespace wh

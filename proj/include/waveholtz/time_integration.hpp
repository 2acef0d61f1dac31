#ifndef WAVEHOLTZ_TIME_INTEGRATION_HPP
#define WAVEHOLTZ_TIME_INTEGRATION_HPP

#include "waveholtz/discrete_system.hpp"

namespace wh
{
    struct TimeGrid
    {
        double T = 0.0; // 2 pi / omega
        int n_steps = 2;
        double dt = 0.0;

        static TimeGrid over_period(double omega, int n_steps);
    };

    inline constexpr double default_cfl = 0.5;
    inline constexpr int default_min_steps = 200;

    // n_steps = max(min_steps, ceil(T / (cfl * dt_scale))); dt_scale is h for
    // finite differences and h / (2P + 1) for DG.
    TimeGrid choose_time_grid(const DiscreteSystem& system, double cfl = default_cfl, int min_steps = default_min_steps);

    /// one classical RK4 step of dw/dt = A w - F phase(omega t).
    Vector rk4_step(const DiscreteSystem& system, std::span<const double> w, double t, double dt);

    enum class Forcing
    {
        Include,
        Omit // homogeneous propagation: the operator S_h
    };

    /// Reusable buffers for repeated propagation of one system.
    class FilteredPropagator
    {
    public:
        FilteredPropagator(const DiscreteSystem& system, const TimeGrid& grid);

        // Integrates one period from w0 and returns
        //      (2/T) sum_k c_k dt (cos(omega t_k) - 1/4) w(t_k)
        // with composite trapezoid weights c_0 = c_N = 1/2, c_k = 1 otherwise.
        void apply(std::span<const double> w0, std::span<double> out, Forcing forcing = Forcing::Include);

        const DiscreteSystem& system() const
        {
            return sys;
        }

        const TimeGrid& grid() const
        {
            return tg;
        }

    private:
        const DiscreteSystem& sys;
        TimeGrid tg;
        Vector w, k1, k2, k3, k4, tmp;

        void step(double t, bool forced);
    };

    Vector propagate_and_filter(const DiscreteSystem& system, std::span<const double> w0, const TimeGrid& grid, Forcing forcing = Forcing::Include);
} // namespace wh

#endif

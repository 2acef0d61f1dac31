#include "waveholtz/presets.hpp"

#include <cmath>
#include <numbers>

#include "waveholtz/errors.hpp"

namespace wh
{
    static constexpr double pi = std::numbers::pi;

    SourceFunction gaussian_point_source(double omega, int dim, double cx, double cy)
    {
        require_positive_frequency(omega);
        const double w2 = omega * omega;
        if (dim == 1)
            return [=](double x, double) { return w2 / pi * std::exp(-w2 * (x - cx) * (x - cx)); };
        return [=](double x, double y) { return w2 / pi * std::exp(-w2 * ((x - cx) * (x - cx) + (y - cy) * (y - cy))); };
    }

    double slow_start_profile(double x, double omega)
    {
        const double s = std::sin(pi * x);
        return 2.0 * s * s * std::sin(omega * x);
    }

    double slow_start_profile_derivative(double x, double omega)
    {
        const double s = std::sin(pi * x), c = std::cos(pi * x);
        return 4.0 * pi * s * c * std::sin(omega * x) + 2.0 * omega * s * s * std::cos(omega * x);
    }

    Vector slow_start_initial_error(const DiscreteSystem& system)
    {
        const StateLayout& L = system.layout;
        if (L.dim != 1)
            throw Error(ErrorKind::Configuration, "the slow-start initial condition is one dimensional");

        const std::size_t N = L.n_nodes;
        Vector w(system.size());
        for (std::size_t i = 0; i < N; ++i)
        {
            const double u0 = slow_start_profile(L.x[i], system.omega);
            w[i] = u0;
            w[N + i] = (L.kind == SystemKind::FiniteDifference) ? -slow_start_profile_derivative(L.x[i], system.omega) : u0;
        }
        return w;
    }
} // namespace wh

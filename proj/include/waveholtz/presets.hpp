#ifndef WAVEHOLTZ_PRESETS_HPP
#define WAVEHOLTZ_PRESETS_HPP

#include "waveholtz/discrete_system.hpp"

namespace wh
{
    // f(x, y) = (omega^2 / pi) exp(-omega^2 [(x - cx)^2 + (y - cy)^2]); the y
    // term is dropped in one dimension.
    SourceFunction gaussian_point_source(double omega, int dim, double cx = -0.7, double cy = -0.1);

    /// u0(x) = 2 sin^2(pi x) sin(omega x) and its derivative.
    double slow_start_profile(double x, double omega);
    double slow_start_profile_derivative(double x, double omega);

    // Initial error of a right-moving wave with profile u0:
    //      finite differences (u, v) = (u0, -u0'),  DG (p, u) = (u0, u0).
    // One dimensional systems only.
    Vector slow_start_initial_error(const DiscreteSystem& system);
} // namespace wh

#endif

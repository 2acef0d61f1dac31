#ifndef WAVEHOLTZ_FILTER_HPP
#define WAVEHOLTZ_FILTER_HPP

#include <complex>
#include <numbers>
#include <vector>

namespace wh
{
    using complex = std::complex<double>;

    struct FilterConstants
    {
        /// curvature of the parabolic level sets around +/- i.
        static constexpr double alpha = (2.0 * std::numbers::pi * std::numbers::pi - 3.0) / (12.0 * std::numbers::pi);

        /// universal contraction floor: |beta_hat| <= max(1 - delta, 1 - eps).
        static constexpr double delta = 0.25;
    };

    /// inside this distance of 0 and +/- i, beta_hat is evaluated by a local
    /// Taylor expansion of degree `filter_taylor_degree`.
    inline constexpr double filter_switch_radius = 1e-3;
    inline constexpr int filter_taylor_degree = 12;

    // cos(omega t) - 1/4. The filter applied over one period T = 2 pi / omega
    // carries the additional factor 2 / T.
    double filter_weight(double t, double omega);

    // Scaled filter transfer function
    //      beta_hat(z) = 1/pi int_0^{2 pi} (cos(s) - 1/4) exp(z s) ds.
    // Entire; beta_hat(0) = -1/2 and beta_hat(+/- i) = 1.
    complex beta_hat(complex z);

    // beta(lambda) = beta_hat(lambda / omega). Throws on omega <= 0.
    complex beta(complex lambda, double omega);

    /// Power series coefficients of beta_hat about z = 0.
    struct SeriesCoefficients
    {
        std::vector<double> coeffs;
        int n_max = 0;

        complex evaluate(complex z) const;
    };

    SeriesCoefficients beta_series(int n_max);

    /// Taylor coefficients of beta_hat about z = i*k, for integer k, computed
    /// from exact antiderivatives of s^n exp(i m s) on [0, 2 pi].
    std::vector<complex> beta_taylor_coefficients(int k, int degree);

    /// min(-x + alpha (y-1)^2, -x + alpha (y+1)^2) for z = x + i y.
    double parabolic_distance(complex z);

    /// max(1 - delta, 1 - eps).
    double contraction_floor(double eps);

    struct AxisBound
    {
        double bound;
        double value; // |beta_hat(i y)|
        bool satisfied;
    };

    // Three-case bound on the imaginary axis:
    //      1 - (y-1)^2     |y - 1| <= 1/2
    //      1 - (y+1)^2     |y + 1| <= 1/2
    //      3/4             otherwise
    AxisBound check_axis_bounds(double y);
} // namespace wh

#endif

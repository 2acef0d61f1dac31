#include "waveholtz/filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "waveholtz/errors.hpp"

namespace wh
{
    using namespace std::complex_literals;

    static constexpr double pi = std::numbers::pi;

    double filter_weight(double t, double omega)
    {
        require_positive_frequency(omega);
        return std::cos(omega * t) - 0.25;
    }

    // J_n(a) = 1/n! int_0^{2 pi} s^n exp(a s) ds for a = i m, m an integer.
    // Forward recurrence J_n = ((2 pi)^n / n! - J_{n-1}) / a is stable for
    // |a| >= 1 since errors are damped by 1/|a|.
    static std::vector<complex> scaled_moments(int m, int degree)
    {
        std::vector<complex> J(degree + 1);

        if (m == 0)
        {
            double c = 2.0 * pi; // (2 pi)^{n+1} / (n+1)!
            for (int n = 0; n <= degree; ++n)
            {
                J[n] = c;
                c *= 2.0 * pi / (n + 2);
            }
        }
        else
        {
            const complex a = 1.0i * double(m);
            double c = 1.0; // (2 pi)^n / n!
            J[0] = 0.0;
            for (int n = 1; n <= degree; ++n)
            {
                c *= 2.0 * pi / n;
                J[n] = (c - J[n-1]) / a;
            }
        }

        return J;
    }

    std::vector<complex> beta_taylor_coefficients(int k, int degree)
    {
        // (cos s - 1/4) e^{iks} = e^{i(k+1)s}/2 + e^{i(k-1)s}/2 - e^{iks}/4
        auto Jp = scaled_moments(k + 1, degree);
        auto Jm = scaled_moments(k - 1, degree);
        auto J0 = scaled_moments(k, degree);

        std::vector<complex> c(degree + 1);
        for (int n = 0; n <= degree; ++n)
            c[n] = (0.5 * Jp[n] + 0.5 * Jm[n] - 0.25 * J0[n]) / pi;

        return c;
    }

    static complex horner(const std::vector<complex>& c, complex z)
    {
        complex s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            s = s * z + *it;
        return s;
    }

    namespace
    {
        struct LocalExpansions
        {
            std::array<std::vector<complex>, 3> coeffs; // about -i, 0, i

            LocalExpansions()
            {
                for (int k = -1; k <= 1; ++k)
                    coeffs[k+1] = beta_taylor_coefficients(k, filter_taylor_degree);
            }
        };

        const LocalExpansions& local_expansions()
        {
            static const LocalExpansions e;
            return e;
        }
    } // namespace

    // exp(2 pi z) - 1 without cancellation near z = i k.
    static complex expm1_2pi(complex z)
    {
        const double k = std::round(z.imag());
        const double x = 2.0 * pi * z.real();
        const double y = 2.0 * pi * (z.imag() - k);

        const double s = std::sin(0.5 * y);
        const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
        const double im = std::exp(x) * std::sin(y);
        return {re, im};
    }

    complex beta_hat(complex z)
    {
        for (int k = -1; k <= 1; ++k)
        {
            const complex z0 = 1.0i * double(k);
            if (std::abs(z - z0) < filter_switch_radius)
                return horner(local_expansions().coeffs[k+1], z - z0);
        }

        const complex num = (3.0 * z * z - 1.0) * expm1_2pi(z);
        const complex den = 4.0 * pi * z * (z - 1.0i) * (z + 1.0i);
        return num / den;
    }

    complex beta(complex lambda, double omega)
    {
        require_positive_frequency(omega);
        return beta_hat(lambda / omega);
    }

    complex SeriesCoefficients::evaluate(complex z) const
    {
        complex s = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            s = s * z + *it;
        return s;
    }

    SeriesCoefficients beta_series(int n_max)
    {
        if (n_max < 0)
            throw Error(ErrorKind::Configuration, "beta_series: n_max must be nonnegative");

        auto c = beta_taylor_coefficients(0, n_max);

        SeriesCoefficients series;
        series.n_max = n_max;
        series.coeffs.resize(n_max + 1);
        for (int n = 0; n <= n_max; ++n)
            series.coeffs[n] = c[n].real();

        return series;
    }

    double parabolic_distance(complex z)
    {
        constexpr double a = FilterConstants::alpha;
        const double x = z.real(), y = z.imag();
        return std::min(-x + a * (y - 1.0) * (y - 1.0), -x + a * (y + 1.0) * (y + 1.0));
    }

    double contraction_floor(double eps)
    {
        return std::max(1.0 - FilterConstants::delta, 1.0 - eps);
    }

    AxisBound check_axis_bounds(double y)
    {
        double bound = 0.75;
        if (std::abs(y - 1.0) <= 0.5)
            bound = 1.0 - (y - 1.0) * (y - 1.0);
        else if (std::abs(y + 1.0) <= 0.5)
            bound = 1.0 - (y + 1.0) * (y + 1.0);

        const double value = std::abs(beta_hat(complex(0.0, y)));

        // beta_hat(+/- i) = 1 attains the bound; allow rounding there.
        return {bound, value, value <= bound + 4.0 * std::numeric_limits<double>::epsilon()};
    }
} // namespace wh

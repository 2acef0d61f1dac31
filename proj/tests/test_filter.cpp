#include <doctest.h>

#include <thread>

#include "oracles.hpp"
#include "waveholtz/errors.hpp"
#include "waveholtz/filter.hpp"

using namespace wh;
using oracle::pi;

TEST_SUITE("filter")
{
    TEST_CASE("filter weight values")
    {
        CHECK(filter_weight(0.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(filter_weight(pi, 1.0) == doctest::Approx(-1.25).epsilon(1e-15));
        CHECK_THROWS_AS(filter_weight(0.0, 0.0), Error);
        CHECK_THROWS_AS(filter_weight(0.0, -1.0), Error);

        try
        {
            filter_weight(0.0, -2.0);
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::InvalidFrequency);
        }
    }

    TEST_CASE("filter reproduces a time-harmonic mode over one period")
    {
        const double omega = 10.0 * pi;
        const double T = 2.0 * pi / omega;
        const complex v = oracle::integrate([&](double t) { return filter_weight(t, omega) * std::exp(complex(0.0, omega * t)); }, 0.0, T);
        CHECK(std::abs(2.0 / T * v - 1.0) < 1e-13);
    }

    TEST_CASE("beta_hat at the removable singularities")
    {
        CHECK(beta_hat(0.0) == complex(-0.5, 0.0));
        CHECK(std::abs(beta_hat(complex(0.0, 1.0)) - 1.0) <= 1e-14);
        CHECK(std::abs(beta_hat(complex(0.0, -1.0)) - 1.0) <= 1e-14);
    }

    TEST_CASE("beta_hat against the defining integral")
    {
        CHECK(std::abs(beta_hat(-2.0) - oracle::beta_hat(-2.0)) < 1e-13);
        CHECK(beta_hat(-2.0).real() == doctest::Approx(0.08753).epsilon(1e-4));

        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> re(-5.0, 0.0), im(-5.0, 5.0);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k)
        {
            const complex z(re(rng), im(rng));
            worst = std::max(worst, std::abs(beta_hat(z) - oracle::beta_hat(z)));
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("beta scales by omega")
    {
        for (double omega : {1.0, 10.0 * pi, 77.0})
            CHECK(std::abs(beta(complex(0.0, omega), omega) - 1.0) < 1e-14);
        CHECK(beta(0.0, 10.0 * pi) == complex(-0.5, 0.0));

        // z = -1: the defining integral evaluates to 0.0794288651751015
        const double omega = 10.0 * pi;
        const complex b = beta(-omega, omega);
        CHECK(std::abs(b - oracle::beta_hat(-1.0)) < 1e-13);
        CHECK(b.real() == doctest::Approx(0.0794288651751015).epsilon(1e-12));

        CHECK_THROWS_AS(beta(1.0, 0.0), Error);
    }

    TEST_CASE("series coefficients")
    {
        const SeriesCoefficients s = beta_series(40);
        REQUIRE(s.coeffs.size() == 41);
        CHECK(s.coeffs[0] == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(s.coeffs[1] == doctest::Approx(-pi / 2.0).epsilon(1e-14));

        // b_n = (1/pi) int (cos s - 1/4) s^n / n! ds
        for (int n : {2, 5, 11, 20})
        {
            double fact = 1.0;
            for (int k = 2; k <= n; ++k)
                fact *= k;
            const double b = oracle::integrate([&](double x) { return (std::cos(x) - 0.25) * std::pow(x, n) / fact; }, 0.0, 2.0 * pi) / pi;
            CHECK(std::abs(s.coeffs[n] - b) <= 1e-12 * std::max(1.0, std::abs(b)));
        }

        double scale = 1.0; // (2 pi)^n / n!
        for (int n = 0; n <= 40; ++n)
        {
            CHECK(std::abs(s.coeffs[n]) <= scale + 1e-14);
            scale *= 2.0 * pi / (n + 1);
        }

        CHECK(std::abs(s.evaluate(-0.3) - beta_hat(-0.3)) < 1e-10);
        CHECK_THROWS_AS(beta_series(-1), Error);
        CHECK(beta_series(0).coeffs.size() == 1);
    }

    TEST_CASE("series reconstructs beta_hat on the unit disk")
    {
        const SeriesCoefficients s = beta_series(40);
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j < 64; ++j)
            {
                const complex z = std::polar(i / 40.0, 2.0 * pi * j / 64);
                worst = std::max(worst, std::abs(s.evaluate(z) - beta_hat(z)));
            }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("local expansions agree with the defining integral")
    {
        for (int k = -1; k <= 1; ++k)
        {
            const auto c = beta_taylor_coefficients(k, 12);
            const complex z0(0.0, k);
            for (double r : {1e-4, 5e-4, 9e-4})
            {
                const complex dz = std::polar(r, 0.7);
                complex s = 0.0;
                for (int n = 12; n >= 0; --n)
                    s = s * dz + c[n];
                CHECK(std::abs(s - oracle::beta_hat(z0 + dz)) < 1e-13);
            }
        }
    }

    TEST_CASE("continuity around removable singularities")
    {
        // beta_hat has slope -pi/2 at 0 and pi at +/- i, so on a 1e-4 circle the
        // value moves by O(1e-4); remove the linear term and what is left is O(r^2)
        const complex centers[] = {0.0, complex(0.0, 1.0), complex(0.0, -1.0)};
        const double limits[] = {-0.5, 1.0, 1.0};
        for (int c = 0; c < 3; ++c)
        {
            const int k = static_cast<int>(centers[c].imag());
            const complex slope = beta_taylor_coefficients(k, 1)[1];
            double worst = 0.0, worst_raw = 0.0;
            for (int j = 0; j < 360; ++j)
            {
                const complex dz = std::polar(1e-4, 2.0 * pi * j / 360);
                const complex v = beta_hat(centers[c] + dz);
                worst = std::max(worst, std::abs(v - limits[c] - slope * dz));
                worst_raw = std::max(worst_raw, std::abs(v - limits[c]));
            }
            CHECK(worst <= 1e-7);
            CHECK(worst_raw <= 4e-4);
        }

        // both evaluation branches agree with the integral across the switch radius
        for (int c = 0; c < 3; ++c)
            for (int j = 0; j < 16; ++j)
            {
                const complex dir = std::polar(1.0, 2.0 * pi * j / 16);
                for (double r : {filter_switch_radius * 0.999, filter_switch_radius * 1.001})
                {
                    const complex z = centers[c] + r * dir;
                    CHECK(std::abs(beta_hat(z) - oracle::beta_hat(z)) < 1e-12);
                }
            }
    }

    TEST_CASE("Schwarz reflection")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> re(-8.0, 2.0), im(-8.0, 8.0);
        for (int k = 0; k < 500; ++k)
        {
            const complex z(re(rng), im(rng));
            const complex a = beta_hat(std::conj(z)), b = std::conj(beta_hat(z));
            CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)));
        }
    }

    TEST_CASE("parabolic distance")
    {
        CHECK(parabolic_distance(complex(0.0, 1.0)) == 0.0);
        CHECK(parabolic_distance(0.0) == doctest::Approx(FilterConstants::alpha));
        CHECK(FilterConstants::alpha == doctest::Approx(0.444021).epsilon(1e-6));
        CHECK(parabolic_distance(complex(-1.0, 1.0)) == doctest::Approx(1.0));
        CHECK(parabolic_distance(complex(-1.0, -1.0)) == doctest::Approx(1.0));
        CHECK(contraction_floor(0.01) == 0.99);
        CHECK(contraction_floor(0.5) == 0.75);
    }

    TEST_CASE("axis bounds")
    {
        const AxisBound at_one = check_axis_bounds(1.0);
        CHECK(at_one.bound == 1.0);
        CHECK(at_one.satisfied);

        const AxisBound at_zero = check_axis_bounds(0.0);
        CHECK(at_zero.bound == 0.75);
        CHECK(at_zero.value == doctest::Approx(0.5));
        CHECK(at_zero.satisfied);

        const AxisBound b = check_axis_bounds(1.4);
        CHECK(b.bound == doctest::Approx(0.84));
        CHECK(std::abs(oracle::beta_hat(complex(0.0, 1.4))) <= 0.84);
        CHECK(b.satisfied);

        for (int k = 0; k < 10000; ++k)
            REQUIRE(check_axis_bounds(-10.0 + 20.0 * k / 9999.0).satisfied);
    }

    TEST_CASE("contraction bound on parabolic regions")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> re(-6.0, 0.0), im(-6.0, 6.0);
        int tested = 0;
        for (double eps : {0.01, 0.05, 0.1})
        {
            for (int k = 0; k < 20000; ++k)
            {
                const complex z(re(rng), im(rng));
                if (parabolic_distance(z) < eps)
                    continue;
                ++tested;
                REQUIRE(std::abs(beta_hat(z)) <= contraction_floor(eps) + 1e-14);
            }
            // points right at the level set
            for (int k = 0; k < 2000; ++k)
            {
                const double y = -3.0 + 6.0 * k / 1999.0;
                const double x = FilterConstants::alpha * std::min((y - 1) * (y - 1), (y + 1) * (y + 1)) - eps;
                if (x > 0.0)
                    continue;
                REQUIRE(std::abs(beta_hat(complex(x, y))) <= contraction_floor(eps) + 1e-14);
            }
        }
        CHECK(tested > 30000);
    }

    TEST_CASE("decay far from the origin")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> angle(pi / 2, 3 * pi / 2), radius(10.0, 200.0);
        for (int k = 0; k < 5000; ++k)
        {
            const complex z = std::polar(radius(rng), angle(rng));
            REQUIRE(std::abs(beta_hat(z)) <= 0.75);
        }
    }

    TEST_CASE("concurrent evaluation is consistent")
    {
        std::vector<complex> pts;
        for (int k = 0; k < 200; ++k)
            pts.emplace_back(-0.02 * k, 0.05 * k - 3.0);

        std::vector<complex> serial;
        for (complex z : pts)
            serial.push_back(beta_hat(z));

        std::vector<std::vector<complex>> results(4);
        std::vector<std::thread> threads;
        for (int t = 0; t < 4; ++t)
            threads.emplace_back([&, t] {
                for (complex z : pts)
                    results[t].push_back(beta_hat(z));
            });
        for (auto& th : threads)
            th.join();

        for (const auto& r : results)
            CHECK(r == serial);
    }
}

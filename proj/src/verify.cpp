#include "waveholtz/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "waveholtz/dg.hpp"
#include "waveholtz/errors.hpp"
#include "waveholtz/experiment.hpp"
#include "waveholtz/fd.hpp"
#include "waveholtz/iteration.hpp"
#include "waveholtz/presets.hpp"
#include "waveholtz/report_io.hpp"
#include "waveholtz/spectral.hpp"
#include "waveholtz/time_integration.hpp"

namespace wh
{
    static constexpr double pi = std::numbers::pi;

    namespace
    {
        CheckResult make(const std::string& name, bool ok, const std::string& detail)
        {
            return {name, ok, detail};
        }

        std::string sci(double x)
        {
            return format_double(x);
        }

        double rel_diff(const Vector& a, const Vector& b)
        {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                num += (a[i] - b[i]) * (a[i] - b[i]);
                den += b[i] * b[i];
            }
            return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
        }

        CheckResult check_filter_identities(const TransferFunction& beta)
        {
            const double e0 = std::abs(beta(0.0) + 0.5);
            const double e1 = std::abs(beta(complex(0.0, 1.0)) - 1.0);
            const double e2 = std::abs(beta(complex(0.0, -1.0)) - 1.0);
            const double worst = std::max({e0, e1, e2});
            return make("filter-identities", worst <= 1e-14, "max deviation " + sci(worst));
        }

        CheckResult check_schwarz_reflection(const TransferFunction& beta, std::mt19937_64& rng)
        {
            std::uniform_real_distribution<double> re(-5.0, 0.0), im(-5.0, 5.0);
            double worst = 0.0;
            for (int k = 0; k < 1000; ++k)
            {
                const complex z(re(rng), im(rng));
                const complex a = beta(std::conj(z)), b = std::conj(beta(z));
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
            return make("filter-schwarz-reflection", worst <= 1e-14, "max deviation " + sci(worst));
        }

        CheckResult check_axis(const TransferFunction& beta)
        {
            int failures = 0;
            for (int k = 0; k < 10000; ++k)
            {
                const double y = -10.0 + 20.0 * k / 9999.0;
                const AxisBound b = check_axis_bounds(y);
                if (std::abs(beta(complex(0.0, y))) > b.bound + 4.0 * std::numeric_limits<double>::epsilon())
                    ++failures;
            }
            return make("filter-axis-bound", failures == 0, std::to_string(failures) + " of 10000 points violate the bound");
        }

        CheckResult check_contraction(const TransferFunction& beta, std::mt19937_64& rng)
        {
            std::uniform_real_distribution<double> re(-6.0, 0.0), im(-6.0, 6.0);
            int failures = 0, tested = 0;
            for (double eps : {0.01, 0.05, 0.1})
            {
                for (int k = 0; k < 4000; ++k)
                {
                    const complex z(re(rng), im(rng));
                    if (parabolic_distance(z) < eps)
                        continue;
                    ++tested;
                    if (std::abs(beta(z)) > contraction_floor(eps) + 1e-14)
                        ++failures;
                }
            }
            return make("filter-contraction-bound", failures == 0, std::to_string(failures) + " of " + std::to_string(tested) + " samples exceed max(3/4, 1-eps)");
        }

        CheckResult check_fd_operator(std::mt19937_64& rng)
        {
            std::normal_distribution<double> g;
            double worst = 0.0;
            for (int dim : {1, 2})
            {
                const Grid grid = Grid::uniform(dim, dim == 1 ? 12 : 6);
                for (auto bc : {BoundarySpec::standard(dim), BoundarySpec::uniform(dim, BoundaryCondition::Outflow)})
                {
                    const DiscreteSystem s = build_fd(5.0, grid, bc, {});
                    Vector w(s.size());
                    for (double& x : w)
                        x = g(rng);
                    Vector a(s.size());
                    s.apply(w, a);
                    worst = std::max(worst, rel_diff(a, apply_reference(s, w)));
                }
            }
            return make("fd-matrix-free-vs-assembled", worst <= 1e-13, "max relative difference " + sci(worst));
        }

        CheckResult check_dg_operator(std::mt19937_64& rng)
        {
            std::normal_distribution<double> g;
            double worst = 0.0;
            for (int dim : {1, 2})
                for (int P : {1, 2})
                    for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
                    {
                        const DGMesh mesh = DGMesh::uniform(dim, 4, P);
                        const DiscreteSystem s = build_dg(5.0, mesh, flux, BoundarySpec::standard(dim), {});
                        Vector w(s.size());
                        for (double& x : w)
                            x = g(rng);
                        Vector a(s.size());
                        s.apply(w, a);
                        worst = std::max(worst, rel_diff(a, apply_reference(s, w)));
                    }
            return make("dg-matrix-free-vs-assembled", worst <= 1e-13, "max relative difference " + sci(worst));
        }

        CheckResult check_stability()
        {
            const double omega = 10.0 * pi;
            double worst = -1.0;
            const DiscreteSystem fd = build_fd(omega, fd_resolution(omega, 10.0), BoundarySpec::standard(1), {});
            worst = std::max(worst, spectral_report(fd).max_real_part);
            for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
            {
                const DiscreteSystem dg = build_dg(omega, dg_resolution(omega, 1, 10.0), flux, BoundarySpec::standard(1), {});
                worst = std::max(worst, spectral_report(dg).max_real_part);
            }
            return make("semi-discrete-stability", worst <= 1e-10, "max Re(lambda) " + sci(worst));
        }

        CheckResult fixed_point(const std::string& name, const DiscreteSystem& s)
        {
            const ComplexVector w_star = direct_helmholtz_solve(s);
            const Vector w0 = real_part(w_star);
            const Vector w1 = propagate_and_filter(s, w0, TimeGrid::over_period(s.omega, 2000));
            const double d = rel_diff(w1, w0);
            return make(name, d <= 1e-5, "relative deviation " + sci(d));
        }

        CheckResult check_rk4_scalar()
        {
            Eigen::MatrixXd A(1, 1);
            A(0, 0) = -1.0;
            const DiscreteSystem s = make_matrix_system(A, {0.0}, 1.0);
            const double v = rk4_step(s, Vector{1.0}, 0.0, 0.1)[0];
            const double expected = 1.0 - 0.1 + 0.005 - 0.1 * 0.1 * 0.1 / 6.0 + 0.1 * 0.1 * 0.1 * 0.1 / 24.0;
            return make("rk4-stability-polynomial", std::abs(v - expected) <= 1e-15, "step value " + sci(v));
        }
    } // namespace

    CheckResult check_filter_consistency(const TransferFunction& transfer)
    {
        const double omega = 10.0 * pi;
        // at z = i k the trapezoid rule integrates a periodic function
        // and only the RK4 error remains; elsewhere the O(dt^2) quadrature error shows
        const complex samples[] = {{0.0, 1.0}, {0.0, 2.0}, {0.0, 0.5}, {-0.3, 0.8}, {-1.0, 0.0}, {-0.05, 1.1}};

        double worst = 0.0;
        for (complex z : samples)
        {
            const bool periodic = z.real() == 0.0 && z.imag() == std::round(z.imag());
            const double tol = periodic ? 1e-8 : 1e-5;
            const complex lam = omega * z;
            Eigen::MatrixXd A(2, 2);
            A << lam.real(), -lam.imag(), lam.imag(), lam.real();
            const DiscreteSystem s = make_matrix_system(A, {0.0, 0.0}, omega);
            const Vector out = propagate_and_filter(s, Vector{1.0, 0.0}, TimeGrid::over_period(omega, 2000));
            worst = std::max(worst, std::abs(complex(out[0], out[1]) - transfer(z)) / tol);
        }
        return {"filter-consistency", worst <= 1.0, "max |Pi_h - transfer| / tolerance " + format_double(worst)};
    }

    std::vector<CheckResult> run_verify(const VerifyOptions& options)
    {
        std::mt19937_64 rng(options.seed);
        const TransferFunction& beta = options.transfer;
        const double omega = 10.0 * pi;

        std::vector<CheckResult> out;
        auto guarded = [&](const std::string& name, auto&& fn)
        {
            try
            {
                out.push_back(fn());
            }
            catch (const std::exception& e)
            {
                out.push_back({name, false, std::string("exception: ") + e.what()});
            }
        };

        guarded("filter-identities", [&] { return check_filter_identities(beta); });
        guarded("filter-schwarz-reflection", [&] { return check_schwarz_reflection(beta, rng); });
        guarded("filter-axis-bound", [&] { return check_axis(beta); });
        guarded("filter-contraction-bound", [&] { return check_contraction(beta, rng); });
        guarded("filter-consistency", [&] { return check_filter_consistency(beta); });
        guarded("rk4-stability-polynomial", [&] { return check_rk4_scalar(); });
        guarded("fd-matrix-free-vs-assembled", [&] { return check_fd_operator(rng); });
        guarded("dg-matrix-free-vs-assembled", [&] { return check_dg_operator(rng); });
        guarded("semi-discrete-stability", [&] { return check_stability(); });
        guarded("fd1d-fixed-point", [&]
        {
            return fixed_point("fd1d-fixed-point", build_fd(omega, fd_resolution(omega, 10.0), BoundarySpec::standard(1), gaussian_point_source(omega, 1)));
        });

        if (options.level == VerifyLevel::Full)
        {
            guarded("dg1d-fixed-point", [&]
            {
                return fixed_point("dg1d-fixed-point", build_dg(omega, dg_resolution(omega, 1, 10.0), FluxKind::Central,
                                                                BoundarySpec::standard(1), gaussian_point_source(omega, 1)));
            });
            guarded("fd2d-point-source-convergence", [&]
            {
                ExperimentConfig c;
                c.dimension = 2;
                c.omega = omega;
                c.max_iters = 1000;
                const PointResult r = run_point(c, omega);
                const bool ok = r.N.has_value() && *r.N <= 1000;
                return make("fd2d-point-source-convergence", ok,
                            ok ? "res <= 1e-6 after " + std::to_string(*r.N) + " iterations" : "tolerance not reached in 1000 iterations");
            });
        }

        return out;
    }
} // namespace wh

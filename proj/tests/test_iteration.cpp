#include <doctest.h>

#include "oracles.hpp"
#include "waveholtz/dg.hpp"
#include "waveholtz/errors.hpp"
#include "waveholtz/fd.hpp"
#include "waveholtz/iteration.hpp"
#include "waveholtz/presets.hpp"
#include "waveholtz/spectral.hpp"

using namespace wh;
using oracle::pi;

namespace
{
    double crel_diff(const ComplexVector& a, const ComplexVector& b)
    {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            num += std::norm(a[i] - b[i]);
            den += std::norm(b[i]);
        }
        return std::sqrt(num / den);
    }

    DiscreteSystem fd10pi(bool forced = true)
    {
        const double omega = 10.0 * pi;
        return build_fd(omega, fd_resolution(omega, 10.0), BoundarySpec::standard(1),
                        forced ? gaussian_point_source(omega, 1) : SourceFunction {});
    }
} // namespace

TEST_SUITE("iteration")
{
    TEST_CASE("direct solve on a scalar surrogate")
    {
        Eigen::MatrixXd A(1, 1);
        A(0, 0) = -1.0;
        const ComplexVector w = direct_helmholtz_solve(make_matrix_system(A, {1.0}, 1.0));
        CHECK(std::abs(w[0] - complex(-0.5, 0.5)) <= 1e-15);

        // sine phase: F_c = -i F
        const ComplexVector ws = direct_helmholtz_solve(make_matrix_system(A, {1.0}, 1.0, ForcingPhase::Sine));
        CHECK(std::abs(ws[0] - complex(0.0, -1.0) / complex(-1.0, -1.0)) <= 1e-15);
    }

    TEST_CASE("zero forcing gives the zero fixed point")
    {
        const ComplexVector w = direct_helmholtz_solve(fd10pi(false));
        for (complex x : w)
            CHECK(x == complex(0.0));
    }

    TEST_CASE("resonant frequencies are reported")
    {
        // closed m = 2 grid: L has eigenvalues 0, -2, -4, so A has +/- 2i. The
        // forcing must not be orthogonal to the left eigenvector (1/2, -1, 1/2).
        const DiscreteSystem s = build_fd(2.0, Grid::uniform(1, 2), BoundarySpec::uniform(1, BoundaryCondition::Neumann),
                                          [](double x, double) { return 1.0 + x * x; });
        try
        {
            direct_helmholtz_solve(s);
            FAIL("expected a resonance error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::Resonance);
        }
    }

    TEST_CASE("the recovered solution solves the eliminated Helmholtz system")
    {
        const DiscreteSystem s = fd10pi();
        const double omega = s.omega;
        const std::size_t N = s.layout.n_nodes;
        const ComplexVector w = direct_helmholtz_solve(s);
        const Vector re = real_part(w);
        const ComplexVector u = recover_complex(s, re);
        REQUIRE(u.size() == N);

        // A = [[0, I], [-L, B]]
        const Eigen::MatrixXd A = assemble_dense(s);
        const Eigen::MatrixXd L = -A.block(N, 0, N, N);
        const Eigen::MatrixXd B = A.block(N, N, N, N);
        const Eigen::MatrixXcd Lt = L.cast<complex>() - complex(0.0, omega) * B.cast<complex>();

        Eigen::VectorXcd uh(N), f(N);
        for (std::size_t i = 0; i < N; ++i)
        {
            uh(i) = u[i];
            f(i) = s.forcing[N + i];
        }
        const Eigen::VectorXcd r = Lt * uh - omega * omega * uh + f;
        CHECK(r.norm() / f.norm() <= 1e-10);

        // v = i omega u in the complex solution
        for (std::size_t i = 0; i < N; ++i)
            CHECK(std::abs(w[N + i] - complex(0.0, omega) * w[i]) <= 1e-9 * std::abs(omega * w[i]) + 1e-12);
    }

    TEST_CASE("starting at the fixed point")
    {
        const DiscreteSystem s = fd10pi();
        const Vector w0 = real_part(direct_helmholtz_solve(s));
        IterationOptions o;
        o.tol = 1e-4;
        o.max_iters = 5;
        o.stop_at_tol = false;
        const IterationReport r = waveholtz_iterate(s, w0, TimeGrid::over_period(s.omega, 1000), o);
        REQUIRE(r.iterations_to_tol.has_value());
        CHECK(*r.iterations_to_tol == 1);
        CHECK(r.res[0] == 1.0);
        CHECK_FALSE(r.converged_at_start);
        // later residuals are normalized by the tiny first step, so look at the iterate itself
        CHECK(oracle::rel_diff(r.w, w0) <= 1e-4);
    }

    TEST_CASE("converged at start")
    {
        const DiscreteSystem s = fd10pi(false);
        const IterationReport r = waveholtz_iterate(s, Vector(s.size(), 0.0), TimeGrid::over_period(s.omega, 200), {});
        CHECK(r.converged_at_start);
        CHECK(r.iterations_to_tol == 0);
        CHECK(r.res.empty());
    }

    TEST_CASE("argument and divergence errors")
    {
        const DiscreteSystem s = fd10pi();
        const TimeGrid g = TimeGrid::over_period(s.omega, 200);
        IterationOptions bad;
        bad.tol = 0.0;
        CHECK_THROWS_AS(waveholtz_iterate(s, Vector(s.size(), 0.0), g, bad), Error);
        bad = {};
        bad.max_iters = 0;
        CHECK_THROWS_AS(waveholtz_iterate(s, Vector(s.size(), 0.0), g, bad), Error);
        CHECK_THROWS_AS(waveholtz_iterate(s, Vector(3, 0.0), g, {}), Error);

        Eigen::MatrixXd A(1, 1);
        A(0, 0) = 60.0;
        const DiscreteSystem grow = make_matrix_system(A, {0.0}, 1.0);
        IterationOptions o;
        o.max_iters = 50;
        o.stop_at_tol = false;
        try
        {
            waveholtz_iterate(grow, Vector {1.0}, TimeGrid::over_period(1.0, 20000), o);
            FAIL("expected divergence");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::Divergence);
        }
    }

    TEST_CASE("average rate")
    {
        std::vector<double> geometric;
        for (int k = 0; k < 20; ++k)
            geometric.push_back(3.0 * std::pow(0.8, k));
        CHECK(average_rate(geometric, 10) == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(average_rate({2.0, 1.0}, 1) == 0.5);
        CHECK(average_rate({1.0, 0.5, 1.0}, 2) == doctest::Approx(1.25));

        try
        {
            average_rate({1.0, 0.0, 1.0}, 2);
            FAIL("expected an error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::DegenerateHistory);
        }
        CHECK_THROWS_AS(average_rate({1.0, 0.5}, 2), Error);
    }

    TEST_CASE("finite difference recovery identities")
    {
        std::mt19937_64 rng(8);
        const double omega = 7.0;
        const std::size_t n = 50;
        const Vector a = oracle::random_vector(rng, n), b = oracle::random_vector(rng, n);

        // u(t) = Re(u_hat exp(i omega t)) at t = 0 and its time derivative
        Vector u(n), v(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            u[i] = a[i];
            v[i] = -omega * b[i];
        }
        const ComplexVector uh = recover_complex_fd(u, v, omega);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(uh[i] - complex(a[i], b[i])) <= 1e-12 * std::max(1.0, std::abs(uh[i])));

        const ComplexVector real_only = recover_complex_fd(a, Vector(n, 0.0), omega);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(real_only[i] == complex(a[i], 0.0));

        CHECK_THROWS_AS(recover_complex_fd(a, Vector(3, 0.0), omega), Error);
        CHECK_THROWS_AS(recover_complex_fd(a, b, 0.0), Error);
    }

    TEST_CASE("DG recovery on manufactured harmonic data")
    {
        const double omega = 9.0;
        for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
        {
            // 1D: u0 = 1 - x^2, p0 = 1 - x; the divergence is -2x and no face term is active
            const DiscreteSystem s = build_dg(omega, DGMesh::uniform(1, 6, 2), flux, BoundarySpec::standard(1), {});
            const std::size_t N = s.layout.n_nodes;
            Vector w(2 * N);
            for (std::size_t i = 0; i < N; ++i)
            {
                const double x = s.layout.x[i];
                w[i] = 1.0 - x;
                w[N + i] = 1.0 - x * x;
            }
            const ComplexVector ph = recover_complex_dg(s, w);
            for (std::size_t i = 0; i < N; ++i)
            {
                const double x = s.layout.x[i];
                CHECK(std::abs(ph[i] - complex(1.0 - x, -2.0 * x / omega)) <= 1e-12);
            }

            const DiscreteSystem walls = build_dg(omega, DGMesh::uniform(1, 6, 2), flux, BoundarySpec::uniform(1, BoundaryCondition::Neumann), {});
            Vector constant(2 * N, 0.0);
            std::fill(constant.begin(), constant.begin() + N, 0.3);
            for (complex z : recover_complex_dg(walls, constant))
                CHECK(std::abs(z - 0.3) <= 1e-14);
        }

        for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
        {
            // 2D: u = (1 - x^2, 1 - y^2), p = (1 - x)(1 - y)
            const DiscreteSystem s = build_dg(omega, DGMesh::uniform(2, 4, 2), flux, BoundarySpec::standard(2), {});
            const std::size_t N = s.layout.n_nodes;
            Vector w(3 * N);
            for (std::size_t i = 0; i < N; ++i)
            {
                const double x = s.layout.x[i], y = s.layout.y[i];
                w[i] = (1.0 - x) * (1.0 - y);
                w[N + i] = 1.0 - x * x;
                w[2 * N + i] = 1.0 - y * y;
            }
            const ComplexVector ph = recover_complex(s, w);
            for (std::size_t i = 0; i < N; ++i)
            {
                const double x = s.layout.x[i], y = s.layout.y[i];
                CHECK(std::abs(ph[i] - complex(w[i], (-2.0 * x - 2.0 * y) / omega)) <= 1e-12);
            }
        }

        const DiscreteSystem fd = build_fd(3.0, Grid::uniform(1, 4), BoundarySpec::standard(1), {});
        CHECK_THROWS_AS(recover_complex_dg(fd, Vector(fd.size(), 0.0)), Error);
    }

    TEST_CASE("converged runs reproduce the direct solution")
    {
        const double omega = 10.0 * pi;
        IterationOptions o;
        o.tol = 1e-10;
        o.max_iters = 2000;

        const DiscreteSystem fd = fd10pi();
        const ComplexVector fd_star = direct_helmholtz_solve(fd);
        const TimeGrid g = TimeGrid::over_period(omega, 2000);
        const IterationReport rf = waveholtz_iterate(fd, Vector(fd.size(), 0.0), g, o);
        REQUIRE(rf.iterations_to_tol.has_value());

        // the discrete fixed point sits O(dt^2) away from the Helmholtz solution
        const double floor_fd = oracle::rel_diff(propagate_and_filter(fd, real_part(fd_star), g), real_part(fd_star));
        const ComplexVector u_star(fd_star.begin(), fd_star.begin() + fd.layout.n_nodes);
        const double d_fd = crel_diff(recover_complex(fd, rf.w), u_star);
        MESSAGE("fd: difference " << d_fd << ", one-step floor " << floor_fd);
        CHECK(d_fd <= std::max(o.tol, 200.0 * floor_fd));

        const DiscreteSystem dg = build_dg(omega, dg_resolution(omega, 1, 10.0), FluxKind::Central, BoundarySpec::standard(1),
                                           gaussian_point_source(omega, 1));
        const ComplexVector dg_star = direct_helmholtz_solve(dg);
        const TimeGrid gd = choose_time_grid(dg, 0.5, 2000);
        const IterationReport rd = waveholtz_iterate(dg, Vector(dg.size(), 0.0), gd, o);
        REQUIRE(rd.iterations_to_tol.has_value());
        const double floor_dg = oracle::rel_diff(propagate_and_filter(dg, real_part(dg_star), gd), real_part(dg_star));
        const ComplexVector p_star(dg_star.begin(), dg_star.begin() + dg.layout.n_nodes);
        const double d_dg = crel_diff(recover_complex(dg, rd.w), p_star);
        MESSAGE("dg: difference " << d_dg << ", one-step floor " << floor_dg);
        CHECK(d_dg <= std::max(o.tol, 200.0 * floor_dg));
    }

    TEST_CASE("error recurrence and contraction on a dense instance")
    {
        // F = 0: the fixed point is exactly zero for the discrete iteration too
        const double omega = 12.0;
        const DiscreteSystem s = build_fd(omega, fd_resolution(omega, 10.0), BoundarySpec::standard(1), {});
        const EigenDecomposition eig = eigendecompose(s);
        REQUIRE(eig.diagonalizable);
        const SpectralReport sr = spectral_report(eig, omega);
        const ComplexLU lu(eig.R);
        const ComplexVector zero(s.size(), 0.0);

        std::mt19937_64 rng(12);
        const Vector w0 = oracle::random_vector(rng, s.size());
        IterationOptions o;
        o.max_iters = 150;
        o.stop_at_tol = false;
        const TimeGrid g = TimeGrid::over_period(omega, 1000);
        const IterationReport r = waveholtz_iterate(s, w0, g, o, &zero, &lu);
        REQUIRE(r.err_mu.size() == r.err_e.size());
        REQUIRE(r.err_e.size() == std::size_t(r.iterations) + 1);

        double worst = 0.0;
        for (std::size_t n = 0; n + 1 < r.err_mu.size(); ++n)
            worst = std::max(worst, r.err_mu[n + 1] / r.err_mu[n] - sr.rho);
        CHECK(worst <= 1e-6);

        for (std::size_t n = 0; n < r.err_e.size(); ++n)
            REQUIRE(r.err_e[n] <= eig.kappa * std::pow(sr.rho, double(n)) * r.err_e[0] * 1.001);

        // e^{(n+1)} = S_h e^{(n)} with a forced system as well
        const DiscreteSystem f = fd10pi();
        const Vector star = real_part(direct_helmholtz_solve(f));
        const TimeGrid gf = TimeGrid::over_period(f.omega, 2000);
        Vector e0(f.size());
        const Vector x0 = oracle::random_vector(rng, f.size());
        for (std::size_t i = 0; i < e0.size(); ++i)
            e0[i] = x0[i] - star[i];
        const Vector x1 = propagate_and_filter(f, x0, gf);
        const Vector se = propagate_and_filter(f, e0, gf, Forcing::Omit);
        Vector e1(f.size());
        for (std::size_t i = 0; i < e1.size(); ++i)
            e1[i] = x1[i] - star[i];
        CHECK(oracle::rel_diff(e1, se) <= 1e-5 * oracle::norm(star) / oracle::norm(se) + 1e-12);
    }

    TEST_CASE("oracle bookkeeping")
    {
        const DiscreteSystem s = fd10pi();
        const ComplexVector star = direct_helmholtz_solve(s);
        IterationOptions o;
        o.max_iters = 30;
        o.stop_at_tol = false;
        const IterationReport r = waveholtz_iterate(s, Vector(s.size(), 0.0), TimeGrid::over_period(s.omega, 200), o, &star);
        CHECK(r.err_e.size() == 31);
        CHECK(r.err_mu.empty());
        CHECK(r.err_e[0] == doctest::Approx(oracle::norm(real_part(star))));
        CHECK(r.first_rate == doctest::Approx(r.err_e[1] / r.err_e[0]));
        CHECK(r.res.size() == 30);
        for (double x : r.res)
            CHECK(x >= 0.0);
    }

    TEST_CASE("slow start: the first iteration barely contracts")
    {
        const DiscreteSystem s = fd10pi(false);
        const Vector e0 = slow_start_initial_error(s);
        const ComplexVector zero(s.size(), 0.0);
        IterationOptions o;
        o.max_iters = 1;
        o.stop_at_tol = false;
        const IterationReport r = waveholtz_iterate(s, e0, TimeGrid::over_period(s.omega, 200), o, &zero);
        // much slower than the asymptotic rate rho(S_h)
        const double rho = spectral_report(s).rho;
        CHECK(r.first_rate < 1.0);
        CHECK(1.0 - r.first_rate < 0.5 * (1.0 - rho));
    }

    TEST_CASE("residual trend is geometric for both DG fluxes")
    {
        const double omega = 10.0 * pi;
        for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
        {
            const DiscreteSystem s = build_dg(omega, dg_resolution(omega, 1, 10.0), flux, BoundarySpec::standard(1), gaussian_point_source(omega, 1));
            IterationOptions o;
            o.tol = 1e-9;
            o.max_iters = 600;
            const IterationReport r = waveholtz_iterate(s, Vector(s.size(), 0.0), choose_time_grid(s), o);
            CHECK(r.iterations_to_tol.has_value());
            for (std::size_t n = 20; n + 50 < r.res.size(); ++n)
                REQUIRE(r.res[n + 50] < r.res[n]);
        }
    }
}

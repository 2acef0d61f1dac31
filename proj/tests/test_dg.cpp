#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "waveholtz/dg.hpp"
#include "waveholtz/errors.hpp"
#include "waveholtz/presets.hpp"
#include "waveholtz/spectral.hpp"
#include "waveholtz/time_integration.hpp"

using namespace wh;
using oracle::pi;

namespace
{
    Vector act(const DiscreteSystem& s, const Vector& w)
    {
        Vector out(s.size());
        s.apply(w, out);
        return out;
    }

    // diagonal of the discrete L2 inner product: LGL weights times the element Jacobian
    Eigen::VectorXd energy_weights(const DGMesh& mesh, int fields)
    {
        const LocalOperators ref = lgl_reference(mesh.P);
        const int q = mesh.P + 1;
        Eigen::VectorXd m(fields * mesh.n_nodes());
        for (int f = 0; f < fields; ++f)
            for (std::size_t e = 0; e < mesh.n_elements(); ++e)
                for (int k = 0; k < mesh.nodes_per_element(); ++k)
                {
                    double wk = ref.weights[k % q] * mesh.h / 2.0;
                    if (mesh.dim == 2)
                        wk *= ref.weights[k / q] * mesh.h / 2.0;
                    m(f * mesh.n_nodes() + e * mesh.nodes_per_element() + k) = wk;
                }
        return m;
    }

    double energy(const Eigen::VectorXd& M, const Vector& w)
    {
        double e = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            e += M(i) * w[i] * w[i];
        return e;
    }
} // namespace

TEST_SUITE("dg")
{
    TEST_CASE("LGL reference element")
    {
        const LocalOperators p1 = lgl_reference(1);
        CHECK(p1.nodes == std::vector<double> {-1.0, 1.0});
        CHECK(p1.weights[0] == doctest::Approx(1.0));
        CHECK(p1.weights[1] == doctest::Approx(1.0));

        const LocalOperators p2 = lgl_reference(2);
        REQUIRE(p2.nodes.size() == 3);
        CHECK(p2.nodes[0] == -1.0);
        CHECK(std::abs(p2.nodes[1]) < 1e-15);
        CHECK(p2.nodes[2] == 1.0);
        CHECK(p2.weights[0] == doctest::Approx(1.0 / 3));
        CHECK(p2.weights[1] == doctest::Approx(4.0 / 3));
        CHECK(p2.weights[2] == doctest::Approx(1.0 / 3));

        Eigen::VectorXd x2(3), dx2(3);
        for (int i = 0; i < 3; ++i)
            x2(i) = p2.nodes[i] * p2.nodes[i];
        dx2 = p2.diff * x2;
        for (int i = 0; i < 3; ++i)
            CHECK(dx2(i) == doctest::Approx(2.0 * p2.nodes[i]));

        CHECK(p2.lift_left == doctest::Approx(3.0));
        CHECK(p2.lift_right == doctest::Approx(3.0));

        try
        {
            lgl_reference(0);
            FAIL("expected an error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::Configuration);
        }
    }

    TEST_CASE("LGL operators are exact for polynomials")
    {
        for (int P = 1; P <= 6; ++P)
        {
            const LocalOperators r = lgl_reference(P);
            CHECK(r.mass.isApprox(r.mass.transpose()));
            CHECK(r.mass.diagonal().minCoeff() > 0.0);

            // quadrature exact to degree 2P - 1
            for (int k = 0; k <= 2 * P - 1; ++k)
            {
                double q = 0.0;
                for (int i = 0; i <= P; ++i)
                    q += r.weights[i] * std::pow(r.nodes[i], k);
                const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
                CHECK(q == doctest::Approx(exact).epsilon(1e-13));
            }

            // differentiation exact to degree P
            for (int k = 0; k <= P; ++k)
            {
                Eigen::VectorXd v(P + 1);
                for (int i = 0; i <= P; ++i)
                    v(i) = std::pow(r.nodes[i], k);
                const Eigen::VectorXd d = r.diff * v;
                for (int i = 0; i <= P; ++i)
                    CHECK(d(i) == doctest::Approx(k == 0 ? 0.0 : k * std::pow(r.nodes[i], k - 1)).epsilon(1e-12).scale(1.0));
            }
        }
    }

    TEST_CASE("resolution rule")
    {
        const double omega = 10.0 * pi;
        const double hmax1 = std::pow(10.0 / std::pow(omega, 2.5), 2.0 / 3.0);
        const DGMesh m1 = dg_resolution(omega, 1, 10.0);
        CHECK(m1.elements_per_dim == static_cast<int>(std::ceil(2.0 / hmax1)));
        CHECK(m1.h <= hmax1);
        CHECK(m1.P == 1);

        for (double w : {11.0, 10.0 * pi, 30.0 * pi})
            CHECK(dg_resolution(w, 2, 10.0).h > dg_resolution(w, 1, 10.0).h);

        // h scales as constant^(1 / (P + 1/2)); compare the bounds themselves
        for (int P : {1, 2})
        {
            const double a = std::pow(10.0 / std::pow(omega, P + 1.5), 1.0 / (P + 0.5));
            const double b = std::pow(40.0 / std::pow(omega, P + 1.5), 1.0 / (P + 0.5));
            CHECK(b / a == doctest::Approx(std::pow(4.0, 1.0 / (P + 0.5))));
            const DGMesh m = dg_resolution(omega, P, 40.0);
            CHECK(m.h <= b);
            CHECK(2.0 / (m.elements_per_dim - 1) > b);
        }

        CHECK(dg_resolution(omega, 1, 10.0, 2).dim == 2);
        CHECK_THROWS_AS(dg_resolution(0.0, 1, 10.0), Error);
        CHECK_THROWS_AS(dg_resolution(omega, 0, 10.0), Error);
    }

    TEST_CASE("two element central flux by hand")
    {
        // h = 1, P = 1, u = (0, 1 | 3, 0): the interior face average is 2, lifted by (2/h)/w_end = 2
        const DGMesh mesh = DGMesh::uniform(1, 2, 1);
        const DiscreteSystem s = build_dg(1.0, mesh, FluxKind::Central, BoundarySpec::standard(1), {});
        REQUIRE(s.size() == 8);
        CHECK(s.layout.fields == std::vector<std::string> {"p", "u"});
        const Vector out = act(s, Vector {0, 0, 0, 0, 0, 1, 3, 0});
        const Vector expected {-1, -3, 1, 3, 0, 0, 0, 0};
        for (int i = 0; i < 8; ++i)
            CHECK(out[i] == doctest::Approx(expected[i]).scale(1.0).epsilon(1e-14));

        CHECK(act(s, Vector(8, 0.0)) == Vector(8, 0.0));
    }

    TEST_CASE("1D operator agrees with the face-by-face oracle")
    {
        for (int P : {1, 2})
            for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
                for (int mask = 0; mask < 4; ++mask)
                {
                    const bool ol = mask & 1, orr = mask & 2;
                    BoundarySpec bc = BoundarySpec::uniform(1, BoundaryCondition::Neumann);
                    bc.sides[0] = ol ? BoundaryCondition::Outflow : BoundaryCondition::Neumann;
                    bc.sides[1] = orr ? BoundaryCondition::Outflow : BoundaryCondition::Neumann;
                    const DiscreteSystem s = build_dg(2.0, DGMesh::uniform(1, 5, P), flux, bc, {});
                    const Eigen::MatrixXd E = oracle::dg1d_matrix(5, P, flux == FluxKind::Upwind ? 1.0 : 0.0, ol, orr);
                    CHECK((assemble_dense(s) - E).norm() <= 1e-12 * E.norm());

                    double worst = 0.0;
                    for (std::size_t j = 0; j < s.size(); ++j)
                    {
                        Vector e(s.size(), 0.0);
                        e[j] = 1.0;
                        const Vector col = act(s, e);
                        for (std::size_t i = 0; i < s.size(); ++i)
                            worst = std::max(worst, std::abs(col[i] - E(i, j)));
                    }
                    CHECK(worst <= 1e-12 * E.cwiseAbs().maxCoeff());
                }
    }

    TEST_CASE("2D matrix-free action matches the assembled matrix")
    {
        std::mt19937_64 rng(23);
        for (int P : {1, 2})
            for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
                for (int mask = 0; mask < 16; mask += 5)
                {
                    BoundarySpec bc = BoundarySpec::uniform(2, BoundaryCondition::Neumann);
                    for (int side = 0; side < 4; ++side)
                        if (mask & (1 << side))
                            bc.sides[side] = BoundaryCondition::Outflow;
                    const DiscreteSystem s = build_dg(2.0, DGMesh::uniform(2, 3, P), flux, bc, {});
                    CHECK(s.layout.fields == std::vector<std::string> {"p", "u1", "u2"});
                    for (int trial = 0; trial < 5; ++trial)
                    {
                        const Vector w = oracle::random_vector(rng, s.size());
                        CHECK(oracle::rel_diff(act(s, w), apply_reference(s, w)) <= 1e-13);
                    }
                }
    }

    TEST_CASE("free stream")
    {
        for (int dim : {1, 2})
            for (int P : {1, 2})
                for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
                {
                    const DGMesh mesh = DGMesh::uniform(dim, 4, P);
                    const DiscreteSystem s = build_dg(3.0, mesh, flux, BoundarySpec::uniform(dim, BoundaryCondition::Neumann), {});
                    Vector w(s.size(), 0.0);
                    std::fill(w.begin(), w.begin() + mesh.n_nodes(), 2.5);
                    for (double x : act(s, w))
                        CHECK(std::abs(x) <= 1e-12);
                }
    }

    TEST_CASE("energy: central walls conserve, upwind dissipates")
    {
        std::mt19937_64 rng(7);
        for (int dim : {1, 2})
            for (int P : {1, 2})
            {
                const DGMesh mesh = DGMesh::uniform(dim, dim == 1 ? 6 : 3, P);
                const Eigen::VectorXd M = energy_weights(mesh, dim + 1);
                const auto walls = BoundarySpec::uniform(dim, BoundaryCondition::Neumann);

                const Eigen::MatrixXd Ac = assemble_dense(build_dg(1.0, mesh, FluxKind::Central, walls, {}));
                const Eigen::MatrixXd Sc = M.asDiagonal() * Ac;
                CHECK((Sc + Sc.transpose()).norm() <= 1e-12 * Sc.norm());

                for (auto bc : {walls, BoundarySpec::standard(dim)})
                {
                    const Eigen::MatrixXd Au = assemble_dense(build_dg(1.0, mesh, FluxKind::Upwind, bc, {}));
                    const Eigen::MatrixXd Su = M.asDiagonal() * Au;
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Su + Su.transpose());
                    CHECK(es.eigenvalues().maxCoeff() <= 1e-10 * Su.norm());

                    // random states have jumps on every face
                    for (int trial = 0; trial < 10; ++trial)
                    {
                        const Vector w = oracle::random_vector(rng, Au.rows());
                        const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
                        CHECK(v.dot(Su * v) < 0.0);
                    }
                }
            }

        // under RK4 the central energy drifts only at the integrator's accuracy
        const DGMesh mesh = DGMesh::uniform(1, 20, 2);
        const DiscreteSystem s = build_dg(1.0, mesh, FluxKind::Central, BoundarySpec::uniform(1, BoundaryCondition::Neumann), {});
        const Eigen::VectorXd M = energy_weights(mesh, 2);
        Vector w = sample(s.layout, [](double x, double) { return std::exp(-20.0 * x * x); });
        w.resize(s.size(), 0.0);
        const double e0 = energy(M, w);
        const double dt = 0.25 * s.dt_scale;
        for (int k = 0; k < 400; ++k)
            w = rk4_step(s, w, k * dt, dt);
        CHECK(std::abs(energy(M, w) - e0) / e0 <= 1e-6);
    }

    TEST_CASE("upwind outflow lets a right-moving pulse leave")
    {
        // p = u = g(x) travels right; after it has crossed x = 1 nothing should remain
        const DGMesh mesh = DGMesh::uniform(1, 100, 2);
        const DiscreteSystem s = build_dg(1.0, mesh, FluxKind::Upwind, BoundarySpec::standard(1), {});
        const Eigen::VectorXd M = energy_weights(mesh, 2);
        Vector w = sample(s.layout, [](double x, double) { return std::exp(-100.0 * x * x); });
        w.insert(w.end(), w.begin(), w.end());
        const double e0 = energy(M, w);

        const double T = 2.5;
        const int n = static_cast<int>(std::ceil(T / (0.5 * s.dt_scale)));
        const double dt = T / n;
        for (int k = 0; k < n; ++k)
            w = rk4_step(s, w, k * dt, dt);
        CHECK(energy(M, w) / e0 <= 1e-12);
    }

    TEST_CASE("forcing lives in the p-block with sine phase")
    {
        const double omega = 10.0 * pi;
        const DGMesh mesh = DGMesh::uniform(1, 8, 2);
        const auto f = gaussian_point_source(omega, 1);
        const DiscreteSystem s = build_dg(omega, mesh, FluxKind::Central, BoundarySpec::standard(1), f);
        CHECK(s.phase == ForcingPhase::Sine);
        for (std::size_t i = 0; i < mesh.n_nodes(); ++i)
        {
            CHECK(s.forcing[i] == doctest::Approx(f(s.layout.x[i], 0.0) / omega));
            CHECK(s.forcing[mesh.n_nodes() + i] == 0.0);
        }
        CHECK(s.dt_scale == doctest::Approx(mesh.h / 5.0));
    }

    TEST_CASE("configuration errors")
    {
        CHECK_THROWS_AS(build_dg(1.0, DGMesh::uniform(1, 4, 1), FluxKind::Central, BoundarySpec::standard(2), {}), Error);
        CHECK_THROWS_AS(build_dg(1.0, DGMesh::uniform(1, 4, 1), static_cast<FluxKind>(7), BoundarySpec::standard(1), {}), Error);
        CHECK_THROWS_AS(DGMesh::uniform(3, 4, 1), Error);
        CHECK_THROWS_AS(DGMesh::uniform(1, 0, 1), Error);
    }

    TEST_CASE("semi-discrete stability")
    {
        const double omega = 10.0 * pi;
        for (int P : {1, 2})
            for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
            {
                const DiscreteSystem s = build_dg(omega, dg_resolution(omega, P, 10.0), flux, BoundarySpec::standard(1), {});
                const SpectralReport r = spectral_report(s);
                CHECK(r.max_real_part <= 1e-10);
                CHECK(r.lambda_star.eps > 0.0);
            }

        for (FluxKind flux : {FluxKind::Central, FluxKind::Upwind})
        {
            const DiscreteSystem s = build_dg(8.0, DGMesh::uniform(2, 8, 1), flux, BoundarySpec::standard(2), {});
            CHECK(spectral_report(s).max_real_part <= 1e-10);
        }
    }
}

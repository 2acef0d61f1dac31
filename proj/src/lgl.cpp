#include "waveholtz/lgl.hpp"

#include <cmath>
#include <numbers>

#include "waveholtz/errors.hpp"

namespace wh
{
    void legendre(int n, double x, double& p, double& dp)
    {
        double p0 = 1.0, p1 = x;
        if (n == 0)
        {
            p = 1.0;
            dp = 0.0;
            return;
        }

        for (int k = 2; k <= n; ++k)
        {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }

        p = p1;
        if (std::abs(x) == 1.0)
            dp = 0.5 * n * (n + 1) * std::pow(x, n - 1);
        else
            dp = n * (x * p1 - p0) / (x * x - 1.0);
    }

    LocalOperators lgl_reference(int P)
    {
        if (P < 1)
            throw Error(ErrorKind::Configuration, "polynomial degree must be at least 1");

        const int n = P + 1;
        LocalOperators op;
        op.P = P;
        op.nodes.resize(n);
        op.weights.resize(n);

        op.nodes[0] = -1.0;
        op.nodes[P] = 1.0;

        // interior nodes: Newton on P_P'(x) = 0 from Chebyshev-Gauss-Lobatto guesses.
        // P_P'' follows from the Legendre equation (1 - x^2) P'' = 2x P' - P(P+1) P.
        for (int i = 1; i < P; ++i)
        {
            double x = -std::cos(std::numbers::pi * i / P);
            for (int it = 0; it < 100; ++it)
            {
                double p, dp;
                legendre(P, x, p, dp);
                const double d2p = (2.0 * x * dp - P * (P + 1) * p) / (1.0 - x * x);
                const double dx = dp / d2p;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            op.nodes[i] = x;
        }

        for (int i = 0; i < n; ++i)
        {
            double p, dp;
            legendre(P, op.nodes[i], p, dp);
            op.weights[i] = 2.0 / (P * (P + 1) * p * p);
        }

        // barycentric differentiation matrix
        std::vector<double> bw(n, 1.0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (k != j)
                    bw[j] /= (op.nodes[j] - op.nodes[k]);

        op.diff = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
        {
            double diag = 0.0;
            for (int j = 0; j < n; ++j)
            {
                if (i == j)
                    continue;
                op.diff(i, j) = (bw[j] / bw[i]) / (op.nodes[i] - op.nodes[j]);
                diag -= op.diff(i, j);
            }
            op.diff(i, i) = diag;
        }

        op.mass = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            op.mass(i, i) = op.weights[i];

        op.lift_left = 1.0 / op.weights[0];
        op.lift_right = 1.0 / op.weights[P];
        return op;
    }
} // namespace wh

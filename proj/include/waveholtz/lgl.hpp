#ifndef WAVEHOLTZ_LGL_HPP
#define WAVEHOLTZ_LGL_HPP

#include <vector>

#include <Eigen/Dense>

namespace wh
{
    /// Nodal operators on the reference element [-1, 1] with the P+1
    /// Legendre-Gauss-Lobatto points as nodes.
    struct LocalOperators
    {
        int P = 1;
        std::vector<double> nodes;
        std::vector<double> weights;
        Eigen::MatrixXd mass; // diagonal: collocated quadrature
        Eigen::MatrixXd diff; // diff(i, j) = l_j'(x_i)
        double lift_left = 0.0;  // 1 / w_0
        double lift_right = 0.0; // 1 / w_P
    };

    /// LGL nodes are +/- 1 and the roots of P_P'(x); weights 2 / (P (P+1) P_P(x)^2).
    LocalOperators lgl_reference(int P);

    /// Legendre polynomial P_n(x) and its derivative.
    void legendre(int n, double x, double& p, double& dp);
} // namespace wh

#endif

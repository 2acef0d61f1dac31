#include "waveholtz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <lapacke.h>

#include "waveholtz/errors.hpp"

namespace wh
{
    EigenDecomposition eigendecompose(const Eigen::MatrixXd& A_in)
    {
        const lapack_int n = lapack_int(A_in.rows());
        if (A_in.cols() != n)
            throw Error(ErrorKind::Dimension, "eigendecompose: matrix must be square");
        if (n == 0)
            throw Error(ErrorKind::Dimension, "eigendecompose: empty matrix");

        Eigen::MatrixXd A = A_in; // column-major copy, overwritten by dgeev
        std::vector<double> wr(n), wi(n);
        Eigen::MatrixXd VR(n, n);

        const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, A.data(), n, wr.data(), wi.data(),
                                              nullptr, 1, VR.data(), n);
        if (info != 0)
            throw Error(ErrorKind::Numerical, "dgeev failed with info = " + std::to_string(info));

        EigenDecomposition eig;
        eig.eigenvalues.resize(n);
        eig.R.resize(n, n);

        // conjugate pairs are stored as (re, im) column pairs
        for (lapack_int j = 0; j < n; ++j)
        {
            eig.eigenvalues[j] = complex(wr[j], wi[j]);
            if (wi[j] == 0.0)
            {
                eig.R.col(j) = VR.col(j).cast<complex>();
            }
            else
            {
                eig.R.col(j) = VR.col(j).cast<complex>() + complex(0.0, 1.0) * VR.col(j + 1).cast<complex>();
                eig.R.col(j + 1) = eig.R.col(j).conjugate();
                eig.eigenvalues[j + 1] = complex(wr[j + 1], wi[j + 1]);
                ++j;
            }
        }

        for (lapack_int j = 0; j < n; ++j)
        {
            const double nrm = eig.R.col(j).norm();
            if (nrm > 0.0)
                eig.R.col(j) /= nrm;
        }

        const auto sv = singular_values(eig.R);
        const double smax = sv.front();
        const double smin = sv.back();
        eig.sigma_ratio = (smax > 0.0) ? smin / smax : 0.0;
        eig.diagonalizable = eig.sigma_ratio >= diagonalizable_threshold;
        eig.kappa = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        return eig;
    }

    EigenDecomposition eigendecompose(const DiscreteSystem& system, std::size_t cap)
    {
        if (system.size() > cap)
            throw Error(ErrorKind::Size, "system has " + std::to_string(system.size()) + " unknowns, above the dense cap of "
                                             + std::to_string(cap) + "; lower omega or the resolution constant");
        return eigendecompose(assemble_dense(system));
    }

    std::vector<double> singular_values(const Eigen::MatrixXcd& M_in)
    {
        const lapack_int m = lapack_int(M_in.rows());
        const lapack_int n = lapack_int(M_in.cols());
        Eigen::MatrixXcd M = M_in;
        std::vector<double> s(std::min(m, n));

        const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double *>(M.data()), m,
                                               s.data(), nullptr, 1, nullptr, 1);
        if (info != 0)
            throw Error(ErrorKind::Numerical, "zgesdd failed with info = " + std::to_string(info));
        return s;
    }

    LambdaStar epsilon_star(const ComplexVector& eigenvalues, double omega)
    {
        require_positive_frequency(omega);
        if (eigenvalues.empty())
            throw Error(ErrorKind::Dimension, "epsilon_star: empty spectrum");

        const complex iw(0.0, omega);
        LambdaStar best;
        bool first = true;
        for (std::size_t j = 0; j < eigenvalues.size(); ++j)
        {
            const complex lam = eigenvalues[j];
            const double eps = parabolic_distance(lam / omega);
            const double gap = std::abs(lam - iw);
            if (first || eps < best.eps || (eps == best.eps && gap < best.gap))
            {
                best = {lam, eps, gap, j};
                first = false;
            }
        }
        return best;
    }

    double rho_filtered(const ComplexVector& eigenvalues, double omega)
    {
        require_positive_frequency(omega);
        if (eigenvalues.empty())
            throw Error(ErrorKind::Dimension, "rho_filtered: empty spectrum");

        double rho = 0.0;
        for (const complex& lam : eigenvalues)
            rho = std::max(rho, std::abs(beta_hat(lam / omega)));
        return rho;
    }

    double predicted_iterations(double tau, double omega, double M, double gamma, double eps)
    {
        if (!(eps > 0.0))
            throw Error(ErrorKind::InvalidBound, "predicted_iterations: eps must be positive");
        if (!(tau > 0.0 && tau < 1.0))
            throw Error(ErrorKind::InvalidBound, "predicted_iterations: tau must lie in (0, 1)");
        if (!(M > 0.0))
            throw Error(ErrorKind::InvalidBound, "predicted_iterations: M must be positive");
        require_positive_frequency(omega);

        return (gamma * std::log(M * omega) - std::log(tau)) / eps;
    }

    SweepFit fit_power_law(const std::vector<double>& omegas, const std::vector<double>& values)
    {
        if (omegas.size() != values.size())
            throw Error(ErrorKind::Dimension, "fit_power_law: length mismatch");
        if (omegas.size() < 3)
            throw Error(ErrorKind::Configuration, "fit_power_law: needs at least 3 points");

        const std::size_t n = omegas.size();
        Eigen::MatrixXd X(n, 2);
        Eigen::VectorXd y(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!(omegas[i] > 0.0) || !(values[i] > 0.0))
                throw Error(ErrorKind::Domain, "fit_power_law: values must be positive");
            X(i, 0) = 1.0;
            X(i, 1) = std::log(omegas[i]);
            y(i) = std::log(values[i]);
        }

        const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);

        SweepFit fit;
        fit.omegas = omegas;
        fit.values = values;
        fit.intercept = c(0);
        fit.slope = c(1);
        return fit;
    }

    SpectralReport spectral_report(const EigenDecomposition& eig, double omega)
    {
        SpectralReport r;
        r.eigenvalues = eig.eigenvalues;
        r.kappa = eig.kappa;
        r.diagonalizable = eig.diagonalizable;
        r.lambda_star = epsilon_star(eig.eigenvalues, omega);
        r.rho = rho_filtered(eig.eigenvalues, omega);
        r.rate_bound = std::max(1.0 - r.lambda_star.eps, 1.0 - FilterConstants::delta);
        r.max_real_part = -std::numeric_limits<double>::infinity();
        for (const complex& lam : eig.eigenvalues)
            r.max_real_part = std::max(r.max_real_part, lam.real());
        return r;
    }

    SpectralReport spectral_report(const DiscreteSystem& system, std::size_t cap)
    {
        return spectral_report(eigendecompose(system, cap), system.omega);
    }

    ComplexLU::ComplexLU(const Eigen::MatrixXcd& M) : lu(M) {}

    ComplexVector ComplexLU::solve(const ComplexVector& b) const
    {
        Eigen::Map<const Eigen::VectorXcd> bb(b.data(), b.size());
        const Eigen::VectorXcd x = lu.solve(bb);
        return ComplexVector(x.data(), x.data() + x.size());
    }

    Eigen::VectorXcd ComplexLU::solve(const Eigen::VectorXcd& b) const
    {
        return lu.solve(b);
    }
} // namespace wh

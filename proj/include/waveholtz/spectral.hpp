#ifndef WAVEHOLTZ_SPECTRAL_HPP
#define WAVEHOLTZ_SPECTRAL_HPP

#include <optional>

#include "waveholtz/discrete_system.hpp"
#include "waveholtz/filter.hpp"

namespace wh
{
    inline constexpr std::size_t default_dense_cap = 5000;

    /// relative smallest singular value of R below which A is flagged
    /// non-diagonalizable.
    inline constexpr double diagonalizable_threshold = 1e-12;

    struct EigenDecomposition
    {
        ComplexVector eigenvalues;
        Eigen::MatrixXcd R; // unit 2-norm columns
        double kappa = 0.0; // sigma_max(R) / sigma_min(R)
        double sigma_ratio = 0.0; // sigma_min / sigma_max
        bool diagonalizable = false;
    };

    /// dense nonsymmetric eigendecomposition (LAPACK dgeev).
    EigenDecomposition eigendecompose(const Eigen::MatrixXd& A);

    /// throws Size when the system exceeds `cap` unknowns.
    EigenDecomposition eigendecompose(const DiscreteSystem& system, std::size_t cap = default_dense_cap);

    /// singular values of a complex matrix in descending order (LAPACK zgesdd).
    std::vector<double> singular_values(const Eigen::MatrixXcd& M);

    struct LambdaStar
    {
        complex lambda;
        double eps = 0.0;  // parabolic distance of lambda / omega
        double gap = 0.0;  // |lambda - i omega|
        std::size_t index = 0;
    };

    // argmin of parabolic_distance(lambda_j / omega); ties go to the smaller
    // |lambda - i omega|, then to the smaller index.
    LambdaStar epsilon_star(const ComplexVector& eigenvalues, double omega);

    /// max_j |beta_hat(lambda_j / omega)|.
    double rho_filtered(const ComplexVector& eigenvalues, double omega);

    /// N = (gamma log(M omega) - log tau) / eps.
    double predicted_iterations(double tau, double omega, double M, double gamma, double eps);

    struct SweepFit
    {
        std::vector<double> omegas;
        std::vector<double> values;
        double slope = 0.0;
        double intercept = 0.0; // log(value) = intercept + slope log(omega)
    };

    /// least-squares line through (log omega, log value).
    SweepFit fit_power_law(const std::vector<double>& omegas, const std::vector<double>& values);

    struct SpectralReport
    {
        ComplexVector eigenvalues;
        double kappa = 0.0;
        bool diagonalizable = false;
        LambdaStar lambda_star;
        double rho = 0.0;
        double rate_bound = 0.0; // max(1 - eps*, 1 - delta)
        double max_real_part = 0.0;
    };

    SpectralReport spectral_report(const DiscreteSystem& system, std::size_t cap = default_dense_cap);
    SpectralReport spectral_report(const EigenDecomposition& eig, double omega);

    /// complex LU with partial pivoting, used for mu = R^{-1} e.
    class ComplexLU
    {
    public:
        explicit ComplexLU(const Eigen::MatrixXcd& M);

        ComplexVector solve(const ComplexVector& b) const;
        Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

    private:
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    };
} // namespace wh

#endif

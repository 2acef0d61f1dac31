#ifndef WAVEHOLTZ_ITERATION_HPP
#define WAVEHOLTZ_ITERATION_HPP

#include <optional>

#include "waveholtz/discrete_system.hpp"
#include "waveholtz/spectral.hpp"
#include "waveholtz/time_integration.hpp"

namespace wh
{
    /// systems up to this size are solved with dense LU, larger ones with sparse LU.
    inline constexpr std::size_t dense_solve_cap = 4000;

    // Solves (A - i omega I) w = F_c, F_c = F (cosine) or -i F (sine), so that
    // Re(w exp(i omega t)) is the time-harmonic solution of the real system.
    // Throws Resonance when the relative residual exceeds 1e-8.
    ComplexVector direct_helmholtz_solve(const DiscreteSystem& system);

    /// the real state at t = 0 of the time-harmonic solution.
    Vector real_part(const ComplexVector& w);

    struct IterationOptions
    {
        double tol = 1e-6;
        int max_iters = 5000;
        bool stop_at_tol = true; // false: run all max_iters (rate measurements)
    };

    struct IterationReport
    {
        std::vector<double> res;    // res[n-1] = res^{(n)}, res^{(1)} = 1
        std::vector<double> err_e;  // ||e^{(n)}||, n = 0..; empty without oracle
        std::vector<double> err_mu; // ||R^{-1} e^{(n)}||; empty without eigenbasis
        bool converged_at_start = false;
        std::optional<int> iterations_to_tol; // first n with res^{(n)} <= tol
        int iterations = 0;
        double first_rate = 0.0; // ||e^{(1)}|| / ||e^{(0)}||, needs oracle
        Vector w; // last iterate
    };

    // w^{(n+1)} = Pi_h w^{(n)}. The oracle is the complex fixed point; `eigvecs`
    // is an LU factorization of the eigenvector matrix for eigen-coefficient
    // errors mu^{(n)} = R^{-1} e^{(n)}. Throws Divergence on non-finite iterates.
    IterationReport waveholtz_iterate(const DiscreteSystem& system, std::span<const double> w0, const TimeGrid& grid,
                                      const IterationOptions& options, const ComplexVector * oracle = nullptr,
                                      const ComplexLU * eigvecs = nullptr);

    /// (1/K) sum_{k<K} history[k+1] / history[k].
    double average_rate(const std::vector<double>& history, int K);

    /// u_hat = u - (i/omega) v.
    ComplexVector recover_complex_fd(std::span<const double> u, std::span<const double> v, double omega);

    // p_hat = p - (i/omega) [A w]_p, the DG divergence of u including the face
    // terms of the system's numerical flux.
    ComplexVector recover_complex_dg(const DiscreteSystem& system, std::span<const double> w);

    /// complex solution on the first field for either discretization.
    ComplexVector recover_complex(const DiscreteSystem& system, std::span<const double> w);
} // namespace wh

#endif

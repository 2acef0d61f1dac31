#include "waveholtz/iteration.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "waveholtz/errors.hpp"

namespace wh
{
    using namespace std::complex_literals;

    static double norm2(std::span<const double> x)
    {
        double s = 0.0;
        for (double v : x)
            s += v * v;
        return std::sqrt(s);
    }

    ComplexVector direct_helmholtz_solve(const DiscreteSystem& system)
    {
        const std::size_t n = system.size();
        const ComplexVector F = system.complex_forcing();
        Eigen::Map<const Eigen::VectorXcd> b(F.data(), n);

        const double bnorm = b.norm();
        if (bnorm == 0.0)
            return ComplexVector(n, 0.0);

        const SparseMatrix A = system.op->assemble();
        Eigen::SparseMatrix<complex> M = A.cast<complex>();
        for (std::size_t i = 0; i < n; ++i)
            M.coeffRef(i, i) -= 1.0i * system.omega;

        Eigen::VectorXcd x;
        if (n <= dense_solve_cap)
        {
            const Eigen::MatrixXcd Md(M);
            x = Md.partialPivLu().solve(b);
        }
        else
        {
            Eigen::SparseMatrix<complex, Eigen::ColMajor> Mc = M;
            Mc.makeCompressed();
            Eigen::SparseLU<Eigen::SparseMatrix<complex, Eigen::ColMajor>> lu;
            lu.compute(Mc);
            if (lu.info() != Eigen::Success)
                throw Error(ErrorKind::Resonance, "sparse LU of A - i omega I failed: matrix is singular");
            x = lu.solve(b);
        }

        const double rel = (M * x - b).norm() / bnorm;
        if (!std::isfinite(rel) || rel > 1e-8)
            throw Error(ErrorKind::Resonance, "A - i omega I is singular or nearly so (relative residual " + std::to_string(rel) + ")");

        return ComplexVector(x.data(), x.data() + n);
    }

    Vector real_part(const ComplexVector& w)
    {
        Vector r(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            r[i] = w[i].real();
        return r;
    }

    IterationReport waveholtz_iterate(const DiscreteSystem& system, std::span<const double> w0, const TimeGrid& grid,
                                      const IterationOptions& options, const ComplexVector * oracle, const ComplexLU * eigvecs)
    {
        if (!(options.tol > 0.0))
            throw Error(ErrorKind::Configuration, "tol must be positive");
        if (options.max_iters < 1)
            throw Error(ErrorKind::Configuration, "max_iters must be at least 1");
        if (w0.size() != system.size())
            throw Error(ErrorKind::Dimension, "waveholtz_iterate: initial state length mismatch");
        if (oracle && oracle->size() != system.size())
            throw Error(ErrorKind::Dimension, "waveholtz_iterate: oracle length mismatch");

        const std::size_t n = system.size();
        IterationReport report;

        Vector target;
        if (oracle)
            target = real_part(*oracle);

        Vector e(n);
        Eigen::VectorXcd ec(n);
        auto record_errors = [&](const Vector& w)
        {
            if (!oracle)
                return;
            for (std::size_t i = 0; i < n; ++i)
                e[i] = w[i] - target[i];
            report.err_e.push_back(norm2(e));
            if (eigvecs)
            {
                for (std::size_t i = 0; i < n; ++i)
                    ec[i] = e[i];
                report.err_mu.push_back(eigvecs->solve(ec).norm());
            }
        };

        FilteredPropagator prop(system, grid);
        Vector w(w0.begin(), w0.end()), next(n), diff(n);
        record_errors(w);

        double first_step = 0.0;
        for (int it = 1; it <= options.max_iters; ++it)
        {
            prop.apply(w, next);

            for (std::size_t i = 0; i < n; ++i)
            {
                if (!std::isfinite(next[i]))
                    throw Error(ErrorKind::Divergence, "non-finite iterate at iteration " + std::to_string(it));
                diff[i] = next[i] - w[i];
            }
            std::swap(w, next);
            report.iterations = it;
            record_errors(w);

            const double step = norm2(diff);
            if (it == 1)
            {
                first_step = step;
                if (first_step == 0.0)
                {
                    report.converged_at_start = true;
                    report.iterations_to_tol = 0;
                    break;
                }

                // res^{(1)} = 1 by normalization, so a start at the fixed point
                // shows up only in the size of the update relative to the iterate
                if (first_step <= options.tol * norm2(w))
                    report.iterations_to_tol = 1;
            }

            const double r = step / first_step;
            report.res.push_back(r);

            if (r <= options.tol && !report.iterations_to_tol)
                report.iterations_to_tol = it;
            if (report.iterations_to_tol && options.stop_at_tol)
                break;

            // homogeneous runs that have decayed to nothing carry no further information
            if (step == 0.0)
                break;
        }

        if (report.err_e.size() >= 2 && report.err_e[0] > 0.0)
            report.first_rate = report.err_e[1] / report.err_e[0];

        report.w = std::move(w);
        return report;
    }

    double average_rate(const std::vector<double>& history, int K)
    {
        if (K < 1)
            throw Error(ErrorKind::Configuration, "average_rate: K must be at least 1");
        if (history.size() < std::size_t(K) + 1)
            throw Error(ErrorKind::DegenerateHistory, "average_rate: history shorter than K + 1");

        double s = 0.0;
        for (int k = 0; k < K; ++k)
        {
            if (history[k] == 0.0)
                throw Error(ErrorKind::DegenerateHistory, "average_rate: zero entry at k = " + std::to_string(k));
            s += history[k + 1] / history[k];
        }
        return s / K;
    }

    ComplexVector recover_complex_fd(std::span<const double> u, std::span<const double> v, double omega)
    {
        require_positive_frequency(omega);
        if (u.size() != v.size())
            throw Error(ErrorKind::Dimension, "recover_complex_fd: length mismatch");

        ComplexVector out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = complex(u[i], -v[i] / omega);
        return out;
    }

    ComplexVector recover_complex_dg(const DiscreteSystem& system, std::span<const double> w)
    {
        require_positive_frequency(system.omega);
        if (system.layout.kind != SystemKind::DiscontinuousGalerkin)
            throw Error(ErrorKind::Configuration, "recover_complex_dg needs a DG system");
        if (w.size() != system.size())
            throw Error(ErrorKind::Dimension, "recover_complex_dg: state length mismatch");

        Vector Aw(w.size());
        system.apply(w, Aw);

        const std::size_t N = system.layout.n_nodes;
        ComplexVector out(N);
        for (std::size_t i = 0; i < N; ++i)
            out[i] = complex(w[i], -Aw[i] / system.omega);
        return out;
    }

    ComplexVector recover_complex(const DiscreteSystem& system, std::span<const double> w)
    {
        if (system.layout.kind == SystemKind::FiniteDifference)
        {
            const std::size_t N = system.layout.n_nodes;
            return recover_complex_fd(w.subspan(0, N), w.subspan(N, N), system.omega);
        }
        return recover_complex_dg(system, w);
    }
} // namespace wh

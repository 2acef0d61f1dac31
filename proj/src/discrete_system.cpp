#include "waveholtz/discrete_system.hpp"

#include <algorithm>
#include <cmath>

#include "waveholtz/errors.hpp"

namespace wh
{
    bool BoundarySpec::any_outflow() const
    {
        const int n = 2 * dim;
        return std::any_of(sides.begin(), sides.begin() + n, [](BoundaryCondition bc) { return bc == BoundaryCondition::Outflow; });
    }

    BoundarySpec BoundarySpec::standard(int dim)
    {
        BoundarySpec bc;
        bc.dim = dim;
        bc.sides = {BoundaryCondition::Neumann, BoundaryCondition::Outflow, BoundaryCondition::Neumann, BoundaryCondition::Outflow};
        return bc;
    }

    BoundarySpec BoundarySpec::uniform(int dim, BoundaryCondition c)
    {
        BoundarySpec bc;
        bc.dim = dim;
        bc.sides = {c, c, c, c};
        return bc;
    }

    double DiscreteSystem::phase_value(double t) const
    {
        return (phase == ForcingPhase::Cosine) ? std::cos(omega * t) : std::sin(omega * t);
    }

    bool DiscreteSystem::has_forcing() const
    {
        return std::any_of(forcing.begin(), forcing.end(), [](double f) { return f != 0.0; });
    }

    DiscreteSystem DiscreteSystem::homogeneous() const
    {
        DiscreteSystem s = *this;
        std::fill(s.forcing.begin(), s.forcing.end(), 0.0);
        return s;
    }

    ComplexVector DiscreteSystem::complex_forcing() const
    {
        const std::complex<double> c = (phase == ForcingPhase::Cosine) ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, -1.0);

        ComplexVector F(forcing.size());
        for (std::size_t i = 0; i < F.size(); ++i)
            F[i] = c * forcing[i];
        return F;
    }

    Vector apply_reference(const DiscreteSystem& system, std::span<const double> w)
    {
        if (w.size() != system.size())
            throw Error(ErrorKind::Dimension, "apply_reference: state length mismatch");

        const SparseMatrix A = system.op->assemble();
        Eigen::Map<const Eigen::VectorXd> x(w.data(), w.size());

        Vector out(w.size());
        Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) = A * x;
        return out;
    }

    Eigen::MatrixXd assemble_dense(const DiscreteSystem& system)
    {
        return Eigen::MatrixXd(system.op->assemble());
    }

    Vector sample(const StateLayout& layout, const SourceFunction& f)
    {
        Vector v(layout.n_nodes);
        for (std::size_t i = 0; i < layout.n_nodes; ++i)
            v[i] = f(layout.x[i], layout.y.empty() ? 0.0 : layout.y[i]);
        return v;
    }
    namespace
    {
        class MatrixOperator final : public SpatialOperator
        {
        public:
            explicit MatrixOperator(const Eigen::MatrixXd& A) : A(A) {}

            std::size_t size() const override
            {
                return A.rows();
            }

            void apply(std::span<const double> w, std::span<double> out) const override
            {
                Eigen::Map<const Eigen::VectorXd> x(w.data(), w.size());
                Eigen::Map<Eigen::VectorXd>(out.data(), out.size()).noalias() = A * x;
            }

            SparseMatrix assemble() const override
            {
                return A.sparseView();
            }

        private:
            Eigen::MatrixXd A;
        };
    } // namespace

    DiscreteSystem make_matrix_system(const Eigen::MatrixXd& A, const Vector& F, double omega, ForcingPhase phase)
    {
        require_positive_frequency(omega);
        if (A.rows() != A.cols() || std::size_t(A.rows()) != F.size())
            throw Error(ErrorKind::Dimension, "make_matrix_system: A must be square and match F");

        DiscreteSystem s;
        s.op = std::make_shared<MatrixOperator>(A);
        s.forcing = F;
        s.phase = phase;
        s.omega = omega;
        s.layout.kind = SystemKind::FiniteDifference;
        s.layout.n_nodes = F.size();
        s.layout.fields = {"w"};
        s.h = 1.0;

        const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
        s.dt_scale = (norm > 0.0) ? 1.0 / norm : 1.0;
        return s;
    }
} // namespace wh

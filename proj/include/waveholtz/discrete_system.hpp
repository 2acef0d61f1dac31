#ifndef WAVEHOLTZ_DISCRETE_SYSTEM_HPP
#define WAVEHOLTZ_DISCRETE_SYSTEM_HPP

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wh
{
    using Vector = std::vector<double>;
    using ComplexVector = std::vector<std::complex<double>>;
    using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    /// f(x, y); y is ignored in one dimension.
    using SourceFunction = std::function<double(double, double)>;

    enum class BoundaryCondition
    {
        Neumann, // reflecting wall
        Outflow  // u_t + n . grad u = 0
    };

    enum class Side
    {
        Left = 0,   // x = -1
        Right = 1,  // x = +1
        Bottom = 2, // y = -1
        Top = 3     // y = +1
    };

    struct BoundarySpec
    {
        int dim = 1;
        std::array<BoundaryCondition, 4> sides {BoundaryCondition::Neumann, BoundaryCondition::Outflow,
                                                BoundaryCondition::Neumann, BoundaryCondition::Outflow};

        BoundaryCondition operator[](Side s) const
        {
            return sides[static_cast<int>(s)];
        }

        bool any_outflow() const;

        /// Neumann on the low sides, outflow on the high sides: the test
        /// problem in one and two dimensions.
        static BoundarySpec standard(int dim);

        static BoundarySpec uniform(int dim, BoundaryCondition bc);
    };

    enum class ForcingPhase
    {
        Cosine,
        Sine
    };

    enum class SystemKind
    {
        FiniteDifference,      // (u, v) velocity form
        DiscontinuousGalerkin  // (p, u) conservative form
    };

    /// Linear action w -> A w of a semi-discretization.
    class SpatialOperator
    {
    public:
        virtual ~SpatialOperator() = default;

        virtual std::size_t size() const = 0;

        /// matrix-free, OpenMP parallel.
        virtual void apply(std::span<const double> w, std::span<double> out) const = 0;

        /// explicit sparse matrix assembled entry by entry (serial). Serves as
        /// the reference implementation of `apply`.
        virtual SparseMatrix assemble() const = 0;
    };

    struct StateLayout
    {
        SystemKind kind = SystemKind::FiniteDifference;
        int dim = 1;
        std::size_t n_nodes = 0; // spatial nodes per field
        std::vector<std::string> fields; // block order, e.g. {"u", "v"} or {"p", "u1", "u2"}
        std::vector<double> x; // node coordinates
        std::vector<double> y; // empty in 1D

        std::size_t offset(int field) const
        {
            return field * n_nodes;
        }
    };

    // dw/dt = A w - F phase(omega t), phase = cos or sin.
    struct DiscreteSystem
    {
        std::shared_ptr<const SpatialOperator> op;
        Vector forcing;
        ForcingPhase phase = ForcingPhase::Cosine;
        double omega = 0.0;
        StateLayout layout;
        double h = 0.0;        // mesh size
        double dt_scale = 0.0; // stable step is cfl * dt_scale

        std::size_t size() const
        {
            return op->size();
        }

        void apply(std::span<const double> w, std::span<double> out) const
        {
            op->apply(w, out);
        }

        double phase_value(double t) const;

        bool has_forcing() const;

        /// copy of this system with F = 0.
        DiscreteSystem homogeneous() const;

        /// forcing of the complex problem dw/dt = A w - F_c exp(i omega t)
        /// whose real part is this system: F for cosine, -iF for sine phase.
        ComplexVector complex_forcing() const;
    };

    /// reference product A w through the assembled sparse matrix.
    Vector apply_reference(const DiscreteSystem& system, std::span<const double> w);

    Eigen::MatrixXd assemble_dense(const DiscreteSystem& system);

    /// samples f at the layout nodes.
    Vector sample(const StateLayout& layout, const SourceFunction& f);

    // System with an explicitly given matrix, for surrogates and tests. The
    // layout is a single field "w" with no coordinates; dt_scale is
    // 1 / max|A_ij| row sum.
    DiscreteSystem make_matrix_system(const Eigen::MatrixXd& A, const Vector& F, double omega, ForcingPhase phase = ForcingPhase::Cosine);
} // namespace wh

#endif

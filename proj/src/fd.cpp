#include "waveholtz/fd.hpp"

#include <cmath>

#include "waveholtz/errors.hpp"

namespace wh
{
    Grid Grid::uniform(int dim, int m)
    {
        if (dim != 1 && dim != 2)
            throw Error(ErrorKind::Configuration, "grid dimension must be 1 or 2");
        if (m < 2)
            throw Error(ErrorKind::Configuration, "grid needs m >= 2");
        return Grid{dim, m, 2.0 / m};
    }

    Grid fd_resolution(double omega, double constant, int dim)
    {
        require_positive_frequency(omega);
        if (!(constant > 0.0))
            throw Error(ErrorKind::Configuration, "resolution constant must be positive");

        const double h_max = std::sqrt(constant / (omega * omega * omega));
        const int m = std::max(2, int(std::ceil(2.0 / h_max)));
        return Grid::uniform(dim, m);
    }

    namespace
    {
        class FdOperator final : public SpatialOperator
        {
        public:
            FdOperator(const Grid& grid, const BoundarySpec& bc) : dim(grid.dim), n(grid.points_per_dim()), h(grid.h)
            {
                for (int s = 0; s < 4; ++s)
                    outflow[s] = (s < 2 * dim) && bc.sides[s] == BoundaryCondition::Outflow;
            }

            std::size_t size() const override
            {
                return 2 * n_points();
            }

            void apply(std::span<const double> w, std::span<double> out) const override
            {
                if (dim == 1)
                    apply_1d(w.data(), out.data());
                else
                    apply_2d(w.data(), out.data());
            }

            SparseMatrix assemble() const override;

        private:
            int dim;
            int n;
            double h;
            bool outflow[4];

            std::size_t n_points() const
            {
                return (dim == 1) ? std::size_t(n) : std::size_t(n) * n;
            }

            void apply_1d(const double * u, double * ut) const;
            void apply_2d(const double * u, double * ut) const;
        };

        void FdOperator::apply_1d(const double * u, double * ut) const
        {
            const double * v = u + n;
            double * vt = ut + n;

            const double one_over_h_squared = 1.0 / (h * h);
            const double two_over_h = 2.0 / h;

            #pragma omp parallel for
            for (int j = 0; j < n; ++j)
                ut[j] = v[j];

            #pragma omp parallel for
            for (int j = 1; j < n - 1; ++j)
                vt[j] = one_over_h_squared * (u[j-1] - 2.0 * u[j] + u[j+1]);

            vt[0] = 2.0 * one_over_h_squared * (u[1] - u[0]);
            if (outflow[0])
                vt[0] -= two_over_h * v[0];

            vt[n-1] = 2.0 * one_over_h_squared * (u[n-2] - u[n-1]);
            if (outflow[1])
                vt[n-1] -= two_over_h * v[n-1];
        }

        void FdOperator::apply_2d(const double * u, double * ut) const
        {
            const std::size_t np = n_points();
            const double * v = u + np;
            double * vt = ut + np;

            const double c = 1.0 / (h * h);
            const double two_over_h = 2.0 / h;

            #pragma omp parallel for
            for (std::size_t i = 0; i < np; ++i)
                ut[i] = v[i];

            #pragma omp parallel for
            for (int iy = 0; iy < n; ++iy)
            {
                const double * row = u + std::size_t(iy) * n;
                const double * below = (iy > 0) ? row - n : row + n;      // mirror at y = -1
                const double * above = (iy < n - 1) ? row + n : row - n;  // mirror at y = +1
                const double * vrow = v + std::size_t(iy) * n;
                double * out = vt + std::size_t(iy) * n;

                out[0] = c * (2.0 * row[1] - 4.0 * row[0] + below[0] + above[0]);
                for (int ix = 1; ix < n - 1; ++ix)
                    out[ix] = c * (row[ix-1] + row[ix+1] + below[ix] + above[ix] - 4.0 * row[ix]);
                out[n-1] = c * (2.0 * row[n-2] - 4.0 * row[n-1] + below[n-1] + above[n-1]);

                if (outflow[0])
                    out[0] -= two_over_h * vrow[0];
                if (outflow[1])
                    out[n-1] -= two_over_h * vrow[n-1];

                if ((iy == 0 && outflow[2]) || (iy == n - 1 && outflow[3]))
                {
                    for (int ix = 0; ix < n; ++ix)
                        out[ix] -= two_over_h * vrow[ix];
                }
            }
        }

        // Each one dimensional second difference is written with a ghost value
        // u_{-1} (or u_{m+1}) which is then expressed in interior values.
        SparseMatrix FdOperator::assemble() const
        {
            const std::size_t np = n_points();
            const double c = 1.0 / (h * h);

            std::vector<Eigen::Triplet<double>> entries;
            entries.reserve(np * 8);

            auto index = [&](int ix, int iy) -> std::size_t { return std::size_t(iy) * n + ix; };

            for (std::size_t i = 0; i < np; ++i)
                entries.emplace_back(i, np + i, 1.0);

            const int n_dirs = dim;
            for (int iy = 0; iy < (dim == 1 ? 1 : n); ++iy)
            {
                for (int ix = 0; ix < n; ++ix)
                {
                    const std::size_t row = np + index(ix, iy);

                    for (int d = 0; d < n_dirs; ++d)
                    {
                        const int j = (d == 0) ? ix : iy;
                        auto at = [&](int k) { return (d == 0) ? index(k, iy) : index(ix, k); };

                        // (u_{j-1} - 2 u_j + u_{j+1}) / h^2
                        entries.emplace_back(row, at(j), -2.0 * c);

                        for (int side = 0; side < 2; ++side)
                        {
                            const int k = (side == 0) ? j - 1 : j + 1;
                            if (k >= 0 && k < n)
                            {
                                entries.emplace_back(row, at(k), c);
                                continue;
                            }

                            // ghost: u_ghost = u_mirror (- 2 h v_j on outflow sides)
                            const int mirror = (side == 0) ? j + 1 : j - 1;
                            entries.emplace_back(row, at(mirror), c);

                            if (outflow[2 * d + side])
                                entries.emplace_back(row, np + at(j), -2.0 * h * c);
                        }
                    }
                }
            }

            SparseMatrix A(2 * np, 2 * np);
            A.setFromTriplets(entries.begin(), entries.end());
            return A;
        }

        StateLayout fd_layout(const Grid& grid)
        {
            StateLayout layout;
            layout.kind = SystemKind::FiniteDifference;
            layout.dim = grid.dim;
            layout.n_nodes = grid.n_points();
            layout.fields = {"u", "v"};

            const int n = grid.points_per_dim();
            layout.x.resize(layout.n_nodes);
            if (grid.dim == 2)
                layout.y.resize(layout.n_nodes);

            for (std::size_t i = 0; i < layout.n_nodes; ++i)
            {
                layout.x[i] = grid.coord(int(i % n));
                if (grid.dim == 2)
                    layout.y[i] = grid.coord(int(i / n));
            }
            return layout;
        }

        DiscreteSystem make_fd(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f)
        {
            require_positive_frequency(omega);
            if (bc.dim != grid.dim)
                throw Error(ErrorKind::Configuration, "boundary specification and grid dimension differ");
            if (grid.m < 2)
                throw Error(ErrorKind::Configuration, "grid needs m >= 2");

            DiscreteSystem system;
            system.op = std::make_shared<FdOperator>(grid, bc);
            system.omega = omega;
            system.phase = ForcingPhase::Cosine;
            system.layout = fd_layout(grid);
            system.h = grid.h;
            system.dt_scale = grid.h;

            system.forcing.assign(system.op->size(), 0.0);
            if (f)
            {
                const Vector fh = sample(system.layout, f);
                std::copy(fh.begin(), fh.end(), system.forcing.begin() + system.layout.n_nodes);
            }
            return system;
        }
    } // namespace

    DiscreteSystem build_fd_1d(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f)
    {
        if (grid.dim != 1)
            throw Error(ErrorKind::Configuration, "build_fd_1d needs a one dimensional grid");
        return make_fd(omega, grid, bc, f);
    }

    DiscreteSystem build_fd_2d(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f)
    {
        if (grid.dim != 2)
            throw Error(ErrorKind::Configuration, "build_fd_2d needs a two dimensional grid");
        return make_fd(omega, grid, bc, f);
    }

    DiscreteSystem build_fd(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f)
    {
        return (grid.dim == 1) ? build_fd_1d(omega, grid, bc, f) : build_fd_2d(omega, grid, bc, f);
    }
} // namespace wh

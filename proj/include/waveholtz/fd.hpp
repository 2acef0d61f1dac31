#ifndef WAVEHOLTZ_FD_HPP
#define WAVEHOLTZ_FD_HPP

#include "waveholtz/discrete_system.hpp"

namespace wh
{
    /// Uniform grid x_j = -1 + j h, j = 0..m, in each dimension of [-1, 1]^dim.
    struct Grid
    {
        int dim = 1;
        int m = 2;
        double h = 1.0;

        int points_per_dim() const
        {
            return m + 1;
        }

        std::size_t n_points() const
        {
            const std::size_t n = m + 1;
            return (dim == 1) ? n : n * n;
        }

        double coord(int j) const
        {
            return -1.0 + j * h;
        }

        static Grid uniform(int dim, int m);
    };

    /// Largest h = 2/m with h^2 omega^3 <= constant.
    Grid fd_resolution(double omega, double constant, int dim = 1);

    // Second order central differences for
    //      u_t = v,  v_t = Laplacian(u) - f cos(omega t)
    // with ghost points eliminated by the boundary conditions:
    //      Neumann:  (u_{m+1} - u_{m-1}) / 2h = 0
    //      Outflow:  v_m + (u_{m+1} - u_{m-1}) / 2h = 0
    // State layout (u_0..u_N, v_0..v_N), row-major over (y, x) in 2D.
    DiscreteSystem build_fd_1d(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f);
    DiscreteSystem build_fd_2d(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f);

    DiscreteSystem build_fd(double omega, const Grid& grid, const BoundarySpec& bc, const SourceFunction& f);
} // namespace wh

#endif

#ifndef WAVEHOLTZ_DG_HPP
#define WAVEHOLTZ_DG_HPP

#include "waveholtz/discrete_system.hpp"
#include "waveholtz/lgl.hpp"

namespace wh
{
    /// Uniform mesh of [-1, 1]^dim with elements_per_dim^dim elements.
    struct DGMesh
    {
        int dim = 1;
        int elements_per_dim = 1;
        double h = 2.0;
        int P = 1;

        int nodes_per_element() const
        {
            return (dim == 1) ? P + 1 : (P + 1) * (P + 1);
        }

        std::size_t n_elements() const
        {
            const std::size_t ne = elements_per_dim;
            return (dim == 1) ? ne : ne * ne;
        }

        std::size_t n_nodes() const
        {
            return n_elements() * nodes_per_element();
        }

        static DGMesh uniform(int dim, int elements_per_dim, int P);
    };

    /// Largest h = 2/n with h^{P+1/2} omega^{P+3/2} <= constant.
    DGMesh dg_resolution(double omega, int P, double constant, int dim = 1);

    enum class FluxKind
    {
        Central,
        Upwind
    };

    // Nodal DG (strong form, LGL collocation) for the conservative system
    //      p_t + div u = -(1/omega) f sin(omega t),   u_t + grad p = 0.
    // Numerical fluxes with outward normal n:
    //      (u.n)# = avg(u.n) + s/2 (p- - p+),   p# = avg(p) + s/2 (u-.n - u+.n)
    // with s = 0 (central) or s = 1 (upwind). Boundary faces use exterior states:
    // wall p+ = p-, u+.n = -u-.n with the interior flux; outflow p+ = 0, u+ = 0
    // with s = 1.
    // State layout: fields (p, u) in 1D, (p, u1, u2) in 2D; each field is
    // element-major, node-minor, with nodes x-fastest inside an element.
    DiscreteSystem build_dg(double omega, const DGMesh& mesh, FluxKind flux, const BoundarySpec& bc, const SourceFunction& f);
} // namespace wh

#endif

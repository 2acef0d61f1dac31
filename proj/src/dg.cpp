#include "waveholtz/dg.hpp"

#include <cmath>

#include "waveholtz/errors.hpp"

namespace wh
{
    DGMesh DGMesh::uniform(int dim, int elements_per_dim, int P)
    {
        if (dim != 1 && dim != 2)
            throw Error(ErrorKind::Configuration, "mesh dimension must be 1 or 2");
        if (elements_per_dim < 1)
            throw Error(ErrorKind::Configuration, "mesh needs at least one element per dimension");
        if (P < 1)
            throw Error(ErrorKind::Configuration, "polynomial degree must be at least 1");
        return DGMesh{dim, elements_per_dim, 2.0 / elements_per_dim, P};
    }

    DGMesh dg_resolution(double omega, int P, double constant, int dim)
    {
        require_positive_frequency(omega);
        if (P < 1)
            throw Error(ErrorKind::Configuration, "polynomial degree must be at least 1");
        if (!(constant > 0.0))
            throw Error(ErrorKind::Configuration, "resolution constant must be positive");

        const double h_max = std::pow(constant / std::pow(omega, P + 1.5), 1.0 / (P + 0.5));
        const int ne = std::max(1, int(std::ceil(2.0 / h_max)));
        return DGMesh::uniform(dim, ne, P);
    }

    namespace
    {
        // differences (u-.n - (u.n)#, p- - p#) of one face node.
        struct FaceJump
        {
            double dun;
            double dp;
        };

        inline FaceJump face_jump(double pm, double unm, double pp, double unp, double s)
        {
            const double un_flux = 0.5 * (unm + unp) + 0.5 * s * (pm - pp);
            const double p_flux = 0.5 * (pm + pp) + 0.5 * s * (unm - unp);
            return {unm - un_flux, pm - p_flux};
        }

        inline FaceJump boundary_jump(double pm, double unm, BoundaryCondition bc, double s)
        {
            if (bc == BoundaryCondition::Neumann)
                return face_jump(pm, unm, pm, -unm, s);
            return face_jump(pm, unm, 0.0, 0.0, 1.0);
        }

        class DgOperator final : public SpatialOperator
        {
        public:
            DgOperator(const DGMesh& mesh, FluxKind flux, const BoundarySpec& bc)
                : mesh(mesh), ref(lgl_reference(mesh.P)), bc(bc), s(flux == FluxKind::Upwind ? 1.0 : 0.0)
            {
                D.resize((mesh.P + 1) * (mesh.P + 1));
                for (int i = 0; i <= mesh.P; ++i)
                    for (int j = 0; j <= mesh.P; ++j)
                        D[i * (mesh.P + 1) + j] = ref.diff(i, j);
            }

            std::size_t size() const override
            {
                return (mesh.dim + 1) * mesh.n_nodes();
            }

            void apply(std::span<const double> w, std::span<double> out) const override
            {
                if (mesh.dim == 1)
                    apply_1d(w.data(), out.data());
                else
                    apply_2d(w.data(), out.data());
            }

            SparseMatrix assemble() const override;

        private:
            DGMesh mesh;
            LocalOperators ref;
            BoundarySpec bc;
            double s;
            std::vector<double> D; // row-major copy of ref.diff

            void apply_1d(const double * w, double * out) const;
            void apply_2d(const double * w, double * out) const;
        };

        void DgOperator::apply_1d(const double * w, double * out) const
        {
            const int n = mesh.P + 1;
            const int P = mesh.P;
            const int ne = mesh.elements_per_dim;
            const std::size_t N = mesh.n_nodes();

            const double * p = w;
            const double * u = w + N;
            double * pt = out;
            double * ut = out + N;

            const double dx = 2.0 / mesh.h;
            const double L = dx * ref.lift_right; // lift_left == lift_right

            #pragma omp parallel for
            for (int e = 0; e < ne; ++e)
            {
                const int base = e * n;
                for (int i = 0; i < n; ++i)
                {
                    double du = 0.0, dp = 0.0;
                    for (int j = 0; j < n; ++j)
                    {
                        du += D[i * n + j] * u[base + j];
                        dp += D[i * n + j] * p[base + j];
                    }
                    pt[base + i] = -dx * du;
                    ut[base + i] = -dx * dp;
                }

                // left face, n = -1
                {
                    const int k = base;
                    const double pm = p[k], unm = -u[k];
                    const FaceJump J = (e > 0) ? face_jump(pm, unm, p[k - 1], -u[k - 1], s)
                                               : boundary_jump(pm, unm, bc.sides[0], s);
                    pt[k] += L * J.dun;
                    ut[k] -= L * J.dp;
                }

                // right face, n = +1
                {
                    const int k = base + P;
                    const double pm = p[k], unm = u[k];
                    const FaceJump J = (e < ne - 1) ? face_jump(pm, unm, p[k + 1], u[k + 1], s)
                                                    : boundary_jump(pm, unm, bc.sides[1], s);
                    pt[k] += L * J.dun;
                    ut[k] += L * J.dp;
                }
            }
        }

        void DgOperator::apply_2d(const double * w, double * out) const
        {
            const int n = mesh.P + 1;
            const int P = mesh.P;
            const int ne = mesh.elements_per_dim;
            const int npe = n * n;
            const std::size_t N = mesh.n_nodes();

            const double * p = w;
            const double * u1 = w + N;
            const double * u2 = w + 2 * N;
            double * pt = out;
            double * u1t = out + N;
            double * u2t = out + 2 * N;

            const double dx = 2.0 / mesh.h;
            const double L = dx * ref.lift_right;

            #pragma omp parallel for
            for (int e = 0; e < ne * ne; ++e)
            {
                const int ex = e % ne;
                const int ey = e / ne;
                const std::size_t base = std::size_t(e) * npe;

                for (int b = 0; b < n; ++b)
                {
                    for (int a = 0; a < n; ++a)
                    {
                        double div = 0.0, px = 0.0, py = 0.0;
                        for (int j = 0; j < n; ++j)
                        {
                            const double dxa = D[a * n + j];
                            const double dyb = D[b * n + j];
                            div += dxa * u1[base + b * n + j] + dyb * u2[base + j * n + a];
                            px += dxa * p[base + b * n + j];
                            py += dyb * p[base + j * n + a];
                        }
                        const std::size_t k = base + b * n + a;
                        pt[k] = -dx * div;
                        u1t[k] = -dx * px;
                        u2t[k] = -dx * py;
                    }
                }

                // faces: left/right (normal +/- x), bottom/top (normal +/- y)
                for (int side = 0; side < 4; ++side)
                {
                    const int axis = side / 2;
                    const double nrm = (side % 2 == 0) ? -1.0 : 1.0;
                    const int edge = (side % 2 == 0) ? 0 : P;

                    int neighbor = -1;
                    if (side == 0 && ex > 0) neighbor = e - 1;
                    if (side == 1 && ex < ne - 1) neighbor = e + 1;
                    if (side == 2 && ey > 0) neighbor = e - ne;
                    if (side == 3 && ey < ne - 1) neighbor = e + ne;

                    const double * un = (axis == 0) ? u1 : u2;
                    double * unt = (axis == 0) ? u1t : u2t;

                    for (int t = 0; t < n; ++t)
                    {
                        const int local = (axis == 0) ? t * n + edge : edge * n + t;
                        const std::size_t k = base + local;
                        const double pm = p[k], unm = nrm * un[k];

                        FaceJump J;
                        if (neighbor >= 0)
                        {
                            const int other = (axis == 0) ? t * n + (P - edge) : (P - edge) * n + t;
                            const std::size_t k2 = std::size_t(neighbor) * npe + other;
                            J = face_jump(pm, unm, p[k2], nrm * un[k2], s);
                        }
                        else
                        {
                            J = boundary_jump(pm, unm, bc.sides[side], s);
                        }

                        pt[k] += L * J.dun;
                        unt[k] += L * nrm * J.dp;
                    }
                }
            }
        }

        // Entry-by-entry assembly from the linearized face terms
        //      u-.n - (u.n)# = 1/2 un- - 1/2 un+ - s/2 p- + s/2 p+
        //      p- - p#       = 1/2 p-  - 1/2 p+  - s/2 un- + s/2 un+
        // with the boundary exterior states substituted in closed form.
        SparseMatrix DgOperator::assemble() const
        {
            const int P = mesh.P;
            const int n = P + 1;
            const int ne = mesh.elements_per_dim;
            const int dim = mesh.dim;
            const int npe = mesh.nodes_per_element();
            const std::size_t N = mesh.n_nodes();
            const double dx = 2.0 / mesh.h;
            const double L = dx / ref.weights[P];

            auto p_index = [&](std::size_t elem, int local) { return elem * npe + local; };
            auto u_index = [&](int axis, std::size_t elem, int local) { return (1 + axis) * N + elem * npe + local; };

            // local node (i_0, i_1) along axes -> local index
            auto local_of = [&](int i0, int i1) { return (dim == 1) ? i0 : i1 * n + i0; };

            std::vector<Eigen::Triplet<double>> T;
            T.reserve(size() * (2 * n + 4));

            const int n_elem = int(mesh.n_elements());
            for (int e = 0; e < n_elem; ++e)
            {
                const int ec[2] = {e % ne, (dim == 1) ? 0 : e / ne};

                for (int loc = 0; loc < npe; ++loc)
                {
                    const int idx[2] = {loc % n, (dim == 1) ? 0 : loc / n};

                    for (int axis = 0; axis < dim; ++axis)
                    {
                        // volume: -(2/h) D along this axis
                        for (int j = 0; j < n; ++j)
                        {
                            int jdx[2] = {idx[0], idx[1]};
                            jdx[axis] = j;
                            const int jl = local_of(jdx[0], jdx[1]);
                            const double c = -dx * ref.diff(idx[axis], j);
                            T.emplace_back(p_index(e, loc), u_index(axis, e, jl), c);
                            T.emplace_back(u_index(axis, e, loc), p_index(e, jl), c);
                        }

                        // faces of this axis through this node
                        for (int side = 0; side < 2; ++side)
                        {
                            if (idx[axis] != (side == 0 ? 0 : P))
                                continue;

                            const double nrm = (side == 0) ? -1.0 : 1.0;
                            const std::size_t rp = p_index(e, loc);
                            const std::size_t ru = u_index(axis, e, loc);

                            int nb[2] = {ec[0], ec[1]};
                            nb[axis] += (side == 0) ? -1 : 1;

                            if (nb[axis] >= 0 && nb[axis] < ne)
                            {
                                const std::size_t e2 = (dim == 1) ? nb[0] : std::size_t(nb[1]) * ne + nb[0];
                                int jdx[2] = {idx[0], idx[1]};
                                jdx[axis] = P - idx[axis];
                                const int l2 = local_of(jdx[0], jdx[1]);

                                // p row: L * (1/2 n u- - 1/2 n u+ - s/2 p- + s/2 p+)
                                T.emplace_back(rp, ru, 0.5 * L * nrm);
                                T.emplace_back(rp, u_index(axis, e2, l2), -0.5 * L * nrm);
                                T.emplace_back(rp, rp, -0.5 * s * L);
                                T.emplace_back(rp, p_index(e2, l2), 0.5 * s * L);

                                // u row: L n * (1/2 p- - 1/2 p+ - s/2 n u- + s/2 n u+)
                                T.emplace_back(ru, rp, 0.5 * L * nrm);
                                T.emplace_back(ru, p_index(e2, l2), -0.5 * L * nrm);
                                T.emplace_back(ru, ru, -0.5 * s * L);
                                T.emplace_back(ru, u_index(axis, e2, l2), 0.5 * s * L);
                                continue;
                            }

                            const BoundaryCondition c = bc.sides[2 * axis + side];
                            if (c == BoundaryCondition::Neumann)
                            {
                                // u.n - (u.n)# = un-,  p- - p# = -s un-
                                T.emplace_back(rp, ru, L * nrm);
                                T.emplace_back(ru, ru, -s * L);
                            }
                            else
                            {
                                // u.n - (u.n)# = 1/2 (un- - p-),  p- - p# = 1/2 (p- - un-)
                                T.emplace_back(rp, ru, 0.5 * L * nrm);
                                T.emplace_back(rp, rp, -0.5 * L);
                                T.emplace_back(ru, rp, 0.5 * L * nrm);
                                T.emplace_back(ru, ru, -0.5 * L);
                            }
                        }
                    }
                }
            }

            SparseMatrix A(size(), size());
            A.setFromTriplets(T.begin(), T.end());
            return A;
        }

        StateLayout dg_layout(const DGMesh& mesh, const LocalOperators& ref)
        {
            StateLayout layout;
            layout.kind = SystemKind::DiscontinuousGalerkin;
            layout.dim = mesh.dim;
            layout.n_nodes = mesh.n_nodes();
            layout.fields = (mesh.dim == 1) ? std::vector<std::string>{"p", "u"} : std::vector<std::string>{"p", "u1", "u2"};

            const int n = mesh.P + 1;
            const int ne = mesh.elements_per_dim;
            const int npe = mesh.nodes_per_element();
            layout.x.resize(layout.n_nodes);
            if (mesh.dim == 2)
                layout.y.resize(layout.n_nodes);

            for (std::size_t k = 0; k < layout.n_nodes; ++k)
            {
                const std::size_t e = k / npe;
                const int loc = int(k % npe);
                const int ex = int(e % ne);
                layout.x[k] = -1.0 + mesh.h * (ex + 0.5 * (1.0 + ref.nodes[loc % n]));
                if (mesh.dim == 2)
                {
                    const int ey = int(e / ne);
                    layout.y[k] = -1.0 + mesh.h * (ey + 0.5 * (1.0 + ref.nodes[loc / n]));
                }
            }
            return layout;
        }
    } // namespace

    DiscreteSystem build_dg(double omega, const DGMesh& mesh, FluxKind flux, const BoundarySpec& bc, const SourceFunction& f)
    {
        require_positive_frequency(omega);
        if (bc.dim != mesh.dim)
            throw Error(ErrorKind::Configuration, "boundary specification and mesh dimension differ");
        if (mesh.dim != 1 && mesh.dim != 2)
            throw Error(ErrorKind::Configuration, "mesh dimension must be 1 or 2");
        if (flux != FluxKind::Central && flux != FluxKind::Upwind)
            throw Error(ErrorKind::Configuration, "unsupported numerical flux");

        auto op = std::make_shared<DgOperator>(mesh, flux, bc);

        DiscreteSystem system;
        system.op = op;
        system.omega = omega;
        system.phase = ForcingPhase::Sine;
        system.layout = dg_layout(mesh, lgl_reference(mesh.P));
        system.h = mesh.h;
        system.dt_scale = mesh.h / (2 * mesh.P + 1);

        // p_t = -div u - (1/omega) f sin(omega t) = [A w]_p - F_p sin(omega t)
        system.forcing.assign(op->size(), 0.0);
        if (f)
        {
            const Vector fh = sample(system.layout, f);
            for (std::size_t k = 0; k < fh.size(); ++k)
                system.forcing[k] = fh[k] / omega;
        }
        return system;
    }
} // namespace wh

#include "lsm/lattice.hpp"

#include <cmath>
#include <string>

#include "lsm/errors.hpp"

namespace lsm {

int LatticeDefinition::origin(Index spring) const
{
    for (Index j = 0; j < incidence.rows(); ++j)
        if (incidence(j, spring) == 1.0)
            return static_cast<int>(j);
    return -1;
}

int LatticeDefinition::terminus(Index spring) const
{
    for (Index j = 0; j < incidence.rows(); ++j)
        if (incidence(j, spring) == -1.0)
            return static_cast<int>(j);
    return -1;
}

void LatticeDefinition::validate() const
{
    if (d < 1 || d > 3)
        throw InvalidInput("lattice: dimension must be 1, 2 or 3");
    const Index n = nodes(), m = springs();
    if (n == 0 || m == 0)
        throw InvalidInput("lattice: needs at least one node and one spring");
    if (reference_coords.size() != n * d)
        throw DimensionMismatch("lattice: reference coordinates must have n*d entries");
    if (stiffness.size() != m || lower_limits.size() != m || upper_limits.size() != m)
        throw DimensionMismatch("lattice: stiffness and limits must have one entry per spring");
    if (constraint_matrix.rows() > 0 && constraint_matrix.cols() != n * d)
        throw DimensionMismatch("lattice: constraint matrix must have n*d columns");
    if (!incidence.allFinite() || !reference_coords.allFinite() || !stiffness.allFinite() ||
        !lower_limits.allFinite() || !upper_limits.allFinite() || !constraint_matrix.allFinite())
        throw InvalidInput("lattice: non-finite data");
    for (Index i = 0; i < m; ++i) {
        int plus = 0, minus = 0, other = 0;
        for (Index j = 0; j < n; ++j) {
            const double v = incidence(j, i);
            if (v == 1.0)
                ++plus;
            else if (v == -1.0)
                ++minus;
            else if (v != 0.0)
                ++other;
        }
        if (plus != 1 || minus != 1 || other != 0)
            throw InvalidInput("lattice: incidence column of spring " + std::to_string(i) +
                               " must hold exactly one +1 and one -1");
        if (!(stiffness(i) > 0))
            throw InvalidInput("lattice: stiffness of spring " + std::to_string(i) + " must be positive");
        if (!(lower_limits(i) < upper_limits(i)))
            throw InvalidInput("lattice: limits of spring " + std::to_string(i) + " are not ordered");
    }
    if (periodic()) {
        if (box.size() != d || (box.array() <= 0).any())
            throw InvalidInput("lattice: periodic box needs d positive lengths");
        if (edge_shift.rows() != m || edge_shift.cols() != d)
            throw DimensionMismatch("lattice: periodic lattices need an m x d shift table");
    } else if (edge_shift.size() > 0 && edge_shift.cwiseAbs().maxCoeff() != 0) {
        throw InvalidInput("lattice: image shifts given without a periodic box");
    }
}

namespace {

Vector chord(const LatticeDefinition& def, Index i, int o, int t)
{
    const int d = def.d;
    Vector c = def.reference_coords.segment(d * t, d) - def.reference_coords.segment(d * o, d);
    if (def.periodic())
        for (int k = 0; k < d; ++k)
            c(k) += def.box(k) * def.edge_shift(i, k);
    return c;
}

} // namespace

SpringGeometry compatibility_matrix(const LatticeDefinition& def)
{
    def.validate();
    const Index n = def.nodes(), m = def.springs();
    const int d = def.d;
    SpringGeometry g;
    g.compatibility = Matrix::Zero(m, n * d);
    g.directions.resize(m, d);
    g.lengths.resize(m);
    for (Index i = 0; i < m; ++i) {
        const int o = def.origin(i), t = def.terminus(i);
        const Vector c = chord(def, i, o, t);
        const double len = c.norm();
        if (!(len > 0))
            throw DegenerateSpring(static_cast<int>(i),
                                   "lattice: spring " + std::to_string(i) + " has zero reference length");
        g.lengths(i) = len;
        g.directions.row(i) = -c.transpose() / len;
        for (int k = 0; k < d; ++k) {
            g.compatibility(i, d * o + k) = g.directions(i, k);
            g.compatibility(i, d * t + k) = -g.directions(i, k);
        }
    }
    return g;
}

RigidityReport validate_assumptions(const LatticeDefinition& def, double rank_tol)
{
    const SpringGeometry g = compatibility_matrix(def);
    const Index n = def.nodes(), m = def.springs(), q = def.constraints(), nd = n * def.d;
    RigidityReport r;
    const Index rank_d = numerical_rank(g.compatibility, rank_tol);
    const Index rank_dt = numerical_rank(Matrix(g.compatibility.transpose()), rank_tol);
    r.zero_modes = nd - rank_d;
    r.self_stress_states = m - rank_dt;
    r.rigid_motion_dim = def.d * (def.d + 1) / 2;
    r.index_residual = r.zero_modes - r.self_stress_states - (nd - m);

    r.constraints = q;
    r.constraint_rank = q > 0 ? numerical_rank(def.constraint_matrix, rank_tol) : 0;
    r.constraints_independent = r.constraint_rank == q;
    Matrix enhanced(m + q, nd);
    enhanced.topRows(m) = g.compatibility;
    if (q > 0)
        enhanced.bottomRows(q) = def.constraint_matrix;
    r.kinematically_determinate = numerical_rank(enhanced, rank_tol) == nd;
    r.dim_U = nd - q;
    r.dim_V = m - nd + q;
    r.has_self_stress = r.dim_V > 0;
    r.statically_determinate = r.dim_V == 0;
    return r;
}

AssembledSystem assemble(const LatticeDefinition& def, double rank_tol)
{
    const RigidityReport rep = validate_assumptions(def, rank_tol);
    if (!rep.constraints_independent)
        throw AssumptionViolation(1, "assemble: constraint rows are linearly dependent (rank R < q)");
    if (!rep.kinematically_determinate)
        throw AssumptionViolation(2, "assemble: lattice is not kinematically determinate");
    if (!rep.has_self_stress)
        throw AssumptionViolation(3, "assemble: no states of self-stress (m - nd + q <= 0)");

    const SpringGeometry g = compatibility_matrix(def);
    AssembledSystem s;
    const Index n = def.nodes(), m = def.springs(), q = def.constraints(), d = def.d, nd = n * d;
    s.dims = {n, m, d, q, rep.dim_U, rep.dim_V};
    s.compatibility = g.compatibility;
    s.directions = g.directions;
    s.reference_lengths = g.lengths;
    s.stiffness = def.stiffness;
    s.lower_limits = def.lower_limits;
    s.upper_limits = def.upper_limits;
    s.reference_coords = def.reference_coords;
    s.box = def.box;
    s.R = q > 0 ? def.constraint_matrix : Matrix(0, nd);

    const Matrix K = def.stiffness.asDiagonal();
    const Vector k_inv = def.stiffness.cwiseInverse();

    s.R_pinv = q > 0 ? pseudoinverse(s.R, rank_tol) : Matrix(nd, 0);
    const Matrix R0 = nullspace_basis(s.R, rank_tol);
    s.U_basis = g.compatibility * R0;
    s.V_basis = nullspace_basis(Matrix(s.U_basis.transpose() * K), rank_tol);
    if (s.V_basis.cols() != rep.dim_V || s.U_basis.cols() != rep.dim_U)
        throw AssumptionViolation(2, "assemble: numerical dimensions of the fundamental spaces disagree");

    const Matrix UtK = s.U_basis.transpose() * K;
    const Matrix VtK = s.V_basis.transpose() * K;
    s.P_U = (UtK * s.U_basis).llt().solve(UtK);
    s.S_V = weighted_gram(s.V_basis, K);
    s.P_V = s.S_V.llt().solve(VtK);

    Matrix enhanced_t(nd, m + q);
    enhanced_t.leftCols(m) = g.compatibility.transpose();
    if (q > 0)
        enhanced_t.rightCols(q) = s.R.transpose();
    s.H = pseudoinverse(enhanced_t, rank_tol).topRows(m);

    const Matrix VPV = s.V_basis * s.P_V;
    s.G = VPV * g.compatibility * s.R_pinv;
    s.F = s.U_basis * (s.P_U * (k_inv.asDiagonal() * s.H));
    s.W = (s.P_V * k_inv.asDiagonal()).transpose() * s.S_V;
    s.G_V = s.P_V * s.G;

    s.box_elongation = Matrix::Zero(m, d);
    if (def.periodic())
        for (Index i = 0; i < m; ++i)
            for (Index a = 0; a < d; ++a)
                s.box_elongation(i, a) = -def.box(a) * def.edge_shift(i, a) * g.directions(i, a);
    s.box_translation = VPV * s.box_elongation;

    if (def.periodic()) {
        s.reference_volume = def.box.prod();
    } else {
        double vol = 1;
        for (Index a = 0; a < d; ++a) {
            double lo = def.reference_coords(a), hi = lo;
            for (Index j = 0; j < n; ++j) {
                lo = std::min(lo, def.reference_coords(d * j + a));
                hi = std::max(hi, def.reference_coords(d * j + a));
            }
            if (hi > lo)
                vol *= hi - lo;
        }
        s.reference_volume = vol;
    }
    return s;
}

Matrix basis_independent_projector(const AssembledSystem& sys)
{
    return sys.V_basis * sys.P_V;
}

} // namespace lsm

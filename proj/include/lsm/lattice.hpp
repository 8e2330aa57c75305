#pragma once

#include <Eigen/Dense>

#include "lsm/linalg.hpp"

namespace lsm {

/// Graph, geometry, material and kinematic constraints of a spring lattice.
/// Coordinates are stored node-major: entry d*j + k is coordinate k of node j.
struct LatticeDefinition {
    int d = 2;
    Matrix incidence;          ///< n x m, +1 at the origin node and -1 at the terminus
    Vector reference_coords;   ///< n*d
    Vector stiffness;          ///< m
    Vector lower_limits;       ///< m, stress limits
    Vector upper_limits;       ///< m
    Matrix constraint_matrix;  ///< q x n*d
    Eigen::MatrixXi edge_shift; ///< m x d image shifts, empty for non-periodic lattices
    Vector box;                ///< d periodic box lengths, empty for non-periodic lattices

    [[nodiscard]] Index nodes() const { return incidence.rows(); }
    [[nodiscard]] Index springs() const { return incidence.cols(); }
    [[nodiscard]] Index constraints() const { return constraint_matrix.rows(); }
    [[nodiscard]] bool periodic() const { return box.size() > 0; }
    [[nodiscard]] int origin(Index spring) const;
    [[nodiscard]] int terminus(Index spring) const;

    /// Checks shapes, incidence columns, positive stiffness and ordered limits.
    void validate() const;
};

struct SpringGeometry {
    Matrix compatibility; ///< m x n*d
    Matrix directions;    ///< m x d, unit vectors from terminus to origin
    Vector lengths;       ///< m
};

/// Linearized elongation map at the reference configuration.
[[nodiscard]] SpringGeometry compatibility_matrix(const LatticeDefinition& def);

struct RigidityReport {
    Index zero_modes = 0;
    Index self_stress_states = 0;
    Index rigid_motion_dim = 0;
    Index index_residual = 0;
    bool kinematically_determinate = false;
    bool statically_determinate = false;

    Index constraint_rank = 0;
    Index constraints = 0;
    Index dim_U = 0;
    Index dim_V = 0;
    bool constraints_independent = false; ///< rank R = q
    bool has_self_stress = false;         ///< m - nd + q > 0

    [[nodiscard]] bool assumptions_hold() const
    {
        return constraints_independent && kinematically_determinate && has_self_stress;
    }
};

[[nodiscard]] RigidityReport validate_assumptions(const LatticeDefinition& def,
                                                  double rank_tol = kDefaultRankTol);

struct Dimensions {
    Index n = 0, m = 0, d = 0, q = 0, dim_U = 0, dim_V = 0;
};

/// All time-independent matrices of the model. Immutable once built.
struct AssembledSystem {
    Dimensions dims;
    Matrix compatibility;   ///< m x nd
    Matrix directions;      ///< m x d
    Vector reference_lengths;
    Vector stiffness;       ///< diagonal of K
    Vector lower_limits, upper_limits;
    Matrix R, R_pinv;
    Matrix U_basis;         ///< m x dim U
    Matrix V_basis;         ///< m x dim V, orthonormal
    Matrix P_U, P_V;
    Matrix H;               ///< m x nd
    Matrix G;               ///< m x q
    Matrix F;               ///< m x nd
    Matrix S_V;
    Matrix W;               ///< m x dim V
    Matrix G_V;             ///< dim V x q
    Matrix box_elongation;  ///< m x d, elongation per unit box strain along each axis
    Matrix box_translation; ///< m x d, V P_V box_elongation
    Vector reference_coords;
    Vector box;
    double reference_volume = 1;

    [[nodiscard]] Matrix K() const { return stiffness.asDiagonal(); }
    [[nodiscard]] Vector K_inv(const Vector& v) const { return v.cwiseQuotient(stiffness); }
};

/// Throws AssumptionViolation naming the first failed assumption.
[[nodiscard]] AssembledSystem assemble(const LatticeDefinition& def, double rank_tol = kDefaultRankTol);

/// V P_V, independent of the chosen basis of the self-stress space.
[[nodiscard]] Matrix basis_independent_projector(const AssembledSystem& sys);

} // namespace lsm

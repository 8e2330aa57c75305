#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "lsm/errors.hpp"

namespace lsm {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;

template <typename Derived>
[[nodiscard]] bool all_finite(const Eigen::DenseBase<Derived>& a)
{
    return a.allFinite();
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* who)
{
    if (!a.allFinite())
        throw InvalidInput(std::string(who) + ": non-finite entry in input matrix");
}

template <typename Scalar>
void require_tol(Scalar tol, const char* who)
{
    if (!(tol > Scalar(0)))
        throw InvalidInput(std::string(who) + ": rank tolerance must be positive");
}

template <typename Scalar, typename SV>
Index count_above(const SV& sv, Scalar rank_tol)
{
    if (sv.size() == 0 || sv(0) <= Scalar(0))
        return 0;
    const Scalar cut = rank_tol * sv(0);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut)
        ++r;
    return r;
}

} // namespace detail

/// Flip column signs so that the largest-magnitude entry of each column is positive.
/// Near-ties (within 1e-9 relative) resolve to the lowest row index.
template <typename Scalar>
void canonicalize_signs(MatrixX<Scalar>& n)
{
    for (Index j = 0; j < n.cols(); ++j) {
        const Scalar big = n.col(j).cwiseAbs().maxCoeff();
        if (big == Scalar(0))
            continue;
        for (Index i = 0; i < n.rows(); ++i) {
            if (std::abs(n(i, j)) >= big * (Scalar(1) - Scalar(1e-9))) {
                if (n(i, j) < Scalar(0))
                    n.col(j) *= Scalar(-1);
                break;
            }
        }
    }
}

/// Count of singular values above rank_tol times the largest one.
template <typename Derived>
[[nodiscard]] Index numerical_rank(const Eigen::MatrixBase<Derived>& a,
                                   typename Derived::Scalar rank_tol = kDefaultRankTol)
{
    using Scalar = typename Derived::Scalar;
    detail::require_finite(a, "numerical_rank");
    detail::require_tol(rank_tol, "numerical_rank");
    if (a.size() == 0)
        return 0;
    Eigen::BDCSVD<MatrixX<Scalar>> svd(a.eval());
    return detail::count_above(svd.singularValues(), rank_tol);
}

/// Moore-Penrose pseudoinverse through the SVD.
template <typename Derived>
[[nodiscard]] MatrixX<typename Derived::Scalar>
pseudoinverse(const Eigen::MatrixBase<Derived>& a,
              typename Derived::Scalar rank_tol = kDefaultRankTol)
{
    using Scalar = typename Derived::Scalar;
    detail::require_finite(a, "pseudoinverse");
    detail::require_tol(rank_tol, "pseudoinverse");
    if (a.size() == 0)
        return MatrixX<Scalar>::Zero(a.cols(), a.rows());
    Eigen::BDCSVD<MatrixX<Scalar>> svd(a.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = detail::count_above(svd.singularValues(), rank_tol);
    if (r == 0)
        return MatrixX<Scalar>::Zero(a.cols(), a.rows());
    const VectorX<Scalar> inv = svd.singularValues().head(r).cwiseInverse();
    return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

/// Orthonormal basis of Ker(a), columns sign-canonicalized. Returns cols(a) x 0 when the
/// kernel is trivial.
template <typename Derived>
[[nodiscard]] MatrixX<typename Derived::Scalar>
nullspace_basis(const Eigen::MatrixBase<Derived>& a,
                typename Derived::Scalar rank_tol = kDefaultRankTol)
{
    using Scalar = typename Derived::Scalar;
    detail::require_finite(a, "nullspace_basis");
    detail::require_tol(rank_tol, "nullspace_basis");
    const Index n = a.cols();
    if (a.rows() == 0 || a.size() == 0)
        return MatrixX<Scalar>::Identity(n, n);
    Eigen::BDCSVD<MatrixX<Scalar>> svd(a.eval(), Eigen::ComputeFullV);
    const Index r = detail::count_above(svd.singularValues(), rank_tol);
    MatrixX<Scalar> basis = svd.matrixV().rightCols(n - r);
    canonicalize_signs(basis);
    return basis;
}

/// V^T K V.
template <typename DV, typename DK>
[[nodiscard]] MatrixX<typename DV::Scalar> weighted_gram(const Eigen::MatrixBase<DV>& v,
                                                         const Eigen::MatrixBase<DK>& k)
{
    if (k.rows() != k.cols() || k.cols() != v.rows())
        throw DimensionMismatch("weighted_gram: K must be square with size rows(V)");
    MatrixX<typename DV::Scalar> g = v.transpose() * k * v;
    return (g + g.transpose()) / typename DV::Scalar(2);
}

} // namespace lsm

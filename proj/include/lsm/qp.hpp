#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "lsm/errors.hpp"
#include "lsm/linalg.hpp"

namespace lsm {

inline constexpr double kDefaultQpTol = 1e-10;

/// {y : A y <= b, A_eq y = b_eq}
template <typename Scalar>
struct PolyhedralSetT {
    MatrixX<Scalar> A;
    VectorX<Scalar> b;
    MatrixX<Scalar> A_eq;
    VectorX<Scalar> b_eq;

    [[nodiscard]] Index dimension() const { return A.cols() > 0 ? A.cols() : A_eq.cols(); }

    void validate() const
    {
        if (A.rows() != b.size() || A_eq.rows() != b_eq.size())
            throw DimensionMismatch("PolyhedralSet: row count and right-hand side length differ");
        if (A.rows() > 0 && A_eq.rows() > 0 && A.cols() != A_eq.cols())
            throw DimensionMismatch("PolyhedralSet: A and A_eq have different column counts");
        if (!A.allFinite() || !b.allFinite() || !A_eq.allFinite() || !b_eq.allFinite())
            throw InvalidInput("PolyhedralSet: non-finite entry");
    }

    /// Largest constraint violation of y (0 when feasible).
    [[nodiscard]] Scalar violation(const VectorX<Scalar>& y) const
    {
        Scalar v(0);
        if (A.rows() > 0)
            v = std::max(v, (A * y - b).maxCoeff());
        if (A_eq.rows() > 0)
            v = std::max(v, (A_eq * y - b_eq).cwiseAbs().maxCoeff());
        return v;
    }
};

template <typename Scalar>
struct ProjectionResultT {
    VectorX<Scalar> point;
    std::vector<Index> active_inequalities; ///< ascending
    VectorX<Scalar> multipliers;            ///< one per inequality row, zero when inactive
    Scalar kkt_residual = 0;
    int iterations = 0;
    bool warm_started = false;
};

/// Previous active set, reused as a guess by the next projection.
struct WarmStart {
    std::vector<Index> active;
};

/// Elimination of the equality rows of a projection problem for a fixed weight S:
/// y = y_p + Z w, with Z an orthonormal basis of Ker A_eq.
template <typename Scalar>
class EqualityReduction {
public:
    EqualityReduction(const MatrixX<Scalar>& S, const MatrixX<Scalar>& A_eq,
                      Scalar rank_tol = Scalar(kDefaultRankTol))
        : S_(S)
    {
        if (S.rows() != S.cols())
            throw DimensionMismatch("projection: weight matrix must be square");
        if (!S.allFinite() || !A_eq.allFinite())
            throw InvalidInput("projection: non-finite weight or equality matrix");
        const Index n = S.rows();
        if (A_eq.rows() > 0 && A_eq.cols() != n)
            throw DimensionMismatch("projection: equality rows do not match the weight size");
        A_eq_ = A_eq.rows() > 0 ? A_eq : MatrixX<Scalar>(0, n);
        if (A_eq_.rows() > 0) {
            Z_ = nullspace_basis(A_eq_, rank_tol);
            A_eq_pinv_ = pseudoinverse(A_eq_, rank_tol);
        } else {
            Z_ = MatrixX<Scalar>::Identity(n, n);
            A_eq_pinv_ = MatrixX<Scalar>(n, 0);
        }
        SZ_ = S_ * Z_;
        H_ = Z_.transpose() * SZ_;
        H_ = (H_ + H_.transpose()) / Scalar(2);
        if (H_.rows() > 0) {
            llt_.compute(H_);
            if (llt_.info() != Eigen::Success)
                throw InvalidInput("projection: weight matrix is not positive definite");
            Jinit_ = llt_.matrixU().solve(MatrixX<Scalar>::Identity(H_.rows(), H_.rows()));
        }
    }

    [[nodiscard]] Index dimension() const { return S_.rows(); }
    [[nodiscard]] Index free_dimension() const { return Z_.cols(); }
    [[nodiscard]] const MatrixX<Scalar>& S() const { return S_; }
    [[nodiscard]] const MatrixX<Scalar>& A_eq() const { return A_eq_; }
    [[nodiscard]] const MatrixX<Scalar>& Z() const { return Z_; }
    [[nodiscard]] const MatrixX<Scalar>& SZ() const { return SZ_; }
    [[nodiscard]] const MatrixX<Scalar>& H() const { return H_; }
    [[nodiscard]] const MatrixX<Scalar>& A_eq_pinv() const { return A_eq_pinv_; }
    [[nodiscard]] const Eigen::LLT<MatrixX<Scalar>>& llt() const { return llt_; }
    /// L^{-T} for H = L L^T, the starting basis of the dual method.
    [[nodiscard]] const MatrixX<Scalar>& initial_basis() const { return Jinit_; }

private:
    MatrixX<Scalar> S_, A_eq_, Z_, SZ_, H_, A_eq_pinv_, Jinit_;
    Eigen::LLT<MatrixX<Scalar>> llt_;
};

/// S-weighted projection onto {A y <= b, A_eq y = b_eq} for fixed S, A, A_eq and varying
/// right-hand sides. Dual active-set method on the equality-reduced problem.
template <typename Scalar>
class Projector {
public:
    Projector(std::shared_ptr<const EqualityReduction<Scalar>> reduction, const MatrixX<Scalar>& A,
              Scalar tol = Scalar(kDefaultQpTol))
        : red_(std::move(reduction)), tol_(tol)
    {
        if (!(tol > Scalar(0)))
            throw InvalidInput("projection: tolerance must be positive");
        const Index n = red_->dimension();
        if (A.rows() > 0 && A.cols() != n)
            throw DimensionMismatch("projection: inequality rows do not match the weight size");
        if (!A.allFinite())
            throw InvalidInput("projection: non-finite inequality matrix");
        A_ = A.rows() > 0 ? A : MatrixX<Scalar>(0, n);
        C_ = A_ * red_->Z();
        row_norm_ = C_.rowwise().norm();
    }

    Projector(const MatrixX<Scalar>& S, const MatrixX<Scalar>& A, const MatrixX<Scalar>& A_eq,
              Scalar tol = Scalar(kDefaultQpTol))
        : Projector(std::make_shared<const EqualityReduction<Scalar>>(S, A_eq), A, tol)
    {}

    [[nodiscard]] const EqualityReduction<Scalar>& reduction() const { return *red_; }
    [[nodiscard]] const MatrixX<Scalar>& A() const { return A_; }

    /// Throws InfeasibleProjection when the set is empty.
    ProjectionResultT<Scalar> project(const VectorX<Scalar>& x, const VectorX<Scalar>& b,
                                      const VectorX<Scalar>& b_eq,
                                      WarmStart* warm = nullptr) const
    {
        const EqualityReduction<Scalar>& red = *red_;
        const Index n = red.dimension();
        if (x.size() != n || b.size() != A_.rows() || b_eq.size() != red.A_eq().rows())
            throw DimensionMismatch("projection: vector sizes do not match the set");
        if (!x.allFinite() || !b.allFinite() || !b_eq.allFinite())
            throw InvalidInput("projection: non-finite data");

        VectorX<Scalar> yp = VectorX<Scalar>::Zero(n);
        if (b_eq.size() > 0) {
            yp = red.A_eq_pinv() * b_eq;
            const Scalar res = (red.A_eq() * yp - b_eq).cwiseAbs().maxCoeff();
            if (res > tol_ * (Scalar(1) + b_eq.cwiseAbs().maxCoeff()))
                throw InfeasibleProjection("projection: inconsistent equality constraints");
        }
        const VectorX<Scalar> g = red.SZ().transpose() * (yp - x);
        const VectorX<Scalar> d = b - A_ * yp;

        ProjectionResultT<Scalar> out;
        VectorX<Scalar> w, lambda = VectorX<Scalar>::Zero(A_.rows());
        std::vector<Index> active;
        bool done = false;
        if (warm && !warm->active.empty() && red.free_dimension() > 0)
            done = try_guess(g, d, warm->active, w, lambda, active);
        if (done) {
            out.warm_started = true;
        } else {
            out.iterations = dual_active_set(g, d, w, lambda, active);
        }

        out.point = yp + red.Z() * w;
        std::sort(active.begin(), active.end());
        out.active_inequalities = active;
        out.multipliers = lambda;
        out.kkt_residual = kkt_residual(g, d, w, lambda);
        if (warm)
            warm->active = active;
        return out;
    }

    [[nodiscard]] Scalar tolerance() const { return tol_; }

private:
    [[nodiscard]] Scalar row_tol(const VectorX<Scalar>& d, Index j) const
    {
        return tol_ * std::max(Scalar(1), std::abs(d(j)));
    }

    Scalar kkt_residual(const VectorX<Scalar>& g, const VectorX<Scalar>& d, const VectorX<Scalar>& w,
                        const VectorX<Scalar>& lambda) const
    {
        Scalar r(0);
        if (w.size() > 0) {
            VectorX<Scalar> stat = red_->H() * w + g;
            if (C_.rows() > 0)
                stat += C_.transpose() * lambda;
            r = stat.cwiseAbs().maxCoeff();
        }
        if (C_.rows() > 0) {
            const VectorX<Scalar> s = d - C_ * w;
            for (Index j = 0; j < s.size(); ++j) {
                r = std::max(r, -s(j) / std::max(Scalar(1), std::abs(d(j))));
                r = std::max(r, -lambda(j));
                r = std::max(r, std::abs(lambda(j) * s(j)));
            }
        }
        return r;
    }

    /// Solve with the guessed rows held as equalities; accept if the result is a KKT point.
    bool try_guess(const VectorX<Scalar>& g, const VectorX<Scalar>& d, const std::vector<Index>& guess,
                   VectorX<Scalar>& w, VectorX<Scalar>& lambda, std::vector<Index>& active) const
    {
        const auto& llt = red_->llt();
        const Index k = static_cast<Index>(guess.size());
        if (k > red_->free_dimension())
            return false;
        MatrixX<Scalar> Cw(k, C_.cols());
        VectorX<Scalar> dw(k);
        for (Index i = 0; i < k; ++i) {
            if (guess[i] < 0 || guess[i] >= C_.rows())
                return false;
            Cw.row(i) = C_.row(guess[i]);
            dw(i) = d(guess[i]);
        }
        const VectorX<Scalar> w0 = -llt.solve(g);
        const MatrixX<Scalar> Y = llt.matrixL().solve(Cw.transpose());
        const MatrixX<Scalar> M = Y.transpose() * Y;
        Eigen::LLT<MatrixX<Scalar>> mf(M);
        if (mf.info() != Eigen::Success)
            return false;
        const Scalar diag_min = M.diagonal().minCoeff();
        if (!(mf.matrixL().toDenseMatrix().diagonal().cwiseAbs2().minCoeff() > Scalar(1e-10) * diag_min))
            return false;
        const VectorX<Scalar> lw = mf.solve(Cw * w0 - dw);
        const Scalar lscale = Scalar(1) + lw.cwiseAbs().maxCoeff();
        for (Index i = 0; i < k; ++i)
            if (lw(i) < -Scalar(1e-12) * lscale)
                return false;
        VectorX<Scalar> wc = w0 - llt.solve(Cw.transpose() * lw);
        const VectorX<Scalar> s = d - C_ * wc;
        for (Index j = 0; j < s.size(); ++j)
            if (s(j) < -row_tol(d, j))
                return false;
        w = std::move(wc);
        lambda.setZero();
        active.clear();
        for (Index i = 0; i < k; ++i) {
            lambda(guess[i]) = std::max(lw(i), Scalar(0));
            active.push_back(guess[i]);
        }
        return true;
    }

    static void givens(Scalar a, Scalar b, Scalar& c, Scalar& s)
    {
        const Scalar h = std::hypot(a, b);
        if (h == Scalar(0)) {
            c = 1;
            s = 0;
        } else {
            c = a / h;
            s = b / h;
        }
    }

    /// Goldfarb-Idnani dual method on min 1/2 w'Hw + g'w s.t. C w <= d.
    int dual_active_set(const VectorX<Scalar>& g, const VectorX<Scalar>& d, VectorX<Scalar>& w,
                        VectorX<Scalar>& lambda, std::vector<Index>& active) const
    {
        const Scalar inf = std::numeric_limits<Scalar>::infinity();
        const Index nf = red_->free_dimension();
        const Index l = C_.rows();
        active.clear();
        lambda.setZero();
        if (nf == 0) {
            w.resize(0);
            for (Index j = 0; j < l; ++j)
                if (d(j) < -row_tol(d, j))
                    throw InfeasibleProjection("projection: set is empty");
            return 0;
        }
        w = -red_->llt().solve(g);
        if (l == 0)
            return 0;

        MatrixX<Scalar> J = red_->initial_basis();
        MatrixX<Scalar> R = MatrixX<Scalar>::Zero(nf, nf);
        VectorX<Scalar> u(0), up(0);
        std::vector<char> is_active(static_cast<size_t>(l), 0);
        Index q = 0;
        const int max_iter = static_cast<int>(10 * (l + nf) + 100);
        int iter = 0;

        auto drop = [&](Index pos) {
            for (Index j = pos; j + 1 < q; ++j)
                R.col(j) = R.col(j + 1);
            R.col(q - 1).setZero();
            for (Index j = pos; j + 1 < q; ++j) {
                Scalar c, s;
                givens(R(j, j), R(j + 1, j), c, s);
                for (Index col = j; col < nf; ++col) {
                    const Scalar a = R(j, col), bb = R(j + 1, col);
                    R(j, col) = c * a + s * bb;
                    R(j + 1, col) = -s * a + c * bb;
                }
                R(j + 1, j) = 0;
                const VectorX<Scalar> x1 = J.col(j), x2 = J.col(j + 1);
                J.col(j) = c * x1 + s * x2;
                J.col(j + 1) = -s * x1 + c * x2;
            }
            is_active[static_cast<size_t>(active[static_cast<size_t>(pos)])] = 0;
            active.erase(active.begin() + pos);
            VectorX<Scalar> nu(up.size() - 1);
            for (Index j = 0, t = 0; j < up.size(); ++j)
                if (j != pos)
                    nu(t++) = up(j);
            up = nu;
            --q;
        };

        for (;;) {
            // most violated constraint, ties to the lowest index
            const VectorX<Scalar> s = d - C_ * w;
            Index p = -1;
            Scalar worst = 0;
            for (Index j = 0; j < l; ++j) {
                if (is_active[static_cast<size_t>(j)] || s(j) >= -row_tol(d, j))
                    continue;
                const Scalar v = s(j) / std::max(row_norm_(j), Scalar(1e-300));
                if (p < 0 || v < worst) {
                    worst = v;
                    p = j;
                }
            }
            if (p < 0)
                break;

            up.resize(q + 1);
            up.head(q) = u;
            up(q) = 0;
            const VectorX<Scalar> np = -C_.row(p).transpose();
            for (;;) {
                if (++iter > max_iter)
                    throw InfeasibleProjection("projection: iteration limit reached");
                const Scalar sp = d(p) - C_.row(p).dot(w);
                VectorX<Scalar> dv = J.transpose() * np;
                const VectorX<Scalar> z = J.rightCols(nf - q) * dv.tail(nf - q);
                VectorX<Scalar> r(q);
                if (q > 0)
                    r = R.topLeftCorner(q, q).template triangularView<Eigen::Upper>().solve(dv.head(q));
                Scalar t1 = inf;
                Index lpos = -1;
                for (Index j = 0; j < q; ++j) {
                    if (r(j) > Scalar(0)) {
                        const Scalar ratio = up(j) / r(j);
                        if (ratio < t1) {
                            t1 = ratio;
                            lpos = j;
                        }
                    }
                }
                Scalar t2 = inf;
                const Scalar ztn = z.dot(np);
                if (dv.tail(nf - q).norm() > Scalar(1e-12) * std::max(dv.norm(), Scalar(1e-300)) &&
                    ztn > Scalar(0))
                    t2 = -sp / ztn;
                const Scalar t = std::min(t1, t2);
                if (t == inf)
                    throw InfeasibleProjection("projection: set is empty");
                if (t2 == inf) {
                    up.head(q) -= t * r;
                    up(q) += t;
                    drop(lpos);
                    continue;
                }
                w += t * z;
                up.head(q) -= t * r;
                up(q) += t;
                if (t == t2) {
                    // add p: rotate dv so that only its first q+1 entries survive
                    for (Index j = nf - 1; j > q; --j) {
                        Scalar c, sn;
                        givens(dv(j - 1), dv(j), c, sn);
                        dv(j - 1) = c * dv(j - 1) + sn * dv(j);
                        dv(j) = 0;
                        const VectorX<Scalar> x1 = J.col(j - 1), x2 = J.col(j);
                        J.col(j - 1) = c * x1 + sn * x2;
                        J.col(j) = -sn * x1 + c * x2;
                    }
                    R.col(q).head(q + 1) = dv.head(q + 1);
                    active.push_back(p);
                    is_active[static_cast<size_t>(p)] = 1;
                    u = up;
                    ++q;
                    break;
                }
                drop(lpos);
            }
        }
        for (Index j = 0; j < q; ++j)
            lambda(active[static_cast<size_t>(j)]) = std::max(u(j), Scalar(0));
        return iter;
    }

    std::shared_ptr<const EqualityReduction<Scalar>> red_;
    MatrixX<Scalar> A_, C_;
    VectorX<Scalar> row_norm_;
    Scalar tol_;
};

/// One-shot S-weighted projection of x onto the set.
template <typename Scalar>
ProjectionResultT<Scalar> project(const MatrixX<Scalar>& S, const VectorX<Scalar>& x,
                                  const PolyhedralSetT<Scalar>& set,
                                  Scalar tol = Scalar(kDefaultQpTol))
{
    set.validate();
    const Index n = S.rows();
    MatrixX<Scalar> A = set.A.rows() > 0 ? set.A : MatrixX<Scalar>(0, n);
    MatrixX<Scalar> Aeq = set.A_eq.rows() > 0 ? set.A_eq : MatrixX<Scalar>(0, n);
    Projector<Scalar> proj(S, A, Aeq, tol);
    return proj.project(x, set.b, set.b_eq);
}

/// Projection onto a polyhedral cone (all right-hand sides zero).
template <typename Scalar>
ProjectionResultT<Scalar> project_cone(const MatrixX<Scalar>& S, const VectorX<Scalar>& x,
                                       const PolyhedralSetT<Scalar>& cone,
                                       Scalar tol = Scalar(kDefaultQpTol))
{
    cone.validate();
    if ((cone.b.size() > 0 && cone.b.cwiseAbs().maxCoeff() != Scalar(0)) ||
        (cone.b_eq.size() > 0 && cone.b_eq.cwiseAbs().maxCoeff() != Scalar(0)))
        throw InvalidInput("project_cone: cone right-hand sides must be zero");
    return project(S, x, cone, tol);
}

using PolyhedralSet = PolyhedralSetT<double>;
using ProjectionResult = ProjectionResultT<double>;

} // namespace lsm

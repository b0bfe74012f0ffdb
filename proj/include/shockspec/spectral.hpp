#pragma once

// Spectral machinery for piecewise-linear shocks: the matrix branches
// P(lambda) solving P^2 - P Q - lambda I = 0 with half-plane spectrum, the
// single-crossing determinant D(lambda) = det(P+ - S P-), the multi-region
// matching determinant det Theta, the multiplicity of the ever-present
// eigenvalue at lambda = 0, and exact root counts for the scalar quadratics.

#include <cmath>
#include <complex>
#include <vector>

#include "shockspec/errors.hpp"
#include "shockspec/jump.hpp"
#include "shockspec/linalg.hpp"
#include "shockspec/model.hpp"

namespace shockspec {

enum class BranchSide { Unstable, Stable }; // spectrum in Re > 0 resp. Re < 0

/// Rectangle-bounded right-half-plane search window {delta <= Re lambda,
/// |lambda| <= R} used by the eigenvalue localizer.
struct HalfPlaneRegion {
    double delta = 1e-4;
    double R = 100.0;
};

namespace detail {

// Principal square root of h^2 + 4 lambda; analytic while Re(h^2+4la) > 0,
// which covers the closed right half-plane for h != 0 and extends a little
// beyond it (needed when tracing eigenvalue branches across the axis).
inline cplx branch_sqrt(double h, cplx lambda) {
    const cplx w = h * h + 4.0 * lambda;
    if (w.real() <= 0.0)
        throw OutOfDomainError("spectral: lambda outside the analytic branch strip");
    return std::sqrt(w);
}

inline cplx sigma_unchecked(double h, cplx lambda, BranchSide side) {
    const cplx r = branch_sqrt(h, lambda);
    return 0.5 * (side == BranchSide::Stable ? h - r : h + r);
}

// Roots ordered by size at lambda = 0: "small" -> 0, "large" -> h.
inline cplx sigma_small(double h, cplx lambda) {
    return sigma_unchecked(h, lambda, h > 0 ? BranchSide::Stable : BranchSide::Unstable);
}
inline cplx sigma_large(double h, cplx lambda) {
    return sigma_unchecked(h, lambda, h > 0 ? BranchSide::Unstable : BranchSide::Stable);
}

inline void require_nonzero_modes(const LinearPiece& p, const char* who) {
    const double scale = std::max(1.0, frobenius_norm(p.Q));
    for (double h : p.eig.values)
        if (std::abs(h) <= 1e-12 * scale)
            throw DegenerateFieldError(std::string(who) + ": zero field eigenvalue");
}

} // namespace detail

/// Scalar branch root sigma = (h -+ sqrt(h^2 + 4 lambda)) / 2 with the
/// principal square root (Re >= 0); solves sigma^2 - h sigma - lambda = 0.
/// Stable side keeps Re sigma < 0, unstable side Re sigma > 0 (lambda != 0).
inline cplx sigma_branch(double h, cplx lambda, BranchSide side) {
    if (h == 0.0)
        throw DegenerateFieldError("sigma_branch: h must be nonzero");
    if (lambda.real() < 0.0)
        throw OutOfDomainError("sigma_branch: Re lambda must be >= 0");
    return detail::sigma_unchecked(h, lambda, side);
}

/// The matrix branch P(lambda) for one side of the shock.
struct SpectralBranch {
    CMat P;
    BranchSide side;
    cplx lambda;
};

namespace detail {

inline CMat branch_matrix_unchecked(const LinearPiece& piece, cplx lambda, BranchSide side) {
    const int n = piece.Q.rows();
    CMat p(n, n);
    std::vector<cplx> sig(n);
    for (int k = 0; k < n; ++k) sig[k] = sigma_unchecked(piece.eig.values[k], lambda, side);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0;
            for (int k = 0; k < n; ++k)
                s += piece.eig.vectors(i, k) * sig[k] * piece.eig.vectors(j, k);
            p(i, j) = s;
        }
    return p;
}

} // namespace detail

/// Unique matrix P with P^2 - P Q - lambda I = 0 and spectrum in the open
/// half-plane selected by `side`, built mode-by-mode from the
/// eigendecomposition of the symmetric Q.
inline SpectralBranch stable_branch_matrix(const Mat& q, cplx lambda, BranchSide side) {
    LinearPiece piece(q, Vec(q.rows(), 0.0));
    detail::require_nonzero_modes(piece, "stable_branch_matrix");
    if (lambda.real() < 0.0)
        throw OutOfDomainError("stable_branch_matrix: Re lambda must be >= 0");
    return SpectralBranch{detail::branch_matrix_unchecked(piece, lambda, side), side, lambda};
}

namespace detail {

inline void require_branch_strip(const PLModel& model, cplx lambda, const char* who) {
    for (const auto& piece : model.pieces) {
        require_nonzero_modes(piece, who);
        for (double h : piece.eig.values)
            if (h * h + 4.0 * lambda.real() <= 0.0)
                throw OutOfDomainError(std::string(who) + ": lambda outside the branch strip");
    }
}

// 2n x n block [I; P - Q] whose columns parametrize the decaying solutions
// (v, z) = (a, (P - Q) a) of one constant-coefficient end region.
inline CMat end_basis(const LinearPiece& piece, const CMat& p) {
    const int n = piece.Q.rows();
    CMat b(2 * n, n);
    for (int j = 0; j < n; ++j) {
        b(j, j) = 1.0;
        for (int i = 0; i < n; ++i) b(n + i, j) = p(i, j) - piece.Q(i, j);
    }
    return b;
}

inline CMat apply_block_jump(const JumpMatrix& j, const CMat& cols) {
    const int n = j.S.rows();
    CMat out(2 * n, cols.cols());
    for (int c = 0; c < cols.cols(); ++c) {
        for (int i = 0; i < n; ++i) {
            cplx s = 0;
            for (int k = 0; k < n; ++k) s += j.S(i, k) * cols(k, c);
            out(i, c) = s;
            out(n + i, c) = cols(n + i, c);
        }
    }
    return out;
}

// Mode matrix of one middle region: row r of T turns a stacked (v, z) into
// the coefficient of the r-th exponential mode, so T Q_lambda T^{-1} is
// diagonal. Rows 0..n-1 hold the small roots, rows n..2n-1 the large ones.
inline CMat mode_matrix(const LinearPiece& piece, cplx lambda) {
    const int n = piece.Q.rows();
    CMat t(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        const cplx s_small = sigma_small(piece.eig.values[j], lambda);
        const cplx s_large = sigma_large(piece.eig.values[j], lambda);
        for (int i = 0; i < n; ++i) {
            const double vij = piece.eig.vectors(i, j);
            t(j, i) = s_small * vij;
            t(j, n + i) = vij;
            t(n + j, i) = s_large * vij;
            t(n + j, n + i) = vij;
        }
    }
    return t;
}

inline std::vector<cplx> mode_rates(const LinearPiece& piece, cplx lambda) {
    const int n = piece.Q.rows();
    std::vector<cplx> d(2 * n);
    for (int j = 0; j < n; ++j) {
        d[j] = sigma_small(piece.eig.values[j], lambda);
        d[n + j] = sigma_large(piece.eig.values[j], lambda);
    }
    return d;
}

// exp(dxi * Q_lambda) applied to stacked columns, evaluated exactly through
// the per-mode 2x2 exponentials in the eigenbasis of the piece.
inline CMat propagate_block(const LinearPiece& piece, cplx lambda, double dxi, const CMat& cols) {
    const int n = piece.Q.rows();
    CMat out(2 * n, cols.cols());
    for (int c = 0; c < cols.cols(); ++c) {
        for (int j = 0; j < n; ++j) {
            // rotate into the eigenbasis
            cplx vj = 0, zj = 0;
            for (int i = 0; i < n; ++i) {
                vj += piece.eig.vectors(i, j) * cols(i, c);
                zj += piece.eig.vectors(i, j) * cols(n + i, c);
            }
            const double h = piece.eig.values[j];
            const cplx sa = sigma_small(h, lambda), sb = sigma_large(h, lambda);
            const cplx ya = sa * vj + zj; // mode coefficients, rates sa and sb
            const cplx yb = sb * vj + zj;
            const cplx ea = std::exp(dxi * sa) * ya;
            const cplx eb = std::exp(dxi * sb) * yb;
            const cplx vj2 = (eb - ea) / (sb - sa);
            const cplx zj2 = (sb * ea - sa * eb) / (sb - sa);
            for (int i = 0; i < n; ++i) {
                out(i, c) += piece.eig.vectors(i, j) * vj2;
                out(n + i, c) += piece.eig.vectors(i, j) * zj2;
            }
        }
    }
    return out;
}

} // namespace detail

/// Single-crossing determinant D(lambda) = det(P+(lambda) - S P-(lambda)).
/// Analytic in lambda on the closed right half-plane; its zeros there
/// (lambda != 0) are exactly the unstable eigenvalues.
inline cplx evans_det(const PLModel& model, const Heteroclinic& het, cplx lambda) {
    if (model.num_regions() != 2)
        throw WrongTopologyError("evans_det: needs a two-region model (use theta_det)");
    detail::require_branch_strip(model, lambda, "evans_det");

    const CMat pm = detail::branch_matrix_unchecked(model.pieces.front(), lambda, BranchSide::Unstable);
    const CMat pp = detail::branch_matrix_unchecked(model.pieces.back(), lambda, BranchSide::Stable);
    const JumpMatrix j = jump_at(model, het, 0, JumpDirection::Forward);

    const int n = model.dim();
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
            cplx s = pp(i, jj);
            for (int k = 0; k < n; ++k) s -= j.S(i, k) * pm(k, jj);
            m(i, jj) = s;
        }
    return det(m);
}

/// det(I + S) at the single crossing: the constant c with
/// D(lambda) = (-sqrt(lambda))^n (c + O(|lambda|^{-1/2})) as |lambda| -> inf.
inline double evans_asymptotic_constant(const PLModel& model, const Heteroclinic& het) {
    if (model.num_regions() != 2)
        throw WrongTopologyError("evans_asymptotic_constant: needs a two-region model");
    const JumpMatrix j = jump_at(model, het, 0, JumpDirection::Forward);
    return det(Mat::identity(model.dim()) + j.S);
}

/// Matching matrix for a chain with any number of regions.
///
/// Columns 1..n: the unstable end basis [I; P- - Q-] pushed through the jump
/// at the first crossing and propagated across the middle regions; columns
/// n+1..2n: minus the stable end basis pulled back through the final crossing.
/// The whole system is premultiplied by the mode matrix T of the last middle
/// region, so the growing middle mode appears as a bare exponential factor
/// and the matrix stays well scaled for thin middle regions.
inline CMat theta_matrix(const PLModel& model, const Heteroclinic& het, cplx lambda) {
    const int nreg = model.num_regions();
    if (nreg < 2)
        throw WrongTopologyError("theta_matrix: needs at least two regions");
    if (het.num_crossings() != model.num_crossings())
        throw WrongTopologyError("theta_matrix: heteroclinic does not match the model");
    detail::require_branch_strip(model, lambda, "theta_matrix");

    const int n = model.dim();
    const CMat pm = detail::branch_matrix_unchecked(model.pieces.front(), lambda, BranchSide::Unstable);
    const CMat pp = detail::branch_matrix_unchecked(model.pieces.back(), lambda, BranchSide::Stable);

    CMat left = detail::end_basis(model.pieces.front(), pm);
    CMat theta(2 * n, 2 * n);

    if (nreg == 2) {
        left = detail::apply_block_jump(jump_at(model, het, 0, JumpDirection::Forward), left);
        const CMat right = detail::end_basis(model.pieces.back(), pp);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < n; ++j) {
                theta(i, j) = left(i, j);
                theta(i, n + j) = -right(i, j);
            }
    } else {
        left = detail::apply_block_jump(jump_at(model, het, 0, JumpDirection::Forward), left);
        for (int k = 1; k + 2 < nreg; ++k) {
            left = detail::propagate_block(model.pieces[k], lambda, het.times[k] - het.times[k - 1], left);
            left = detail::apply_block_jump(jump_at(model, het, k, JumpDirection::Forward), left);
        }
        const int mid = nreg - 2; // last middle region, handled in mode coordinates
        const double dxi = het.times[mid] - het.times[mid - 1];
        const CMat t = detail::mode_matrix(model.pieces[mid], lambda);
        const auto rates = detail::mode_rates(model.pieces[mid], lambda);

        CMat lt = t * left;
        for (int i = 0; i < 2 * n; ++i) {
            const cplx e = std::exp(dxi * rates[i]);
            for (int j = 0; j < n; ++j) lt(i, j) *= e;
        }

        const JumpMatrix s_back = jump_at(model, het, mid, JumpDirection::Backward);
        CMat right(2 * n, n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                right(i, j) = s_back.S(i, j);
                right(n + i, j) = pp(i, j) - model.pieces.back().Q(i, j);
            }
        }
        right = t * right;

        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < n; ++j) {
                theta(i, j) = lt(i, j);
                theta(i, n + j) = -right(i, j);
            }
    }
    return theta;
}

/// det of the matching matrix. normalized=true (lambda != 0) rescales so
/// scan values stay O(1) for thin middle regions and the structural zero at
/// lambda = 0 is divided out; for three regions the scale factor is
/// kappa+ kappa- / ((1+eps) nu-mid lambda) written in model terms.
inline cplx theta_det(const PLModel& model, const Heteroclinic& het, cplx lambda,
                      bool normalized = false) {
    if (normalized && lambda == cplx(0))
        throw OutOfDomainError("theta_det: normalized form requires lambda != 0");
    cplx d = det(theta_matrix(model, het, lambda));
    if (normalized) {
        if (model.num_regions() == 3) {
            const Vec& n0 = model.interfaces.front().normal;
            const Vec& nl = model.interfaces.back().normal;
            const double kappa_minus = dot(n0, model.pieces.front().Q * n0);
            const double kappa_plus = dot(nl, model.pieces.back().Q * nl);
            const double flux0 = dot(het.field_after(0), n0);
            d *= -kappa_plus * kappa_minus / (flux0 * lambda);
        } else {
            d /= lambda;
        }
    }
    return d;
}

/// Multiplicity of the eigenvalue at lambda = 0 for a single-crossing shock:
/// dim( E^s(Q+) intersect S E^u(Q-) ), via the rank of the stacked bases.
/// At least 1 for every valid heteroclinic (eigenfunction gamma').
inline int zero_multiplicity(const PLModel& model, const Heteroclinic& het) {
    if (model.num_regions() != 2)
        throw WrongTopologyError("zero_multiplicity: needs a two-region model");
    const int n = model.dim();
    const JumpMatrix j = jump_at(model, het, 0, JumpDirection::Forward);

    std::vector<Vec> stable_cols, mapped_unstable_cols;
    const auto& el = model.pieces.front().eig;
    const auto& er = model.pieces.back().eig;
    for (int k = 0; k < n; ++k) {
        if (er.values[k] < 0) stable_cols.push_back(er.vectors.col(k));
        if (el.values[k] > 0) mapped_unstable_cols.push_back(j.S * el.vectors.col(k));
    }
    const int d1 = int(stable_cols.size());
    const int d2 = int(mapped_unstable_cols.size());
    if (d1 == 0 || d2 == 0) return 0;

    Mat stacked(n, d1 + d2);
    for (int c = 0; c < d1; ++c)
        for (int i = 0; i < n; ++i) stacked(i, c) = stable_cols[c][i];
    for (int c = 0; c < d2; ++c)
        for (int i = 0; i < n; ++i) stacked(i, d1 + c) = mapped_unstable_cols[c][i];
    return d1 + d2 - numerical_rank(stacked);
}

enum class CountHalfPlane { RePositive, ReNegative };

/// Exact number of roots of sigma^2 - h sigma - lambda = 0 in the requested
/// open half-plane, decided by which side of the parabola
/// h^2 Re(lambda) = -(Im lambda)^2 the point lambda lies on.
inline int quadratic_root_count(double h, cplx lambda, CountHalfPlane halfplane) {
    if (h == 0.0)
        throw DegenerateFieldError("quadratic_root_count: h must be nonzero");
    const double im2 = lambda.imag() * lambda.imag();
    const double p = h * h * lambda.real() + im2;
    const double scale = h * h * std::abs(lambda.real()) + im2;
    if (std::abs(p) <= 1e-12 * std::max(scale, 1e-300))
        throw BoundaryError("quadratic_root_count: lambda on the boundary parabola");
    const bool plus_region = p > 0;

    if (halfplane == CountHalfPlane::RePositive)
        return plus_region ? 1 : (h > 0 ? 2 : 0);
    return plus_region ? 1 : (h > 0 ? 0 : 2);
}

} // namespace shockspec

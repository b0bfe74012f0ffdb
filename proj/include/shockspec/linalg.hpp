#pragma once

// Small dense real/complex linear algebra sized for spectral problems on a
// handful of state variables: n x n with n <= ~8, 2n x 2n matching systems.
// Everything is value-semantic and deterministic; no external dependencies.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "shockspec/errors.hpp"

namespace shockspec {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// vector helpers

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline cplx cdot(const CVec& a, const CVec& b) {
    // bilinear (no conjugation); matches <v, n> with real n
    assert(a.size() == b.size());
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm2(const CVec& a) {
    double s = 0;
    for (const cplx& x : a) s += std::norm(x);
    return std::sqrt(s);
}

inline Vec operator+(Vec a, const Vec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double c, Vec a) {
    for (double& x : a) x *= c;
    return a;
}

inline CVec operator+(CVec a, const CVec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline CVec operator-(CVec a, const CVec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline CVec operator*(cplx c, CVec a) {
    for (cplx& x : a) x *= c;
    return a;
}

inline CVec to_complex(const Vec& a) { return CVec(a.begin(), a.end()); }

// ---------------------------------------------------------------------------
// matrices (row-major)

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), d_(std::size_t(rows) * cols, 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
        assert(int(vals.size()) == rows * cols);
        std::copy(vals.begin(), vals.end(), d_.begin());
    }

    static Mat identity(int n) {
        Mat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }

    double& operator()(int i, int j) { return d_[std::size_t(i) * c_ + j]; }
    double operator()(int i, int j) const { return d_[std::size_t(i) * c_ + j]; }

    Vec col(int j) const {
        Vec v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    const std::vector<double>& data() const { return d_; }

private:
    int r_ = 0, c_ = 0;
    std::vector<double> d_;
};

class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : r_(rows), c_(cols), d_(std::size_t(rows) * cols, cplx(0)) {}

    static CMat identity(int n) {
        CMat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    explicit CMat(const Mat& m) : CMat(m.rows(), m.cols()) {
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) (*this)(i, j) = m(i, j);
    }

    int rows() const { return r_; }
    int cols() const { return c_; }

    cplx& operator()(int i, int j) { return d_[std::size_t(i) * c_ + j]; }
    cplx operator()(int i, int j) const { return d_[std::size_t(i) * c_ + j]; }

    CVec col(int j) const {
        CVec v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(int j, const CVec& v) {
        assert(int(v.size()) == r_);
        for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<cplx> d_;
};

inline Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols() == b.rows());
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Vec operator*(const Mat& a, const Vec& x) {
    assert(a.cols() == int(x.size()));
    Vec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline Mat operator+(Mat a, const Mat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
    return a;
}

inline Mat operator-(Mat a, const Mat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
    return a;
}

inline Mat operator*(double c, Mat a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) *= c;
    return a;
}

inline Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline CMat operator*(const CMat& a, const CMat& b) {
    assert(a.cols() == b.rows());
    CMat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CVec operator*(const CMat& a, const CVec& x) {
    assert(a.cols() == int(x.size()));
    CVec y(a.rows(), cplx(0));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline CMat operator+(CMat a, const CMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
    return a;
}

inline CMat operator-(CMat a, const CMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
    return a;
}

inline CMat operator*(cplx c, CMat a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) *= c;
    return a;
}

inline double frobenius_norm(const Mat& a) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline double frobenius_norm(const CMat& a) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

/// Rank-one update a + x y^T.
inline Mat outer_update(Mat a, const Vec& x, const Vec& y, double scale) {
    assert(a.rows() == int(x.size()) && a.cols() == int(y.size()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) += scale * x[i] * y[j];
    return a;
}

inline bool is_symmetric(const Mat& q, double tol = 1e-12) {
    if (q.rows() != q.cols()) return false;
    double scale = std::max(1.0, frobenius_norm(q));
    for (int i = 0; i < q.rows(); ++i)
        for (int j = i + 1; j < q.cols(); ++j)
            if (std::abs(q(i, j) - q(j, i)) > tol * scale) return false;
    return true;
}

// ---------------------------------------------------------------------------
// symmetric eigendecomposition (cyclic Jacobi)

struct SymEigen {
    Vec values;  // ascending
    Mat vectors; // orthonormal columns, Q = V diag(values) V^T
};

/// Eigendecomposition of a real symmetric matrix. Deterministic: eigenvalues
/// ascending, each eigenvector's largest-magnitude entry made positive.
inline SymEigen sym_eigen(const Mat& q) {
    if (!is_symmetric(q))
        throw SymmetryError("sym_eigen: matrix is not symmetric");
    const int n = q.rows();
    Mat a = q;
    Mat v = Mat::identity(n);
    const double scale = std::max(1.0, frobenius_norm(q));

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-15 * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int qq = p + 1; qq < n; ++qq) {
                const double apq = a(p, qq);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (a(qq, qq) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, qq);
                    a(k, p) = c * akp - s * akq;
                    a(k, qq) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(qq, k);
                    a(p, k) = c * apk - s * aqk;
                    a(qq, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, qq);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, qq) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymEigen out;
    out.values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Vec diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] < diag[j]; });
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = diag[order[j]];
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(v(i, order[j])) > std::abs(v(imax, order[j]))) imax = i;
        const double sgn = v(imax, order[j]) >= 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) out.vectors(i, j) = sgn * v(i, order[j]);
    }
    return out;
}

/// exp(t Q) for symmetric Q via its eigendecomposition.
inline Mat expm_sym(const SymEigen& eig, double t) {
    const int n = int(eig.values.size());
    Mat e(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k)
                s += eig.vectors(i, k) * std::exp(t * eig.values[k]) * eig.vectors(j, k);
            e(i, j) = s;
        }
    return e;
}

inline Mat expm_sym(const Mat& q, double t) { return expm_sym(sym_eigen(q), t); }

// ---------------------------------------------------------------------------
// determinants (LU with partial pivoting)

inline cplx det(CMat a) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    cplx d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            d = -d;
        }
        d *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

inline double det(const Mat& a) {
    return det(CMat(a)).real();
}

// ---------------------------------------------------------------------------
// singular values (one-sided Jacobi) and numerical rank

inline Vec singular_values(Mat a) {
    const int m = a.rows(), n = a.cols();
    double scale = std::max(1.0, frobenius_norm(a));
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (int i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e-16 * scale * scale) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < m; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
            }
        }
        if (!rotated) break;
    }
    Vec sv(n);
    for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

/// Numerical rank: singular values above rel_tol * (largest singular value).
inline int numerical_rank(const Mat& a, double rel_tol = 1e-8) {
    Vec sv = singular_values(a);
    if (sv.empty() || sv[0] == 0.0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > rel_tol * sv[0]) ++r;
    return r;
}

} // namespace shockspec

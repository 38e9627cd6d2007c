#pragma once

// Hermitian eigendecomposition: unitary Householder reduction to a real
// symmetric tridiagonal matrix, then implicit QL with Wilkinson-type
// shifts. Converges to machine precision; eigenvalues ascending.

#include "tripartite/core/matrix.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tripartite {

class not_hermitian_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct HermitianEigensystem {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // column k belongs to values[k]; empty if not requested
};

/// Relative Hermiticity tolerance accepted on input.
inline constexpr double kHermitianInputTol = 1e-10;

namespace detail {

// Implicit QL on the symmetric tridiagonal (d, e), e[i] coupling i and i+1.
// Rotations are accumulated into the columns of z when z is non-null.
inline void tridiagonal_ql(RealVector& d, RealVector& e, ComplexMatrix* z) {
    const Eigen::Index n = d.size();
    if (n == 0)
        return;
    e(n - 1) = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index l = 0; l < n; ++l) {
        int iter = 0;
        Eigen::Index m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d(m)) + std::abs(d(m + 1));
                if (std::abs(e(m)) <= eps * dd)
                    break;
            }
            if (m == l)
                break;
            if (++iter > 60)
                throw std::runtime_error("hermitian eigensolver: QL iteration did not converge");

            double g = (d(l + 1) - d(l)) / (2.0 * e(l));
            double r = std::hypot(g, 1.0);
            g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            Eigen::Index i;
            bool underflow = false;
            for (i = m - 1; i >= l; --i) {
                double f = s * e(i);
                const double b = c * e(i);
                r = std::hypot(f, g);
                e(i + 1) = r;
                if (r == 0.0) {
                    d(i + 1) -= p;
                    e(m) = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d(i + 1) - p;
                r = (d(i) - g) * s + 2.0 * c * b;
                p = s * r;
                d(i + 1) = g + p;
                g = c * r - b;
                if (z) {
                    for (Eigen::Index k = 0; k < z->rows(); ++k) {
                        const cplx zf = (*z)(k, i + 1);
                        (*z)(k, i + 1) = s * (*z)(k, i) + c * zf;
                        (*z)(k, i) = c * (*z)(k, i) - s * zf;
                    }
                }
            }
            if (underflow)
                continue;
            d(l) -= p;
            e(l) = g;
            e(m) = 0.0;
        } while (m != l);
    }
}

inline HermitianEigensystem hermitian_eigen_impl(const ComplexMatrix& h, bool want_vectors) {
    require_square(h, "hermitian eigensolver");
    if (hermiticity_defect(h) > kHermitianInputTol)
        throw not_hermitian_error("hermitian eigensolver: input is not Hermitian");

    const Eigen::Index n = h.rows();
    if (n == 0)
        return HermitianEigensystem{RealVector(0), ComplexMatrix(0, 0)};
    ComplexMatrix a = 0.5 * (h + h.adjoint());
    ComplexMatrix q;
    if (want_vectors)
        q = ComplexMatrix::Identity(n, n);

    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        ComplexVector v = a.col(k).tail(m);
        const double xnorm = v.norm();
        if (xnorm == 0.0)
            continue;
        const cplx x0 = v(0);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;
        v(0) -= alpha;
        const double vnorm = v.norm();
        if (vnorm == 0.0)
            continue;
        v /= vnorm;

        // B <- (I - 2vv†) B (I - 2vv†) on the trailing block.
        auto block = a.bottomRightCorner(m, m);
        const ComplexVector p = block * v;
        const cplx beta = v.dot(p);  // v† B v, real for Hermitian B
        const ComplexVector w = p - beta * v;
        block.noalias() -= 2.0 * (v * w.adjoint() + w * v.adjoint());

        a.col(k).tail(m).setZero();
        a.row(k).tail(m).setZero();
        a(k + 1, k) = alpha;
        a(k, k + 1) = std::conj(alpha);

        if (want_vectors) {
            auto cols = q.rightCols(m);
            const ComplexVector qv = cols * v;
            cols.noalias() -= 2.0 * qv * v.adjoint();
        }
    }

    // Diagonal phases make the off-diagonal real and nonnegative.
    RealVector d(n), e(n);
    ComplexVector phi(n);
    phi(0) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i) = a(i, i).real();
        if (i + 1 < n) {
            const cplx c = a(i + 1, i);
            const double mag = std::abs(c);
            e(i) = mag;
            phi(i + 1) = mag > 0.0 ? phi(i) * (c / mag) : phi(i);
        }
    }
    e(n - 1) = 0.0;

    ComplexMatrix z;
    if (want_vectors)
        z = q * phi.asDiagonal();
    tridiagonal_ql(d, e, want_vectors ? &z : nullptr);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return d(x) < d(y); });

    HermitianEigensystem out;
    out.values.resize(n);
    if (want_vectors)
        out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = d(order[static_cast<std::size_t>(k)]);
        if (want_vectors)
            out.vectors.col(k) = z.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace detail

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
inline HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h) {
    return detail::hermitian_eigen_impl(h, true);
}

/// Eigenvalues in ascending order. Throws not_hermitian_error when the
/// relative Hermiticity defect exceeds 1e-10.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
    return detail::hermitian_eigen_impl(h, false).values;
}

/// Sum of absolute eigenvalues.
inline double trace_norm(const ComplexMatrix& h) {
    return hermitian_eigenvalues(h).cwiseAbs().sum();
}

} // namespace tripartite

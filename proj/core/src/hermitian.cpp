#include "tavis/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tavis/errors.hpp"

namespace tavis {

SmallMatrix::SmallMatrix(int d) : dim(d) {
    if (d < 0 || d > kMaxDim) throw PreconditionError("SmallMatrix dimension out of range");
}

SmallMatrix SmallMatrix::identity(int d) {
    SmallMatrix id(d);
    for (int i = 0; i < d; ++i) id(i, i) = 1.0;
    return id;
}

SmallMatrix SmallMatrix::adjoint() const {
    SmallMatrix out(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
}

double SmallMatrix::frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += std::norm((*this)(i, j));
    return std::sqrt(s);
}

double SmallMatrix::off_diagonal_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j) s += std::norm((*this)(i, j));
    return std::sqrt(s);
}

double SmallMatrix::hermiticity_error() const {
    double e = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return e;
}

double SmallMatrix::unitarity_error() const {
    const SmallMatrix p = adjoint() * (*this);
    double e = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            e = std::max(e, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return e;
}

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.dim != b.dim) throw PreconditionError("SmallMatrix dimension mismatch");
    SmallMatrix c(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < a.dim; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

EigenSystem jacobi_eigensolve(const SmallMatrix& input, double tol) {
    const int d = input.dim;
    SmallMatrix a = input;
    SmallMatrix v = SmallMatrix::identity(d);
    // Symmetrize away rounding noise in the input.
    for (int i = 0; i < d; ++i) {
        a(i, i) = a(i, i).real();
        for (int j = i + 1; j < d; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }

    const double scale = std::max(a.frobenius_norm(), 1e-300);
    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps && a.off_diagonal_norm() > tol * scale; ++sweep) {
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const cplx g = a(p, q);
                const double mag = std::abs(g);
                if (mag <= 1e-300) continue;
                // D = diag(1, conj(g)/|g|) makes the (p,q) pair real symmetric;
                // a real Givens rotation then annihilates it.
                const cplx phase = std::conj(g) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // G acts on columns p, q: G = D * R.
                const cplx gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;

                // A <- A G
                for (int k = 0; k < d; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                // A <- G^dagger A
                for (int k = 0; k < d; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                // V <- V G
                for (int k = 0; k < d; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    std::array<int, SmallMatrix::kMaxDim> order{};
    std::iota(order.begin(), order.begin() + d, 0);
    std::sort(order.begin(), order.begin() + d,
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.vectors = SmallMatrix(d);
    for (int k = 0; k < d; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        es.values[static_cast<std::size_t>(k)] = a(src, src).real();
        for (int i = 0; i < d; ++i) es.vectors(i, k) = v(i, src);
    }
    return es;
}

}  // namespace tavis

#pragma once

// Numeric kernels over CFloat: dense complex linear solves, singular values
// via Hermitian Jacobi on A^H A, and a Durand-Kerner univariate root finder.

#include "rurcert/arith.hpp"
#include "rurcert/unipoly.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rurcert {

using CVector = std::vector<CFloat>;
using CMatrix = std::vector<CVector>;

struct SingularJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline BigFloat vec_norm2(const CVector& v) {
    if (v.empty()) throw ArithError("vec_norm2: empty vector");
    BigFloat s = BigFloat::zero(v[0].precision());
    for (const auto& x : v) s += x.norm2();
    return s.sqrt();
}

inline BigFloat mat_max_abs(const CMatrix& A) {
    BigFloat m = BigFloat::zero(A.at(0).at(0).precision());
    for (const auto& row : A)
        for (const auto& x : row) {
            BigFloat a = x.abs();
            if (a > m) m = a;
        }
    return m;
}

// Solves A x = b by Gaussian elimination with partial pivoting on modulus.
// Throws SingularJacobian when a pivot column is negligible relative to the
// matrix scale.
inline CVector solve_linear(CMatrix A, CVector b) {
    const std::size_t n = A.size();
    if (n == 0 || b.size() != n) throw ArithError("solve_linear: dimension mismatch");
    const unsigned prec = b[0].precision();
    BigFloat scale = mat_max_abs(A);
    // Pivot floor: 2^-(p-8) relative to the matrix scale.
    BigFloat floor_ = (scale + BigFloat::one(prec)).ldexp(-static_cast<long>(prec) + 8);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        BigFloat best = A[col][col].abs();
        for (std::size_t row = col + 1; row < n; ++row) {
            BigFloat a = A[row][col].abs();
            if (a > best) {
                best = a;
                piv = row;
            }
        }
        if (!(best > floor_)) throw SingularJacobian("negligible pivot in numeric solve");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t row = col + 1; row < n; ++row) {
            if (A[row][col].is_zero()) continue;
            CFloat f = A[row][col] / A[col][col];
            for (std::size_t j = col; j < n; ++j) A[row][j] -= f * A[col][j];
            b[row] -= f * b[col];
        }
    }
    CVector x(n, CFloat::zero(prec));
    for (std::size_t i = n; i-- > 0;) {
        CFloat acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= A[i][j] * x[j];
        x[i] = acc / A[i][i];
    }
    return x;
}

// Singular values of an m x n complex matrix, descending, via cyclic Jacobi
// eigenvalue sweeps on the Hermitian matrix A^H A.
inline std::vector<BigFloat> singular_values(const CMatrix& A) {
    if (A.empty() || A[0].empty()) throw ArithError("singular_values: empty matrix");
    const std::size_t m = A.size(), n = A[0].size();
    const unsigned prec = A[0][0].precision();
    CMatrix H(n, CVector(n, CFloat::zero(prec)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            CFloat s = CFloat::zero(prec);
            for (std::size_t k = 0; k < m; ++k) s += A[k][i].conj() * A[k][j];
            H[i][j] = s;
        }
    BigFloat off_tol = (mat_max_abs(H) + BigFloat::one(prec)).ldexp(-static_cast<long>(prec) + 4);
    const BigFloat two = BigFloat(2.0, prec);
    for (int sweep = 0; sweep < 64; ++sweep) {
        BigFloat off = BigFloat::zero(prec);
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                BigFloat apq = H[p][q].abs();
                if (apq > off) off = apq;
                if (!(apq > off_tol)) continue;
                // Unitary similarity U^H H U with U = diag(1, conj(phase)) *
                // real Jacobi rotation, annihilating H[p][q].
                CFloat phase = H[p][q] / CFloat(apq, BigFloat::zero(prec));
                BigFloat theta = (H[q][q].re - H[p][p].re) / (two * apq);
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
                BigFloat t = BigFloat::one(prec) /
                             (theta.abs() + (theta * theta + BigFloat::one(prec)).sqrt());
                if (theta.sign() < 0) t = -t;
                BigFloat c = BigFloat::one(prec) / (t * t + BigFloat::one(prec)).sqrt();
                CFloat cs = CFloat(c, BigFloat::zero(prec));
                CFloat sf = CFloat(t * c, BigFloat::zero(prec));
                for (std::size_t k = 0; k < n; ++k) {
                    CFloat hpk = H[p][k], hqk = H[q][k];
                    H[p][k] = cs * hpk - sf * phase * hqk;
                    H[q][k] = sf * hpk + cs * phase * hqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    CFloat hkp = H[k][p], hkq = H[k][q];
                    H[k][p] = cs * hkp - sf * phase.conj() * hkq;
                    H[k][q] = sf * hkp + cs * phase.conj() * hkq;
                }
            }
        if (!(off > off_tol)) break;
    }
    std::vector<BigFloat> sv;
    sv.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BigFloat e = H[i][i].re;
        if (e.sign() < 0) e = BigFloat::zero(prec);
        sv.push_back(e.sqrt());
    }
    std::sort(sv.begin(), sv.end(), [](const BigFloat& a, const BigFloat& b) { return b < a; });
    return sv;
}

// All d roots of a degree-d polynomial by the Durand-Kerner iteration.
// target_bits: stop once max update < 2^-target_bits relative to root scale.
inline CVector poly_roots(const UniPoly<CFloat>& p, long target_bits) {
    long d = p.degree();
    if (d < 1) throw PolyError("poly_roots: degree must be >= 1");
    const unsigned prec = p.leading().precision();
    // Monic normalization.
    UniPoly<CFloat> mp = p;
    if (!p.leading().is_zero()) {
        CFloat inv = CFloat::one(prec) / p.leading();
        std::vector<CFloat> c;
        for (long i = 0; i <= d; ++i) c.push_back(inv * mp.coeff(static_cast<std::size_t>(i)));
        mp = UniPoly<CFloat>(std::move(c));
    }
    // Root radius bound: 1 + max |c_i|.
    BigFloat radius = BigFloat::one(prec);
    for (long i = 0; i < d; ++i) {
        BigFloat a = mp.coeff(static_cast<std::size_t>(i)).abs();
        if (a > radius) radius = a;
    }
    radius = radius + BigFloat::one(prec);
    CVector z;
    {
        // Non-real, non-symmetric starting angles.
        CFloat g(0.4, 0.9, prec);
        CFloat cur = CFloat(radius, BigFloat::zero(prec)) * g;
        for (long i = 0; i < d; ++i) {
            z.push_back(cur);
            cur = cur * g;
            cur += CFloat(0.0078125, 0.0390625, prec);
        }
    }
    BigFloat tol = radius.ldexp(-target_bits);
    for (int iter = 0; iter < 4096; ++iter) {
        BigFloat max_step = BigFloat::zero(prec);
        for (long i = 0; i < d; ++i) {
            CFloat num = mp.eval(z[static_cast<std::size_t>(i)]);
            CFloat den = CFloat::one(prec);
            for (long j = 0; j < d; ++j) {
                if (j == i) continue;
                den = den * (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
            }
            CFloat step = num / den;
            z[static_cast<std::size_t>(i)] -= step;
            BigFloat s = step.abs();
            if (s > max_step) max_step = s;
        }
        if (!(max_step > tol)) break;
    }
    return z;
}

}  // namespace rurcert

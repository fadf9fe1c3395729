#pragma once

#include <array>
#include <cmath>

#include "stokes/cbox.hpp"

// Fixed-size real matrix helpers for the Lohner set representation: a complex
// n-vector is handled as 2n reals in the order (Re z_0, Im z_0, Re z_1, ...).
namespace stokes::linalg {

template <int D>
using DVec = std::array<double, D>;
template <int D>
using DMat = std::array<double, D * D>; // row-major
template <int D>
using IVec = std::array<RealInterval, D>;
template <int D>
using IMat = std::array<RealInterval, D * D>;

template <int D>
DMat<D> identity() {
    DMat<D> m{};
    for (int i = 0; i < D; ++i) m[static_cast<size_t>(i * D + i)] = 1.0;
    return m;
}

template <int D>
IMat<D> to_interval(const DMat<D>& a) {
    IMat<D> r;
    for (int i = 0; i < D * D; ++i) r[static_cast<size_t>(i)] = RealInterval(a[static_cast<size_t>(i)]);
    return r;
}

template <int D>
DMat<D> midpoint(const IMat<D>& a) {
    DMat<D> r;
    for (int i = 0; i < D * D; ++i) r[static_cast<size_t>(i)] = a[static_cast<size_t>(i)].mid();
    return r;
}

template <int D>
IMat<D> mat_mul(const IMat<D>& a, const IMat<D>& b) {
    IMat<D> r{};
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            RealInterval s(0.0);
            for (int k = 0; k < D; ++k)
                s = s + a[static_cast<size_t>(i * D + k)] * b[static_cast<size_t>(k * D + j)];
            r[static_cast<size_t>(i * D + j)] = s;
        }
    return r;
}

template <int D>
IVec<D> mat_vec(const IMat<D>& a, const IVec<D>& v) {
    IVec<D> r;
    for (int i = 0; i < D; ++i) {
        RealInterval s(0.0);
        for (int k = 0; k < D; ++k) s = s + a[static_cast<size_t>(i * D + k)] * v[static_cast<size_t>(k)];
        r[static_cast<size_t>(i)] = s;
    }
    return r;
}

template <int D>
IVec<D> mat_vec(const DMat<D>& a, const IVec<D>& v) {
    return mat_vec<D>(to_interval<D>(a), v);
}

template <int D>
IMat<D> sub(const IMat<D>& a, const DMat<D>& b) {
    IMat<D> r;
    for (int i = 0; i < D * D; ++i)
        r[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];
    return r;
}

template <int D>
DMat<D> dmat_mul(const DMat<D>& a, const DMat<D>& b) {
    DMat<D> r{};
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            double s = 0.0;
            for (int k = 0; k < D; ++k)
                s += a[static_cast<size_t>(i * D + k)] * b[static_cast<size_t>(k * D + j)];
            r[static_cast<size_t>(i * D + j)] = s;
        }
    return r;
}

// Orthonormal factor of a (assumed nonsingular) via modified Gram-Schmidt;
// plain double arithmetic, rigor is restored downstream by the interval solve.
template <int D>
DMat<D> qr_q(const DMat<D>& a) {
    std::array<std::array<double, D>, D> col;
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) col[static_cast<size_t>(j)][static_cast<size_t>(i)] = a[static_cast<size_t>(i * D + j)];
    for (int j = 0; j < D; ++j) {
        auto& cj = col[static_cast<size_t>(j)];
        for (int p = 0; p < j; ++p) {
            const auto& cp = col[static_cast<size_t>(p)];
            double dot = 0.0;
            for (int i = 0; i < D; ++i) dot += cj[static_cast<size_t>(i)] * cp[static_cast<size_t>(i)];
            for (int i = 0; i < D; ++i) cj[static_cast<size_t>(i)] -= dot * cp[static_cast<size_t>(i)];
        }
        double n2 = 0.0;
        for (int i = 0; i < D; ++i) n2 += cj[static_cast<size_t>(i)] * cj[static_cast<size_t>(i)];
        double n = std::sqrt(n2);
        if (n < 1e-300) {
            // degenerate column: fall back to a unit vector not yet used
            for (int i = 0; i < D; ++i) cj[static_cast<size_t>(i)] = 0.0;
            cj[static_cast<size_t>(j)] = 1.0;
            for (int p = 0; p < j; ++p) {
                const auto& cp = col[static_cast<size_t>(p)];
                double dot = 0.0;
                for (int i = 0; i < D; ++i) dot += cj[static_cast<size_t>(i)] * cp[static_cast<size_t>(i)];
                for (int i = 0; i < D; ++i) cj[static_cast<size_t>(i)] -= dot * cp[static_cast<size_t>(i)];
            }
            n = 0.0;
            for (int i = 0; i < D; ++i) n += cj[static_cast<size_t>(i)] * cj[static_cast<size_t>(i)];
            n = std::sqrt(n);
        }
        for (int i = 0; i < D; ++i) cj[static_cast<size_t>(i)] /= n;
    }
    DMat<D> q;
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) q[static_cast<size_t>(i * D + j)] = col[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return q;
}

// Rigorous solve A X = B for a well-conditioned double matrix A and interval
// right-hand sides, by interval Gaussian elimination with partial pivoting.
template <int D>
struct ISolver {
    IMat<D> lu;
    std::array<int, D> perm;

    explicit ISolver(const DMat<D>& a) : lu(to_interval<D>(a)) {
        for (int i = 0; i < D; ++i) perm[static_cast<size_t>(i)] = i;
        for (int c = 0; c < D; ++c) {
            int piv = c;
            double best = lu[static_cast<size_t>(c * D + c)].mig();
            for (int rIdx = c + 1; rIdx < D; ++rIdx) {
                const double m = lu[static_cast<size_t>(rIdx * D + c)].mig();
                if (m > best) { best = m; piv = rIdx; }
            }
            if (piv != c) {
                std::swap(perm[static_cast<size_t>(c)], perm[static_cast<size_t>(piv)]);
                for (int j = 0; j < D; ++j)
                    std::swap(lu[static_cast<size_t>(c * D + j)], lu[static_cast<size_t>(piv * D + j)]);
            }
            const RealInterval& d = lu[static_cast<size_t>(c * D + c)];
            if (d.contains_zero()) throw EnclosureFailed("interval LU: pivot contains zero");
            for (int rIdx = c + 1; rIdx < D; ++rIdx) {
                RealInterval f = lu[static_cast<size_t>(rIdx * D + c)] / d;
                lu[static_cast<size_t>(rIdx * D + c)] = f;
                for (int j = c + 1; j < D; ++j)
                    lu[static_cast<size_t>(rIdx * D + j)] =
                        lu[static_cast<size_t>(rIdx * D + j)] - f * lu[static_cast<size_t>(c * D + j)];
            }
        }
    }

    IVec<D> solve(const IVec<D>& b) const {
        IVec<D> y;
        for (int i = 0; i < D; ++i) {
            RealInterval s = b[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            for (int j = 0; j < i; ++j)
                s = s - lu[static_cast<size_t>(i * D + j)] * y[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = s;
        }
        IVec<D> x;
        for (int i = D - 1; i >= 0; --i) {
            RealInterval s = y[static_cast<size_t>(i)];
            for (int j = i + 1; j < D; ++j)
                s = s - lu[static_cast<size_t>(i * D + j)] * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s / lu[static_cast<size_t>(i * D + i)];
        }
        return x;
    }

    IMat<D> solve_mat(const IMat<D>& b) const {
        IMat<D> r;
        for (int j = 0; j < D; ++j) {
            IVec<D> col;
            for (int i = 0; i < D; ++i) col[static_cast<size_t>(i)] = b[static_cast<size_t>(i * D + j)];
            IVec<D> x = solve(col);
            for (int i = 0; i < D; ++i) r[static_cast<size_t>(i * D + j)] = x[static_cast<size_t>(i)];
        }
        return r;
    }
};

} // namespace stokes::linalg

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "entspec/complex_matrix.hpp"
#include "entspec/errors.hpp"

namespace entspec {

// Tolerance policy for the dense kernel. All bounds are relative to
// max(1, scale) so trace-one density matrices and O(1) operators share one
// set of constants.
inline constexpr double kHermitianTol = 1e-10;   // accept A as Hermitian
inline constexpr double kOffDiagonalTol = 1e-13; // Jacobi convergence target
inline constexpr double kKernelTol = 1e-12;      // eigenvalue counts as zero
inline constexpr double kPsdTol = 1e-9;          // accept A as PSD
inline constexpr int kMaxJacobiSweeps = 100;

struct HermitianEigen {
    std::vector<double> eigenvalues;  // sorted descending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps.
// Each rotation is a 2x2 unitary (phase followed by a real Givens rotation)
// annihilating one off-diagonal pair. Sweeps stop once the off-diagonal
// Frobenius norm falls below kOffDiagonalTol * max(1, ||A||_F).
inline HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
    if (!a.is_square()) throw Error(errc::not_square, "eigendecomposition needs a square matrix");
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, a.frobenius_norm());
    if (a.hermiticity_residual() > kHermitianTol * scale)
        throw Error(errc::not_hermitian,
                    "hermiticity residual " + std::to_string(a.hermiticity_residual()) +
                        " exceeds tolerance");

    ComplexMatrix h = a.symmetrized();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double off_target = kOffDiagonalTol * scale;
    // Entries this small cannot keep the off-diagonal norm above target even
    // if every pair sits at the floor; skipping them avoids denormal phases.
    const double skip_floor = n > 1 ? off_target / (2.0 * static_cast<double>(n)) : 0.0;

    bool converged = detail::off_diagonal_norm(h) <= off_target;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(h(p, q));
                if (r <= skip_floor) continue;

                // Phase factor turning the (p,q) entry real, then the
                // classic symmetric Jacobi rotation on the 2x2 block.
                const Complex phase = std::conj(h(p, q)) / r;  // e^{-i arg}
                const double app = h(p, p).real();
                const double aqq = h(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;

                // U restricted to the (p,q) plane:
                //   [ cs            sn          ]
                //   [ -phase*sn     phase*cs    ]
                // Update H <- U^dagger H U and V <- V U.
                for (std::size_t m = 0; m < n; ++m) {  // columns: H <- H U
                    const Complex hp = h(m, p), hq = h(m, q);
                    h(m, p) = cs * hp - phase * sn * hq;
                    h(m, q) = sn * hp + phase * cs * hq;
                }
                const Complex phasec = std::conj(phase);
                for (std::size_t m = 0; m < n; ++m) {  // rows: H <- U^dagger H
                    const Complex hp = h(p, m), hq = h(q, m);
                    h(p, m) = cs * hp - phasec * sn * hq;
                    h(q, m) = sn * hp + phasec * cs * hq;
                }
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = Complex(h(p, p).real(), 0.0);
                h(q, q) = Complex(h(q, q).real(), 0.0);

                for (std::size_t m = 0; m < n; ++m) {
                    const Complex vp = v(m, p), vq = v(m, q);
                    v(m, p) = cs * vp - phase * sn * vq;
                    v(m, q) = sn * vp + phase * cs * vq;
                }
            }
        }
        converged = detail::off_diagonal_norm(h) <= off_target;
    }
    if (!converged)
        throw Error(errc::no_convergence,
                    "Jacobi sweep cap reached with off-diagonal norm " +
                        std::to_string(detail::off_diagonal_norm(h)));

    // Stable descending sort keeps the rotation output order inside
    // degenerate clusters, so results are deterministic per input.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t i, std::size_t j) { return h(i, i).real() > h(j, j).real(); });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = h(perm[k], perm[k]).real();
        for (std::size_t m = 0; m < n; ++m) out.eigenvectors(m, k) = v(m, perm[k]);
    }
    return out;
}

inline double min_eigenvalue(const ComplexMatrix& a) {
    return hermitian_eigen(a).eigenvalues.back();
}

// PSD test relative to the top of the spectrum: min >= -tol * max(1, lambda_max).
inline bool is_psd(const ComplexMatrix& a, double tol) {
    const HermitianEigen eig = hermitian_eigen(a);
    const double top = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    const double bottom = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    return bottom >= -tol * std::max(1.0, top);
}

namespace detail {

// U f(diag) U^dagger for a spectral function f applied to clamped eigenvalues.
inline ComplexMatrix spectral_map(const HermitianEigen& eig, const std::vector<double>& mapped) {
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.eigenvectors(i, k) * mapped[k] * std::conj(eig.eigenvectors(j, k));
            out(i, j) = s;
        }
    return out;
}

inline HermitianEigen psd_eigen_or_throw(const ComplexMatrix& a, const char* who) {
    HermitianEigen eig = hermitian_eigen(a);
    const double top = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    const double bottom = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    if (bottom < -kPsdTol * std::max(1.0, top))
        throw Error(errc::not_psd, std::string(who) + ": min eigenvalue " + std::to_string(bottom));
    return eig;
}

}  // namespace detail

// Hermitian PSD square root. Eigenvalues below the kernel threshold are
// clamped to zero before the root.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
    const HermitianEigen eig = detail::psd_eigen_or_throw(a, "psd_sqrt");
    const double top = eig.eigenvalues.empty() ? 0.0 : std::max(eig.eigenvalues.front(), 0.0);
    const double kernel = kKernelTol * std::max(1.0, top);
    std::vector<double> mapped(eig.eigenvalues.size());
    for (std::size_t k = 0; k < mapped.size(); ++k)
        mapped[k] = eig.eigenvalues[k] > kernel ? std::sqrt(eig.eigenvalues[k]) : 0.0;
    return detail::spectral_map(eig, mapped);
}

// Pseudo-inverse square root: eigenvalues on the kernel map to zero, so the
// result inverts a only on its support.
inline ComplexMatrix psd_inv_sqrt(const ComplexMatrix& a) {
    const HermitianEigen eig = detail::psd_eigen_or_throw(a, "psd_inv_sqrt");
    const double top = eig.eigenvalues.empty() ? 0.0 : std::max(eig.eigenvalues.front(), 0.0);
    const double kernel = kKernelTol * std::max(1.0, top);
    std::vector<double> mapped(eig.eigenvalues.size());
    for (std::size_t k = 0; k < mapped.size(); ++k)
        mapped[k] = eig.eigenvalues[k] > kernel ? 1.0 / std::sqrt(eig.eigenvalues[k]) : 0.0;
    return detail::spectral_map(eig, mapped);
}

// Largest singular value, via the top eigenvalue of A^dagger A. Rectangular
// input is allowed.
inline double operator_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const ComplexMatrix gram = a.dagger() * a;
    const double top = hermitian_eigen(gram).eigenvalues.front();
    return std::sqrt(std::max(top, 0.0));
}

}  // namespace entspec

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entspec/complex_matrix.hpp"
#include "entspec/eigensolver.hpp"
#include "entspec/errors.hpp"
#include "entspec/rng.hpp"

namespace entspec {

inline constexpr double kStateHermitianTol = 1e-10;  // relative to max(1, ||rho||_F)
inline constexpr double kStateTraceTol = 1e-10;
inline constexpr double kStatePsdTol = 1e-9;  // absolute floor on the spectrum

// Density matrix on H_A (x) H_B with the product basis |i_A, j_B> mapped to
// flat index i*dim_b + j. Validity (Hermitian, trace one, PSD within
// tolerance) is enforced once, on construction.
class BipartiteState {
  public:
    BipartiteState(std::size_t dim_a, std::size_t dim_b, ComplexMatrix rho)
        : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(rho)) {
        validate();
    }

    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }
    std::size_t dim() const noexcept { return dim_a_ * dim_b_; }
    const ComplexMatrix& rho() const noexcept { return rho_; }

  private:
    void validate() const {
        if (dim_a_ < 1 || dim_b_ < 1)
            throw Error(errc::invalid_state, "local dimensions must be at least 1");
        if (rho_.rows() != dim() || rho_.cols() != dim())
            throw Error(errc::invalid_state,
                        "matrix is " + std::to_string(rho_.rows()) + "x" +
                            std::to_string(rho_.cols()) + " but dims " + std::to_string(dim_a_) +
                            "x" + std::to_string(dim_b_) + " require " + std::to_string(dim()) +
                            "x" + std::to_string(dim()));
        if (!rho_.all_finite()) throw Error(errc::invalid_state, "matrix has non-finite entries");

        const double scale = std::max(1.0, rho_.frobenius_norm());
        if (rho_.hermiticity_residual() > kStateHermitianTol * scale) {
            // Report the worst offending coordinate.
            std::size_t wi = 0, wj = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < rho_.rows(); ++i)
                for (std::size_t j = 0; j < rho_.cols(); ++j) {
                    const double d = std::abs(rho_(i, j) - std::conj(rho_(j, i)));
                    if (d > worst) worst = d, wi = i, wj = j;
                }
            throw Error(errc::invalid_state, "not Hermitian: worst deviation " +
                                                 std::to_string(worst) + " at (" +
                                                 std::to_string(wi) + "," + std::to_string(wj) + ")");
        }
        const double tr = rho_.trace().real();
        if (std::abs(tr - 1.0) > kStateTraceTol)
            throw Error(errc::invalid_state, "trace is " + std::to_string(tr) + ", expected 1");
        const double min_eig = min_eigenvalue(rho_);
        if (min_eig < -kStatePsdTol)
            throw Error(errc::invalid_state,
                        "not positive semidefinite: min eigenvalue " + std::to_string(min_eig));
    }

    std::size_t dim_a_, dim_b_;
    ComplexMatrix rho_;
};

// rho_A = Tr_B rho: entry [i,k] = sum_j rho[(i,j),(k,j)].
inline ComplexMatrix partial_trace_b(const BipartiteState& s) {
    const std::size_t da = s.dim_a(), db = s.dim_b();
    ComplexMatrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < da; ++k) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < db; ++j) acc += s.rho()(i * db + j, k * db + j);
            out(i, k) = acc;
        }
    return out;
}

// rho_B = Tr_A rho: entry [j,l] = sum_i rho[(i,j),(i,l)].
inline ComplexMatrix partial_trace_a(const BipartiteState& s) {
    const std::size_t da = s.dim_a(), db = s.dim_b();
    ComplexMatrix out(db, db);
    for (std::size_t j = 0; j < db; ++j)
        for (std::size_t l = 0; l < db; ++l) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < da; ++i) acc += s.rho()(i * db + j, i * db + l);
            out(j, l) = acc;
        }
    return out;
}

// Exchange the two subsystems: rho'[(j,i),(l,k)] = rho[(i,j),(k,l)].
inline BipartiteState swap_subsystems(const BipartiteState& s) {
    const std::size_t da = s.dim_a(), db = s.dim_b();
    ComplexMatrix out(s.dim(), s.dim());
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t k = 0; k < da; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out(j * da + i, l * da + k) = s.rho()(i * db + j, k * db + l);
    return BipartiteState(db, da, std::move(out));
}

// Push a restricted state back through an A-side isometry (columns
// orthonormal, rows = target dimension).
inline BipartiteState embed_a(const BipartiteState& s, const ComplexMatrix& isometry) {
    if (isometry.cols() != s.dim_a())
        throw Error(errc::bad_dimension, "isometry columns must match the restricted A dimension");
    const ComplexMatrix big = kron(isometry, ComplexMatrix::identity(s.dim_b()));
    return BipartiteState(isometry.rows(), s.dim_b(), big * s.rho() * big.dagger());
}

// Split off the kernel of rho_A: returns the state restricted to
// supp(rho_A) (x) H_B together with the isometry embedding that support back
// into H_A. The discarded block carries no weight, so re-embedding
// reproduces the input.
inline std::pair<BipartiteState, ComplexMatrix> restrict_to_support(const BipartiteState& s) {
    const ComplexMatrix rho_a = partial_trace_b(s);
    const HermitianEigen eig = hermitian_eigen(rho_a);
    const double top = std::max(eig.eigenvalues.front(), 0.0);
    const double kernel = kKernelTol * std::max(1.0, top);

    std::size_t rank = 0;
    while (rank < eig.eigenvalues.size() && eig.eigenvalues[rank] > kernel) ++rank;
    if (rank == 0) throw Error(errc::rank_zero, "rho_A has empty support");

    if (rank == s.dim_a()) return {s, ComplexMatrix::identity(s.dim_a())};

    ComplexMatrix isometry(s.dim_a(), rank);  // support eigenvectors, descending order
    for (std::size_t i = 0; i < s.dim_a(); ++i)
        for (std::size_t k = 0; k < rank; ++k) isometry(i, k) = eig.eigenvectors(i, k);

    const ComplexMatrix big = kron(isometry, ComplexMatrix::identity(s.dim_b()));
    BipartiteState restricted(rank, s.dim_b(), (big.dagger() * s.rho()) * big);

    // Lemma check: everything outside the support block must vanish.
    const BipartiteState back = embed_a(restricted, isometry);
    const double discarded = distance_frobenius(back.rho(), s.rho());
    if (discarded > 1e-9)
        throw Error(errc::numerical_failure,
                    "support restriction dropped weight " + std::to_string(discarded));
    return {std::move(restricted), std::move(isometry)};
}

// |psi><psi| from a flat amplitude vector of length dim_a*dim_b.
inline BipartiteState pure_state(const std::vector<Complex>& amplitudes, std::size_t dim_a,
                                 std::size_t dim_b) {
    if (amplitudes.size() != dim_a * dim_b)
        throw Error(errc::bad_length, "amplitude vector length " + std::to_string(amplitudes.size()) +
                                          " does not match " + std::to_string(dim_a * dim_b));
    double norm2 = 0.0;
    for (const Complex& z : amplitudes) norm2 += std::norm(z);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10)
        throw Error(errc::bad_norm, "state vector norm is " + std::to_string(std::sqrt(norm2)));
    ComplexMatrix rho(amplitudes.size(), amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        for (std::size_t j = 0; j < amplitudes.size(); ++j)
            rho(i, j) = amplitudes[i] * std::conj(amplitudes[j]);
    return BipartiteState(dim_a, dim_b, std::move(rho));
}

// Maximally entangled |Phi+_d><Phi+_d| with entries written as 1/d directly
// so the d = 2 corner values are exact.
inline BipartiteState max_entangled_state(std::size_t d) {
    if (d < 2) throw Error(errc::bad_dimension, "maximally entangled state needs d >= 2");
    const double w = 1.0 / static_cast<double>(d);
    ComplexMatrix rho(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) rho(i * d + i, j * d + j) = w;
    return BipartiteState(d, d, std::move(rho));
}

inline BipartiteState bell_state() { return max_entangled_state(2); }

// F |Phi+><Phi+| + (1-F) (I - |Phi+><Phi+|) / (d^2 - 1). Both reductions are
// I/d for every fidelity.
inline BipartiteState isotropic_state(std::size_t d, double fidelity) {
    if (d < 2) throw Error(errc::bad_dimension, "isotropic state needs d >= 2");
    if (!(fidelity >= 0.0 && fidelity <= 1.0))
        throw Error(errc::bad_fidelity, "fidelity " + std::to_string(fidelity) + " outside [0, 1]");
    const BipartiteState phi = max_entangled_state(d);
    const double rest = (1.0 - fidelity) / (static_cast<double>(d) * d - 1.0);
    ComplexMatrix rho = ComplexMatrix::identity(d * d);
    rho *= rest;
    ComplexMatrix proj = phi.rho();
    proj *= (fidelity - rest);
    rho += proj;
    return BipartiteState(d, d, std::move(rho));
}

// rho = sum_ij alpha_ij |i_A><j_A| (x) |i_B><j_B|; perfectly correlated in
// the canonical basis, with rho_A = diag(alpha).
inline BipartiteState maximally_correlated_state(const ComplexMatrix& alpha) {
    if (!alpha.is_square() || alpha.rows() < 1)
        throw Error(errc::bad_alpha, "alpha must be a nonempty square matrix");
    const std::size_t d = alpha.rows();
    const double scale = std::max(1.0, alpha.frobenius_norm());
    if (!alpha.all_finite() || alpha.hermiticity_residual() > kStateHermitianTol * scale)
        throw Error(errc::bad_alpha, "alpha must be Hermitian");
    if (std::abs(alpha.trace().real() - 1.0) > kStateTraceTol)
        throw Error(errc::bad_alpha, "alpha trace is " + std::to_string(alpha.trace().real()));
    if (min_eigenvalue(alpha) < -kStatePsdTol)
        throw Error(errc::bad_alpha, "alpha is not positive semidefinite");
    ComplexMatrix rho(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) rho(i * d + i, j * d + j) = alpha(i, j);
    return BipartiteState(d, d, std::move(rho));
}

// Rank-two maximally entangled mixed state on 2x2:
// f |Phi+><Phi+| + (1-f) |01><01|.
inline BipartiteState mems_rank2_state(double f) {
    if (!(f > 0.0 && f < 1.0))
        throw Error(errc::bad_f, "mixing parameter " + std::to_string(f) + " outside (0, 1)");
    ComplexMatrix rho = bell_state().rho();
    rho *= f;
    rho(1, 1) += (1.0 - f);
    return BipartiteState(2, 2, std::move(rho));
}

// d x cols matrix of independent standard complex Gaussians.
inline ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
    return g;
}

// G G^dagger / Tr(G G^dagger) for a d x rank Ginibre G; full-rank on the
// intended support almost surely.
inline ComplexMatrix random_density_matrix(Rng& rng, std::size_t d, std::size_t rank) {
    if (rank < 1 || rank > d)
        throw Error(errc::bad_rank,
                    "rank " + std::to_string(rank) + " outside [1, " + std::to_string(d) + "]");
    const ComplexMatrix g = ginibre(rng, d, rank);
    ComplexMatrix rho = g * g.dagger();
    rho *= 1.0 / rho.trace().real();
    return rho.symmetrized();
}

inline ComplexMatrix random_density_matrix(std::size_t d, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density_matrix(rng, d, rank);
}

// Orthonormal columns from Gram-Schmidt on a Ginibre draw, with one
// re-orthogonalization pass.
inline ComplexMatrix random_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
    if (cols > rows) throw Error(errc::bad_dimension, "isometry needs cols <= rows");
    while (true) {
        ComplexMatrix g = ginibre(rng, rows, cols);
        bool degenerate = false;
        for (std::size_t c = 0; c < cols && !degenerate; ++c) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t prev = 0; prev < c; ++prev) {
                    Complex dot = 0.0;
                    for (std::size_t r = 0; r < rows; ++r) dot += std::conj(g(r, prev)) * g(r, c);
                    for (std::size_t r = 0; r < rows; ++r) g(r, c) -= dot * g(r, prev);
                }
            }
            double norm2 = 0.0;
            for (std::size_t r = 0; r < rows; ++r) norm2 += std::norm(g(r, c));
            if (norm2 < 1e-12) {
                degenerate = true;  // resample; essentially never happens
                break;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t r = 0; r < rows; ++r) g(r, c) *= inv;
        }
        if (!degenerate) return g;
    }
}

inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) { return random_isometry(rng, n, n); }

// Convex mixture sum_k p_k rho_A^(k) (x) rho_B^(k): separable by
// construction. Weights normalize uniform(0,1] draws; each factor is a
// random local state of random rank (rank 1 gives pure factors).
inline BipartiteState random_separable_state(std::size_t dim_a, std::size_t dim_b,
                                             std::size_t n_terms, std::uint64_t seed) {
    if (n_terms < 1) throw Error(errc::bad_parameter, "n_terms must be at least 1");
    Rng rng(seed);
    std::vector<double> weights(n_terms);
    double total = 0.0;
    for (double& w : weights) {
        w = rng.uniform_pos();
        total += w;
    }
    ComplexMatrix rho(dim_a * dim_b, dim_a * dim_b);
    for (std::size_t k = 0; k < n_terms; ++k) {
        const std::size_t rank_a = static_cast<std::size_t>(rng.uniform_int(1, dim_a));
        const std::size_t rank_b = static_cast<std::size_t>(rng.uniform_int(1, dim_b));
        const ComplexMatrix fa = random_density_matrix(rng, dim_a, rank_a);
        const ComplexMatrix fb = random_density_matrix(rng, dim_b, rank_b);
        ComplexMatrix term = kron(fa, fb);
        term *= weights[k] / total;
        rho += term;
    }
    return BipartiteState(dim_a, dim_b, rho.symmetrized());
}

}  // namespace entspec

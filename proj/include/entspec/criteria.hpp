#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "entspec/complex_matrix.hpp"
#include "entspec/eigensolver.hpp"
#include "entspec/errors.hpp"
#include "entspec/majorization.hpp"
#include "entspec/states.hpp"

namespace entspec {

// Slack allowed on witness quantities whose exact values are pinned by the
// construction. Anything beyond ten times a bound is treated as a numerics
// bug rather than a tolerance issue.
inline constexpr double kWitnessEntryBound = 1e-12;
inline constexpr double kWitnessSumBound = 1e-9;
inline constexpr double kWitnessLinearBound = 1e-8;
inline constexpr double kWitnessGroupBound = 1e-8;
inline constexpr double kWitnessBlowup = 10.0;

struct StateSpectra {
    SpectrumVector lambda_ab;
    SpectrumVector lambda_a;
    SpectrumVector lambda_b;
};

// Descending spectra of rho_AB, rho_A, rho_B. Clamping matches the state
// validation floor, so any eigenvalue the constructor admitted is accepted.
inline StateSpectra spectra(const BipartiteState& s) {
    const HermitianEigen ab = hermitian_eigen(s.rho().symmetrized());
    const HermitianEigen a = hermitian_eigen(partial_trace_b(s).symmetrized());
    const HermitianEigen b = hermitian_eigen(partial_trace_a(s).symmetrized());
    return {SpectrumVector(ab.eigenvalues, kStatePsdTol), SpectrumVector(a.eigenvalues, kStatePsdTol),
            SpectrumVector(b.eigenvalues, kStatePsdTol)};
}

struct ReductionCheck {
    bool a_holds = false;
    bool b_holds = false;
    double a_min_eig = 0.0;
    double b_min_eig = 0.0;
    double tol = kPsdTol;
};

namespace detail {

inline std::pair<bool, double> reduction_a_side(const BipartiteState& s, double tol) {
    const ComplexMatrix rho_a = partial_trace_b(s).symmetrized();
    ComplexMatrix diff = kron(rho_a, ComplexMatrix::identity(s.dim_b()));
    diff -= s.rho();
    const HermitianEigen eig = hermitian_eigen(diff.symmetrized());
    const double lo = eig.eigenvalues.back();
    const double hi = eig.eigenvalues.front();
    return {lo >= -tol * std::max(1.0, hi), lo};
}

}  // namespace detail

// Verdicts for rho_A (x) I - rho_AB >= 0 and I (x) rho_B - rho_AB >= 0.
// The B side runs the A-side code on the swapped state, so swapping the
// input exchanges the two sides bit for bit.
inline ReductionCheck check_reduction(const BipartiteState& s, double tol = kPsdTol) {
    ReductionCheck out;
    out.tol = tol;
    const auto a = detail::reduction_a_side(s, tol);
    const auto b = detail::reduction_a_side(swap_subsystems(s), tol);
    out.a_holds = a.first;
    out.a_min_eig = a.second;
    out.b_holds = b.first;
    out.b_min_eig = b.second;
    return out;
}

struct MajorizationCheck {
    MajorizationVerdict a;
    MajorizationVerdict b;
    double tol = kMajorizationTol;
};

// lambda(rho_AB) against lambda(rho_A) and lambda(rho_B), each local
// spectrum zero-padded to the full dimension. Same swap trick as above for
// exact A/B symmetry.
inline MajorizationCheck check_majorization_criterion(const BipartiteState& s,
                                                      double tol = kMajorizationTol) {
    const StateSpectra sp = spectra(s);
    const StateSpectra sp_swapped = spectra(swap_subsystems(s));
    MajorizationCheck out;
    out.tol = tol;
    out.a = majorizes(sp.lambda_a, sp.lambda_ab, tol);
    out.b = majorizes(sp_swapped.lambda_a, sp_swapped.lambda_ab, tol);
    return out;
}

struct CriterionReport {
    bool reduction_a_holds = false;
    bool reduction_b_holds = false;
    double reduction_a_min_eig = 0.0;
    double reduction_b_min_eig = 0.0;
    MajorizationVerdict majorization_a;
    MajorizationVerdict majorization_b;
    bool distillable_by_majorization = false;
    double tol_psd = kPsdTol;
    double tol_major = kMajorizationTol;
};

// Full report. A failed majorization relation on either side certifies
// distillability; both holding decides nothing.
inline CriterionReport distillability_verdict(const BipartiteState& s, double tol_psd = kPsdTol,
                                              double tol_major = kMajorizationTol) {
    const ReductionCheck red = check_reduction(s, tol_psd);
    const MajorizationCheck maj = check_majorization_criterion(s, tol_major);
    CriterionReport out;
    out.reduction_a_holds = red.a_holds;
    out.reduction_b_holds = red.b_holds;
    out.reduction_a_min_eig = red.a_min_eig;
    out.reduction_b_min_eig = red.b_min_eig;
    out.majorization_a = maj.a;
    out.majorization_b = maj.b;
    out.distillable_by_majorization = !(maj.a.holds && maj.b.holds);
    out.tol_psd = tol_psd;
    out.tol_major = tol_major;
    return out;
}

// C with a^{1/2} = b^{1/2} C and ||C|| <= 1, valid whenever 0 <= a <= b.
// Singular b is fine as long as the order holds (ker b is then inside
// ker a); the factorization residual is checked before returning.
inline ComplexMatrix douglas_contraction(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || !b.is_square())
        throw Error(errc::not_square, "douglas_contraction needs square inputs");
    if (a.rows() != b.rows())
        throw Error(errc::bad_dimension, "a is " + std::to_string(a.rows()) + "x" +
                                             std::to_string(a.rows()) + ", b is " +
                                             std::to_string(b.rows()) + "x" + std::to_string(b.rows()));
    const HermitianEigen ea = hermitian_eigen(a);
    if (ea.eigenvalues.back() < -kPsdTol * std::max(1.0, ea.eigenvalues.front()))
        throw Error(errc::a_not_psd,
                    "a has min eigenvalue " + std::to_string(ea.eigenvalues.back()));
    const HermitianEigen ediff = hermitian_eigen((b - a).symmetrized());
    if (ediff.eigenvalues.back() < -kPsdTol * std::max(1.0, ediff.eigenvalues.front()))
        throw Error(errc::order_violated, "b - a has min eigenvalue " +
                                              std::to_string(ediff.eigenvalues.back()));

    const ComplexMatrix sqrt_a = psd_sqrt(a);
    const ComplexMatrix sqrt_b = psd_sqrt(b);
    const ComplexMatrix c = psd_inv_sqrt(b) * sqrt_a;

    const double factor_residual = distance_frobenius(sqrt_b * c, sqrt_a);
    if (factor_residual > kWitnessLinearBound)
        throw Error(errc::numerical_failure,
                    "factorization residual " + std::to_string(factor_residual));
    const double norm = operator_norm(c);
    if (norm > 1.0 + kWitnessSumBound)
        throw Error(errc::numerical_failure, "contraction norm " + std::to_string(norm));
    return c;
}

// Proof artifacts for the reduction-to-majorization construction. All
// matrices live on supp(rho_A) (x) H_B; dim_a below is that support
// dimension, and support_isometry maps it back into the original A space.
struct Theorem1Witness {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    ComplexMatrix support_isometry;
    ComplexMatrix u_a;  // diagonalizes rho_A, eigenvalues descending
    ComplexMatrix v;    // diagonalizes rho_AB^{1/2}, eigenvalues descending
    ComplexMatrix c;    // contraction with rho_AB^{1/2} = (rho_A^{1/2} (x) I) C V^dagger
    ComplexMatrix s;    // dim_a x dim_a, S_ij = sum_k |C_[j,k],i|^2
    std::vector<double> lambda_a;  // spectrum of rho_A on its support, descending

    double residual_linear = 0.0;  // max_i |(S lambda_a)_i - lambda_i(rho_AB)|
    double max_row_sum = 0.0;      // of S
    double max_col_sum = 0.0;      // of S
    double min_entry = 0.0;        // of S
    double contraction_norm = 0.0;
    double max_c_column_sum = 0.0;     // squared column norms of C, each <= 1
    double max_group_deviation = 0.0;  // squared row norms of C summed per A block, each = 1
};

// Runs the constructive pipeline: restrict to supp(rho_A), rotate rho_A
// diagonal descending, clamp the difference operator so rho_AB <= rho_A (x) I
// holds exactly, then read V and the contraction off one eigendecomposition
// of the clamped state. S's row sums are the squared column norms of C and
// its column sums are partial block sums, so double substochasticity comes
// out of the same arithmetic that is checked here.
inline Theorem1Witness build_theorem1_witness(const BipartiteState& input) {
    auto restricted_pair = restrict_to_support(input);
    const BipartiteState& restricted = restricted_pair.first;
    const std::size_t da = restricted.dim_a();
    const std::size_t db = restricted.dim_b();
    const std::size_t d = da * db;

    const HermitianEigen eig_a = hermitian_eigen(partial_trace_b(restricted).symmetrized());
    const std::vector<double>& lam_a = eig_a.eigenvalues;
    if (lam_a.back() <= 0.0)
        throw Error(errc::numerical_failure, "support restriction left eigenvalue " +
                                                 std::to_string(lam_a.back()) + " in rho_A");

    const ComplexMatrix u_big = kron(eig_a.eigenvectors, ComplexMatrix::identity(db));
    const ComplexMatrix rho_w = ((u_big.dagger() * restricted.rho()) * u_big).symmetrized();

    ComplexMatrix b_op(d, d);  // rho_A (x) I in the rotated basis, exactly diagonal
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) b_op(i * db + k, i * db + k) = lam_a[i];

    const HermitianEigen eig_diff = hermitian_eigen((b_op - rho_w).symmetrized());
    const double diff_min = eig_diff.eigenvalues.back();
    const double diff_max = eig_diff.eigenvalues.front();
    if (diff_min < -kPsdTol * std::max(1.0, diff_max))
        throw Error(errc::reduction_violated, "rho_A (x) I - rho_AB has min eigenvalue " +
                                                  std::to_string(diff_min));
    std::vector<double> clamped(eig_diff.eigenvalues);
    for (double& e : clamped) e = std::max(e, 0.0);
    const ComplexMatrix sigma =
        (b_op - detail::spectral_map(eig_diff, clamped)).symmetrized();

    const HermitianEigen eig_m = hermitian_eigen(sigma);
    std::vector<double> m(eig_m.eigenvalues);
    for (double& e : m) e = std::max(e, 0.0);

    // C = (rho_A (x) I)^{-1/2} V diag(sqrt m): row scaling times column scaling.
    ComplexMatrix c(d, d);
    for (std::size_t i = 0; i < da; ++i) {
        const double row_scale = 1.0 / std::sqrt(lam_a[i]);
        for (std::size_t k = 0; k < db; ++k) {
            const std::size_t row = i * db + k;
            for (std::size_t col = 0; col < d; ++col)
                c(row, col) = eig_m.eigenvectors(row, col) * (std::sqrt(m[col]) * row_scale);
        }
    }

    Theorem1Witness w;
    w.dim_a = da;
    w.dim_b = db;
    w.support_isometry = std::move(restricted_pair.second);
    w.u_a = eig_a.eigenvectors;
    w.v = eig_m.eigenvectors;
    w.lambda_a = lam_a;

    // Column sums of |C|^2 (bounded by the squared operator norm) and row
    // sums grouped by A index (each an exact partial trace identity).
    w.max_c_column_sum = 0.0;
    for (std::size_t col = 0; col < d; ++col) {
        double sum = 0.0;
        for (std::size_t row = 0; row < d; ++row) sum += std::norm(c(row, col));
        w.max_c_column_sum = std::max(w.max_c_column_sum, sum);
    }
    w.max_group_deviation = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        double group = 0.0;
        for (std::size_t k = 0; k < db; ++k)
            for (std::size_t col = 0; col < d; ++col) group += std::norm(c(i * db + k, col));
        w.max_group_deviation = std::max(w.max_group_deviation, std::abs(group - 1.0));
    }

    ComplexMatrix s(da, da);
    w.min_entry = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            double entry = 0.0;
            for (std::size_t k = 0; k < db; ++k) entry += std::norm(c(j * db + k, i));
            s(i, j) = entry;
            w.min_entry = std::min(w.min_entry, entry);
        }
    }
    w.max_row_sum = 0.0;
    w.max_col_sum = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < da; ++j) {
            row += s(i, j).real();
            col += s(j, i).real();
        }
        w.max_row_sum = std::max(w.max_row_sum, row);
        w.max_col_sum = std::max(w.max_col_sum, col);
    }

    const SpectrumVector lam_ab(hermitian_eigen(input.rho().symmetrized()).eigenvalues,
                                kStatePsdTol);
    w.residual_linear = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        double predicted = 0.0;
        for (std::size_t j = 0; j < da; ++j) predicted += s(i, j).real() * lam_a[j];
        w.residual_linear = std::max(w.residual_linear, std::abs(predicted - lam_ab[i]));
    }

    w.contraction_norm = operator_norm(c);
    w.c = std::move(c);
    w.s = std::move(s);

    const auto blown = [](double value, double bound) { return value > kWitnessBlowup * bound; };
    if (blown(w.contraction_norm - 1.0, kWitnessSumBound) ||
        blown(w.max_c_column_sum - 1.0, kWitnessSumBound) ||
        blown(w.max_group_deviation, kWitnessGroupBound) ||
        blown(-w.min_entry, kWitnessEntryBound) || blown(w.max_row_sum - 1.0, kWitnessSumBound) ||
        blown(w.max_col_sum - 1.0, kWitnessSumBound) ||
        blown(w.residual_linear, kWitnessLinearBound))
        throw Error(errc::numerical_failure,
                    "witness residuals out of range: linear " + std::to_string(w.residual_linear) +
                        ", row " + std::to_string(w.max_row_sum) + ", col " +
                        std::to_string(w.max_col_sum) + ", norm " +
                        std::to_string(w.contraction_norm));
    return w;
}

struct VerificationReport {
    bool ok = true;
    std::string first_failure;  // empty when ok
    double min_entry = 0.0;
    double max_row_sum = 0.0;
    double max_col_sum = 0.0;
    double contraction_norm = 0.0;
    double residual_linear = 0.0;
    double trace_gap_ab = 0.0;
    double trace_gap_a = 0.0;
    double min_chain_margin = 0.0;  // worst partial-sum margin, >= 0 when the chain holds
    double tol = kWitnessSumBound;
};

// Independent recheck of a built witness against the state it came from:
// substochasticity of S, the contraction bound, the linear relation against
// freshly computed spectra, equal traces, and the partial-sum chain that
// upgrades weak majorization to majorization. Throws naming the first
// failed check.
inline VerificationReport verify_witness(const Theorem1Witness& w, const BipartiteState& s,
                                         double tol = kWitnessSumBound) {
    VerificationReport r;
    r.tol = tol;
    const double loose = std::max(tol, kWitnessLinearBound);

    const StateSpectra sp = spectra(s);
    const std::size_t da = w.s.rows();
    if (!w.s.is_square() || da == 0 || da > sp.lambda_a.size() || w.dim_b != s.dim_b())
        throw Error(errc::witness_invalid, "witness does not match the state's dimensions");

    r.min_entry = 0.0;
    r.max_row_sum = 0.0;
    r.max_col_sum = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < da; ++j) {
            r.min_entry = std::min(r.min_entry, w.s(i, j).real());
            row += w.s(i, j).real();
            col += w.s(j, i).real();
        }
        r.max_row_sum = std::max(r.max_row_sum, row);
        r.max_col_sum = std::max(r.max_col_sum, col);
    }
    r.contraction_norm = operator_norm(w.c);

    r.residual_linear = 0.0;
    for (std::size_t i = 0; i < da; ++i) {
        double predicted = 0.0;
        for (std::size_t j = 0; j < da; ++j) predicted += w.s(i, j).real() * sp.lambda_a[j];
        r.residual_linear = std::max(r.residual_linear, std::abs(predicted - sp.lambda_ab[i]));
    }
    r.trace_gap_ab = std::abs(sp.lambda_ab.sum() - 1.0);
    r.trace_gap_a = std::abs(sp.lambda_a.sum() - 1.0);

    const MajorizationVerdict chain = majorizes(sp.lambda_a, sp.lambda_ab, loose);
    r.min_chain_margin = chain.margins.empty() ? 0.0 : *std::min_element(chain.margins.begin(),
                                                                         chain.margins.end());

    const bool substochastic = is_doubly_substochastic(w.s, tol);
    const auto fail = [&r](const std::string& what, double value) {
        r.ok = false;
        r.first_failure = what;
        throw Error(errc::witness_invalid, what + " (" + std::to_string(value) + ")");
    };
    if (r.min_entry < -tol || !substochastic) {
        if (r.min_entry < -tol) fail("negative witness entry", r.min_entry);
        if (r.max_row_sum > 1.0 + tol) fail("witness row sum", r.max_row_sum);
        fail("witness column sum", r.max_col_sum);
    }
    if (r.max_row_sum > 1.0 + tol) fail("witness row sum", r.max_row_sum);
    if (r.max_col_sum > 1.0 + tol) fail("witness column sum", r.max_col_sum);
    if (r.contraction_norm > 1.0 + tol) fail("contraction norm", r.contraction_norm);
    if (r.residual_linear > loose) fail("linear relation residual", r.residual_linear);
    if (r.trace_gap_ab > tol) fail("trace of the rho_AB spectrum", r.trace_gap_ab);
    if (r.trace_gap_a > tol) fail("trace of the rho_A spectrum", r.trace_gap_a);
    if (!chain.holds) fail("partial-sum chain", r.min_chain_margin);
    return r;
}

}  // namespace entspec

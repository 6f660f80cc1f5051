#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "entspec/complex_matrix.hpp"
#include "entspec/errors.hpp"

namespace entspec {

// Default absolute tolerance on partial sums of trace-normalized spectra.
inline constexpr double kMajorizationTol = 1e-9;
// Values in [-kSpectrumClampTol, 0) are eigensolver noise and clamp to zero;
// anything more negative is genuinely non-PSD input.
inline constexpr double kSpectrumClampTol = 1e-12;

// Nonnegative vector sorted descending; the carrier for eigenvalue spectra.
class SpectrumVector {
  public:
    SpectrumVector() = default;

    explicit SpectrumVector(std::vector<double> values, double clamp_tol = kSpectrumClampTol)
        : values_(std::move(values)) {
        std::sort(values_.begin(), values_.end(), std::greater<double>());
        for (double& v : values_) {
            if (v < 0.0) {
                if (v < -clamp_tol)
                    throw Error(errc::negative_spectrum,
                                "entry " + std::to_string(v) + " below clamp threshold");
                v = 0.0;
            }
        }
    }

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    double sum() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s;
    }

  private:
    std::vector<double> values_;
};

// Extend x with zeros up to length n. Appending zeros keeps the descending
// order, since all retained values are nonnegative.
inline SpectrumVector pad_spectrum(const SpectrumVector& x, std::size_t n) {
    if (n < x.size())
        throw Error(errc::target_too_small, "cannot pad length " + std::to_string(x.size()) +
                                                " down to " + std::to_string(n));
    std::vector<double> padded = x.values();
    padded.resize(n, 0.0);
    return SpectrumVector(std::move(padded));
}

struct MajorizationVerdict {
    enum class Reason { none, partial_sum, total_sum_mismatch };

    bool holds = false;
    // 1-based index of the first failing partial sum; 0 when the relation holds.
    std::size_t first_fail_k = 0;
    // margins[k-1] = sum_{i<=k} y_i - sum_{i<=k} x_i; negative means x exceeds y.
    std::vector<double> margins;
    Reason reason = Reason::none;

    std::string reason_name() const {
        switch (reason) {
            case Reason::none: return "NONE";
            case Reason::partial_sum: return "PARTIAL_SUM";
            case Reason::total_sum_mismatch: return "TOTAL_SUM_MISMATCH";
        }
        return "NONE";
    }
};

// Does y majorize x (x < y)? Vectors are padded to a common length; partial
// sums must satisfy sum_k x <= sum_k y + tol for k < n and the totals must
// agree within tol.
inline MajorizationVerdict majorizes(const SpectrumVector& y, const SpectrumVector& x,
                                     double tol = kMajorizationTol) {
    const std::size_t n = std::max(x.size(), y.size());
    const SpectrumVector xp = pad_spectrum(x, n);
    const SpectrumVector yp = pad_spectrum(y, n);

    MajorizationVerdict verdict;
    verdict.margins.resize(n);
    verdict.holds = true;
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sx += xp[k];
        sy += yp[k];
        verdict.margins[k] = sy - sx;
        const bool last = (k + 1 == n);
        const bool bad = last ? std::abs(verdict.margins[k]) > tol : verdict.margins[k] < -tol;
        if (bad && verdict.holds) {
            verdict.holds = false;
            verdict.first_fail_k = k + 1;
            verdict.reason = last ? MajorizationVerdict::Reason::total_sum_mismatch
                                  : MajorizationVerdict::Reason::partial_sum;
        }
    }
    return verdict;
}

// Weak submajorization x <_w y: every partial sum including the total obeys
// sum_k x <= sum_k y + tol.
inline bool weakly_submajorizes(const SpectrumVector& y, const SpectrumVector& x,
                                double tol = kMajorizationTol) {
    const std::size_t n = std::max(x.size(), y.size());
    const SpectrumVector xp = pad_spectrum(x, n);
    const SpectrumVector yp = pad_spectrum(y, n);
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sx += xp[k];
        sy += yp[k];
        if (sx > sy + tol) return false;
    }
    return true;
}

namespace detail {

// Entrywise real view of a nominally real matrix; imaginary parts beyond tol
// are an error.
inline std::vector<double> real_entries_or_throw(const ComplexMatrix& s, double tol) {
    if (!s.is_square()) throw Error(errc::not_square, "stochasticity test needs a square matrix");
    std::vector<double> re;
    re.reserve(s.rows() * s.cols());
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) {
            if (std::abs(s(i, j).imag()) > tol)
                throw Error(errc::not_real, "imaginary part at (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is " +
                                                std::to_string(s(i, j).imag()));
            re.push_back(s(i, j).real());
        }
    return re;
}

}  // namespace detail

// Nonnegative entries, every row and column sum at most one.
inline bool is_doubly_substochastic(const ComplexMatrix& s, double tol = kMajorizationTol) {
    const std::vector<double> re = detail::real_entries_or_throw(s, tol);
    const std::size_t n = s.rows();
    for (double v : re)
        if (v < -tol) return false;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += re[i * n + j];
            col += re[j * n + i];
        }
        if (row > 1.0 + tol || col > 1.0 + tol) return false;
    }
    return true;
}

// Nonnegative entries, every row and column sum equal to one within tol.
inline bool is_doubly_stochastic(const ComplexMatrix& s, double tol = kMajorizationTol) {
    const std::vector<double> re = detail::real_entries_or_throw(s, tol);
    const std::size_t n = s.rows();
    for (double v : re)
        if (v < -tol) return false;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += re[i * n + j];
            col += re[j * n + i];
        }
        if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
    }
    return true;
}

}  // namespace entspec

#pragma once

#include <stdexcept>
#include <string>

namespace entspec {

// Machine-checkable failure categories. Every throwing operation in the
// library raises Error with one of these codes; the CLI maps them to exit
// codes (invalid input vs. numerical failure).
enum class errc {
    not_square,
    not_hermitian,
    not_psd,
    no_convergence,
    target_too_small,
    not_real,
    negative_spectrum,
    bad_dimension,
    bad_fidelity,
    bad_alpha,
    bad_f,
    bad_rank,
    bad_norm,
    bad_length,
    bad_parameter,
    rank_zero,
    order_violated,
    a_not_psd,
    reduction_violated,
    witness_invalid,
    numerical_failure,
    invalid_state,
    parse_error,
};

inline const char* errc_name(errc code) {
    switch (code) {
        case errc::not_square: return "NOT_SQUARE";
        case errc::not_hermitian: return "NOT_HERMITIAN";
        case errc::not_psd: return "NOT_PSD";
        case errc::no_convergence: return "NO_CONVERGENCE";
        case errc::target_too_small: return "TARGET_TOO_SMALL";
        case errc::not_real: return "NOT_REAL";
        case errc::negative_spectrum: return "NEGATIVE_SPECTRUM";
        case errc::bad_dimension: return "BAD_DIMENSION";
        case errc::bad_fidelity: return "BAD_FIDELITY";
        case errc::bad_alpha: return "BAD_ALPHA";
        case errc::bad_f: return "BAD_F";
        case errc::bad_rank: return "BAD_RANK";
        case errc::bad_norm: return "BAD_NORM";
        case errc::bad_length: return "BAD_LENGTH";
        case errc::bad_parameter: return "BAD_PARAMETER";
        case errc::rank_zero: return "RANK_ZERO";
        case errc::order_violated: return "ORDER_VIOLATED";
        case errc::a_not_psd: return "A_NOT_PSD";
        case errc::reduction_violated: return "REDUCTION_VIOLATED";
        case errc::witness_invalid: return "WITNESS_INVALID";
        case errc::numerical_failure: return "NUMERICAL_FAILURE";
        case errc::invalid_state: return "INVALID_STATE";
        case errc::parse_error: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

    // Failures of the numeric machinery itself, as opposed to bad input.
    bool is_numerical() const noexcept {
        return code_ == errc::no_convergence || code_ == errc::numerical_failure ||
               code_ == errc::witness_invalid;
    }

  private:
    errc code_;
};

}  // namespace entspec

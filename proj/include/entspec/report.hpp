#pragma once

#include <cstddef>
#include <ctime>
#include <sstream>
#include <string>
#include <vector>

#include "entspec/criteria.hpp"
#include "entspec/state_io.hpp"
#include "entspec/version.hpp"

namespace entspec {

// Shortest representation that parses back to the same double, courtesy of
// the JSON serializer. Used for text output too so both formats agree.
inline std::string fmt_double(double x) { return Json(x).dump(); }

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct WitnessSummary {
    bool applicable = false;
    std::string reason;  // error name when not applicable
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    bool verified = false;
    double residual_linear = 0.0;
    double max_row_sum = 0.0;
    double max_col_sum = 0.0;
    double min_entry = 0.0;
    double contraction_norm = 0.0;
    double max_c_column_sum = 0.0;
    double max_group_deviation = 0.0;
    std::vector<std::vector<double>> s;
};

struct AnalysisReport {
    std::string input;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    CriterionReport criteria;
    std::vector<double> lambda_ab, lambda_a, lambda_b;
    bool with_witness = false;
    WitnessSummary witness;
    Json generator;         // echoed from the input file, null otherwise
    std::string timestamp;  // empty when suppressed
    std::string version = kVersion;
};

// Runs every criterion on the state; the witness pipeline only on request.
inline AnalysisReport analyze_state(const BipartiteState& s, const std::string& input,
                                    double tol_psd, double tol_major, bool with_witness,
                                    bool reproducible, const Json& generator = Json()) {
    AnalysisReport r;
    r.input = input;
    r.dim_a = s.dim_a();
    r.dim_b = s.dim_b();
    r.criteria = distillability_verdict(s, tol_psd, tol_major);
    const StateSpectra sp = spectra(s);
    r.lambda_ab = sp.lambda_ab.values();
    r.lambda_a = sp.lambda_a.values();
    r.lambda_b = sp.lambda_b.values();
    r.with_witness = with_witness;
    if (with_witness) {
        try {
            const Theorem1Witness w = build_theorem1_witness(s);
            verify_witness(w, s);
            r.witness.applicable = true;
            r.witness.verified = true;
            r.witness.dim_a = w.dim_a;
            r.witness.dim_b = w.dim_b;
            r.witness.residual_linear = w.residual_linear;
            r.witness.max_row_sum = w.max_row_sum;
            r.witness.max_col_sum = w.max_col_sum;
            r.witness.min_entry = w.min_entry;
            r.witness.contraction_norm = w.contraction_norm;
            r.witness.max_c_column_sum = w.max_c_column_sum;
            r.witness.max_group_deviation = w.max_group_deviation;
            r.witness.s.assign(w.dim_a, std::vector<double>(w.dim_a, 0.0));
            for (std::size_t i = 0; i < w.dim_a; ++i)
                for (std::size_t j = 0; j < w.dim_a; ++j) r.witness.s[i][j] = w.s(i, j).real();
        } catch (const Error& e) {
            if (e.code() != errc::reduction_violated) throw;
            r.witness.applicable = false;
            r.witness.reason = errc_name(e.code());
        }
    }
    r.generator = generator;
    if (!reproducible) r.timestamp = utc_timestamp();
    return r;
}

namespace detail {

inline Json majorization_to_json(const MajorizationVerdict& v) {
    Json j;
    j["holds"] = v.holds;
    j["first_fail_k"] = v.first_fail_k;
    j["reason"] = v.reason_name();
    j["margins"] = v.margins;
    return j;
}

}  // namespace detail

inline Json analysis_to_json(const AnalysisReport& r) {
    Json j;
    j["tool"] = kToolName;
    j["version"] = r.version;
    if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
    j["input"] = r.input;
    j["dim_a"] = r.dim_a;
    j["dim_b"] = r.dim_b;
    j["tolerances"] = {{"psd", r.criteria.tol_psd}, {"major", r.criteria.tol_major}};
    j["reduction"] = {{"a_holds", r.criteria.reduction_a_holds},
                      {"a_min_eig", r.criteria.reduction_a_min_eig},
                      {"b_holds", r.criteria.reduction_b_holds},
                      {"b_min_eig", r.criteria.reduction_b_min_eig}};
    j["majorization"] = {{"a", detail::majorization_to_json(r.criteria.majorization_a)},
                         {"b", detail::majorization_to_json(r.criteria.majorization_b)}};
    j["distillable_by_majorization"] = r.criteria.distillable_by_majorization;
    j["spectra"] = {{"lambda_ab", r.lambda_ab}, {"lambda_a", r.lambda_a}, {"lambda_b", r.lambda_b}};
    if (r.with_witness) {
        Json w;
        w["applicable"] = r.witness.applicable;
        if (!r.witness.applicable) {
            w["reason"] = r.witness.reason;
        } else {
            w["verified"] = r.witness.verified;
            w["support_dim_a"] = r.witness.dim_a;
            w["dim_b"] = r.witness.dim_b;
            w["residual_linear"] = r.witness.residual_linear;
            w["max_row_sum"] = r.witness.max_row_sum;
            w["max_col_sum"] = r.witness.max_col_sum;
            w["min_entry"] = r.witness.min_entry;
            w["contraction_norm"] = r.witness.contraction_norm;
            w["max_c_column_sum"] = r.witness.max_c_column_sum;
            w["max_group_deviation"] = r.witness.max_group_deviation;
            w["s"] = r.witness.s;
        }
        j["witness"] = std::move(w);
    }
    if (!r.generator.is_null()) {
        j["generator"] = r.generator;
        if (r.generator.is_object() && r.generator.contains("seed"))
            j["seed"] = r.generator.at("seed");
    }
    return j;
}

namespace detail {

inline std::string spectrum_line(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += fmt_double(v[i]);
    }
    return out;
}

inline std::string majorization_line(const MajorizationVerdict& v) {
    if (v.holds) return "holds";
    std::string out = "fails";
    if (v.first_fail_k > 0) {
        out += " at k=" + std::to_string(v.first_fail_k);
        out += " (margin " + fmt_double(v.margins[v.first_fail_k - 1]) + ")";
    }
    return out;
}

}  // namespace detail

inline std::string analysis_to_text(const AnalysisReport& r) {
    std::ostringstream out;
    out << kToolName << " " << r.version << "\n";
    if (!r.timestamp.empty()) out << "time: " << r.timestamp << "\n";
    out << "input: " << r.input << "\n";
    out << "dims: " << r.dim_a << "x" << r.dim_b << "\n";
    out << "tolerances: psd " << fmt_double(r.criteria.tol_psd) << ", major "
        << fmt_double(r.criteria.tol_major) << "\n";
    out << "reduction A: " << (r.criteria.reduction_a_holds ? "holds" : "violated")
        << " (min eigenvalue " << fmt_double(r.criteria.reduction_a_min_eig) << ")\n";
    out << "reduction B: " << (r.criteria.reduction_b_holds ? "holds" : "violated")
        << " (min eigenvalue " << fmt_double(r.criteria.reduction_b_min_eig) << ")\n";
    out << "majorization A: " << detail::majorization_line(r.criteria.majorization_a) << "\n";
    out << "majorization B: " << detail::majorization_line(r.criteria.majorization_b) << "\n";
    out << "distillable by majorization: "
        << (r.criteria.distillable_by_majorization ? "yes" : "no") << "\n";
    out << "lambda(rho_AB): " << detail::spectrum_line(r.lambda_ab) << "\n";
    out << "lambda(rho_A): " << detail::spectrum_line(r.lambda_a) << "\n";
    out << "lambda(rho_B): " << detail::spectrum_line(r.lambda_b) << "\n";
    if (r.with_witness) {
        if (!r.witness.applicable) {
            out << "witness: not applicable (" << r.witness.reason << ")\n";
        } else {
            out << "witness: support " << r.witness.dim_a << "x" << r.witness.dim_b << ", "
                << (r.witness.verified ? "verified" : "unverified") << "\n";
            out << "  contraction norm: " << fmt_double(r.witness.contraction_norm) << "\n";
            out << "  S row sum max: " << fmt_double(r.witness.max_row_sum) << ", col sum max: "
                << fmt_double(r.witness.max_col_sum) << ", min entry: "
                << fmt_double(r.witness.min_entry) << "\n";
            out << "  linear residual: " << fmt_double(r.witness.residual_linear) << "\n";
            out << "  |C|^2 column sum max: " << fmt_double(r.witness.max_c_column_sum) << "\n";
            out << "  |C|^2 block row sum deviation: " << fmt_double(r.witness.max_group_deviation)
                << "\n";
        }
    }
    if (r.generator.is_object() && r.generator.contains("seed"))
        out << "seed: " << r.generator.at("seed").dump() << "\n";
    return out.str();
}

}  // namespace entspec

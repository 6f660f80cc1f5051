#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "entspec/criteria.hpp"
#include "entspec/report.hpp"
#include "entspec/rng.hpp"
#include "entspec/state_io.hpp"
#include "entspec/states.hpp"
#include "entspec/version.hpp"

namespace entspec {

inline std::pair<std::size_t, std::size_t> parse_dims(const std::string& text) {
    const Error bad(errc::bad_parameter, "--dims must look like 2x3, got '" + text + "'");
    const auto sep = text.find('x');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size()) throw bad;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (i != sep && (text[i] < '0' || text[i] > '9')) throw bad;
    std::size_t da = 0, db = 0;
    try {
        da = std::stoul(text.substr(0, sep));
        db = std::stoul(text.substr(sep + 1));
    } catch (const std::exception&) {
        throw bad;
    }
    if (da < 1 || db < 1) throw Error(errc::bad_parameter, "--dims values must be at least 1");
    return {da, db};
}

struct AnalyzeOpts {
    std::string state_path;
    std::string format = "text";
    double tol_psd = kPsdTol;
    double tol_major = kMajorizationTol;
    bool fail_on_distillable = false;
    bool reproducible = false;
    bool witness = false;
};

inline int run_analyze(const AnalyzeOpts& o) {
    const StateDocument doc = load_state_file(o.state_path);
    const AnalysisReport report = analyze_state(doc.state, o.state_path, o.tol_psd, o.tol_major,
                                                o.witness, o.reproducible, doc.generator);
    if (o.format == "json")
        std::cout << analysis_to_json(report).dump(2) << "\n";
    else
        std::cout << analysis_to_text(report);
    if (o.fail_on_distillable && report.criteria.distillable_by_majorization) return 4;
    return 0;
}

struct GenerateOpts {
    std::string family;
    std::string dims = "2x2";
    std::size_t d = 2;
    double fidelity = 0.5;
    std::size_t rank = 0;  // 0 means full rank
    std::size_t terms = 3;
    std::uint64_t seed = 0;
    std::string out_path;  // empty means stdout
};

inline int run_generate(const GenerateOpts& o) {
    Json meta;
    meta["family"] = o.family;
    BipartiteState state = bell_state();  // placeholder, reassigned below

    if (o.family == "bell") {
        state = bell_state();
    } else if (o.family == "isotropic") {
        state = isotropic_state(o.d, o.fidelity);
        meta["d"] = o.d;
        meta["fidelity"] = o.fidelity;
    } else if (o.family == "mems") {
        state = mems_rank2_state(o.fidelity);
        meta["fidelity"] = o.fidelity;
    } else if (o.family == "maxcorr") {
        Rng rng(o.seed);
        state = maximally_correlated_state(random_density_matrix(rng, o.d, o.d));
        meta["d"] = o.d;
        meta["seed"] = o.seed;
        meta["rng"] = kRngAlgorithm;
    } else if (o.family == "random") {
        const auto [da, db] = parse_dims(o.dims);
        const std::size_t rank = o.rank == 0 ? da * db : o.rank;
        state = BipartiteState(da, db, random_density_matrix(da * db, rank, o.seed));
        meta["dims"] = o.dims;
        meta["rank"] = rank;
        meta["seed"] = o.seed;
        meta["rng"] = kRngAlgorithm;
    } else if (o.family == "separable") {
        const auto [da, db] = parse_dims(o.dims);
        state = random_separable_state(da, db, o.terms, o.seed);
        meta["dims"] = o.dims;
        meta["terms"] = o.terms;
        meta["seed"] = o.seed;
        meta["rng"] = kRngAlgorithm;
    } else if (o.family == "pure") {
        const auto [da, db] = parse_dims(o.dims);
        Rng rng(o.seed);
        std::vector<Complex> amps(da * db);
        double norm2 = 0.0;
        for (Complex& z : amps) {
            z = rng.complex_gaussian();
            norm2 += std::norm(z);
        }
        for (Complex& z : amps) z /= std::sqrt(norm2);
        state = pure_state(amps, da, db);
        meta["dims"] = o.dims;
        meta["seed"] = o.seed;
        meta["rng"] = kRngAlgorithm;
    } else {
        throw Error(errc::bad_parameter, "unknown family '" + o.family + "'");
    }

    meta["tool"] = kToolName;
    meta["version"] = kVersion;
    if (o.out_path.empty())
        std::cout << serialize_state_file(state, meta);
    else
        save_state_file(o.out_path, state, meta);
    return 0;
}

struct VerifyOpts {
    std::string ensemble;
    std::string dims = "2x2";
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double tol_psd = kPsdTol;
    double tol_major = kMajorizationTol;
};

namespace detail {

struct VerifyCounts {
    std::size_t checked = 0;
    std::size_t reduction_held = 0;
    std::size_t majorization_held = 0;
    std::size_t witness_verified = 0;
    std::size_t violations = 0;
};

// Build and verify the witness for a state that passed reduction on the A
// side; a failure here is evidence against the construction, not bad input.
inline void witness_round(const BipartiteState& s, double tol_major, VerifyCounts& counts) {
    try {
        const Theorem1Witness w = build_theorem1_witness(s);
        verify_witness(w, s, std::max(tol_major, kWitnessSumBound));
        ++counts.witness_verified;
    } catch (const Error& e) {
        if (e.code() == errc::reduction_violated || e.code() == errc::witness_invalid)
            ++counts.violations;
        else
            throw;
    }
}

}  // namespace detail

inline int run_verify_theorem1(const VerifyOpts& o) {
    const auto [da, db] = parse_dims(o.dims);
    if (o.trials < 1) throw Error(errc::bad_parameter, "--trials must be at least 1");
    detail::VerifyCounts counts;

    std::cout << "ensemble: " << o.ensemble << "\n";
    std::cout << "dims: " << da << "x" << db << "\n";
    std::cout << "seed: " << o.seed << "\n";

    if (o.ensemble == "separable") {
        std::cout << "trials: " << o.trials << "\n";
        for (std::size_t t = 0; t < o.trials; ++t) {
            const BipartiteState s = random_separable_state(da, db, 1 + t % 4, o.seed + t);
            const ReductionCheck red = check_reduction(s, o.tol_psd);
            const MajorizationCheck maj = check_majorization_criterion(s, o.tol_major);
            ++counts.checked;
            const bool red_ok = red.a_holds && red.b_holds;
            const bool maj_ok = maj.a.holds && maj.b.holds;
            if (red_ok) ++counts.reduction_held;
            if (maj_ok) ++counts.majorization_held;
            if (!red_ok || !maj_ok) ++counts.violations;
            if (red.a_holds) detail::witness_round(s, o.tol_major, counts);
        }
    } else if (o.ensemble == "random-filtered") {
        std::cout << "trials: " << o.trials << "\n";
        for (std::size_t t = 0; t < o.trials; ++t) {
            const BipartiteState s(da, db, random_density_matrix(da * db, da * db, o.seed + t));
            const ReductionCheck red = check_reduction(s, o.tol_psd);
            if (!red.a_holds) continue;
            ++counts.checked;
            ++counts.reduction_held;
            const MajorizationCheck maj = check_majorization_criterion(s, o.tol_major);
            if (maj.a.holds)
                ++counts.majorization_held;
            else
                ++counts.violations;
            detail::witness_round(s, o.tol_major, counts);
        }
    } else if (o.ensemble == "isotropic-scan") {
        if (da != db)
            throw Error(errc::bad_parameter, "isotropic-scan needs square dims, got " + o.dims);
        const double threshold = 1.0 / static_cast<double>(da);
        double last_holding = -1.0;
        for (int step = 0; step <= 100; ++step) {
            const double f = step / 100.0;
            const BipartiteState s = isotropic_state(da, f);
            const ReductionCheck red = check_reduction(s, o.tol_psd);
            const MajorizationCheck maj = check_majorization_criterion(s, o.tol_major);
            ++counts.checked;
            if (red.a_holds && red.b_holds) ++counts.reduction_held;
            const bool maj_ok = maj.a.holds && maj.b.holds;
            if (maj_ok) {
                ++counts.majorization_held;
                last_holding = f;
            }
            const bool expect_ok = f <= threshold + 1e-12;
            if (maj_ok != expect_ok) ++counts.violations;
            if (red.a_holds) detail::witness_round(s, o.tol_major, counts);
        }
        std::cout << "transition at F = " << fmt_double(last_holding)
                  << " (last fidelity where majorization holds; 1/d = " << fmt_double(threshold)
                  << ")\n";
    } else if (o.ensemble == "maxcorr") {
        if (da != db)
            throw Error(errc::bad_parameter, "maxcorr needs square dims, got " + o.dims);
        std::cout << "trials: " << o.trials << "\n";
        for (std::size_t t = 0; t < o.trials; ++t) {
            Rng rng(o.seed + t);
            const ComplexMatrix alpha = random_density_matrix(rng, da, da);
            const BipartiteState s = maximally_correlated_state(alpha);
            const CriterionReport rep = distillability_verdict(s, o.tol_psd, o.tol_major);
            ++counts.checked;
            if (rep.reduction_a_holds && rep.reduction_b_holds) ++counts.reduction_held;
            if (rep.majorization_a.holds && rep.majorization_b.holds) ++counts.majorization_held;
            // The local spectrum is the diagonal of alpha, so it is always
            // majorized by the global spectrum.
            const StateSpectra sp = spectra(s);
            if (!majorizes(sp.lambda_ab, sp.lambda_a, o.tol_major).holds) ++counts.violations;
            double max_off = 0.0;
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t j = 0; j < da; ++j)
                    if (i != j) max_off = std::max(max_off, std::abs(alpha(i, j)));
            if (max_off >= 0.05 && !rep.distillable_by_majorization) ++counts.violations;
            if (rep.reduction_a_holds) detail::witness_round(s, o.tol_major, counts);
        }
    } else {
        throw Error(errc::bad_parameter, "unknown ensemble '" + o.ensemble + "'");
    }

    std::cout << "checked: " << counts.checked << "\n";
    std::cout << "reduction-held: " << counts.reduction_held << "\n";
    std::cout << "majorization-held: " << counts.majorization_held << "\n";
    std::cout << "witness-verified: " << counts.witness_verified << "\n";
    std::cout << "violations: " << counts.violations << "\n";
    return counts.violations == 0 ? 0 : 1;
}

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"reduction and majorization criteria for bipartite quantum states"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    AnalyzeOpts an;
    CLI::App* analyze = app.add_subcommand("analyze", "run all criteria on a state file");
    analyze->add_option("--state", an.state_path, "path to a state JSON file")->required();
    analyze->add_option("--format", an.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    analyze->add_option("--tol-psd", an.tol_psd, "tolerance for operator inequalities")
        ->capture_default_str();
    analyze->add_option("--tol-major", an.tol_major, "tolerance for majorization margins")
        ->capture_default_str();
    analyze->add_flag("--fail-on-distillable", an.fail_on_distillable,
                      "exit 4 when the majorization criterion certifies distillability");
    analyze->add_flag("--reproducible", an.reproducible, "omit the timestamp from the report");
    analyze->add_flag("--witness", an.witness, "build and verify the substochastic witness");

    GenerateOpts gen;
    CLI::App* generate = app.add_subcommand("generate", "write a state file for a named family");
    generate->add_option("--family", gen.family, "state family")
        ->required()
        ->check(CLI::IsMember({"isotropic", "maxcorr", "mems", "random", "separable", "bell",
                               "pure"}));
    generate->add_option("--dims", gen.dims, "local dimensions as NxM (random, separable, pure)")
        ->capture_default_str();
    generate->add_option("--d", gen.d, "local dimension (isotropic, maxcorr)")
        ->capture_default_str();
    generate->add_option("--fidelity", gen.fidelity, "fidelity parameter (isotropic, mems)")
        ->capture_default_str();
    generate->add_option("--rank", gen.rank, "rank for random states, 0 = full")
        ->capture_default_str();
    generate->add_option("--terms", gen.terms, "product terms in separable mixtures")
        ->capture_default_str();
    generate->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    generate->add_option("--out", gen.out_path, "output path (default stdout)");

    VerifyOpts ver;
    CLI::App* verify = app.add_subcommand("verify-theorem1",
                                          "sample an ensemble and check reduction implies "
                                          "majorization, with witnesses");
    verify->add_option("--ensemble", ver.ensemble, "state ensemble")
        ->required()
        ->check(CLI::IsMember({"separable", "random-filtered", "isotropic-scan", "maxcorr"}));
    verify->add_option("--dims", ver.dims, "local dimensions as NxM")->capture_default_str();
    verify->add_option("--trials", ver.trials, "number of sampled states")
        ->capture_default_str();
    verify->add_option("--seed", ver.seed, "base seed; trial t uses seed + t")
        ->capture_default_str();
    verify->add_option("--tol-psd", ver.tol_psd, "tolerance for operator inequalities")
        ->capture_default_str();
    verify->add_option("--tol-major", ver.tol_major, "tolerance for majorization margins")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(an);
        if (generate->parsed()) return run_generate(gen);
        return run_verify_theorem1(ver);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_numerical() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace entspec

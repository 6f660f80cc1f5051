// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "entspec/entspec.hpp"

using namespace entspec;

namespace {

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            err << "line " << __LINE__ << ": " << #cond;         \
            return false;                                        \
        }                                                        \
    } while (0)

#define CHECK_MSG(cond, detail)                                  \
    do {                                                         \
        if (!(cond)) {                                           \
            err << "line " << __LINE__ << ": " << detail;        \
            return false;                                        \
        }                                                        \
    } while (0)

// The separable corpus shared by criteria 1 and 2: 500 states cycling
// through dims 2x2, 2x3, 3x3, fully determined by the trial index.
BipartiteState separable_trial(std::size_t t) {
    static const std::size_t dims[3][2] = {{2, 2}, {2, 3}, {3, 3}};
    const std::size_t da = dims[t % 3][0];
    const std::size_t db = dims[t % 3][1];
    return random_separable_state(da, db, 1 + t % 4, 1000 + t);
}

// General random states filtered on reduction-A; the 2x2 pass rate is
// around a quarter, so 1000 draws comfortably yield the 100 required.
std::vector<BipartiteState> filtered_corpus(std::size_t want) {
    std::vector<BipartiteState> out;
    for (std::size_t t = 0; t < 1000 && out.size() < want; ++t) {
        BipartiteState s(2, 2, random_density_matrix(4, 4, 5000 + t));
        if (check_reduction(s).a_holds) out.push_back(std::move(s));
    }
    return out;
}

bool criterion1(std::ostream& err) {
    for (std::size_t t = 0; t < 500; ++t) {
        const BipartiteState s = separable_trial(t);
        const ReductionCheck red = check_reduction(s);
        CHECK_MSG(red.a_min_eig >= -1e-9 && red.b_min_eig >= -1e-9,
                  "separable trial " << t << " violates reduction, min eig "
                                     << std::min(red.a_min_eig, red.b_min_eig));
        const MajorizationCheck maj = check_majorization_criterion(s, 1e-8);
        CHECK_MSG(maj.a.holds && maj.b.holds,
                  "separable trial " << t << " violates majorization");
    }
    const std::vector<BipartiteState> filtered = filtered_corpus(100);
    CHECK_MSG(filtered.size() >= 100, "only " << filtered.size() << " filtered states");
    for (std::size_t t = 0; t < filtered.size(); ++t) {
        const MajorizationCheck maj = check_majorization_criterion(filtered[t], 1e-8);
        CHECK_MSG(maj.a.holds, "filtered state " << t << " fails majorization-A at k="
                                                 << maj.a.first_fail_k);
    }
    return true;
}

bool witness_bounds_ok(const BipartiteState& s, std::size_t t, std::ostream& err) {
    const Theorem1Witness w = build_theorem1_witness(s);
    CHECK_MSG(w.contraction_norm <= 1.0 + 1e-9, "state " << t << ": |C| = " << w.contraction_norm);
    CHECK_MSG(w.min_entry >= -1e-12, "state " << t << ": min S entry " << w.min_entry);
    CHECK_MSG(w.max_row_sum <= 1.0 + 1e-9, "state " << t << ": row sum " << w.max_row_sum);
    CHECK_MSG(w.max_col_sum <= 1.0 + 1e-9, "state " << t << ": col sum " << w.max_col_sum);
    CHECK_MSG(w.residual_linear <= 1e-8, "state " << t << ": residual " << w.residual_linear);
    CHECK_MSG(w.max_group_deviation <= 1e-8,
              "state " << t << ": group sum off by " << w.max_group_deviation);
    verify_witness(w, s);
    return true;
}

bool criterion2(std::ostream& err) {
    for (std::size_t t = 0; t < 500; ++t) {
        const BipartiteState s = separable_trial(t);
        if (!check_reduction(s).a_holds) continue;
        if (!witness_bounds_ok(s, t, err)) return false;
    }
    const std::vector<BipartiteState> filtered = filtered_corpus(100);
    for (std::size_t t = 0; t < filtered.size(); ++t)
        if (!witness_bounds_ok(filtered[t], 500 + t, err)) return false;
    return true;
}

bool criterion3(std::ostream& err) {
    for (std::size_t d = 2; d <= 3; ++d) {
        const double threshold = 1.0 / static_cast<double>(d);
        for (int step = 0; step <= 100; ++step) {
            const double f = step / 100.0;
            const BipartiteState s = isotropic_state(d, f);

            const StateSpectra sp = spectra(s);
            const double tail = (1.0 - f) / (static_cast<double>(d) * d - 1.0);
            const double top = std::max(f, tail);
            CHECK_MSG(std::abs(sp.lambda_ab[0] - top) <= 1e-12,
                      "d=" << d << " F=" << f << ": top eigenvalue " << sp.lambda_ab[0]);
            CHECK_MSG(std::abs(sp.lambda_ab[sp.lambda_ab.size() - 1] - std::min(f, tail)) <= 1e-12,
                      "d=" << d << " F=" << f << ": bottom eigenvalue");

            const MajorizationCheck maj = check_majorization_criterion(s);
            const bool holds = maj.a.holds && maj.b.holds;
            const bool expect = f <= threshold + 1e-12;
            CHECK_MSG(holds == expect, "d=" << d << " F=" << f << ": majorization "
                                            << (holds ? "holds" : "fails") << ", expected "
                                            << (expect ? "holds" : "fails"));
        }
        // Exact boundary: F = 1/d sits on the edge with a vanishing margin.
        const MajorizationCheck edge = check_majorization_criterion(isotropic_state(d, threshold));
        CHECK_MSG(edge.a.holds, "d=" << d << ": boundary state fails");
        CHECK_MSG(std::abs(edge.a.margins.front()) <= 1e-9,
                  "d=" << d << ": boundary margin " << edge.a.margins.front());
    }
    return true;
}

bool criterion4(std::ostream& err) {
    std::size_t found = 0;
    for (std::uint64_t seed = 0; found < 100 && seed < 400; ++seed) {
        const std::size_t d = 2 + seed % 2;
        Rng rng(9000 + seed);
        const ComplexMatrix alpha = random_density_matrix(rng, d, d);
        double max_off = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (i != j) max_off = std::max(max_off, std::abs(alpha(i, j)));

        const BipartiteState s = maximally_correlated_state(alpha);
        const StateSpectra sp = spectra(s);
        CHECK_MSG(majorizes(sp.lambda_ab, sp.lambda_a).holds,
                  "seed " << seed << ": diagonal not majorized by spectrum");
        if (max_off < 0.05) continue;
        ++found;
        const CriterionReport rep = distillability_verdict(s);
        CHECK_MSG(rep.distillable_by_majorization, "seed " << seed << ": not flagged distillable");
    }
    CHECK_MSG(found >= 100, "only " << found << " off-diagonal alphas sampled");

    // Diagonal alpha: a classically correlated state; the global and local
    // spectra coincide, so every margin collapses to zero.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t d = 2 + seed % 2;
        Rng rng(seed);
        ComplexMatrix alpha(d, d);
        double total = 0.0;
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) total += p[i] = rng.uniform_pos();
        for (std::size_t i = 0; i < d; ++i) alpha(i, i) = p[i] / total;
        const MajorizationCheck maj =
            check_majorization_criterion(maximally_correlated_state(alpha));
        CHECK(maj.a.holds && maj.b.holds);
        for (const double m : maj.a.margins)
            CHECK_MSG(std::abs(m) <= 1e-9, "seed " << seed << ": margin " << m);
    }
    return true;
}

bool criterion5(std::ostream& err) {
    const BipartiteState s = mems_rank2_state(0.5);
    const StateSpectra sp = spectra(s);
    CHECK(std::abs(sp.lambda_ab[0] - 0.5) <= 1e-10);
    CHECK(std::abs(sp.lambda_ab[1] - 0.5) <= 1e-10);
    CHECK(std::abs(sp.lambda_ab[2]) <= 1e-10);
    CHECK(std::abs(sp.lambda_ab[3]) <= 1e-10);
    for (const SpectrumVector* local : {&sp.lambda_a, &sp.lambda_b}) {
        CHECK(std::abs((*local)[0] - 0.75) <= 1e-10);
        CHECK(std::abs((*local)[1] - 0.25) <= 1e-10);
    }

    const MajorizationCheck maj = check_majorization_criterion(s);
    CHECK_MSG(maj.a.holds && maj.b.holds, "majorization should hold");
    CHECK_MSG(std::abs(maj.a.margins.front() - 0.25) <= 1e-10,
              "k=1 margin " << maj.a.margins.front());
    CHECK(std::abs(maj.a.margins.back()) <= 1e-10);

    const ReductionCheck red = check_reduction(s);
    CHECK_MSG(!red.a_holds && red.a_min_eig <= -1e-3, "reduction min eig " << red.a_min_eig);
    return true;
}

bool criterion6(std::ostream& err) {
    const ReductionCheck red = check_reduction(bell_state());
    CHECK_MSG(std::abs(red.a_min_eig + 0.5) <= 1e-12, "A min eig " << red.a_min_eig);
    CHECK_MSG(std::abs(red.b_min_eig + 0.5) <= 1e-12, "B min eig " << red.b_min_eig);

    const MajorizationCheck maj = check_majorization_criterion(bell_state());
    CHECK(!maj.a.holds && maj.a.first_fail_k == 1);
    CHECK_MSG(std::abs(std::abs(maj.a.margins.front()) - 0.5) <= 1e-12,
              "k=1 margin " << maj.a.margins.front());
    CHECK(!maj.b.holds && maj.b.first_fail_k == 1);
    return true;
}

bool criterion7(std::ostream& err) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(7000 + seed);
        const BipartiteState small(2, 2, random_density_matrix(rng, 4, 4));
        const ComplexMatrix iso = random_isometry(rng, 3, 2);
        const BipartiteState embedded = embed_a(small, iso);

        const auto [restricted, support] = restrict_to_support(embedded);
        CHECK_MSG(restricted.dim_a() == 2, "seed " << seed << ": support rank "
                                                   << restricted.dim_a());
        const BipartiteState back = embed_a(restricted, support);
        const double residual = distance_frobenius(back.rho(), embedded.rho());
        CHECK_MSG(residual <= 1e-9, "seed " << seed << ": round trip residual " << residual);

        // Whatever the projection discards must be negligible.
        const ComplexMatrix proj = kron(support * support.dagger(), ComplexMatrix::identity(2));
        const ComplexMatrix discarded = embedded.rho() - proj * embedded.rho() * proj;
        CHECK_MSG(discarded.frobenius_norm() <= 1e-9,
                  "seed " << seed << ": discarded norm " << discarded.frobenius_norm());
    }
    return true;
}

bool criterion8(std::ostream& err) {
    Rng rng(42);
    for (std::size_t t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 15;
        ComplexMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.complex_gaussian();
        a = a.symmetrized();

        const HermitianEigen eig = hermitian_eigen(a);
        const double scale = std::max(1.0, a.frobenius_norm());
        ComplexMatrix lam(n, n);
        for (std::size_t k = 0; k < n; ++k) lam(k, k) = eig.eigenvalues[k];
        const ComplexMatrix recon = eig.eigenvectors * lam * eig.eigenvectors.dagger();
        const double recon_res = distance_frobenius(recon, a);
        CHECK_MSG(recon_res <= 1e-10 * scale, "t=" << t << ": reconstruction " << recon_res);
        const double unit_res =
            distance_frobenius(eig.eigenvectors.dagger() * eig.eigenvectors,
                               ComplexMatrix::identity(n));
        CHECK_MSG(unit_res <= 1e-10 * scale, "t=" << t << ": unitarity " << unit_res);

        if (n == 2) {
            const double p = a(0, 0).real(), q = a(1, 1).real();
            const double mid = (p + q) / 2.0;
            const double rad = std::sqrt((p - q) * (p - q) / 4.0 + std::norm(a(0, 1)));
            CHECK_MSG(std::abs(eig.eigenvalues[0] - (mid + rad)) <= 1e-12,
                      "t=" << t << ": top 2x2 eigenvalue off");
            CHECK_MSG(std::abs(eig.eigenvalues[1] - (mid - rad)) <= 1e-12,
                      "t=" << t << ": bottom 2x2 eigenvalue off");
        }
    }
    return true;
}

int shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool criterion9(std::ostream& err) {
    const std::string bin = ENTSPEC_CLI_BIN;
    const std::string fixtures = FIXTURES_DIR;
    const std::string state = "acceptance_iso.json";

    int rc = shell(bin + " generate --family isotropic --d 3 --fidelity 0.4 --seed 1 --out " +
                   state);
    CHECK_MSG(rc == 0, "generate exited " << rc);

    const std::string analyze =
        bin + " analyze --state " + state + " --reproducible --format json --witness";
    rc = shell(analyze + " > acceptance_r1.json");
    CHECK_MSG(rc == 0, "analyze exited " << rc);
    rc = shell(analyze + " > acceptance_r2.json");
    CHECK_MSG(rc == 0, "second analyze exited " << rc);
    const std::string r1 = slurp("acceptance_r1.json");
    CHECK_MSG(!r1.empty() && r1 == slurp("acceptance_r2.json"), "reports differ between runs");

    rc = shell(bin + " analyze --state " + fixtures + "/product.json > /dev/null");
    CHECK_MSG(rc == 0, "good fixture exited " << rc);
    rc = shell(bin + " analyze --state " + fixtures +
               "/bell.json --fail-on-distillable > /dev/null");
    CHECK_MSG(rc == 4, "distillable fixture exited " << rc << ", want 4");
    rc = shell(bin + " analyze --state " + fixtures + "/bad_dims.json > /dev/null 2>&1");
    CHECK_MSG(rc == 2, "bad fixture exited " << rc << ", want 2");
    rc = shell(bin + " analyze --state " + fixtures + "/missing.json > /dev/null 2>&1");
    CHECK_MSG(rc == 2, "missing file exited " << rc << ", want 2");
    rc = shell(bin + " verify-theorem1 --ensemble separable --trials 0 > /dev/null 2>&1");
    CHECK_MSG(rc == 2, "zero trials exited " << rc << ", want 2");
    rc = shell(bin + " verify-theorem1 --ensemble separable --dims 2x2 --trials 5 > /dev/null");
    CHECK_MSG(rc == 0, "small ensemble exited " << rc);

    for (const char* p : {"acceptance_iso.json", "acceptance_r1.json", "acceptance_r2.json"})
        std::remove(p);
    return true;
}

struct Criterion {
    const char* name;
    bool (*fn)(std::ostream&);
};

}  // namespace

int main() {
    const Criterion table[] = {
        {"criterion 1: separable Monte Carlo satisfies reduction and majorization", criterion1},
        {"criterion 2: witness bounds hold on the reduction-passing corpus", criterion2},
        {"criterion 3: isotropic majorization flips exactly at F = 1/d", criterion3},
        {"criterion 4: maximally correlated states with off-diagonal terms distill", criterion4},
        {"criterion 5: rank-2 MEMS passes majorization but fails reduction", criterion5},
        {"criterion 6: Bell state hits the exact -0.5 eigenvalue and margin", criterion6},
        {"criterion 7: support restriction round-trips rank-deficient states", criterion7},
        {"criterion 8: eigensolver residuals and 2x2 closed form", criterion8},
        {"criterion 9: CLI reports are deterministic and exit codes conform", criterion9},
    };

    int failures = 0;
    for (const Criterion& c : table) {
        std::ostringstream err;
        bool ok = false;
        try {
            ok = c.fn(err);
        } catch (const std::exception& e) {
            err << "unexpected exception: " << e.what();
        }
        if (ok) {
            std::cout << "[PASS] " << c.name << "\n";
        } else {
            std::cout << "[FAIL] " << c.name << " -- " << err.str() << "\n";
            ++failures;
        }
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}

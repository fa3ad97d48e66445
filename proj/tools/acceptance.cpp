// Acceptance run: one PASS/FAIL line per criterion. Exits 0 unless something
// throws; with --strict any FAIL gives exit 1.

#include "prismal/fixtures.hpp"
#include "prismal/primitive.hpp"
#include "prismal/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

using namespace prismal;

namespace {

constexpr double kOracleEps = 1e-4;
constexpr double kOracleTol = 1e-6;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome from_reports(const std::vector<IdentityReport>& reports) {
    std::size_t failed = 0;
    std::string first;
    for (const auto& r : reports)
        if (!r.pass && failed++ == 0) first = r.identity + " [" + r.case_desc + "]";
    Outcome o{failed == 0, fmt::format("{} cases, {} failed", reports.size(), failed)};
    if (failed) o.detail += ", first " + first;
    return o;
}

std::vector<Var> source_lambdas(const SimplicialMorphism& f) {
    std::vector<Var> out;
    for (VertexId v : f.source().vertices()) out.push_back(Var::lambda(v));
    return out;
}

/// dξ plus p_y d(f*t_y): exact along every fiber but not closed.
Form fiberwise_exact_1form(const SimplicialMorphism& f, std::mt19937_64& rng) {
    auto vars = source_lambdas(f);
    Form omega = Form::scalar(random_poly(vars, 3, rng)).d();
    for (VertexId y : f.target().vertices()) {
        Poly ty;
        for (VertexId v : f.source().vertices())
            if (f(v) == y) ty += Poly::var(Var::lambda(v));
        omega += random_poly(vars, 2, rng, 3) * Form::scalar(ty).d();
    }
    return omega;
}

Outcome criterion_pipeline(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PrimitiveOptions opt;
    opt.check_horizontal = true;
    std::size_t prisms = 0, chains = 0;
    for (const auto& [name, f] : std::vector<NamedMorphism>{{"figure1", figure1_morphism()}, {"base2d", base2d_morphism()}}) {
        auto res = run_primitive(f, fiberwise_exact_1form(f, rng), 1, opt);
        prisms += res.prisms.size();
        chains += res.horizontal.size();
        if (!res.residuals_zero()) return {false, name + ": nonzero THEODG residual"};
        if (!res.horizontal_ok()) return {false, name + ": horizontal check failed"};
    }
    return {true, fmt::format("{} prisms, {} horizontal checks", prisms, chains)};
}

Outcome criterion_oracle(std::uint64_t seed, double& worst_extrapolated) {
    std::mt19937_64 rng(seed);
    const std::vector<SimplicialMorphism> fs = {figure1_morphism(), base2d_morphism()};
    std::size_t samples = 0, bad = 0;
    double worst = 0;
    worst_extrapolated = 0;
    for (int k = 0; k < 10; ++k) {
        const auto& f = fs[static_cast<std::size_t>(k % 2)];
        for (const auto& s : oracle_samples(fiberwise_exact_1form(f, rng), f, 1, kOracleEps)) {
            const double err = std::abs(s.estimate - s.exact);
            worst = std::max(worst, err);
            worst_extrapolated = std::max(worst_extrapolated, std::abs(s.extrapolated - s.exact));
            ++samples;
            bad += err > kOracleTol;
        }
    }
    return {bad == 0, fmt::format("{} samples, {} above {:.0e}, max error {:.2e}", samples, bad, kOracleTol, worst)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    bool strict = false;
    std::uint64_t seed = 20240601;
    app.add_flag("--strict", strict, "exit 1 if any criterion fails");
    app.add_option("--seed", seed, "seed for random inputs");
    CLI11_PARSE(app, argc, argv);

    Universe u;
    u.seed = seed;
    u.max_simplex_dim = 4;
    u.max_prism_factors = 3;
    u.max_factor_dim = 2;
    u.max_base_dim = 2;
    u.random_samples = 20;
    const auto fixtures = builtin_fixtures();

    double extrapolated = 0;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"cell differentials", [&] { return from_reports(suite_lemcod(u)); }},
        {"codim-1 basis rank", [&] { return from_reports(suite_lemcod_basis(u)); }},
        {"antiboundary", [&] { return from_reports(suite_bord(u)); }},
        {"pullback of Whitney forms", [&] { return from_reports(suite_iminve(u)); }},
        {"satrap and satrapaz", [&] { return from_reports(suite_satrap(u)); }},
        {"face products, literal constants",
         [&] {
             auto reports = suite_faceface_literal(u);
             // (p, q) up to (4, 2); the facepri and facepro cases stay.
             std::erase_if(reports, [](const IdentityReport& r) {
                 int p = 0, q = 0;
                 return r.identity == "faceface.literal" && std::sscanf(r.case_desc.c_str(), "p=%d q=%d", &p, &q) == 2 && q > 2;
             });
             return from_reports(reports);
         }},
        {"relative Whitney integrals", [&] { return from_reports(suite_opicsg(fixtures)); }},
        {"integration operator", [&] { return from_reports(suite_ode(u, 50)); }},
        {"relative primitive end to end", [&] { return criterion_pipeline(seed); }},
        {"numeric oracle at eps 1e-4", [&] { return criterion_oracle(seed, extrapolated); }},
        {"sheaf characterizations and boundary squares", [&] { return from_reports(suite_structure(fixtures, u)); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << fmt::format("criterion {:2}: {} {} ({}; {:.2f} s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                                 o.detail, secs)
                  << std::flush;
        if (i + 1 == 10)
            std::cout << fmt::format("  diagnostic, not counted: 2R(eps/2) - R(eps) max error {:.2e}\n", extrapolated);
    }
    std::cout << fmt::format("{} of {} criteria pass\n", criteria.size() - failed, criteria.size());
    return strict && failed ? 1 : 0;
}

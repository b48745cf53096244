// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
// Exit status is 1 when any criterion fails. With --allow-known, failures listed
// in known_deviations still print FAIL but do not change the exit status.
#include "dnls/checks.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace dnls;

namespace {

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<std::vector<CheckResult>()> run;
};

// 11: smooth and H^{3/2} data both decay like rho^-4, faster than the bound (README).
const std::set<int> known_deviations{11};

} // namespace

int main(int argc, char** argv)
{
    bool allow_known = false;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--allow-known") == 0)
            allow_known = true;
        else
            only.insert(std::atoi(argv[i]));
    }

    CheckOptions opt;
    auto one = [](CheckResult r) { return std::vector<CheckResult>{std::move(r)}; };
    std::vector<Criterion> criteria{
        {1, "golden hierarchy E_0, E_1, E_2", 60, [&] { return one(check_golden_energies()); }},
        {2, "mu_{1,2} = (i/8) ||u||_4^4", 60, [&] { return one(check_mu12()); }},
        {3, "resolvent structure and telescoping, k <= 6", 300, [&] { return one(check_resolvent_structure(6)); }},
        {4, "two-route transmission, relative error < 1e-5", 600, [&] { return one(check_two_route(opt)); }},
        {5, "large-lambda limit, monotone approach", 60, [&] { return one(check_large_lambda_limit(opt)); }},
        {6, "Hilbert-Schmidt identity within 1%", 60, [&] { return one(check_hilbert_schmidt(opt)); }},
        {7, "trace series vs mu_{j,k}, remainder slopes within 0.2", 300,
         [&] { return one(check_series_coefficients(opt)); }},
        {8, "conservation over t in [0, 10]", 900, [&] { return check_conservation(opt); }},
        {9, "plane-wave dispersion and fourth-order convergence", 120, [&] { return one(check_plane_wave(opt)); }},
        {10, "Sobolev comparison identity within 1e-4", 300, [&] { return one(check_sobolev_identity(opt)); }},
        {11, "remainder decay exponent for s = 3/2 within 0.3", 600, [&] { return one(check_remainder_decay(opt)); }},
        {12, "H^s norms bounded by 3x initial over t in [0, 50]", 1800,
         [&] { return one(check_hs_boundedness(opt)); }},
    };

    int failures = 0, blocking = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id))
            continue;
        auto t0 = std::chrono::steady_clock::now();
        auto results = c.run();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = true;
        std::string detail;
        for (const auto& r : results) {
            pass = pass && r.pass;
            if (!detail.empty())
                detail += " | ";
            detail += (results.size() > 1 ? r.name + ": " : std::string()) + r.detail;
        }
        bool in_time = secs <= c.budget_seconds;
        std::string verdict = pass ? (in_time ? "PASS" : "PASS (over time budget)") : "FAIL";
        if (!pass && known_deviations.count(c.id))
            verdict += " (known deviation, see README)";
        std::printf("[%s] criterion %2d: %s -- %s [%.1f s, budget %.0f s]\n", verdict.c_str(), c.id, c.title.c_str(),
                    detail.c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
        if (!pass) {
            ++failures;
            if (!(allow_known && known_deviations.count(c.id)))
                ++blocking;
        }
    }
    std::printf("%d criteria failed\n", failures);
    return blocking ? 1 : 0;
}

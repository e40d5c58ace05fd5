// Acceptance run: every criterion at its full trial count, degrees [-3, 6], dims <= 4,
// p in {2, 5}, fixed seeds. Prints one line per criterion; exit status 1 if any fails.

#include "hopb/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

using namespace hopb;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::string first_failure;
};

/// Runs `trials` trials of a suite, split between p = 2 and p = 5.
std::vector<TrialResult> run_split(std::string_view suite, std::size_t trials, std::uint64_t seed)
{
    std::vector<TrialResult> all;
    for (std::uint32_t p : {2u, 5u}) {
        GenConfig cfg;
        cfg.seed = seed + p;
        cfg.p = p;
        cfg.degree_lo = -3;
        cfg.degree_hi = 6;
        cfg.max_dim = 4;
        cfg.trials = p == 2 ? trials - trials / 2 : trials / 2;
        for (TrialResult& t : run_suite(suite, cfg).trials)
            all.push_back(std::move(t));
    }
    return all;
}

Outcome tally(const std::vector<TrialResult>& trials, std::size_t required)
{
    Outcome o;
    std::size_t passed = 0;
    for (const TrialResult& t : trials) {
        passed += t.pass;
        if (!t.pass && o.first_failure.empty())
            o.first_failure = t.report_line().dump();
    }
    o.pass = passed == trials.size() && trials.size() >= required;
    o.summary = std::to_string(passed) + "/" + std::to_string(trials.size()) + " trials";
    return o;
}

Outcome simple(std::string_view suite, std::size_t trials, std::uint64_t seed)
{
    return tally(run_split(suite, trials, seed), trials);
}

Outcome fiber_squares()
{
    const auto trials = run_split("fibersq", 200, 500);
    Outcome o = tally(trials, 200);
    std::size_t pos = 0, neg = 0;
    for (const TrialResult& t : trials) {
        const std::string label = t.instance.meta.value("label", std::string());
        pos += label == "positive";
        neg += label == "negative";
    }
    o.pass = o.pass && pos >= 80 && neg >= 80;
    o.summary += ", " + std::to_string(pos) + " labelled positive, " + std::to_string(neg) + " labelled negative";
    return o;
}

Outcome loops()
{
    // n = trial % 4, so four trials per prime cover n = 0..3.
    return tally(run_split("loop", 8, 300), 8);
}

Outcome lifting()
{
    const auto trials = run_split("lifting", 100, 400);
    Outcome o = tally(trials, 100);
    std::size_t distinct = 0;
    for (const TrialResult& t : trials)
        distinct += t.details.value("distinct_lifts", false);
    o.summary += ", " + std::to_string(distinct) + " with distinct lifts";
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "factorization axioms and naturality (500 maps, 500 squares)", [] { return simple("axioms", 500, 100); }},
        {2, "homotopy pullback homology independent of structure and mode, equals cocone (200)",
         [] { return simple("sigma", 200, 200); }},
        {3, "loop objects 0 -> S(n) <- 0 give S(n-1), n = 0..3, every structure", loops},
        {4, "lifting independence (100)", lifting},
        {5, "homotopy fiber square iff model square, labels respected (200)", fiber_squares},
        {6, "pasting law (100)", [] { return simple("pasting", 100, 600); }},
        {7, "verdict transfer along weqs of squares (100)", [] { return simple("transfer", 100, 700); }},
        {8, "pullback along a fibration preserves weqs (200)", [] { return simple("pastlem", 200, 800); }},
        {9, "one-leg replacement agrees with full verdict (200)", [] { return simple("rightproper", 200, 900); }},
        {10, "classifier containments (200)", [] { return simple("classifier", 200, 1000); }},
    };

    const auto start = std::chrono::steady_clock::now();
    bool all = true;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d: %s -- %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str(), secs);
        if (!o.first_failure.empty())
            std::printf("     first failure: %s\n", o.first_failure.c_str());
        all = all && o.pass;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s all criteria (%.2fs)\n", all ? "PASS" : "FAIL", total);
    return all ? 0 : 1;
}

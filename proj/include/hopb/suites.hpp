#pragma once

// Randomized property suites. A trial generates a self-contained instance file (the meta
// block records suite, trial, seed and generator config) and then checks it; the check
// reads nothing but the instance, so a dumped failure replays exactly.

#include "hopb/gen.hpp"
#include "hopb/io.hpp"
#include "hopb/oracle.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hopb {

struct CheckResult {
    bool pass = true;
    json details = json::object();

    /// Records a named boolean; any false one fails the result.
    void expect(const std::string& what, bool ok)
    {
        details[what] = ok;
        pass = pass && ok;
    }
};

struct TrialResult {
    std::string suite;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    json details;
    InstanceFile instance;

    json report_line() const
    {
        return {{"suite", suite}, {"trial", trial}, {"seed", seed}, {"pass", pass}, {"details", details}};
    }
};

struct SuiteReport {
    std::string suite;
    std::vector<TrialResult> trials;

    std::size_t passed() const
    {
        std::size_t k = 0;
        for (const auto& t : trials)
            k += t.pass;
        return k;
    }
    std::size_t failed() const { return trials.size() - passed(); }
    bool ok() const { return failed() == 0; }
};

struct Suite {
    std::string_view name;
    std::string_view summary;
    std::function<InstanceFile(const GenConfig&, std::size_t trial)> generate;
    std::function<CheckResult(const InstanceFile&)> check;
};

namespace suites {

inline json dims_json(const std::map<int, std::size_t>& dims)
{
    json out = json::object();
    for (auto [n, k] : dims)
        out[std::to_string(n)] = k;
    return out;
}

inline json config_json(const GenConfig& cfg)
{
    return {{"p", cfg.p}, {"degree_lo", cfg.degree_lo}, {"degree_hi", cfg.degree_hi}, {"max_dim", cfg.max_dim}};
}

inline GenConfig config_from(const InstanceFile& f)
{
    GenConfig cfg;
    const json& c = f.meta.at("config");
    cfg.p = c.at("p").get<std::uint32_t>();
    cfg.degree_lo = c.at("degree_lo").get<int>();
    cfg.degree_hi = c.at("degree_hi").get<int>();
    cfg.max_dim = c.at("max_dim").get<std::size_t>();
    cfg.seed = f.meta.at("seed").get<std::uint64_t>();
    return cfg;
}

/// Builder preloaded with the meta block of one trial.
inline InstanceBuilder start(std::string_view suite, const GenConfig& cfg, std::size_t trial)
{
    InstanceBuilder b(cfg.field());
    b.meta() = {{"suite", suite}, {"trial", trial}, {"seed", trial_seed(cfg.seed, trial)}, {"config", config_json(cfg)}};
    return b;
}

inline Generator generator(const GenConfig& cfg, std::size_t trial) { return Generator(cfg, trial_seed(cfg.seed, trial)); }

inline std::string leg_name(Leg l) { return l == Leg::First ? "first" : "second"; }

inline Leg parse_leg(const std::string& s)
{
    if (s == "first")
        return Leg::First;
    if (s == "second")
        return Leg::Second;
    throw ParseError("meta.leg: expected 'first' or 'second'");
}

inline Sigma sigma_from(const json& meta)
{
    auto s = parse_sigma(meta.at("sigma").get<std::string>());
    if (!s)
        throw ParseError("meta.sigma: unknown structure");
    return *s;
}

inline ReplaceMode mode_from(const json& meta)
{
    auto m = parse_mode(meta.at("mode").get<std::string>());
    if (!m)
        throw ParseError("meta.mode: unknown mode");
    return *m;
}

/// Verdicts of every model-square test on sq, recorded into r; returns the full verdict.
inline bool record_verdicts(const CommSquare& sq, CheckResult& r)
{
    const bool full = is_model_square_full(sq);
    json v = json::object();
    bool agree = true;
    for (Sigma s : kAllSigmas)
        for (ReplaceMode m : kAllModes) {
            const bool b = is_model_square(sq, s, m);
            v[std::string(to_string(s)) + "/" + std::string(to_string(m))] = b;
            agree = agree && b == full;
        }
    r.details["model_square"] = std::move(v);
    r.details["full"] = full;
    r.expect("replacement_independent", agree);
    return full;
}

// ---------------------------------------------------------------------------

inline InstanceFile gen_axioms(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("axioms", cfg, trial);
    const ChainMap f = gen.chain_map(gen.complex(), gen.complex());
    // A commuting square from f through a pushout, then pushed further along a random map.
    const ChainMap a = gen.chain_map(f.src(), gen.complex());
    const Pushout po = pushout(f, a);
    const ChainMap h = gen.chain_map(po.object, gen.rng().chance(1, 2) ? po.object : gen.complex());
    b.map(f, "f");
    b.map(compose(h, po.from_c), "f2");
    b.map(a, "a");
    b.map(compose(h, po.from_d), "b");
    return b.build();
}

inline CheckResult check_axioms(const InstanceFile& inst)
{
    CheckResult r;
    const ChainMap& f = inst.map("f");
    const ChainMap& f2 = inst.map("f2");
    const ChainMap& a = inst.map("a");
    const ChainMap& b = inst.map("b");
    for (const auto& [name, m] : {std::pair<const char*, const ChainMap*>{"f", &f}, {"f2", &f2}}) {
        const Factorization fac = factorize(*m);
        const std::string k(name);
        r.expect(k + ".q_i", compose(fac.q, fac.i) == *m);
        r.expect(k + ".i_cofibration", is_cofibration(fac.i));
        r.expect(k + ".i_weq", is_weq(fac.i));
        r.expect(k + ".q_fibration", is_fibration(fac.q));
    }
    const Factorization ff = factorize(f);
    const Factorization ff2 = factorize(f2);
    const ChainMap m = factorize_morphism(f, f2, a, b);
    r.expect("natural_i", compose(m, ff.i) == compose(ff2.i, a));
    r.expect("natural_q", compose(ff2.q, m) == compose(b, ff.q));
    if (is_weq(a) && is_weq(b))
        r.expect("m_weq", is_weq(m));
    return r;
}

inline InstanceFile gen_sigma(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("sigma", cfg, trial);
    std::optional<Leg> leg;
    if (trial % 3 == 1)
        leg = Leg::First;
    else if (trial % 3 == 2)
        leg = Leg::Second;
    b.cospan(gen.cospan(leg), "X");
    return b.build();
}

inline CheckResult check_sigma(const InstanceFile& inst)
{
    CheckResult r;
    const Cospan& x = inst.cospan("X");
    const auto truth = cocone_oracle(x);
    r.details["oracle"] = dims_json(truth);
    json got = json::object();
    bool ok = true;
    for (Sigma s : kAllSigmas)
        for (ReplaceMode m : kAllModes) {
            const auto h = homotopy_pullback(x, s, m).homology;
            got[std::string(to_string(s)) + "/" + std::string(to_string(m))] = dims_json(h);
            ok = ok && h == truth;
        }
    r.details["homology"] = std::move(got);
    r.expect("agree", ok);
    return r;
}

inline InstanceFile gen_loop(const GenConfig& cfg, std::size_t trial)
{
    const FieldCtx F = cfg.field();
    InstanceBuilder b = start("loop", cfg, trial);
    const int n = static_cast<int>(trial % 4);
    const auto s = ChainComplex::sphere(F, n);
    const auto z = ChainComplex::zero(F);
    b.cospan(Cospan(ChainMap::zero(z, s), ChainMap::zero(z, s)), "X");
    b.meta()["n"] = n;
    return b.build();
}

inline CheckResult check_loop(const InstanceFile& inst)
{
    CheckResult r;
    const Cospan& x = inst.cospan("X");
    const int n = inst.meta.at("n").get<int>();
    const std::map<int, std::size_t> expected{{n - 1, 1}};
    r.details["expected"] = dims_json(expected);
    r.expect("oracle", cocone_oracle(x) == expected);
    for (Sigma s : kAllSigmas)
        for (ReplaceMode m : kAllModes)
            r.expect(std::string(to_string(s)) + "/" + std::string(to_string(m)),
                     homotopy_pullback(x, s, m).homology == expected);
    return r;
}

inline InstanceFile gen_lifting(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("lifting", cfg, trial);
    b.cospan(gen.cospan(), "X");
    b.meta()["sigma"] = to_string(kAllSigmas[trial % 3]);
    b.meta()["mode"] = to_string(trial % 2 ? ReplaceMode::Local : ReplaceMode::Functorial);
    b.meta()["perturb_seed"] = gen.rng().next();
    return b.build();
}

inline CheckResult check_lifting(const InstanceFile& inst)
{
    CheckResult r;
    const Cospan& x = inst.cospan("X");
    const Sigma s = sigma_from(inst.meta);
    const std::uint64_t seed = inst.meta.at("perturb_seed").get<std::uint64_t>();
    Generator pad(config_from(inst), seed);
    const Replacement r1 = fibrant_replace(x, s, ReplaceMode::Functorial);
    const Replacement r2 = pad.perturb(fibrant_replace(x, s, mode_from(inst.meta)));
    const CospanMorphism l1 = lift_replacements(x, r1, r2);
    const CospanMorphism l2 = lift_replacements(x, r1, r2, seed);
    r.expect("l1_extends", compose(l1, r1.map) == r2.map);
    r.expect("l2_extends", compose(l2, r1.map) == r2.map);
    r.expect("l1_weq", is_weq_cospan(l1));
    r.expect("l2_weq", is_weq_cospan(l2));
    bool homotopic = true;
    for (Node n : {Node::B, Node::C, Node::D})
        homotopic = homotopic && chain_homotopy(l1.at(n), l2.at(n)).has_value();
    r.expect("componentwise_homotopic", homotopic);
    const ChainMap lim1 = limit_map(l1);
    const ChainMap lim2 = limit_map(l2);
    r.expect("lim_l1_weq", is_weq(lim1));
    r.expect("lim_l2_weq", is_weq(lim2));
    r.expect("lim_homotopic", chain_homotopy(lim1, lim2).has_value());
    r.expect("same_homology_map", homology_map(lim1) == homology_map(lim2));
    r.details["distinct_lifts"] = !(l1 == l2);
    return r;
}

/// Kinds by trial % 5: 0, 1 positive (strict pullback along a fibration, vertex possibly
/// padded through a weq); 2, 3 negative (sphere added to such a vertex); 4 unlabelled.
inline InstanceFile gen_fibersq(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("fibersq", cfg, trial);
    const std::size_t kind = trial % 5;
    if (kind < 2) {
        b.square(gen.model_square(), "S");
        b.meta()["label"] = "positive";
    } else if (kind < 4) {
        b.square(gen.sphere_padded_square(), "S");
        b.meta()["label"] = "negative";
    } else {
        b.square(gen.strict_square(), "S");
        b.meta()["label"] = "unlabeled";
    }
    return b.build();
}

inline CheckResult check_fibersq(const InstanceFile& inst)
{
    CheckResult r;
    const CommSquare& sq = inst.square("S");
    const std::string label = inst.meta.at("label").get<std::string>();
    const bool oracle_match = homology_dims(sq.a()) == cocone_oracle(sq.cospan());
    const bool full = record_verdicts(sq, r);
    const bool hfs = is_homotopy_fiber_square(sq);
    r.details["fiber_square"] = hfs;
    r.details["label"] = label;
    r.expect("fiber_square_eq_model_square", hfs == full);
    if (!oracle_match)
        r.expect("oracle_mismatch_rejected", !full);
    if (label == "positive")
        r.expect("label_matches", full);
    else if (label == "negative")
        r.expect("label_matches", !full && !oracle_match);
    return r;
}

/// Left square over (D -> E <- B) next to a by-construction model square on the right.
inline InstanceFile gen_pasting(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("pasting", cfg, trial);
    const CommSquare right = gen.model_square();
    const ChainComplex& e = right.cospan().c();
    const std::size_t kind = trial % 3;
    const ChainMap g = kind == 0 ? gen.fibration_onto(e) : gen.chain_map(gen.complex(), e);
    const Cospan lx(g, right.v());
    const CommSquare left = kind == 1 ? gen.sphere_pad(lx) : gen.pad_vertex(lx);
    b.square(left, "left");
    b.square(right, "right");
    return b.build();
}

inline CheckResult check_pasting(const InstanceFile& inst)
{
    CheckResult r;
    const CommSquare& left = inst.square("left");
    const CommSquare& right = inst.square("right");
    const bool right_model = is_model_square_full(right);
    r.expect("right_is_model", right_model);
    const bool vl = is_model_square_full(left);
    const bool vt = is_model_square_full(paste(left, right));
    r.details["left"] = vl;
    r.details["total"] = vt;
    r.expect("left_eq_total", vl == vt);
    return r;
}

/// S and a copy with every corner padded by a shared acyclic P and a private acyclic E,
/// connected by inclusions (even trials) or projections (odd trials).
inline InstanceFile gen_transfer(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("transfer", cfg, trial);
    const std::size_t kind = trial % 3;
    const CommSquare sq = kind == 0 ? gen.model_square() : kind == 1 ? gen.sphere_padded_square() : gen.strict_square();
    const ChainComplex pad = gen.acyclic(2);
    const Cospan& x = sq.cospan();
    const ChainComplex* corners[] = {&sq.a(), &x.b(), &x.c(), &x.d()};
    std::vector<ChainComplex> extra;
    std::vector<ChainComplex> big;
    for (const ChainComplex* c : corners) {
        extra.push_back(gen.acyclic(1));
        big.push_back(direct_sum(direct_sum(*c, pad), extra.back()));
    }
    auto lift_map = [&](const ChainMap& m, std::size_t s, std::size_t t) {
        return sum_map(sum_map(m, ChainMap::identity(pad)), ChainMap::zero(extra[s], extra[t]));
    };
    const CommSquare padded(lift_map(sq.u(), 0, 1), lift_map(sq.v(), 0, 2),
                            Cospan(lift_map(x.g(), 2, 3), lift_map(x.f(), 1, 3)));
    const bool forward = trial % 2 == 0;
    std::vector<ChainMap> w;
    for (std::size_t k = 0; k < 4; ++k) {
        const ChainComplex with_pad = direct_sum(*corners[k], pad);
        if (forward)
            w.push_back(compose(inclusion_first(with_pad, extra[k]), inclusion_first(*corners[k], pad)));
        else
            w.push_back(compose(projection_first(*corners[k], pad), projection_first(with_pad, extra[k])));
    }
    b.square(forward ? sq : padded, "first");
    b.square(forward ? padded : sq, "second");
    b.map(w[0], "w_a");
    b.map(w[1], "w_b");
    b.map(w[2], "w_c");
    b.map(w[3], "w_d");
    return b.build();
}

inline CheckResult check_transfer(const InstanceFile& inst)
{
    CheckResult r;
    const CommSquare& first = inst.square("first");
    const CommSquare& second = inst.square("second");
    const SquareMap w{inst.map("w_a"), inst.map("w_b"), inst.map("w_c"), inst.map("w_d")};
    const bool v1 = transfer_verdict(first, second, w);
    const bool v2 = is_model_square_full(second);
    r.details["first"] = v1;
    r.details["second"] = v2;
    r.expect("verdicts_agree", v1 == v2);
    return r;
}

/// f: A ->> D a fibration, h: C -> D arbitrary, g: B -> C a weak equivalence.
inline InstanceFile gen_pastlem(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("pastlem", cfg, trial);
    const ChainComplex d = gen.complex();
    const ChainMap g = gen.rng().chance(1, 2) ? gen.weak_equivalence(gen.complex()) : gen.trivial_cofibration_from(gen.complex());
    b.map(gen.fibration_onto(d), "f");
    b.map(gen.chain_map(g.tgt(), d), "h");
    b.map(g, "g");
    return b.build();
}

inline CheckResult check_pastlem(const InstanceFile& inst)
{
    CheckResult r;
    const ChainMap& f = inst.map("f");
    const ChainMap& h = inst.map("h");
    const ChainMap& g = inst.map("g");
    r.expect("f_fibration", is_fibration(f));
    r.expect("g_weq", is_weq(g));
    const Pullback over_b = pullback(f, compose(h, g));
    const Pullback over_c = pullback(f, h);
    r.expect("universal_weq", is_weq(universal_into_pullback(over_b.to_b, compose(g, over_b.to_c), over_c)));
    return r;
}

inline InstanceFile gen_rightproper(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("rightproper", cfg, trial);
    const std::size_t kind = trial % 3;
    b.square(kind == 0 ? gen.model_square() : kind == 1 ? gen.sphere_padded_square() : gen.strict_square(), "S");
    return b.build();
}

inline CheckResult check_rightproper(const InstanceFile& inst)
{
    CheckResult r;
    const CommSquare& sq = inst.square("S");
    const bool full = is_model_square_full(sq);
    r.details["full"] = full;
    for (Leg leg : {Leg::First, Leg::Second}) {
        const bool rp = is_model_square_rp(sq, leg);
        r.details["rp_" + leg_name(leg)] = rp;
        r.expect("agree_" + leg_name(leg), rp == full);
    }
    return r;
}

/// Kinds by trial % 4: extension, restriction, a fibrant replacement map, and a
/// restriction into an inj-fibrant cospan.
inline InstanceFile gen_classifier(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("classifier", cfg, trial);
    const Cospan x = gen.cospan();
    switch (trial % 4) {
    case 0: b.morphism(gen.extension(x), "phi"); break;
    case 1: b.morphism(gen.restriction_into(x), "phi"); break;
    case 2: b.morphism(fibrant_replace(x, kAllSigmas[(trial / 4) % 3], ReplaceMode::Functorial).map, "phi"); break;
    default: b.morphism(gen.restriction_into(fibrant_replace(x, Sigma::Inj, ReplaceMode::Functorial).tgt()), "phi");
    }
    return b.build();
}

inline CheckResult check_classifier(const InstanceFile& inst)
{
    CheckResult r;
    const CospanMorphism& phi = inst.morphism("phi");
    const bool levelwise = is_cofibration_sigma(phi, Sigma::Inj);
    for (Sigma s : {Sigma::ReeI, Sigma::ReeD}) {
        const bool cof = is_cofibration_sigma(phi, s);
        r.details[std::string("cofibration_") + std::string(to_string(s))] = cof;
        r.expect(std::string("reedy_cof_levelwise_") + std::string(to_string(s)), !cof || levelwise);
    }
    for (const Cospan* y : {&phi.src(), &phi.tgt()}) {
        const std::string side = y == &phi.src() ? "src" : "tgt";
        const bool inj = is_fibrant_sigma(*y, Sigma::Inj);
        r.details["inj_fibrant_" + side] = inj;
        r.expect("inj_fibrant_implies_reedy_" + side,
                 !inj || (is_fibrant_sigma(*y, Sigma::ReeI) && is_fibrant_sigma(*y, Sigma::ReeD)));
        bool terminal = true;
        for (Sigma s : kAllSigmas)
            terminal = terminal && is_fibration_sigma(to_terminal(*y), s) == is_fibrant_sigma(*y, s);
        r.expect("terminal_fibration_eq_fibrant_" + side, terminal);
    }
    return r;
}

inline InstanceFile gen_corlur(const GenConfig& cfg, std::size_t trial)
{
    Generator gen = generator(cfg, trial);
    InstanceBuilder b = start("corlur", cfg, trial);
    const Leg leg = trial % 2 ? Leg::Second : Leg::First;
    const Cospan x = gen.cospan(leg);
    const Pullback pb = limit(x);
    b.square(CommSquare(pb.to_b, pb.to_c, x), "S");
    b.meta()["leg"] = leg_name(leg);
    return b.build();
}

inline CheckResult check_corlur(const InstanceFile& inst)
{
    CheckResult r;
    const CommSquare& sq = inst.square("S");
    const Leg leg = parse_leg(inst.meta.at("leg").get<std::string>());
    r.expect("leg_fibration", is_fibration(leg == Leg::First ? sq.cospan().g() : sq.cospan().f()));
    r.expect("model_square", record_verdicts(sq, r));
    r.expect("fiber_square", is_homotopy_fiber_square(sq));
    return r;
}

}  // namespace suites

inline const std::vector<Suite>& all_suites()
{
    using namespace suites;
    static const std::vector<Suite> list = {
        {"axioms", "factorization axioms and naturality", gen_axioms, check_axioms},
        {"sigma", "homotopy pullback homology agrees across structures and with the cocone", gen_sigma, check_sigma},
        {"loop", "0 -> S(n) <- 0 has homology of S(n-1)", gen_loop, check_loop},
        {"lifting", "lifts between replacements extend, are weqs and are homotopic", gen_lifting, check_lifting},
        {"fibersq", "homotopy fiber square iff model square, against labels", gen_fibersq, check_fibersq},
        {"pasting", "pasting law with a model square on the right", gen_pasting, check_pasting},
        {"transfer", "model-square verdict is invariant under weqs of squares", gen_transfer, check_transfer},
        {"pastlem", "pullback along a fibration preserves weqs", gen_pastlem, check_pastlem},
        {"rightproper", "one-leg replacement gives the same verdict", gen_rightproper, check_rightproper},
        {"classifier", "Reedy cofibrations are levelwise; inj-fibrant is Reedy-fibrant", gen_classifier, check_classifier},
        {"corlur", "strict pullbacks along a fibration are model squares", gen_corlur, check_corlur},
    };
    return list;
}

inline const Suite* find_suite(std::string_view name)
{
    for (const Suite& s : all_suites())
        if (s.name == name)
            return &s;
    return nullptr;
}

/// Runs the check of a suite on one instance. Exceptions count as failures.
inline CheckResult run_check(const Suite& suite, const InstanceFile& inst)
{
    try {
        return suite.check(inst);
    } catch (const std::exception& e) {
        CheckResult r;
        r.pass = false;
        r.details["error"] = e.what();
        return r;
    }
}

/// Replays a dumped instance: the suite is taken from meta.suite.
inline TrialResult replay(const InstanceFile& inst)
{
    const auto name = inst.meta.value("suite", std::string());
    const Suite* suite = find_suite(name);
    if (!suite)
        throw ParseError("meta.suite: unknown suite '" + name + "'");
    const CheckResult r = run_check(*suite, inst);
    return {name, inst.meta.value("trial", std::size_t{0}), inst.meta.value("seed", std::uint64_t{0}), r.pass, r.details, inst};
}

inline TrialResult run_trial(const Suite& suite, const GenConfig& cfg, std::size_t trial)
{
    TrialResult t{std::string(suite.name), trial, trial_seed(cfg.seed, trial), false, json::object(),
                  InstanceFile{}};
    try {
        t.instance = suite.generate(cfg, trial);
    } catch (const std::exception& e) {
        t.details["error"] = std::string("generation failed: ") + e.what();
        return t;
    }
    const CheckResult r = run_check(suite, t.instance);
    t.pass = r.pass;
    t.details = r.details;
    return t;
}

inline SuiteReport run_suite(std::string_view name, const GenConfig& cfg)
{
    cfg.validate();
    const Suite* suite = find_suite(name);
    if (!suite)
        throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
    SuiteReport report{std::string(name), {}};
    for (std::size_t k = 0; k < cfg.trials; ++k)
        report.trials.push_back(run_trial(*suite, cfg, k));
    return report;
}

}  // namespace hopb

// hopb: command-line front end.
//
// Exit status: 0 when every check passes / the answer is true, 1 when a check returns
// false, 2 on any error (bad flags, unreadable or invalid input).

#include "hopb/suites.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

using namespace hopb;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Globals {
    std::string input;
    std::uint64_t seed = 1;
    std::size_t trials = 10;
    bool json_out = false;
};

std::string dims_text(const std::map<int, std::size_t>& dims)
{
    if (dims.empty())
        return "0";
    std::string s;
    for (auto [n, k] : dims) {
        if (!s.empty())
            s += ", ";
        s += "H" + std::to_string(n) + "=" + std::to_string(k);
    }
    return s;
}

InstanceFile load(const Globals& g)
{
    if (g.input.empty())
        throw ParseError("--input is required");
    return parse_instance(g.input);
}

template <class T>
std::string pick(const std::map<std::string, T>& section, const std::string& name, const char* what)
{
    return name.empty() ? InstanceFile::sole(section, what) : name;
}

Sigma sigma_or_throw(const std::string& s)
{
    auto v = parse_sigma(s);
    if (!v)
        throw CLI::ValidationError("--structure", "expected inj, ree-i or ree-d");
    return *v;
}

ReplaceMode mode_or_throw(const std::string& s)
{
    auto v = parse_mode(s);
    if (!v)
        throw CLI::ValidationError("--mode", "expected functorial or local");
    return *v;
}

int emit_bool(const Globals& g, json out, bool value, const std::string& text)
{
    out["result"] = value;
    if (g.json_out)
        std::cout << out.dump() << '\n';
    else
        std::cout << text << ": " << (value ? "true" : "false") << '\n';
    return value ? kTrue : kFalse;
}

void maybe_write(const InstanceFile& f, const std::string& path)
{
    if (path.empty())
        return;
    write_instance(f, path);
}

// ---------------------------------------------------------------------------

int cmd_homology(const Globals& g, const std::string& name)
{
    const InstanceFile f = load(g);
    json out = json::object();
    for (const auto& [n, x] : f.complexes) {
        if (!name.empty() && n != name)
            continue;
        const auto h = homology_dims(x);
        out[n] = suites::dims_json(h);
        if (!g.json_out)
            std::cout << n << ": " << dims_text(h) << '\n';
    }
    if (!name.empty() && out.empty())
        throw ParseError("no complex named '" + name + "'");
    if (g.json_out)
        std::cout << json{{"homology", out}}.dump() << '\n';
    return kTrue;
}

int cmd_check(const Globals& g, const std::string& what, const std::string& map_name,
              const std::string& cospan_name, const std::string& morphism_name, const std::string& structure)
{
    const InstanceFile f = load(g);
    json out = {{"check", what}};
    if (what == "fibrant") {
        const std::string k = pick(f.cospans, cospan_name, "cospan");
        const Sigma s = sigma_or_throw(structure.empty() ? "inj" : structure);
        out["cospan"] = k;
        out["structure"] = to_string(s);
        return emit_bool(g, out, is_fibrant_sigma(f.cospan(k), s), k + " " + std::string(to_string(s)) + "-fibrant");
    }
    if (!structure.empty() || !morphism_name.empty()) {
        const std::string m = pick(f.morphisms, morphism_name, "cospan morphism");
        const Sigma s = sigma_or_throw(structure.empty() ? "inj" : structure);
        const CospanMorphism& phi = f.morphism(m);
        bool v = false;
        if (what == "weq")
            v = is_weq_cospan(phi);
        else if (what == "fib")
            v = is_fibration_sigma(phi, s);
        else
            v = is_cofibration_sigma(phi, s);
        out["morphism"] = m;
        out["structure"] = to_string(s);
        return emit_bool(g, out, v, m + " " + what + " (" + std::string(to_string(s)) + ")");
    }
    const std::string m = pick(f.maps, map_name, "map");
    const ChainMap& phi = f.map(m);
    const bool v = what == "weq" ? is_weq(phi) : what == "fib" ? is_fibration(phi) : is_cofibration(phi);
    out["map"] = m;
    return emit_bool(g, out, v, m + " " + what);
}

int cmd_replace(const Globals& g, const std::string& cospan_name, const std::string& structure,
                const std::string& mode, const std::string& output)
{
    const InstanceFile f = load(g);
    const std::string k = pick(f.cospans, cospan_name, "cospan");
    const Sigma s = sigma_or_throw(structure);
    const ReplaceMode m = mode_or_throw(mode.empty() ? "functorial" : mode);
    const Replacement r = fibrant_replace(f.cospan(k), s, m);
    InstanceBuilder b(f.field());
    b.cospan(r.src(), "X");
    b.cospan(r.tgt(), "R");
    b.morphism(r.map, "t");
    b.meta() = {{"structure", to_string(s)}, {"mode", to_string(m)}};
    const InstanceFile result = b.build();
    maybe_write(result, output);
    const bool ok = is_weq_cospan(r.map) && is_fibrant_sigma(r.tgt(), s);
    json out = {{"structure", to_string(s)}, {"mode", to_string(m)}, {"weq", is_weq_cospan(r.map)},
                {"fibrant", is_fibrant_sigma(r.tgt(), s)}, {"identity", r.map == CospanMorphism::identity(r.src())}};
    if (output.empty())
        out["instance"] = to_json(result);
    if (g.json_out) {
        std::cout << out.dump() << '\n';
    } else {
        std::cout << "replacement of " << k << " (" << to_string(s) << ", " << to_string(m) << ")\n"
                  << "  C: " << r.tgt().c().total_dim() << " dims, D: " << r.tgt().d().total_dim()
                  << " dims, B: " << r.tgt().b().total_dim() << " dims\n"
                  << "  levelwise weq: " << (is_weq_cospan(r.map) ? "yes" : "no")
                  << ", fibrant: " << (is_fibrant_sigma(r.tgt(), s) ? "yes" : "no") << '\n';
        if (output.empty())
            std::cout << to_canonical_string(result) << '\n';
    }
    return ok ? kTrue : kFalse;
}

int cmd_hopb(const Globals& g, const std::string& cospan_name, const std::string& structure, const std::string& mode)
{
    const InstanceFile f = load(g);
    const std::string k = pick(f.cospans, cospan_name, "cospan");
    const Cospan& x = f.cospan(k);
    std::vector<Sigma> sigmas(std::begin(kAllSigmas), std::end(kAllSigmas));
    std::vector<ReplaceMode> modes(std::begin(kAllModes), std::end(kAllModes));
    if (!structure.empty())
        sigmas = {sigma_or_throw(structure)};
    if (!mode.empty())
        modes = {mode_or_throw(mode)};
    json results = json::object();
    std::optional<std::map<int, std::size_t>> first;
    bool agree = true;
    for (Sigma s : sigmas)
        for (ReplaceMode m : modes) {
            const auto h = homotopy_pullback(x, s, m).homology;
            const std::string key = std::string(to_string(s)) + "/" + std::string(to_string(m));
            results[key] = suites::dims_json(h);
            if (!g.json_out)
                std::cout << key << ": " << dims_text(h) << '\n';
            if (!first)
                first = h;
            agree = agree && h == *first;
        }
    if (g.json_out)
        std::cout << json{{"cospan", k}, {"homology", results}, {"agree", agree}}.dump() << '\n';
    else if (results.size() > 1)
        std::cout << (agree ? "all structures agree" : "structures DISAGREE") << '\n';
    return agree ? kTrue : kFalse;
}

int cmd_model_square(const Globals& g, const std::string& square_name, const std::string& structure,
                     const std::string& mode, const std::string& leg)
{
    const InstanceFile f = load(g);
    const std::string k = pick(f.squares, square_name, "square");
    const CommSquare& sq = f.square(k);
    json out = {{"square", k}};
    if (!leg.empty()) {
        if (leg != "first" && leg != "second")
            throw CLI::ValidationError("--leg", "expected first or second");
        out["leg"] = leg;
        return emit_bool(g, out, is_model_square_rp(sq, suites::parse_leg(leg)), k + " model square (" + leg + " leg)");
    }
    if (structure.empty() && mode.empty())
        return emit_bool(g, out, is_model_square_full(sq), k + " model square");
    const Sigma s = sigma_or_throw(structure.empty() ? "inj" : structure);
    const ReplaceMode m = mode_or_throw(mode.empty() ? "functorial" : mode);
    out["structure"] = to_string(s);
    out["mode"] = to_string(m);
    return emit_bool(g, out, is_model_square(sq, s, m),
                     k + " model square (" + std::string(to_string(s)) + ", " + std::string(to_string(m)) + ")");
}

int cmd_fiber_square(const Globals& g, const std::string& square_name)
{
    const InstanceFile f = load(g);
    const std::string k = pick(f.squares, square_name, "square");
    return emit_bool(g, {{"square", k}}, is_homotopy_fiber_square(f.square(k)), k + " homotopy fiber square");
}

int cmd_paste(const Globals& g, const std::string& left, const std::string& right, const std::string& output)
{
    const InstanceFile f = load(g);
    const CommSquare total = paste(f.square(left), f.square(right));
    InstanceBuilder b(f.field());
    b.square(f.square(left), left);
    b.square(f.square(right), right);
    b.square(total, "total");
    const InstanceFile result = b.build();
    maybe_write(result, output);
    const bool vl = is_model_square_full(f.square(left));
    const bool vr = is_model_square_full(f.square(right));
    const bool vt = is_model_square_full(total);
    if (g.json_out) {
        json out = {{"left", vl}, {"right", vr}, {"total", vt}};
        if (output.empty())
            out["instance"] = to_json(result);
        std::cout << out.dump() << '\n';
    } else {
        std::cout << "left model square: " << (vl ? "true" : "false") << "\nright model square: " << (vr ? "true" : "false")
                  << "\ntotal model square: " << (vt ? "true" : "false") << '\n';
        if (output.empty())
            std::cout << to_canonical_string(result) << '\n';
    }
    // The pasting law: with the right square a model square, left and total agree.
    return !vr || vl == vt ? kTrue : kFalse;
}

int cmd_suite(const Globals& g, const std::string& name, GenConfig cfg, const std::string& dump_dir)
{
    std::vector<TrialResult> trials;
    if (!g.input.empty()) {
        trials.push_back(replay(parse_instance(g.input)));
        if (!name.empty() && trials.back().suite != name)
            throw ParseError("instance belongs to suite '" + trials.back().suite + "', not '" + name + "'");
    } else {
        if (name.empty())
            throw CLI::ValidationError("suite", "name a suite or pass --input");
        cfg.seed = g.seed;
        cfg.trials = g.trials;
        trials = run_suite(name, cfg).trials;
    }
    std::size_t failed = 0;
    for (const TrialResult& t : trials) {
        std::cout << t.report_line().dump() << '\n';
        if (t.pass)
            continue;
        ++failed;
        if (!dump_dir.empty() && !t.instance.meta.empty()) {
            std::filesystem::create_directories(dump_dir);
            const auto path = std::filesystem::path(dump_dir) / (t.suite + "-" + std::to_string(t.trial) + ".json");
            write_instance(t.instance, path.string());
            std::cerr << "counterexample written to " << path.string() << '\n';
        }
    }
    std::cerr << (failed ? "FAIL " : "PASS ") << (trials.empty() ? name : trials.front().suite) << ": "
              << trials.size() - failed << "/" << trials.size() << " trials passed\n";
    return failed ? kFalse : kTrue;
}

int cmd_gen(const Globals& g, const std::string& kind, const std::string& leg, GenConfig cfg, const std::string& output)
{
    cfg.seed = g.seed;
    Generator gen(cfg, cfg.seed);
    InstanceBuilder b(cfg.field());
    std::optional<Leg> fib;
    if (!leg.empty())
        fib = suites::parse_leg(leg);
    if (kind == "cospan")
        b.cospan(gen.cospan(fib), "X");
    else if (kind == "model-square")
        b.square(gen.model_square(), "S");
    else if (kind == "strict-square")
        b.square(gen.strict_square(), "S");
    else if (kind == "sphere-square")
        b.square(gen.sphere_padded_square(), "S");
    else
        throw CLI::ValidationError("gen", "unknown kind '" + kind + "'");
    b.meta() = {{"generator", kind}, {"seed", cfg.seed}, {"config", suites::config_json(cfg)}};
    const InstanceFile f = b.build();
    if (output.empty())
        std::cout << to_canonical_string(f) << '\n';
    else
        write_instance(f, output);
    return kTrue;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Homotopy pullbacks of cospans of chain complexes over F_p"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--input,-i", g.input, "Instance file (JSON)");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--trials", g.trials, "Number of trials")->check(CLI::PositiveNumber);
    app.add_flag("--json", g.json_out, "Machine-readable output");

    std::string name, map_name, cospan_name, morphism_name, square_name, structure, mode, leg, output;
    std::string left, right, dump_dir, what, kind;
    GenConfig cfg;

    auto add_cfg = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "Prime modulus");
        sub->add_option("--degree-lo", cfg.degree_lo, "Lowest degree");
        sub->add_option("--degree-hi", cfg.degree_hi, "Highest degree");
        sub->add_option("--max-dim", cfg.max_dim, "Largest dimension per degree");
    };

    auto* homology = app.add_subcommand("homology", "Homology dimensions of the complexes in an instance");
    homology->add_option("--complex", name, "Only this complex");

    auto* check = app.add_subcommand("check", "Is a map a weq / fibration / cofibration (or a cospan fibrant)?");
    check->add_option("what", what, "weq | fib | cofib | fibrant")
        ->required()
        ->check(CLI::IsMember({"weq", "fib", "cofib", "fibrant"}));
    check->add_option("--map", map_name, "Chain map name");
    check->add_option("--morphism", morphism_name, "Cospan morphism name");
    check->add_option("--cospan", cospan_name, "Cospan name (for fibrant)");
    check->add_option("--structure", structure, "inj | ree-i | ree-d (cospan morphisms and cospans)");

    auto* replace = app.add_subcommand("replace", "Fibrant replacement of a cospan");
    replace->add_option("--cospan", cospan_name, "Cospan name");
    replace->add_option("--structure", structure, "inj | ree-i | ree-d")->required();
    replace->add_option("--mode", mode, "functorial (default) | local");
    replace->add_option("--output,-o", output, "Write the replacement as an instance file");

    auto* hopb_cmd = app.add_subcommand("hopb", "Homology of the homotopy pullback");
    hopb_cmd->add_option("--cospan", cospan_name, "Cospan name");
    hopb_cmd->add_option("--structure", structure, "inj | ree-i | ree-d (default: all)");
    hopb_cmd->add_option("--mode", mode, "functorial | local (default: both)");

    auto* model = app.add_subcommand("model-square", "Is a square a model of the homotopy pullback?");
    model->add_option("--square", square_name, "Square name");
    model->add_option("--structure", structure, "inj | ree-i | ree-d");
    model->add_option("--mode", mode, "functorial | local");
    model->add_option("--leg", leg, "Replace only this leg: first (g) | second (f)");

    auto* fiber = app.add_subcommand("fiber-square", "Is a square a homotopy fiber square?");
    fiber->add_option("--square", square_name, "Square name");

    auto* paste_cmd = app.add_subcommand("paste", "Paste two adjacent squares");
    paste_cmd->add_option("--left", left, "Left square")->required();
    paste_cmd->add_option("--right", right, "Right square")->required();
    paste_cmd->add_option("--output,-o", output, "Write the pasted squares as an instance file");

    auto* suite = app.add_subcommand("suite", "Run a property suite, or replay a dumped trial with --input");
    std::vector<std::string> names;
    for (const Suite& s : all_suites())
        names.emplace_back(s.name);
    suite->add_option("name", name, "Suite name")->check(CLI::IsMember(names));
    suite->add_option("--dump-dir", dump_dir, "Write failing instances here");
    add_cfg(suite);

    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("kind", kind, "cospan | model-square | strict-square | sphere-square")->required();
    gen->add_option("--leg", leg, "Make this leg a fibration (cospan): first | second");
    gen->add_option("--output,-o", output, "Output file (default: stdout)");
    add_cfg(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kTrue : kError;
    }

    try {
        if (*homology)
            return cmd_homology(g, name);
        if (*check)
            return cmd_check(g, what, map_name, cospan_name, morphism_name, structure);
        if (*replace)
            return cmd_replace(g, cospan_name, structure, mode, output);
        if (*hopb_cmd)
            return cmd_hopb(g, cospan_name, structure, mode);
        if (*model)
            return cmd_model_square(g, square_name, structure, mode, leg);
        if (*fiber)
            return cmd_fiber_square(g, square_name);
        if (*paste_cmd)
            return cmd_paste(g, left, right, output);
        if (*suite)
            return cmd_suite(g, name, cfg, dump_dir);
        if (*gen)
            return cmd_gen(g, kind, leg, cfg, output);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

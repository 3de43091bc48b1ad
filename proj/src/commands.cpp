#include "commands.hpp"

#include "cmlattice.hpp"
#include "config.hpp"
#include "lubintate.hpp"
#include "selftest.hpp"
#include "tannaka.hpp"
#include "wittlambda.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace cmll {

using nlohmann::json;

namespace {

struct Args {
    std::vector<std::string> verbs;
    std::map<std::string, std::string> flags;
    bool pretty{false};
    std::string out_file;
};

Args parse_args(const std::vector<std::string>& argv)
{
    Args a;
    size_t i = 0;
    for (; i < argv.size(); ++i) {
        const std::string& s = argv[i];
        if (s.empty())
            continue;
        if (s == "--pretty") {
            a.pretty = true;
            continue;
        }
        if (s[0] == '-' && s != "-") {
            std::string key = s;
            while (!key.empty() && key[0] == '-')
                key.erase(key.begin());
            if (key.empty())
                throw ValidationError("malformed flag: " + s);
            if (i + 1 >= argv.size())
                throw ValidationError("flag " + s + " requires a value");
            std::string val = argv[++i];
            if (key == "out")
                a.out_file = val;
            else
                a.flags[key] = val;
        } else {
            a.verbs.push_back(s);
        }
    }
    return a;
}

const std::string& need(const Args& a, const std::string& key)
{
    auto it = a.flags.find(key);
    if (it == a.flags.end())
        throw ValidationError("missing required flag -" + key);
    return it->second;
}

std::string get_or(const Args& a, const std::string& key, const std::string& dflt)
{
    auto it = a.flags.find(key);
    return it == a.flags.end() ? dflt : it->second;
}

long to_long(const std::string& s, const std::string& what)
{
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ValidationError(what + " must be an integer, got '" + s + "'");
    }
}

Config config_from(const Args& a)
{
    Config c = Config::from_env();
    if (a.flags.count("bits"))
        c.bits = to_long(a.flags.at("bits"), "--bits");
    if (a.flags.count("prec"))
        c.prec = static_cast<int>(to_long(a.flags.at("prec"), "--prec"));
    if (a.flags.count("deg"))
        c.deg = static_cast<int>(to_long(a.flags.at("deg"), "--deg"));
    c.validate();
    return c;
}

// Ideal spec: integer "3", element "2+1*w" (optionally "/den"), or a
// semicolon-separated generator list.
FracIdeal parse_ideal(const FieldCtx& ctx, const std::string& spec)
{
    std::vector<KElem> gens;
    std::string cur;
    std::istringstream in(spec);
    while (std::getline(in, cur, ';')) {
        if (cur.empty())
            continue;
        gens.push_back(FieldCtx::parse_elem(cur));
    }
    if (gens.empty())
        throw ValidationError("empty ideal specification");
    return FracIdeal::from_gens(ctx, gens);
}

json json_int(const Int& n)
{
    if (n >= Int(std::numeric_limits<long>::min()) && n <= Int(std::numeric_limits<long>::max()))
        return json(n.get_si());
    return json(n.get_str());
}

json ideal_json(const FracIdeal& I)
{
    return json{{"hnf", json::array({json_int(I.a()), json_int(I.b()), json_int(I.c())})},
                {"den", json_int(I.den())}};
}

json rat_json(const Rat& r)
{
    if (r.get_den() == 1)
        return json_int(Int(r.get_num()));
    return json(r.get_str());
}

json series_json(const PSeries& s)
{
    json arr = json::array();
    for (const auto& c : s.c)
        arr.push_back(FieldCtx::format(c));
    return arr;
}

json report_json(const CheckReport& rep)
{
    return json{{"pass", rep.pass}, {"checked", rep.checked}, {"failures", rep.failures}};
}

std::string mono_key(const Mono& m)
{
    std::string key;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i)
            key += ",";
        key += std::to_string(m[i]);
    }
    return key;
}

json mpoly_json(const MPoly& f)
{
    json obj = json::object();
    for (const auto& [m, c] : f.terms)
        obj[mono_key(m)] = FieldCtx::format(c);
    return obj;
}

json tpoly_json(const TruncPoly& f)
{
    json obj = json::object();
    for (const auto& [m, c] : f.t) {
        std::string key;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i)
                key += ",";
            key += std::to_string(m[i]);
        }
        obj[key] = FieldCtx::format(c);
    }
    return obj;
}

FieldCtx field_from(const Args& a)
{
    return make_field(Int(to_long(need(a, "d"), "-d")));
}

// --- subcommands ------------------------------------------------------------

json cmd_field(const Args& a)
{
    if (a.verbs.size() < 2 || a.verbs[1] != "info")
        throw ValidationError("usage: field info -d D");
    FieldCtx ctx = field_from(a);
    json units = json::array();
    for (const auto& u : ctx.unit_group())
        units.push_back(FieldCtx::format(u));
    return json{{"d", json_int(ctx.d())},
                {"disc", json_int(ctx.disc())},
                {"omega", ctx.omega_kind() == OmegaKind::SQRT ? "sqrt" : "half"},
                {"w", ctx.w()},
                {"units", units}};
}

json cmd_ideal(const Args& a)
{
    if (a.verbs.size() < 2)
        throw ValidationError("usage: ideal info|factor|mul ...");
    FieldCtx ctx = field_from(a);
    const std::string& verb = a.verbs[1];
    if (verb == "info") {
        FracIdeal I = parse_ideal(ctx, need(a, "I"));
        json out = ideal_json(I);
        out["norm"] = rat_json(I.norm());
        auto g = is_principal(ctx, I);
        out["principal"] = g ? json(FieldCtx::format(*g)) : json(nullptr);
        return out;
    }
    if (verb == "factor") {
        FracIdeal I = parse_ideal(ctx, need(a, "I"));
        json fact = json::array();
        for (const auto& pp : factor_ideal(ctx, I))
            fact.push_back(json{{"p", ideal_json(pp.p)},
                                {"norm", json_int(pp.p.norm_int())},
                                {"e", pp.e}});
        return json{{"ideal", ideal_json(I)}, {"factors", fact}};
    }
    if (verb == "mul") {
        FracIdeal I = parse_ideal(ctx, need(a, "I"));
        FracIdeal J = parse_ideal(ctx, need(a, "J"));
        return ideal_json(FracIdeal::mul(ctx, I, J));
    }
    throw ValidationError("unknown ideal subcommand: " + verb);
}

json cmd_rayclass(const Args& a)
{
    if (a.verbs.size() < 2)
        throw ValidationError("usage: rayclass order|dlog ...");
    FieldCtx ctx = field_from(a);
    Config cfg = config_from(a);
    FracIdeal f = parse_ideal(ctx, need(a, "f"));
    ClassGroup cg(ctx, Int(cfg.cap_group));
    RayClassGroup G(ctx, f, cg, cfg.cap_norm);
    json eld = json::array();
    for (const auto& n : G.elementary())
        eld.push_back(json_int(n));
    json out{{"order", G.order()}, {"elementary_divisors", eld}};
    const std::string& verb = a.verbs[1];
    if (verb == "order")
        return out;
    if (verb == "dlog") {
        FracIdeal ideal_a = parse_ideal(ctx, need(a, "a"));
        long e = G.bracket_ideal(ideal_a);
        out["class"] = e;
        json dl = json::array();
        for (long x : G.dlog(e))
            dl.push_back(x);
        out["dlog"] = dl;
        return out;
    }
    throw ValidationError("unknown rayclass subcommand: " + verb);
}

std::pair<QuadInt, Int> parse_pi_q(const FieldCtx& ctx, const Args& a)
{
    QuadInt pi = FieldCtx::parse_quadint(need(a, "p"));
    Int q;
    if (a.flags.count("q"))
        q = Int(to_long(a.flags.at("q"), "-q"));
    else
        q = pi.b == 0 ? abs(pi.a) : ctx.norm(pi);
    return {pi, q};
}

json cmd_witt(const Args& a)
{
    if (a.verbs.size() < 2)
        throw ValidationError("usage: witt poly|add|mul ...");
    FieldCtx ctx = make_field(Int(to_long(get_or(a, "d", "1"), "-d")));
    auto [pi, q] = parse_pi_q(ctx, a);
    int n = static_cast<int>(to_long(need(a, "n"), "-n"));
    WittParams par = make_witt_params(ctx, pi, q, n);
    WittPolynomials wp = witt_polynomials(par);
    const std::string& verb = a.verbs[1];
    if (verb == "poly") {
        json S = json::array(), P = json::array();
        for (int m = 0; m < n; ++m) {
            S.push_back(mpoly_json(wp.S[m]));
            P.push_back(mpoly_json(wp.P[m]));
        }
        return json{{"pi", FieldCtx::format(pi)}, {"q", json_int(q)}, {"S", S}, {"P", P}};
    }
    if (verb == "add" || verb == "mul") {
        Carrier car = par.rational ? Carrier::integers(ctx) : Carrier::ok(ctx);
        auto parse_vec = [&](const std::string& csv) {
            WittVector w{par, {}};
            std::istringstream in(csv);
            std::string cur;
            while (std::getline(in, cur, ','))
                w.coords.push_back(car.from_quadint(FieldCtx::parse_quadint(cur)));
            if (static_cast<int>(w.coords.size()) != n)
                throw ValidationError("coordinate vector must have length " +
                                      std::to_string(n));
            return w;
        };
        WittVector x = parse_vec(need(a, "x")), y = parse_vec(need(a, "y"));
        WittVector z = verb == "add" ? witt_add(car, wp, x, y) : witt_mul(car, wp, x, y);
        GhostVector g = ghost_map(car, z);
        json coords = json::array(), ghost = json::array();
        for (const auto& c : z.coords)
            coords.push_back(car.str(c));
        for (const auto& c : g.comps)
            ghost.push_back(car.str(c));
        return json{{"coords", coords}, {"ghost", ghost}};
    }
    throw ValidationError("unknown witt subcommand: " + verb);
}

json cmd_lambda(const Args& a)
{
    if (a.verbs.size() < 2 || a.verbs[1] != "verify")
        throw ValidationError("usage: lambda verify --carrier okx|okt -d D");
    FieldCtx ctx = field_from(a);
    std::string carrier = get_or(a, "carrier", "okx");
    Carrier car = carrier == "okt" ? Carrier::ok_poly(ctx) : Carrier::ok(ctx);
    if (carrier != "okx" && carrier != "okt")
        throw ValidationError("carrier must be okx or okt");
    std::vector<FrobLift> lifts;
    for (long p : {2L, 3L, 5L, 7L})
        for (auto& [P, e] : primes_above(ctx, p)) {
            (void)e;
            lifts.push_back({P, std::nullopt});
        }
    std::vector<CElem> samples;
    if (carrier == "okt") {
        samples.push_back(car.var_t());
        samples.push_back(car.add(car.var_t(), car.from_int(1)));
        samples.push_back(car.mul(car.var_t(), car.add(car.var_t(), car.from_int(2))));
    } else {
        for (long x = -2; x <= 2; ++x)
            for (long y = -2; y <= 2; ++y)
                samples.push_back(car.from_quadint(QuadInt{x, y}));
    }
    auto rep = verify_lambda(car, lifts, samples);
    return json{{"carrier", carrier},
                {"commutation", rep.commutation_pass},
                {"frobenius_congruence", rep.congruence_pass},
                {"pass", rep.pass()},
                {"failures", rep.failures}};
}

LubinTateModule lt_from(const Args& a, const FieldCtx& ctx, const Config& cfg)
{
    auto [pi, q] = parse_pi_q(ctx, a);
    std::string kind = get_or(a, "f", "canonical");
    std::vector<QuadInt> f;
    if (kind == "canonical")
        f = LubinTateModule::canonical_f(ctx, pi, q);
    else if (kind == "mult") {
        if (pi.b != 0 || abs(pi.a) != q)
            throw ValidationError("the multiplicative law needs a rational prime pi");
        f = LubinTateModule::multiplicative_f(ctx, q);
    } else
        throw ValidationError("--f must be canonical or mult");
    int deg = a.flags.count("deg") ? static_cast<int>(to_long(a.flags.at("deg"), "--deg"))
                                   : cfg.deg;
    int prec = a.flags.count("prec") ? static_cast<int>(to_long(a.flags.at("prec"), "--prec"))
                                     : cfg.prec;
    return LubinTateModule(ctx, pi, q, f, deg, prec);
}

json cmd_lt(const Args& a)
{
    if (a.verbs.size() < 2)
        throw ValidationError("usage: lt law|endo|torsion ...");
    FieldCtx ctx = make_field(Int(to_long(get_or(a, "d", "1"), "-d")));
    Config cfg = config_from(a);
    const std::string& verb = a.verbs[1];
    LubinTateModule M = lt_from(a, ctx, cfg);
    if (verb == "law") {
        return json{{"pi", FieldCtx::format(M.ring().pi())},
                    {"q", json_int(M.ring().q())},
                    {"prec", M.ring().prec()},
                    {"deg", M.degree_cutoff()},
                    {"F", tpoly_json(M.group_law())},
                    {"pi_series", series_json(M.pi_series())}};
    }
    if (verb == "endo") {
        QuadInt elem = FieldCtx::parse_quadint(need(a, "a"));
        return json{{"a", FieldCtx::format(elem)}, {"series", series_json(M.endo(elem))}};
    }
    if (verb == "torsion") {
        int n = static_cast<int>(to_long(need(a, "n"), "-n"));
        auto td = torsion_polynomial(M, n);
        return json{{"n", n},
                    {"pin", series_json(td.pin)},
                    {"quotient", series_json(td.quotient)},
                    {"quotient_degree", json_int(td.quotient_degree)},
                    {"eisenstein", td.eisenstein}};
    }
    throw ValidationError("unknown lt subcommand: " + verb);
}

json cmd_cm(const Args& a)
{
    if (a.verbs.size() < 2)
        throw ValidationError("usage: cm torsor|hilbert|ghost|torsion ...");
    FieldCtx ctx = field_from(a);
    Config cfg = config_from(a);
    const std::string& verb = a.verbs[1];
    if (verb == "torsor") {
        FracIdeal f = parse_ideal(ctx, need(a, "f"));
        ClassGroup cg(ctx, Int(cfg.cap_group));
        RayClassGroup G(ctx, f, cg, cfg.cap_norm);
        ModuliSet M(ctx, G);
        auto cert = M.certify();
        json classes = json::array();
        for (const auto& c : M.classes())
            classes.push_back(json{{"lattice", ideal_json(c.lattice)},
                                   {"unit", FieldCtx::format(c.unit_image)}});
        json action = json::array();
        for (long e = 0; e < G.order(); ++e) {
            json row = json::array();
            for (long x = 0; x < M.size(); ++x)
                row.push_back(M.act(e, x));
            action.push_back(row);
        }
        return json{{"order", G.order()},
                    {"classes", classes},
                    {"action", action},
                    {"certificate", report_json(cert)}};
    }
    if (verb == "hilbert") {
        ClassGroup cg(ctx, Int(cfg.cap_group));
        auto h = hilbert_class_polynomial(ctx, cfg.bits, cg.reps());
        json poly = json::array();
        for (const auto& c : h.coeffs)
            poly.push_back(c.get_str());
        return json{{"poly", poly}, {"h", cg.h()}, {"bits", h.bits}, {"residual", h.residual}};
    }
    if (verb == "ghost") {
        Int bound(to_long(get_or(a, "bound", "10"), "--bound"));
        CMLattice E{FracIdeal::one(ctx)};
        GhostFamily fam = ghost_family(ctx, E, bound);
        auto checks = ghost_family_checks(ctx, E, bound, 100);
        json comps = json::array();
        for (const auto& c : fam.comps)
            comps.push_back(json{{"a", ideal_json(c.a)}, {"lattice", ideal_json(c.lattice)}});
        json rigidity = json::array();
        for (const auto& u : ctx.unit_group()) {
            auto rep = ghost_rigidity_check(ctx, E, u, bound);
            rigidity.push_back(
                json{{"unit", FieldCtx::format(u)}, {"forced", rep.pass}});
        }
        return json{{"components", comps},
                    {"checks", report_json(checks)},
                    {"rigidity", rigidity}};
    }
    if (verb == "torsion") {
        FracIdeal lat = parse_ideal(ctx, need(a, "lattice"));
        FracIdeal f = parse_ideal(ctx, need(a, "f"));
        TorsionModule T(ctx, lat, f, cfg.cap_norm);
        bool cyc = T.is_cyclic_generator(T.generator());
        return json{{"size", json_int(T.size())},
                    {"cyclic", cyc},
                    {"generator", FieldCtx::format(T.generator())}};
    }
    throw ValidationError("unknown cm subcommand: " + verb);
}

json cmd_tannaka(const Args& a)
{
    if (a.verbs.size() < 2 || a.verbs[1] != "verify")
        throw ValidationError("usage: tannaka verify -d D -f IDEAL -g IDEAL --bound N");
    FieldCtx ctx = field_from(a);
    Config cfg = config_from(a);
    FracIdeal f = parse_ideal(ctx, need(a, "f"));
    FracIdeal g = a.flags.count("g") ? parse_ideal(ctx, a.flags.at("g")) : f;
    Int bound(to_long(get_or(a, "bound", "30"), "--bound"));
    ClassGroup cg(ctx, Int(cfg.cap_group));
    RayClassGroup G(ctx, f, cg, cfg.cap_norm);
    GeneratorData data = choose_generators(G, g);
    Int rel_bound = bound + 40;
    if (rel_bound > 100)
        rel_bound = 100;
    auto rel = relation_checks(data, rel_bound);
    auto coc = cocycle_sweep(data, bound);
    json gens = json::array();
    for (size_t i = 0; i < data.primes.size(); ++i)
        gens.push_back(json{{"p", ideal_json(data.primes[i])}, {"order", json_int(data.orders[i])}});
    return json{{"generators", gens},
                {"relations", report_json(rel)},
                {"cocycle", report_json(coc)},
                {"pairs", coc.checked},
                {"failures", coc.failures}};
}

} // namespace

CommandResult run_command(const std::vector<std::string>& argv)
{
    CommandResult res;
    try {
        Args a = parse_args(argv);
        if (a.verbs.empty())
            throw ValidationError(
                "usage: cmll {field|ideal|rayclass|witt|lambda|lt|cm|tannaka|selftest} ...");
        const std::string& cmd = a.verbs[0];
        json out;
        if (cmd == "field")
            out = cmd_field(a);
        else if (cmd == "ideal")
            out = cmd_ideal(a);
        else if (cmd == "rayclass")
            out = cmd_rayclass(a);
        else if (cmd == "witt")
            out = cmd_witt(a);
        else if (cmd == "lambda")
            out = cmd_lambda(a);
        else if (cmd == "lt")
            out = cmd_lt(a);
        else if (cmd == "cm")
            out = cmd_cm(a);
        else if (cmd == "tannaka")
            out = cmd_tannaka(a);
        else if (cmd == "selftest") {
            SelftestReport rep = run_selftest();
            res.exit_code = rep.all_pass ? 0 : 1;
            res.output = rep.to_json(a.pretty);
            res.out_file = a.out_file;
            return res;
        } else {
            res.exit_code = 2;
            res.output = "unknown subcommand: " + cmd;
            return res;
        }
        out["schema"] = "1";
        res.output = a.pretty ? out.dump(2) : out.dump();
        res.out_file = a.out_file;
        return res;
    } catch (const ValidationError& e) {
        res.exit_code = 3;
        res.output = std::string("error: ") + e.what();
        return res;
    } catch (const InternalError& e) {
        res.exit_code = 4;
        res.output = std::string("internal consistency error: ") + e.what();
        return res;
    } catch (const std::exception& e) {
        res.exit_code = 4;
        res.output = std::string("unexpected error: ") + e.what();
        return res;
    }
}

} // namespace cmll

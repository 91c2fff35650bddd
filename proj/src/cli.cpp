#include "cycles/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "cycles/dynamics.hpp"
#include "cycles/equivalence.hpp"
#include "cycles/families.hpp"
#include "cycles/parse.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cycles {

namespace {

using Json = nlohmann::ordered_json;

struct Ctx {
    bool records = false;
    std::ostream* out = nullptr;
};

void emit(const Ctx& ctx, const Json& record, const std::string& human) {
    if (ctx.records)
        *ctx.out << record.dump() << '\n';
    else
        *ctx.out << human << '\n';
}

SPrimeSet parse_s(const std::string& text) {
    std::vector<Int> primes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        Int p;
        if (mpz_set_str(p.get_mpz_t(), tok.c_str(), 10) != 0)
            throw std::invalid_argument("parse error: bad prime at '" + tok + "'");
        primes.push_back(p);
    }
    return SPrimeSet(std::move(primes));
}

Json points_json(const std::vector<ProjPoint>& pts) {
    Json a = Json::array();
    for (const ProjPoint& p : pts) a.push_back(format_point(p));
    return a;
}

Json primes_json(const std::vector<Int>& ps) {
    Json a = Json::array();
    for (const Int& p : ps) a.push_back(p.get_str());
    return a;
}

std::string points_text(const std::vector<ProjPoint>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + format_point(pts[i]);
    return s;
}

std::string factorization_text(const Factorization& f) {
    if (f.factors.empty()) return f.sign < 0 ? "-1" : "1";
    std::string s = f.sign < 0 ? "-" : "";
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        if (i) s += "*";
        s += f.factors[i].first.get_str();
        if (f.factors[i].second > 1) s += "^" + std::to_string(f.factors[i].second);
    }
    return s;
}

std::vector<ProjPoint> tuple_from_args(const std::vector<std::string>& toks) {
    std::vector<ProjPoint> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(parse_point(t));
    return out;
}

void setup(CLI::App& app, Ctx& ctx) {
    app.require_subcommand(1);
    app.add_flag("--records", ctx.records, "emit one structured record per line");

    // ---- delta ----
    {
        auto* cmd = app.add_subcommand("delta", "p-adic logarithmic distance of two points");
        auto P = std::make_shared<std::string>();
        auto Q = std::make_shared<std::string>();
        auto p = std::make_shared<std::string>();
        cmd->add_option("P", *P, "first point")->required();
        cmd->add_option("Q", *Q, "second point")->required();
        cmd->add_option("--p", *p, "prime")->required();
        cmd->callback([&ctx, P, Q, p] {
            Int prime;
            if (mpz_set_str(prime.get_mpz_t(), p->c_str(), 10) != 0 || !is_prime(prime))
                throw std::invalid_argument("--p must be a prime: '" + *p + "'");
            ProjPoint a = parse_point(*P), b = parse_point(*Q);
            Delta d = log_distance(a, b, prime);
            emit(ctx,
                 Json{{"command", "delta"},
                      {"P", format_point(a)},
                      {"Q", format_point(b)},
                      {"p", prime.get_str()},
                      {"delta", d.to_string()}},
                 "delta_" + prime.get_str() + "(" + format_point(a) + ", " + format_point(b) +
                     ") = " + d.to_string());
        });
    }

    // ---- ideal ----
    {
        auto* cmd = app.add_subcommand("ideal", "ideal attached to two distinct points");
        auto P = std::make_shared<std::string>();
        auto Q = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("P", *P)->required();
        cmd->add_option("Q", *Q)->required();
        cmd->add_option("--s", *s, "comma-separated primes of S");
        cmd->callback([&ctx, P, Q, s] {
            SPrimeSet S = parse_s(*s);
            ProjPoint a = parse_point(*P), b = parse_point(*Q);
            SIdeal I = ideal_between(a, b, S);
            emit(ctx,
                 Json{{"command", "ideal"},
                      {"P", format_point(a)},
                      {"Q", format_point(b)},
                      {"s", S.to_string()},
                      {"ideal", I.to_string()}},
                 "ideal(" + format_point(a) + ", " + format_point(b) + "; S=" + S.to_string() +
                     ") = " + I.to_string());
        });
    }

    // ---- reduction-map ----
    {
        auto* cmd = app.add_subcommand("reduction-map", "good-reduction test for a map");
        auto m = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("map", *m)->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, m, s] {
            SPrimeSet S = parse_s(*s);
            HomogMap map = parse_map(*m);
            std::vector<Int> bad = bad_primes(map);
            bool good = good_reduction_map(map, S);
            emit(ctx,
                 Json{{"command", "reduction-map"},
                      {"map", format_map(map)},
                      {"s", S.to_string()},
                      {"degree", map.degree()},
                      {"good", good},
                      {"bad_primes", primes_json(bad)}},
                 std::string(good ? "good" : "bad") + " reduction outside S=" + S.to_string() +
                     "; bad primes: " + (bad.empty() ? "none" : primes_json(bad).dump()));
        });
    }

    // ---- reduction-tuple ----
    {
        auto* cmd = app.add_subcommand("reduction-tuple", "good-reduction test for a point tuple");
        auto pts = std::make_shared<std::vector<std::string>>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("points", *pts)->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, pts, s] {
            SPrimeSet S = parse_s(*s);
            std::vector<ProjPoint> tuple = tuple_from_args(*pts);
            TupleReduction r = tuple_good_reduction(tuple, S);
            Json ws = Json::array();
            std::string wtext;
            for (const auto& w : r.witnesses) {
                ws.push_back(Json{{"prime", w.prime.get_str()}, {"i", w.i}, {"j", w.j}});
                wtext += " " + w.prime.get_str() + "@(" + std::to_string(w.i) + "," +
                         std::to_string(w.j) + ")";
            }
            emit(ctx,
                 Json{{"command", "reduction-tuple"},
                      {"points", points_json(tuple)},
                      {"s", S.to_string()},
                      {"good", r.good},
                      {"witnesses", ws}},
                 r.good ? "good reduction outside S=" + S.to_string()
                        : "bad reduction; witnesses:" + wtext);
        });
    }

    // ---- orbit ----
    {
        auto* cmd = app.add_subcommand("orbit", "iterate a map from a starting point");
        auto m = std::make_shared<std::string>();
        auto P = std::make_shared<std::string>();
        auto steps = std::make_shared<unsigned>(100);
        auto cap = std::make_shared<std::string>("1000000000000");
        cmd->add_option("map", *m)->required();
        cmd->add_option("point", *P)->required();
        cmd->add_option("--max-steps", *steps);
        cmd->add_option("--height-cap", *cap);
        cmd->callback([&ctx, m, P, steps, cap] {
            HomogMap map = parse_map(*m);
            ProjPoint start = parse_point(*P);
            Int hc;
            if (mpz_set_str(hc.get_mpz_t(), cap->c_str(), 10) != 0)
                throw std::invalid_argument("bad --height-cap");
            OrbitResult r = orbit(map, start, *steps, hc);
            const char* outcome = r.outcome == OrbitOutcome::cycle_found     ? "cycle-found"
                                  : r.outcome == OrbitOutcome::height_exceeded ? "height-exceeded"
                                                                               : "step-limit";
            Json rec{{"command", "orbit"},       {"map", format_map(map)},
                     {"start", format_point(start)}, {"max_steps", *steps},
                     {"height_cap", hc.get_str()},   {"outcome", outcome},
                     {"tail", points_json(r.tail)}};
            rec["cycle"] = r.cycle ? points_json(r.cycle->points()) : Json(nullptr);
            std::string human = std::string("outcome: ") + outcome;
            if (!r.tail.empty()) human += "; tail: " + points_text(r.tail);
            if (r.cycle) human += "; cycle: " + points_text(r.cycle->points());
            emit(ctx, rec, human);
        });
    }

    // ---- periodic ----
    {
        auto* cmd = app.add_subcommand("periodic", "rational points of period dividing n");
        auto m = std::make_shared<std::string>();
        auto period = std::make_shared<unsigned>(1);
        auto budget = std::make_shared<unsigned long>(1'000'000);
        cmd->add_option("map", *m)->required();
        cmd->add_option("--period", *period)->required();
        cmd->add_option("--budget", *budget, "factoring effort for root extraction");
        cmd->callback([&ctx, m, period, budget] {
            HomogMap map = parse_map(*m);
            FactorBudget b;
            b.rho_iterations = *budget;
            b.trial_bound = std::min<unsigned long>(1'000'000, std::max<unsigned long>(*budget, 1000));
            PeriodicPoints r = periodic_points(map, *period, b);
            emit(ctx,
                 Json{{"command", "periodic"},
                      {"map", format_map(map)},
                      {"period", *period},
                      {"points", points_json(r.points)},
                      {"complete", r.complete}},
                 "points: " + points_text(r.points) +
                     (r.complete ? " (complete)" : " (may be incomplete)"));
        });
    }

    // ---- ledger ----
    {
        auto* cmd = app.add_subcommand("ledger", "invariant ledger of a certified cycle");
        auto m = std::make_shared<std::string>();
        auto pts = std::make_shared<std::vector<std::string>>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("map", *m)->required();
        cmd->add_option("points", *pts)->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, m, pts, s] {
            SPrimeSet S = parse_s(*s);
            HomogMap map = parse_map(*m);
            Cycle cyc = verify_cycle(map, tuple_from_args(*pts), S);
            CycleLedger led = cycle_ledger(cyc, S);
            const std::size_t n = led.length();
            Json gaps = Json::array(), ideals = Json::array(), reduced = Json::array();
            for (std::size_t i = 1; i < n; ++i) {
                gaps.push_back(format_rational(led.gap_ratio(i)));
                ideals.push_back(led.ideal(i).to_string());
                reduced.push_back(led.reduced_ideal(i).to_string());
            }
            Json units = Json::array();
            for (std::size_t j = 0; j < n; ++j) {
                Json row = Json::array();
                for (std::size_t i = 1; i < n; ++i)
                    row.push_back(format_rational(led.shift_unit(j, i)));
                units.push_back(row);
            }
            Json nested = Json::array();
            for (std::size_t i = 1; i < n; ++i) {
                Json row = Json::array();
                for (std::size_t j = 1; j < n; ++j)
                    row.push_back(format_rational(led.nested_ratio(i, j)));
                nested.push_back(row);
            }
            emit(ctx,
                 Json{{"command", "ledger"},
                      {"map", format_map(map)},
                      {"points", points_json(cyc.points())},
                      {"s", S.to_string()},
                      {"gap_ratios", gaps},
                      {"shift_units", units},
                      {"nested_ratios", nested},
                      {"ideals", ideals},
                      {"reduced_ideals", reduced}},
                 "gap ratios: " + gaps.dump() + "; ideals: " + ideals.dump() +
                     "; reduced: " + reduced.dump());
        });
    }

    // ---- normalize ----
    {
        auto* cmd = app.add_subcommand("normalize", "normalized tuple of a certified cycle");
        auto m = std::make_shared<std::string>();
        auto pts = std::make_shared<std::vector<std::string>>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("map", *m)->required();
        cmd->add_option("points", *pts)->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, m, pts, s] {
            SPrimeSet S = parse_s(*s);
            HomogMap map = parse_map(*m);
            Cycle cyc = verify_cycle(map, tuple_from_args(*pts), S);
            NormalizedTuple nt = normalized_tuple(cyc, S);
            emit(ctx,
                 Json{{"command", "normalize"},
                      {"map", format_map(map)},
                      {"points", points_json(cyc.points())},
                      {"s", S.to_string()},
                      {"normalized", points_json(nt.points)},
                      {"pair_map", nt.pair_map.to_string()},
                      {"unit_scale", nt.unit_scale.to_string()}},
                 "normalized: " + points_text(nt.points) + "; pair map " +
                     nt.pair_map.to_string() + "; unit scale " + nt.unit_scale.to_string());
        });
    }

    // ---- equiv ----
    {
        auto* cmd = app.add_subcommand("equiv", "tuple equivalence under PGL2(Z_S)");
        auto toks = std::make_shared<std::vector<std::string>>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("tuples", *toks, "pointsA ; pointsB")->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, toks, s] {
            SPrimeSet S = parse_s(*s);
            std::string joined;
            for (const auto& t : *toks) joined += t + " ";
            std::size_t sep = joined.find(';');
            if (sep == std::string::npos || joined.find(';', sep + 1) != std::string::npos)
                throw std::invalid_argument("expected exactly one ';' between the tuples");
            std::vector<ProjPoint> A = parse_tuple(joined.substr(0, sep));
            std::vector<ProjPoint> B = parse_tuple(joined.substr(sep + 1));
            auto W = tuples_equivalent(A, B, S);
            emit(ctx,
                 Json{{"command", "equiv"},
                      {"tupleA", points_json(A)},
                      {"tupleB", points_json(B)},
                      {"s", S.to_string()},
                      {"equivalent", bool(W)},
                      {"witness", W ? Json(W->to_string()) : Json(nullptr)}},
                 W ? "equivalent; witness " + W->to_string() : "inequivalent");
        });
    }

    // ---- classify ----
    {
        auto* cmd = app.add_subcommand("classify", "partition a file of tuples into classes");
        auto file = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>();
        cmd->add_option("file", *file, "one tuple per line, points separated by spaces")
            ->required();
        cmd->add_option("--s", *s);
        cmd->callback([&ctx, file, s] {
            SPrimeSet S = parse_s(*s);
            std::ifstream in(*file);
            if (!in) throw std::runtime_error("cannot open file " + *file);
            std::vector<std::vector<ProjPoint>> tuples;
            std::string line;
            while (std::getline(in, line)) {
                auto t = parse_tuple(line);
                if (!t.empty()) tuples.push_back(std::move(t));
            }
            auto classes = classify_tuples(tuples, S);
            Json cj = Json::array();
            std::string human = std::to_string(classes.size()) + " classes";
            for (const auto& c : classes) {
                cj.push_back(Json{{"representative", points_json(c.representative)},
                                  {"members", c.members}});
                human += "\n  " + points_text(c.representative) + "  members " +
                         Json(c.members).dump();
            }
            emit(ctx,
                 Json{{"command", "classify"},
                      {"s", S.to_string()},
                      {"count", classes.size()},
                      {"classes", cj}},
                 human);
        });
    }

    // ---- thm2 ----
    {
        auto* cmd = app.add_subcommand("thm2", "explicit degree-4 family with 3-cycles");
        auto u = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>("2");
        auto strict = std::make_shared<bool>(false);
        cmd->add_option("--u", *u, "unit parameter");
        cmd->add_option("--s", *s);
        cmd->add_flag("--strict", *strict, "reject u that is not an S-unit");
        auto* census = cmd->add_subcommand("census", "ideal generators 2^{2n}-2^n+1");
        auto nmax = std::make_shared<unsigned>(8);
        census->add_option("--n-max", *nmax);
        census->callback([&ctx, nmax] {
            auto rows = ideal_census(*nmax);
            Json rj = Json::array();
            std::string human;
            for (const auto& r : rows) {
                rj.push_back(Json{{"n", r.n},
                                  {"generator", r.generator.get_str()},
                                  {"factors", factorization_text(r.factors)},
                                  {"complete", r.complete},
                                  {"distinct_primes", r.distinct_primes}});
                human += (human.empty() ? "" : "\n") + std::string("n=") + std::to_string(r.n) +
                         ": " + r.generator.get_str() + " = " + factorization_text(r.factors) +
                         " (distinct primes so far: " + std::to_string(r.distinct_primes) + ")";
            }
            emit(ctx, Json{{"command", "thm2-census"}, {"n_max", *nmax}, {"rows", rj}}, human);
        });
        cmd->callback([&ctx, u, s, strict, census] {
            if (census->parsed()) return;
            if (u->empty()) throw std::invalid_argument("thm2 needs --u (or the census subcommand)");
            SPrimeSet S = parse_s(*s);
            FamilyInstance inst = build_family(parse_rational(*u), S, *strict);
            emit(ctx,
                 Json{{"command", "thm2"},
                      {"u", format_rational(inst.u)},
                      {"s", S.to_string()},
                      {"degree", inst.cycle_map.degree()},
                      {"good_reduction", inst.good_reduction},
                      {"triple",
                       points_json({inst.triple[0], inst.triple[1], inst.triple[2]})},
                      {"ideal1", inst.ideal1.to_string()},
                      {"ideal2", inst.ideal2.to_string()},
                      {"bad_primes", primes_json(inst.bad)},
                      {"map", format_map(inst.cycle_map)}},
                 "u=" + format_rational(inst.u) + ": degree " +
                     std::to_string(inst.cycle_map.degree()) + ", " +
                     (inst.good_reduction ? "good" : "bad") + " reduction outside S=" +
                     S.to_string() + ", triple " +
                     points_text({inst.triple[0], inst.triple[1], inst.triple[2]}) +
                     ", ideal1 " + inst.ideal1.to_string() + ", ideal2 " +
                     inst.ideal2.to_string());
        });
    }

    // ---- sunit ----
    {
        auto* cmd = app.add_subcommand("sunit", "bounded S-unit equation solver");
        auto coeffs = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>();
        auto box = std::make_shared<unsigned>(20);
        cmd->add_option("--coeffs", *coeffs, "a1,a2[,a3]")->required();
        cmd->add_option("--s", *s);
        cmd->add_option("--box", *box, "max |exponent| per prime of S");
        cmd->callback([&ctx, coeffs, s, box] {
            SPrimeSet S = parse_s(*s);
            std::vector<Rat> a;
            std::stringstream ss(*coeffs);
            std::string tok;
            while (std::getline(ss, tok, ',')) a.push_back(parse_rational(tok));
            auto sols = solve_unit_eq(a, S, *box);
            Json sj = Json::array();
            std::string human = std::to_string(sols.size()) + " solutions";
            for (const auto& sol : sols) {
                Json xs = Json::array();
                std::string xs_text = "(";
                for (std::size_t i = 0; i < sol.x.size(); ++i) {
                    xs.push_back(format_rational(sol.x[i]));
                    xs_text += (i ? "," : "") + format_rational(sol.x[i]);
                }
                xs_text += ")";
                sj.push_back(Json{{"x", xs}, {"degenerate", sol.degenerate}});
                human += "\n  " + xs_text + (sol.degenerate ? " degenerate" : "");
            }
            Json ca = Json::array();
            for (const Rat& c : a) ca.push_back(format_rational(c));
            emit(ctx,
                 Json{{"command", "sunit"},
                      {"coeffs", ca},
                      {"s", S.to_string()},
                      {"box", *box},
                      {"count", sols.size()},
                      {"solutions", sj}},
                 human);
        });
    }

    // ---- bound ----
    {
        auto* cmd = app.add_subcommand("bound", "upper bound on cycle length in the place count");
        auto sc = std::make_shared<unsigned>(1);
        cmd->add_option("--s-count", *sc, "number of places, archimedean included")->required();
        cmd->callback([&ctx, sc] {
            Int b = period_length_bound(*sc);
            emit(ctx,
                 Json{{"command", "bound"}, {"s_count", *sc}, {"bound", b.get_str()}},
                 "bound(" + std::to_string(*sc) + ") = " + b.get_str());
        });
    }

    // let flags of the top-level app (--records) appear after subcommand args
    for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; })) {
        sc->fallthrough();
        for (CLI::App* s2 : sc->get_subcommands([](CLI::App*) { return true; }))
            s2->fallthrough();
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact arithmetic for cycles of rational maps with restricted bad reduction"};
    Ctx ctx;
    ctx.out = &out;
    setup(app, ctx);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace cycles

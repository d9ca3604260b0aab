#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "uqf/cfrac.hpp"
#include "uqf/errors.hpp"
#include "uqf/escalation.hpp"
#include "uqf/family.hpp"
#include "uqf/json_io.hpp"
#include "uqf/quadfield.hpp"
#include "uqf/sieve.hpp"

using nlohmann::json;
using namespace uqf;

namespace {

mpz_class parse_mpz(const std::string& s, const char* what) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw InputError(std::string(what) + ": \"" + s + "\" is not a decimal integer");
    }
}

std::vector<mpz_class> parse_mpz_list(const std::string& s, std::size_t expect, const char* what) {
    std::vector<mpz_class> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = s.find(',', pos);
        out.push_back(parse_mpz(s.substr(pos, comma - pos), what));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != expect)
        throw InputError(std::string(what) + ": expected " + std::to_string(expect) +
                         " comma-separated integers, got " + std::to_string(out.size()));
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Numbers that fit stay numbers; anything wider becomes a decimal string.
json mpz_compact(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

void emit(const json& j, bool pretty, const std::string& out_path) {
    std::string body = (pretty ? j.dump(2) : j.dump()) + "\n";
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + out_path);
    out << body;
}

json run_cfrac(const std::string& d_str, long n_opt) {
    mpz_class d = parse_mpz(d_str, "--d");
    CFExpansion exp = expand_sqrt(d);
    long count = n_opt >= 0 ? n_opt : static_cast<long>(exp.period.size());
    if (count < 1) throw OutOfRange("cfrac: --n must be >= 1");
    // plain p/q recurrence, so non-squarefree radicands still get their table
    json conv = json::array();
    mpz_class pm1 = 1, qm1 = 0, p = exp.a0, q = 1;
    for (long i = 0; i < count; ++i) {
        if (i > 0) {
            mpz_class a = coefficient_after(exp, i - 1);
            mpz_class pn = a * p + pm1, qn = a * q + qm1;
            pm1 = p;
            qm1 = q;
            p = pn;
            q = qn;
        }
        mpz_class nn = p * p - d * q * q;
        conv.push_back(
            {{"i", i}, {"p", p.get_str()}, {"q", q.get_str()}, {"N", nn.get_str()}});
    }
    json period = json::array();
    for (const mpz_class& a : exp.period) period.push_back(mpz_compact(a));
    return json{{"D", d.get_str()},
                {"a0", mpz_compact(exp.a0)},
                {"period", period},
                {"convergents", conv}};
}

json run_family(long u, long l, const std::string& tmin_s, const std::string& tmax_s, bool mod4,
                bool do_cert, bool seed_list, const std::string& window, const FactorEffort& eff) {
    mpz_class tmin = parse_mpz(tmin_s, "--t-min");
    mpz_class tmax = parse_mpz(tmax_s, "--t-max");
    SearchFilters filters;
    filters.require_two_mod_four = mod4;
    filters.effort = eff;
    WindowMode wm = window == "narrow" ? WindowMode::narrow : WindowMode::direct;

    json out = json::array();
    for (const SearchHit& hit : search_t(u, l, tmin, tmax, filters)) {
        const FamilyInstance& inst = hit.inst;
        if (seed_list) {
            Certificate cert = certify_non_universality(inst, wm);
            out.push_back({{"u", u},
                           {"l", l},
                           {"t", mpz_compact(inst.t)},
                           {"D", inst.d.get_str()},
                           {"M", cert.m},
                           {"valid", cert.valid}});
            continue;
        }
        json nmap = json::object();
        for (long i = 1; i <= (l - 1) / 2; i += 2) nmap[std::to_string(i)] = inst.n_at(i).get_str();
        json rec{{"u", u},          {"l", l},
                 {"t", mpz_compact(inst.t)},
                 {"D", inst.d.get_str()},
                 {"k", inst.k.get_str()},
                 {"N", nmap},
                 {"evidence", hit.evidence}};
        if (do_cert) rec["certificate"] = to_json(certify_non_universality(inst, wm));
        out.push_back(std::move(rec));
    }
    return out;
}

json run_sieve(const std::string& f_s, const std::vector<std::string>& g_s, long x, bool with_euler,
               unsigned long cutoff, const FactorEffort& eff) {
    auto fc = parse_mpz_list(f_s, 3, "--f");
    std::vector<std::pair<mpz_class, mpz_class>> gs;
    for (const std::string& g : g_s) {
        auto kr = parse_mpz_list(g, 2, "--g");
        gs.emplace_back(kr[0], kr[1]);
    }
    SieveSpec spec = make_sieve_spec(fc[0], fc[1], fc[2], gs);
    mpz_class count = count_simultaneous(spec, x, eff);
    mpq_class ratio(count, x);
    ratio.canonicalize();
    json out{{"X", x},
             {"count", count.get_str()},
             {"ratio", mpq_decimal(ratio, 6, 0)},
             {"euler_enclosure", json()}};
    if (with_euler) {
        QInterval enc = euler_constant(spec, cutoff);
        out["euler_enclosure"] = json{{"P", cutoff},
                                      {"lo", mpq_decimal(enc.lo(), 15, -1)},
                                      {"hi", mpq_decimal(enc.hi(), 15, +1)}};
    }
    return out;
}

json run_escalate(const std::string& d_s, const std::string& queue_s, int depth, bool tree,
                  const FactorEffort& eff) {
    mpz_class d = parse_mpz(d_s, "--d");
    Field f = make_field(d, eff);
    std::vector<QuadInt> queue;
    if (queue_s == "paper73") {
        if (d != 73) throw InputError("the built-in queue paper73 is defined over D = 73");
        auto el = [&](long x, long y) { return QuadInt(f, x, y); };
        QuadInt rho = el(4, 1), sigma = el(83, 22);
        QuadInt rho_c = rho.conj(), sigma_c = sigma.conj();
        queue = {el(1, 0), rho,      sigma,          rho_c,
                 sigma_c,  el(2, 0), rho_c * sigma,  rho * sigma};
    } else {
        json j = read_json_file(queue_s);
        if (!j.is_array()) throw InputError("queue file: expected a JSON array of [x, y] pairs");
        for (const json& e : j) queue.push_back(quadint_from_json(f, e));
    }
    return to_json(lower_bound_search(f, queue, depth), tree);
}

json run_certify(const std::string& d_s, const std::string& elems_path, const std::string& mode_s,
                 const FactorEffort& eff) {
    mpz_class d = parse_mpz(d_s, "--d");
    Field f = make_field(d, eff);
    json j = read_json_file(elems_path);
    if (!j.is_array() || j.empty())
        throw InputError("elements file: expected a nonempty JSON array of [x, y] pairs");
    std::vector<QuadInt> elems;
    for (const json& e : j) elems.push_back(quadint_from_json(f, e));
    PairCheckMode mode =
        mode_s == "product_norm" ? PairCheckMode::product_norm : PairCheckMode::exhaustive;
    return to_json(certify_element_set(f, elems, mode));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic toolkit for universal quadratic forms over real quadratic fields"};
    app.require_subcommand(1);

    double effort_mult = 1.0;
    bool pretty = false;
    std::string out_path;
    app.add_option("--effort", effort_mult,
                   "scale the factorization budget (trial bound and rho iterations)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--json-pretty", pretty, "indent the JSON output");
    app.add_option("--out", out_path, "write the JSON result to this file instead of stdout");

    CLI::App* c_cfrac =
        app.add_subcommand("cfrac", "continued fraction of sqrt(D) with its convergents");
    std::string cf_d;
    long cf_n = -1;
    c_cfrac->add_option("--d", cf_d, "radicand D >= 2, not a perfect square")->required();
    c_cfrac->add_option("--n", cf_n, "number of convergents to list (default: one full period)");

    CLI::App* c_family = app.add_subcommand(
        "family", "search the parametric family sqrt(D) = [k; u, ..., u, 2k] over t");
    long fa_u = 0, fa_l = 0;
    std::string fa_tmin = "1", fa_tmax;
    bool fa_mod4 = false, fa_cert = false, fa_seed = false;
    std::string fa_window = "direct";
    c_family->add_option("--u", fa_u, "partial quotient u (2 mod 4)")->required();
    c_family->add_option("--l", fa_l, "period length parameter l (odd)")->required();
    c_family->add_option("--t-min", fa_tmin, "first t to scan (default 1)");
    c_family->add_option("--t-max", fa_tmax, "last t to scan")->required();
    c_family->add_flag("--mod4", fa_mod4, "keep only D = 2 (mod 4)");
    c_family->add_flag("--certify", fa_cert, "attach a non-universality certificate to each hit");
    c_family->add_flag("--seed-list", fa_seed,
                       "certify each hit and emit only the summary table (u, l, t, D, M)");
    c_family->add_option("--window", fa_window, "candidate window: narrow or direct")
        ->check(CLI::IsMember({"narrow", "direct"}));

    CLI::App* c_sieve =
        app.add_subcommand("sieve", "count simultaneous squarefree values of a quadratic "
                                    "and linear side conditions");
    std::string sv_f;
    std::vector<std::string> sv_g;
    long sv_x = 0;
    unsigned long sv_p = 0;
    c_sieve->add_option("--f", sv_f, "quadratic as a,b,c for a*x^2 + b*x + c")->required();
    c_sieve->add_option("--g", sv_g, "linear side condition as k,r for k*x + r (repeatable)");
    c_sieve->add_option("--x", sv_x, "count n in [1, X]")->required();
    CLI::Option* sv_euler = c_sieve->add_option(
        "--euler", sv_p, "also compute the density-constant enclosure with prime cutoff P");

    CLI::App* c_escalate =
        app.add_subcommand("escalate", "lower bound for the rank of a universal classical "
                                       "form by lattice escalation");
    std::string es_d, es_queue;
    int es_depth = 8;
    bool es_tree = false;
    c_escalate->add_option("--d", es_d, "field discriminant radicand D")->required();
    c_escalate
        ->add_option("--queue", es_queue,
                     "built-in queue name (paper73) or a JSON file with [[x, y], ...]")
        ->required();
    c_escalate->add_option("--max-depth", es_depth, "depth cap for the escalation search");
    c_escalate->add_flag("--emit-tree", es_tree, "include the full escalation tree in the output");

    CLI::App* c_certify =
        app.add_subcommand("certify", "check the element-set conditions that rule out a "
                                      "universal classical form, or re-verify a certificate");
    std::string ce_d, ce_elems, ce_mode = "exhaustive", ce_verify;
    CLI::Option* ce_vopt =
        c_certify->add_option("--verify", ce_verify, "re-run the cheap checks of a certificate file");
    c_certify->add_option("--d", ce_d, "field discriminant radicand D")->excludes(ce_vopt);
    c_certify->add_option("--elements", ce_elems, "JSON file with the element list [[x, y], ...]")
        ->excludes(ce_vopt);
    c_certify->add_option("--mode", ce_mode, "pair condition check: exhaustive or product_norm")
        ->check(CLI::IsMember({"exhaustive", "product_norm"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        FactorEffort eff = FactorEffort{}.scaled(effort_mult);
        if (app.got_subcommand(c_cfrac)) {
            emit(run_cfrac(cf_d, cf_n), pretty, out_path);
        } else if (app.got_subcommand(c_family)) {
            emit(run_family(fa_u, fa_l, fa_tmin, fa_tmax, fa_mod4, fa_cert, fa_seed, fa_window,
                            eff),
                 pretty, out_path);
        } else if (app.got_subcommand(c_sieve)) {
            emit(run_sieve(sv_f, sv_g, sv_x, sv_euler->count() > 0, sv_p, eff), pretty, out_path);
        } else if (app.got_subcommand(c_escalate)) {
            emit(run_escalate(es_d, es_queue, es_depth, es_tree, eff), pretty, out_path);
        } else if (app.got_subcommand(c_certify)) {
            if (!ce_verify.empty()) {
                Certificate cert = certificate_from_json(read_json_file(ce_verify));
                VerifyResult vr = verify_certificate(cert);
                emit(json{{"consistent", vr.consistent},
                          {"valid", vr.valid},
                          {"message", vr.message}},
                     pretty, out_path);
                if (!vr.consistent) {
                    std::cerr << "error: certificate inconsistent: " << vr.message << "\n";
                    return 2;
                }
                return 0;
            }
            if (ce_d.empty() || ce_elems.empty())
                throw InputError("certify needs either --verify or both --d and --elements");
            emit(run_certify(ce_d, ce_elems, ce_mode, eff), pretty, out_path);
        }
        return 0;
    } catch (const UnresolvedFactorization& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "uqf/family.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace uqf {

const mpz_class& FamilyInstance::q(long i) const {
    static const mpz_class zero = 0;
    if (i == -1) return zero;
    if (i < 0 || i > l) throw OutOfRange("FamilyInstance::q: index out of range");
    return q_seq[static_cast<std::size_t>(i)];
}

mpz_class FamilyInstance::n_at(long i) const {
    if (i < 0 || i > l) throw OutOfRange("FamilyInstance::n_at: index out of range");
    mpz_class val = t * q(i) * q(l - i - 1) + 1;
    return i % 2 == 1 ? val : -val;
}

mpz_class FamilyInstance::p_at(long i) const {
    if (i < 0 || i > l) throw OutOfRange("FamilyInstance::p_at: index out of range");
    return k * q(i) + q(i - 1);
}

QuadInt FamilyInstance::alpha(const Field& f, long i) const {
    if (f->d() != d) throw MixedFields("FamilyInstance::alpha: field does not match D");
    return QuadInt::from_sqrt_basis(f, p_at(i), q(i));
}

Admissibility admissible(long u, long l) {
    Admissibility a;
    if (u < 1) a.reasons.push_back("u must be >= 1");
    if (l < 1) a.reasons.push_back("l must be >= 1");
    if (u >= 1 && u % 4 != 2) a.reasons.push_back("u is not 2 (mod 4)");
    if (u >= 1 && u % 2 == 0) {
        mpz_class m = mpz_class(u) * u / 4 + 1;
        if (is_squarefree(m) != Tri::yes)
            a.reasons.push_back("u^2/4 + 1 = " + m.get_str() + " is not squarefree");
    }
    if (l >= 1 && l % 2 == 0) a.reasons.push_back("l is even");
    if (u >= 1 && l >= 1) {
        auto qs = q_sequence(u, l);
        if (qs.back() % 2 != 0) a.reasons.push_back("q_l = " + qs.back().get_str() + " is odd");
    }
    a.ok = a.reasons.empty();
    return a;
}

FamilyInstance instantiate(long u, long l, const mpz_class& t) {
    if (t < 1) throw OutOfRange("instantiate: t must be >= 1");
    Admissibility adm = admissible(u, l);
    bool off_path = !adm.ok && u >= 1 && l >= 1 && u % 2 == 1 && t % 2 == 1;
    if (!adm.ok && !off_path) {
        std::string why;
        for (const auto& r : adm.reasons) why += (why.empty() ? "" : "; ") + r;
        throw Inadmissible("instantiate(" + std::to_string(u) + ", " + std::to_string(l) +
                           "): " + why);
    }

    FamilyInstance inst;
    inst.u = u;
    inst.l = l;
    inst.t = t;
    inst.q_seq = q_sequence(u, l);
    inst.admissible_path = adm.ok;

    mpz_class twok = inst.q(l) * t + u;
    if (twok % 2 != 0)
        throw ParityViolation("instantiate: q_l * t + u = " + twok.get_str() + " is odd");
    inst.k = twok / 2;
    inst.d = inst.k * inst.k + t * inst.q(l - 1) + 1;

    // the same D grouped by powers of t; over the rationals because u^2/4
    // need not be integral on the odd-u path
    mpq_class ql(inst.q(l)), qlm1(inst.q(l - 1)), tq(t), uq(u);
    mpq_class other = tq * tq * ql * ql / 4 + tq * (uq * ql + 2 * qlm1) / 2 + uq * uq / 4 + 1;
    if (other != mpq_class(inst.d))
        throw LogicError("instantiate: the two closed forms of D disagree");

    for (long i = 1; i <= l; i += 2) {
        inst.n_of[i] = inst.n_at(i);
        inst.k_i_of[i] = inst.q(i) * inst.q(l - i - 1);
    }
    return inst;
}

bool verify_instance(const FamilyInstance& inst) {
    CFExpansion exp = expand_sqrt(inst.d);
    if (exp.a0 != inst.k) return false;
    if (exp.period.size() != static_cast<std::size_t>(inst.l) + 1) return false;
    for (long i = 0; i < inst.l; ++i)
        if (exp.period[static_cast<std::size_t>(i)] != inst.u) return false;
    if (exp.period.back() != 2 * inst.k) return false;

    auto convs = convergents(exp, static_cast<std::size_t>(inst.l) + 1);
    for (long i = 1; i <= inst.l; i += 2)
        if (convs[static_cast<std::size_t>(i)].n != inst.n_at(i)) return false;

    mpz_class num = inst.k * convs[static_cast<std::size_t>(inst.l)].p +
                    convs[static_cast<std::size_t>(inst.l) - 1].p;
    return num % inst.q(inst.l) == 0;
}

std::vector<SearchHit> search_t(long u, long l, const mpz_class& t_min, const mpz_class& t_max,
                                const SearchFilters& filters) {
    Admissibility adm = admissible(u, l);
    if (!adm.ok) {
        std::string why;
        for (const auto& r : adm.reasons) why += (why.empty() ? "" : "; ") + r;
        throw Inadmissible("search_t(" + std::to_string(u) + ", " + std::to_string(l) +
                           "): " + why);
    }

    std::vector<SearchHit> hits;
    for (mpz_class t = t_min; t <= t_max; ++t) {
        FamilyInstance inst = instantiate(u, l, t);
        std::vector<std::string> ev;

        auto fac_d = factorize(inst.d, filters.effort);
        if (squarefree_status(fac_d) != Tri::yes) continue;  // includes unresolved
        ev.push_back("D = " + inst.d.get_str() + " = " + describe(fac_d) + " squarefree");

        if (filters.require_two_mod_four) {
            if (inst.d % 4 != 2) continue;
            ev.push_back("D = 2 (mod 4)");
        }

        bool ok = true;
        std::vector<mpz_class> kis;
        for (long i = 1; 2 * i <= l - 1 && ok; i += 2) {
            mpz_class ni = inst.n_at(i);  // positive at odd i
            if (ni == 1) {
                ok = false;
                break;
            }
            auto fac_n = factorize(ni, filters.effort);
            if (squarefree_status(fac_n) != Tri::yes) {
                ok = false;
                break;
            }
            ev.push_back("N_" + std::to_string(i) + " = " + ni.get_str() + " = " +
                         describe(fac_n) + " squarefree, not a unit norm");
            kis.push_back(inst.k_i_of.at(i));
        }
        if (!ok) continue;

        std::set<mpz_class> distinct(kis.begin(), kis.end());
        if (distinct.size() != kis.size()) continue;
        {
            std::ostringstream os;
            os << "k_i pairwise distinct:";
            for (const auto& ki : kis) os << " " << ki.get_str();
            ev.push_back(os.str());
        }

        hits.push_back(SearchHit{std::move(inst), std::move(ev)});
    }
    return hits;
}

std::vector<QuadInt> build_candidate_set(const FamilyInstance& inst, WindowMode mode) {
    long limit = mode == WindowMode::narrow ? (inst.l - 4) / 2 : (inst.l - 1) / 2;
    if (mode == WindowMode::narrow && limit < 1)
        throw EmptyWindow("build_candidate_set: no odd index <= (l-4)/2 for l = " +
                          std::to_string(inst.l));
    Field f = make_field_trusted(inst.d);
    std::vector<QuadInt> out;
    out.push_back(QuadInt::integer(f, 1));
    for (long i = 1; i <= limit; i += 2) out.push_back(inst.alpha(f, i));
    return out;
}

Certificate certify_non_universality(const FamilyInstance& inst, WindowMode mode) {
    std::vector<QuadInt> set = build_candidate_set(inst, mode);
    Certificate cert = certify_element_set(set.front().field(), set, PairCheckMode::exhaustive);

    // the search-side norm conditions, re-recorded so the certificate stands
    // on its own
    std::vector<CertCondition> merged;
    long i = 1;
    for (int idx = 1; idx < cert.m; ++idx, i += 2) {
        mpz_class ni = inst.n_at(i);
        auto fac = factorize(ni);
        bool sf = squarefree_status(fac) == Tri::yes;
        bool verdict = sf && ni != 1;
        std::string ev = "N_" + std::to_string(i) + " = " + ni.get_str() + " = " + describe(fac);
        if (ni == 1) ev += " (unit norm)";
        merged.push_back(CertCondition{"norm_squarefree", idx, -1, verdict, ev});
        cert.valid = cert.valid && verdict;
    }
    merged.insert(merged.end(), cert.conditions.begin(), cert.conditions.end());
    cert.conditions = std::move(merged);
    return cert;
}

WindowPairCheck check_window_pair(const FamilyInstance& inst, long i, long j) {
    if (i < 1 || i > inst.l || j < 1 || j > inst.l)
        throw OutOfRange("check_window_pair: indices must lie in [1, l]");
    WindowPairCheck res;
    res.in_window = i % 2 == 1 && j % 2 == 1 && i < j && 2 * j <= inst.l - 4;
    res.hypotheses_met = inst.k > inst.u && inst.u >= 5;
    if (!res.in_window)
        res.note = "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                   ") is outside the guaranteed window";
    if (!res.hypotheses_met) {
        if (!res.note.empty()) res.note += "; ";
        res.note += "growth hypotheses k > u >= 5 not met";
    }
    Field f = make_field_trusted(inst.d);
    auto doms = dominated_squares(inst.alpha(f, i) * inst.alpha(f, j));
    res.only_zero = doms.size() == 1 && doms.front().is_zero();
    return res;
}

}  // namespace uqf

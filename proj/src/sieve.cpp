#include "uqf/sieve.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "uqf/errors.hpp"
#include "uqf/quadint.hpp"

namespace uqf {

namespace {

mpz_class mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw LogicError("inv_mod: element not invertible");
    return r;
}

mpz_class powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

// p-valuation capped at 2 (all the case analysis needs)
int vp_capped(const mpz_class& x, const mpz_class& p) {
    if (x == 0) return 2;
    mpz_class v = x;
    int e = 0;
    while (e < 2 && mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
        v /= p;
        ++e;
    }
    return e;
}

// direct scan used for small p: exact and immune to the case analysis
ResidueClasses brute_mod_psq(const std::function<mpz_class(const mpz_class&)>& eval,
                             const mpz_class& p) {
    unsigned long pl = p.get_ui();
    unsigned long psq = pl * pl;
    std::vector<char> hit(psq, 0);
    bool all = true;
    for (unsigned long n = 0; n < psq; ++n) {
        hit[n] = mod(eval(n), p * p) == 0;
        all = all && hit[n];
    }
    ResidueClasses out;
    if (all) {
        out.progs.emplace_back(1, 0);
        return out;
    }
    // compress full columns n = r (mod p) into one progression each
    for (unsigned long r = 0; r < pl; ++r) {
        bool col = true;
        for (unsigned long j = 0; j < pl && col; ++j) col = hit[r + j * pl];
        if (col) {
            out.progs.emplace_back(p, r);
            for (unsigned long j = 0; j < pl; ++j) hit[r + j * pl] = 0;
        }
    }
    for (unsigned long n = 0; n < psq; ++n)
        if (hit[n]) out.progs.emplace_back(p * p, n);
    return out;
}

// roots of A x^2 + B x + C = 0 (mod p), p odd, not all of A, B, C zero
std::vector<mpz_class> quad_roots_mod_p(const mpz_class& A, const mpz_class& B,
                                        const mpz_class& C, const mpz_class& p) {
    std::vector<mpz_class> roots;
    if (A % p != 0) {
        mpz_class disc = mod(B * B - 4 * A * C, p);
        int chi = disc == 0 ? 0 : mpz_kronecker(disc.get_mpz_t(), p.get_mpz_t());
        if (chi == -1) return roots;
        mpz_class inv2a = inv_mod(mod(2 * A, p), p);
        if (chi == 0) {
            roots.push_back(mod(-B * inv2a, p));
        } else {
            mpz_class s = sqrt_mod_prime(disc, p);
            roots.push_back(mod((-B + s) * inv2a, p));
            roots.push_back(mod((-B - s) * inv2a, p));
        }
    } else if (B % p != 0) {
        roots.push_back(mod(-C * inv_mod(mod(B, p), p), p));
    }
    // A = B = 0, C != 0 (mod p): no roots
    return roots;
}

}  // namespace

mpz_class sqrt_mod_prime(const mpz_class& a0, const mpz_class& p) {
    mpz_class a = mod(a0, p);
    if (a == 0) return 0;
    if (p == 2) return a;
    if (mpz_kronecker(a.get_mpz_t(), p.get_mpz_t()) != 1)
        throw LogicError("sqrt_mod_prime: not a quadratic residue");
    if (p % 4 == 3) return powm(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    mpz_class q = p - 1;
    unsigned long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    mpz_class z = 2;
    while (mpz_kronecker(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    unsigned long m = s;
    mpz_class c = powm(z, q, p);
    mpz_class t = powm(a, q, p);
    mpz_class r = powm(a, (q + 1) / 2, p);
    while (t != 1) {
        unsigned long i = 0;
        for (mpz_class tt = t; tt != 1; tt = mod(tt * tt, p)) ++i;
        mpz_class b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = mod(b * b, p);
        m = i;
        c = mod(b * b, p);
        t = mod(t * c, p);
        r = mod(r * b, p);
    }
    return r;
}

mpz_class ResidueClasses::count(const mpz_class& p) const {
    mpz_class psq = p * p, total = 0;
    for (const auto& [modulus, residue] : progs) {
        (void)residue;
        total += psq / modulus;
    }
    return total;
}

ResidueClasses quadratic_roots_mod_psq(const mpz_class& a, const mpz_class& b,
                                       const mpz_class& c, const mpz_class& p) {
    if (p < 2) throw OutOfRange("quadratic_roots_mod_psq: p must be prime");
    if (p <= 97)
        return brute_mod_psq(
            [&](const mpz_class& n) -> mpz_class { return (a * n + b) * n + c; }, p);

    mpz_class psq = p * p;
    int e = std::min({vp_capped(a, p), vp_capped(b, p), vp_capped(c, p)});
    ResidueClasses out;
    if (e >= 2) {
        out.progs.emplace_back(1, 0);
        return out;
    }
    if (e == 1) {
        // p^2 | f(n)  iff  (f/p)(n) = 0 (mod p)
        for (const auto& r : quad_roots_mod_p(a / p, b / p, c / p, p))
            out.progs.emplace_back(p, r);
        return out;
    }
    auto f = [&](const mpz_class& n) -> mpz_class { return (a * n + b) * n + c; };
    if (a % p != 0) {
        mpz_class disc = mod(b * b - 4 * a * c, p);
        int chi = disc == 0 ? 0 : mpz_kronecker(disc.get_mpz_t(), p.get_mpz_t());
        if (chi == -1) return out;
        if (chi == 0) {
            // double root: the whole column qualifies or nothing does
            mpz_class r = mod(-b * inv_mod(mod(2 * a, p), p), p);
            if (mod(f(r), psq) == 0) out.progs.emplace_back(p, r);
            return out;
        }
        for (const auto& r : quad_roots_mod_p(a, b, c, p)) {
            // simple root: unique Hensel lift
            mpz_class fp = mod(2 * a * r + b, psq);
            mpz_class rhat = mod(r - f(r) * inv_mod(fp, psq), psq);
            out.progs.emplace_back(psq, rhat);
        }
        return out;
    }
    if (b % p != 0) {
        // degree drops mod p but the derivative stays invertible
        mpz_class r = mod(-c * inv_mod(mod(b, p), p), p);
        mpz_class fp = mod(2 * a * r + b, psq);
        mpz_class rhat = mod(r - f(r) * inv_mod(fp, psq), psq);
        out.progs.emplace_back(psq, rhat);
        return out;
    }
    // p | a, p | b, p does not divide c: no solutions
    return out;
}

ResidueClasses linear_roots_mod_psq(const mpz_class& k, const mpz_class& r,
                                    const mpz_class& p) {
    if (p < 2) throw OutOfRange("linear_roots_mod_psq: p must be prime");
    if (p <= 97)
        return brute_mod_psq([&](const mpz_class& n) -> mpz_class { return k * n + r; }, p);

    mpz_class psq = p * p;
    ResidueClasses out;
    int e = vp_capped(k, p);
    if (e == 0) {
        out.progs.emplace_back(psq, mod(-r * inv_mod(mod(k, psq), psq), psq));
    } else if (e == 1) {
        if (r % p == 0)
            out.progs.emplace_back(p, mod(-(r / p) * inv_mod(mod(k / p, p), p), p));
    } else {
        if (mod(r, psq) == 0) out.progs.emplace_back(1, 0);
    }
    return out;
}

SieveSpec make_sieve_spec(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          const std::vector<std::pair<mpz_class, mpz_class>>& gs) {
    if (a == 0) throw DegenerateInput("make_sieve_spec: leading coefficient is zero");
    SieveSpec spec;
    spec.a = a;
    spec.b = b;
    spec.c = c;
    spec.gs = gs;
    spec.delta = b * b - 4 * a * c;
    if (spec.delta == 0) throw DegenerateInput("make_sieve_spec: discriminant is zero");
    for (const auto& [k, r] : gs) {
        (void)r;
        if (k == 0) throw DegenerateInput("make_sieve_spec: linear coefficient is zero");
    }

    auto scan = [](const std::function<mpz_class(long)>& eval) {
        for (long n = 1; n <= 64; ++n) {
            mpz_class v = eval(n);
            if (v != 0 && is_squarefree(v) == Tri::yes) return true;
        }
        return false;
    };
    if (!scan([&](long n) { return spec.f_at(n); })) {
        spec.squarefree_values_seen = false;
        spec.notes.push_back("f has no squarefree value for n <= 64");
    }
    for (std::size_t j = 0; j < gs.size(); ++j) {
        if (!scan([&](long n) { return spec.g_at(j, n); })) {
            spec.squarefree_values_seen = false;
            spec.notes.push_back("g_" + std::to_string(j + 1) +
                                 " has no squarefree value for n <= 64");
        }
    }
    return spec;
}

namespace {

// largest |value| of a polynomial on [1, X]; an overestimate is fine
mpz_class max_abs_on_range(const std::function<mpz_class(const mpz_class&)>& eval,
                           const mpz_class& vertex_num, const mpz_class& vertex_den, long X) {
    mpz_class best = std::max(mpz_class(abs(eval(1))), mpz_class(abs(eval(X))));
    if (vertex_den != 0) {
        mpz_class nv;
        mpz_fdiv_q(nv.get_mpz_t(), vertex_num.get_mpz_t(), vertex_den.get_mpz_t());
        for (mpz_class n : {nv, mpz_class(nv + 1)}) {
            if (n < 1) n = 1;
            if (n > X) n = X;
            best = std::max(best, mpz_class(abs(eval(n))));
        }
    }
    return best;
}

// integer zeros of the polynomials within [1, X] (squarefree fails there)
void mark_zeros(const SieveSpec& spec, long X, std::vector<char>& alive) {
    if (spec.delta > 0 && mpz_perfect_square_p(spec.delta.get_mpz_t())) {
        mpz_class s = isqrt(spec.delta);
        for (const mpz_class& num : {mpz_class(-spec.b + s), mpz_class(-spec.b - s)}) {
            mpz_class den = 2 * spec.a;
            if (num % den == 0) {
                mpz_class n = num / den;
                if (n >= 1 && n <= X) alive[n.get_ui()] = 0;
            }
        }
    }
    for (const auto& [k, r] : spec.gs) {
        if (r % k == 0) {
            mpz_class n = -r / k;
            if (n >= 1 && n <= X) alive[n.get_ui()] = 0;
        }
    }
}

// true when every n got struck (a fixed p^2 divisor)
bool mark_residues(const ResidueClasses& rc, long X, std::vector<char>& alive) {
    for (const auto& [modulus, residue] : rc.progs) {
        if (modulus == 1) return true;
        unsigned long M = modulus.get_ui();
        unsigned long r0 = residue.get_ui();
        unsigned long n0 = r0 == 0 ? M : r0;
        for (unsigned long n = n0; n <= static_cast<unsigned long>(X); n += M) alive[n] = 0;
    }
    return false;
}

mpz_class count_by_values(const SieveSpec& spec, long X, const FactorEffort& effort) {
    mpz_class count = 0;
    for (long n = 1; n <= X; ++n) {
        bool good = true;
        for (std::size_t poly = 0; poly <= spec.m() && good; ++poly) {
            mpz_class v = poly == 0 ? spec.f_at(n) : spec.g_at(poly - 1, n);
            if (v == 0) {
                good = false;
                break;
            }
            Tri st = is_squarefree(v, effort);
            if (st == Tri::unknown)
                throw UnresolvedFactorization("count: value at n = " + std::to_string(n) +
                                              " resisted factorization");
            good = st == Tri::yes;
        }
        if (good) ++count;
    }
    return count;
}

constexpr unsigned long kSievePrimeCap = 3000000;

}  // namespace

mpz_class count_simultaneous(const SieveSpec& spec, long X, const FactorEffort& effort) {
    if (X < 1) throw OutOfRange("count_simultaneous: X must be >= 1");

    std::vector<mpz_class> bounds;
    bounds.push_back(isqrt(max_abs_on_range([&](const mpz_class& n) { return spec.f_at(n); },
                                            -spec.b, 2 * spec.a, X)));
    for (std::size_t j = 0; j < spec.m(); ++j)
        bounds.push_back(isqrt(
            max_abs_on_range([&](const mpz_class& n) { return spec.g_at(j, n); }, 0, 0, X)));
    mpz_class largest = *std::max_element(bounds.begin(), bounds.end());
    if (largest > kSievePrimeCap) return count_by_values(spec, X, effort);

    std::vector<char> alive(static_cast<std::size_t>(X) + 1, 1);
    mark_zeros(spec, X, alive);
    const auto& primes = small_primes(static_cast<uint32_t>(std::max(largest.get_ui(), 2ul)));
    for (std::size_t poly = 0; poly < bounds.size(); ++poly) {
        for (uint32_t pl : primes) {
            if (pl > bounds[poly]) break;
            mpz_class p(pl);
            ResidueClasses rc =
                poly == 0 ? quadratic_roots_mod_psq(spec.a, spec.b, spec.c, p)
                          : linear_roots_mod_psq(spec.gs[poly - 1].first,
                                                 spec.gs[poly - 1].second, p);
            if (mark_residues(rc, X, alive)) return 0;
        }
    }
    mpz_class count = 0;
    for (long n = 1; n <= X; ++n) count += alive[static_cast<std::size_t>(n)];
    return count;
}

mpz_class count_naive(const SieveSpec& spec, long X, const FactorEffort& effort) {
    if (X < 1) throw OutOfRange("count_naive: X must be >= 1");
    return count_by_values(spec, X, effort);
}

mpz_class count_by_moebius(const SieveSpec& spec, long X) {
    if (!spec.gs.empty())
        throw PreconditionNotMet("count_by_moebius: only the g-free identity is implemented");
    if (X < 1) throw OutOfRange("count_by_moebius: X must be >= 1");

    mpz_class dmax_z = isqrt(max_abs_on_range(
        [&](const mpz_class& n) { return spec.f_at(n); }, -spec.b, 2 * spec.a, X));
    if (dmax_z > 2000000)
        throw OutOfRange("count_by_moebius: value bound too large for the cross-check");
    unsigned long dmax = dmax_z.get_ui();

    // mu by sieve
    std::vector<int> mu(dmax + 1, 1);
    const auto& primes = small_primes(static_cast<uint32_t>(std::max(dmax, 2ul)));
    for (uint32_t p : primes) {
        if (p > dmax) break;
        for (unsigned long n = p; n <= dmax; n += p) mu[n] = -mu[n];
        unsigned long psq = static_cast<unsigned long>(p) * p;
        for (unsigned long n = psq; n <= dmax; n += psq) mu[n] = 0;
    }

    std::map<unsigned long, ResidueClasses> root_cache;
    mpz_class total = 0;
    for (unsigned long d = 1; d <= dmax; ++d) {
        if (mu[d] == 0) continue;
        // residues mod d^2 with d^2 | f, assembled per prime factor
        std::vector<std::pair<mpz_class, mpz_class>> residues{{1, 0}};  // (modulus, residue)
        unsigned long rest = d;
        bool empty = false;
        for (uint32_t p : primes) {
            if (empty || rest == 1) break;
            if (rest % p != 0) continue;
            rest /= p;
            auto it = root_cache.find(p);
            if (it == root_cache.end())
                it = root_cache
                         .emplace(p, quadratic_roots_mod_psq(spec.a, spec.b, spec.c,
                                                             mpz_class(p)))
                         .first;
            // expand this prime's classes to points mod p^2
            std::vector<mpz_class> points;
            mpz_class psq = mpz_class(p) * p;
            for (const auto& [modulus, residue] : it->second.progs) {
                for (mpz_class v = residue; v < psq; v += modulus) points.push_back(v);
                if (points.size() > 100000)
                    throw LogicError("count_by_moebius: residue explosion");
            }
            if (points.empty()) {
                empty = true;
                break;
            }
            std::vector<std::pair<mpz_class, mpz_class>> next;
            for (const auto& [modulus, residue] : residues) {
                for (const mpz_class& pt : points) {
                    // CRT: n = residue (mod modulus), n = pt (mod p^2)
                    mpz_class minv = inv_mod(mod(modulus, psq), psq);
                    mpz_class lift = mod((pt - residue) * minv, psq);
                    next.emplace_back(modulus * psq, residue + modulus * lift);
                }
            }
            residues = std::move(next);
        }
        if (empty) continue;
        mpz_class cnt = 0;
        for (const auto& [modulus, residue] : residues) {
            if (residue == 0)
                cnt += mpz_class(X) / modulus;
            else if (residue <= X)
                cnt += (X - residue) / modulus + 1;
        }
        total += mu[d] * cnt;
    }
    return total;
}

namespace {

ResidueClasses intersect_classes(const ResidueClasses& A, const ResidueClasses& B,
                                 const mpz_class& p) {
    ResidueClasses out;
    for (const auto& [m1, r1] : A.progs) {
        for (const auto& [m2, r2] : B.progs) {
            if (m1 == 1) {
                out.progs.emplace_back(m2, r2);
            } else if (m2 == 1) {
                out.progs.emplace_back(m1, r1);
            } else if (m1 == m2) {
                if (r1 == r2) out.progs.emplace_back(m1, r1);
            } else {
                const auto& big = m1 > m2 ? std::make_pair(m1, r1) : std::make_pair(m2, r2);
                const auto& small = m1 > m2 ? std::make_pair(m2, r2) : std::make_pair(m1, r1);
                if (mod(big.second, p) == mod(small.second, p))
                    out.progs.emplace_back(big.first, big.second);
            }
        }
    }
    return out;
}

ResidueClasses classes_for_poly(const SieveSpec& spec, std::size_t poly, const mpz_class& p) {
    return poly == 0 ? quadratic_roots_mod_psq(spec.a, spec.b, spec.c, p)
                     : linear_roots_mod_psq(spec.gs[poly - 1].first, spec.gs[poly - 1].second,
                                            p);
}

}  // namespace

mpz_class local_density(const SieveSpec& spec, const std::vector<mpz_class>& d) {
    if (d.size() != spec.m() + 1)
        throw OutOfRange("local_density: need one modulus per polynomial");
    std::map<mpz_class, std::vector<std::size_t>> by_prime;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 1) throw OutOfRange("local_density: moduli must be >= 1");
        if (d[i] == 1) continue;
        auto fac = factorize(d[i]);
        Tri st = squarefree_status(fac);
        if (st == Tri::no)
            throw NonSquarefreeModulus("local_density: " + d[i].get_str() +
                                       " is not squarefree");
        if (st == Tri::unknown)
            throw UnresolvedFactorization("local_density: could not factor " + d[i].get_str());
        for (const auto& term : fac.terms) by_prime[term.base].push_back(i);
    }
    mpz_class total = 1;
    for (const auto& [p, idxs] : by_prime) {
        ResidueClasses acc;
        acc.progs.emplace_back(1, 0);
        for (std::size_t i : idxs) acc = intersect_classes(acc, classes_for_poly(spec, i, p), p);
        mpz_class cnt = acc.count(p);
        if (cnt == 0) return 0;
        total *= cnt;
    }
    return total;
}

QInterval euler_constant(const SieveSpec& spec, unsigned long P) {
    if (P < 100) throw OutOfRange("euler_constant: cutoff must be >= 100");

    // the tail bound |B_p| <= m + 2 needs p beyond every special prime
    mpz_class largest_special = 1;
    auto absorb = [&](const mpz_class& v0) {
        mpz_class v = abs(v0);
        if (v <= 1) return;
        auto fac = factorize(v);
        if (!fac.complete)
            throw UnresolvedFactorization("euler_constant: cannot isolate the primes of " +
                                          v.get_str());
        for (const auto& term : fac.terms)
            largest_special = std::max(largest_special, term.base);
    };
    absorb(2 * spec.a * spec.delta);
    for (const auto& [k, r] : spec.gs) {
        (void)r;
        absorb(k);
    }
    unsigned long cutoff = P;
    if (largest_special >= cutoff) cutoff = largest_special.get_ui() + 1;

    QInterval acc(1);
    const auto& primes = small_primes(static_cast<uint32_t>(cutoff));
    for (uint32_t pl : primes) {
        if (pl > cutoff) break;
        mpz_class p(pl), psq = mpz_class(pl) * pl;
        // |B_p|: union of the per-polynomial residue classes
        std::set<mpz_class> cols, pts;
        bool whole = false;
        for (std::size_t poly = 0; poly <= spec.m() && !whole; ++poly) {
            for (const auto& [modulus, residue] : classes_for_poly(spec, poly, p).progs) {
                if (modulus == 1)
                    whole = true;
                else if (modulus == p)
                    cols.insert(residue);
                else
                    pts.insert(residue);
            }
        }
        mpz_class b;
        if (whole) {
            b = psq;
        } else {
            b = mpz_class(cols.size()) * p;
            for (const mpz_class& pt : pts)
                if (!cols.count(mod(pt, p))) ++b;
        }
        mpq_class factor(psq - b, psq);
        factor.canonicalize();
        acc = (acc * QInterval(factor)).rounded_out(192);
    }
    mpq_class tail_lo = 1 - mpq_class(spec.m() + 2, cutoff);
    if (tail_lo < 0) tail_lo = 0;
    return acc * QInterval(tail_lo, mpq_class(1));
}

SieveSpec shift_mod4(const SieveSpec& spec) {
    std::vector<std::pair<mpz_class, mpz_class>> gs;
    for (const auto& [k, r] : spec.gs) gs.emplace_back(4 * k, r);
    return make_sieve_spec(16 * spec.a, 4 * spec.b, spec.c, gs);
}

}  // namespace uqf

#include "uqf/factor.hpp"

#include <algorithm>
#include <map>

namespace uqf {

FactorEffort FactorEffort::scaled(double s) const {
    FactorEffort e;
    if (s < 0.01) s = 0.01;
    e.trial_bound = static_cast<uint64_t>(static_cast<double>(trial_bound) * s);
    if (e.trial_bound < 2) e.trial_bound = 2;
    e.rho_iterations = static_cast<uint64_t>(static_cast<double>(rho_iterations) * s);
    if (e.rho_iterations < 1024) e.rho_iterations = 1024;
    return e;
}

bool probably_prime(const mpz_class& n) {
    // 2 = proven prime (small), 1 = BPSW + Miller-Rabin probable prime.
    return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

const std::vector<uint32_t>& small_primes(uint32_t limit) {
    static std::vector<uint32_t> primes;
    static uint32_t sieved_to = 0;
    if (limit <= sieved_to) return primes;
    uint32_t n = std::max<uint32_t>(limit, 1u << 16);
    std::vector<bool> composite(n + 1, false);
    primes.clear();
    for (uint32_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (uint64_t q = static_cast<uint64_t>(p) * p; q <= n; q += p)
            composite[static_cast<size_t>(q)] = true;
    }
    sieved_to = n;
    return primes;
}

bool Factorization::product_matches() const {
    mpz_class prod = 1;
    for (const auto& t : terms) {
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), t.base.get_mpz_t(), t.exp);
        prod *= pw;
    }
    mpz_class a = abs(n);
    return prod == a;
}

namespace {

// Pollard-Brent with an iteration budget.  Returns a nontrivial factor of n
// (composite n > 1) or 0 on budget exhaustion.
mpz_class rho_brent(const mpz_class& n, uint64_t budget) {
    if (n % 2 == 0) return 2;
    gmp_randstate_t rs;
    gmp_randinit_mt(rs);
    gmp_randseed_ui(rs, 0x5eed5eedu);  // deterministic runs
    mpz_class y, c, m = 128, g = 1, r = 1, q = 1, x, ys;
    uint64_t used = 0;
    for (int attempt = 0; attempt < 12 && used < budget; ++attempt) {
        mpz_urandomm(y.get_mpz_t(), rs, n.get_mpz_t());
        mpz_urandomm(c.get_mpz_t(), rs, n.get_mpz_t());
        if (c == 0) c = 1;
        r = 1;
        g = 1;
        q = 1;
        while (g == 1 && used < budget) {
            x = y;
            for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
            mpz_class k = 0;
            while (k < r && g == 1 && used < budget) {
                ys = y;
                mpz_class lim = std::min(m, mpz_class(r - k));
                for (mpz_class i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                used += lim.get_ui();
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack to the first colliding pair
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            }
        }
        if (g != n && g != 1) {
            gmp_randclear(rs);
            return g;
        }
    }
    gmp_randclear(rs);
    return 0;
}

void factor_rec(const mpz_class& n, const FactorEffort& effort,
                std::map<mpz_class, unsigned>& primes,
                std::vector<mpz_class>& stuck, unsigned mult) {
    if (n == 1) return;
    if (probably_prime(n)) {
        primes[n] += mult;
        return;
    }
    // perfect powers: n = r^k reduces the problem to r
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            mpz_class root, rem;
            mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), k);
            if (rem == 0) {
                factor_rec(root, effort, primes, stuck, mult * k);
                return;
            }
        }
    }
    mpz_class d = rho_brent(n, effort.rho_iterations);
    if (d == 0) {
        for (unsigned i = 0; i < mult; ++i) stuck.push_back(n);
        return;
    }
    factor_rec(d, effort, primes, stuck, mult);
    factor_rec(n / d, effort, primes, stuck, mult);
}

}  // namespace

Factorization factorize(const mpz_class& n, const FactorEffort& effort) {
    if (n == 0) throw ZeroInput("factorize: n must be nonzero");
    Factorization out;
    out.n = n;
    mpz_class m = abs(n);
    if (m == 1) {
        out.complete = true;
        return out;
    }
    std::map<mpz_class, unsigned> primes;
    uint32_t tb = effort.trial_bound > 0xffffffffull
                      ? 0xffffffffu
                      : static_cast<uint32_t>(effort.trial_bound);
    for (uint32_t p : small_primes(tb)) {
        if (p > tb) break;
        if (mpz_class(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            primes[mpz_class(p)] += 1;
            m /= p;
        }
    }
    std::vector<mpz_class> stuck;
    if (m > 1) {
        // anything small enough to be caught by trial division is prime now
        if (mpz_class(tb) * tb >= m) {
            primes[m] += 1;
        } else {
            factor_rec(m, effort, primes, stuck, 1);
        }
    }
    for (const auto& [p, e] : primes)
        out.terms.push_back(FactorTerm{p, e, true});
    // coalesce equal stuck cofactors so squarefree_status can see squares
    std::sort(stuck.begin(), stuck.end());
    for (size_t i = 0; i < stuck.size();) {
        size_t j = i;
        while (j < stuck.size() && stuck[j] == stuck[i]) ++j;
        out.terms.push_back(FactorTerm{stuck[i], static_cast<unsigned>(j - i), false});
        i = j;
    }
    out.complete = stuck.empty();
    return out;
}

Tri squarefree_status(const Factorization& f) {
    bool unknown = false;
    for (const auto& t : f.terms) {
        if (t.exp >= 2) return Tri::no;
        if (!t.certified_prime) {
            if (mpz_perfect_square_p(t.base.get_mpz_t())) return Tri::no;
            // composite cofactor of unknown shape: a hidden square factor
            // cannot be ruled out
            unknown = true;
        }
    }
    return unknown ? Tri::unknown : Tri::yes;
}

Tri is_squarefree(const mpz_class& n, const FactorEffort& effort) {
    if (n == 0) throw ZeroInput("is_squarefree: n must be nonzero");
    mpz_class m = abs(n);
    if (m == 1) return Tri::yes;
    return squarefree_status(factorize(m, effort));
}

std::string describe(const Factorization& f) {
    if (f.terms.empty()) return f.n.get_str();
    std::string out;
    for (const auto& t : f.terms) {
        if (!out.empty()) out += " * ";
        out += t.base.get_str();
        if (t.exp > 1) out += "^" + std::to_string(t.exp);
        if (!t.certified_prime) out += "?";
    }
    return out;
}

}  // namespace uqf

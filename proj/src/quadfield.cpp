#include "uqf/quadfield.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "uqf/cfrac.hpp"

namespace uqf {

std::vector<QuadInt> dominated_squares(const QuadInt& g) {
    if (!g.is_totally_positive())
        throw NotTotallyPositive("dominated_squares: input must be totally positive");
    auto cands = enumerate_box(g.field(), Bound::sqrt_of(g.emb(0)), Bound::sqrt_of(g.emb(1)));
    std::vector<QuadInt> out;
    for (const QuadInt& c : cands) {
        if ((g - c * c).is_totally_positive()) out.push_back(c);
    }
    return out;  // candidates arrive sorted; filtering keeps the order
}

namespace {

// all b with 0 < b < g in both embeddings (the possible left parts of a
// two-term split of g), canonically sorted
std::vector<QuadInt> split_parts(const QuadInt& g) {
    // b <-> b*u is a bijection between the parts of g and of g*u for any
    // totally positive unit u, so balance the embeddings first (smallest
    // trace in the orbit); unbalanced elements of modest norm can have one
    // enormous embedding, which makes the search rectangle intractable
    QuadInt eps = fundamental_unit(g.field());
    QuadInt u = eps.norm() == -1 ? eps * eps : eps;
    QuadInt uinv = u.conj();  // norm 1, so the conjugate inverts
    QuadInt h = g;
    QuadInt back = QuadInt::integer(g.field(), 1);  // parts of g = parts(h) * back
    for (QuadInt next = h * uinv; next.trace() < h.trace(); next = h * uinv) {
        h = next;
        back = back * u;
    }
    for (QuadInt next = h * u; next.trace() < h.trace(); next = h * u) {
        h = next;
        back = back * uinv;
    }

    const mpq_class quarter(1, 4);
    EmbRect rect;
    rect.lo1 = 0;
    rect.hi1 = h.emb(0).upper_within(quarter);
    rect.lo2 = 0;
    rect.hi2 = h.emb(1).upper_within(quarter);
    auto cands = elements_in_rect(h.field(), rect);
    std::vector<QuadInt> out;
    for (const QuadInt& b : cands) {
        if (b.is_totally_positive() && (h - b).is_totally_positive()) out.push_back(b * back);
    }
    std::sort(out.begin(), out.end(),
              [](const QuadInt& a, const QuadInt& b) { return a.canonical_less(b); });
    return out;
}

}  // namespace

std::optional<std::pair<QuadInt, QuadInt>> decompose_oracle(const QuadInt& g) {
    if (!g.is_totally_positive())
        throw NotTotallyPositive("decompose_oracle: input must be totally positive");
    auto parts = split_parts(g);
    if (parts.empty()) return std::nullopt;
    return std::make_pair(parts.front(), g - parts.front());
}

std::vector<std::pair<QuadInt, QuadInt>> decompose_all(const QuadInt& g) {
    if (!g.is_totally_positive())
        throw NotTotallyPositive("decompose_all: input must be totally positive");
    std::vector<std::pair<QuadInt, QuadInt>> out;
    for (const QuadInt& b : split_parts(g)) {
        QuadInt c = g - b;
        if (!c.canonical_less(b)) out.emplace_back(b, c);
    }
    return out;
}

bool is_indecomposable(const QuadInt& a, IndecMode mode) {
    if (!a.is_totally_positive())
        throw NotTotallyPositive("is_indecomposable: input must be totally positive");
    if (mode == IndecMode::oracle) return split_parts(a).empty();
    mpz_class n = a.norm();
    const mpz_class& d2 = a.field()->delta_sq();
    if (n * n >= d2)
        throw PreconditionNotMet("is_indecomposable(sufficient): norm " + n.get_str() +
                                 " is not below the discriminant root");
    if (a.content() != 1)
        throw PreconditionNotMet("is_indecomposable(sufficient): element is imprimitive");
    return true;
}

namespace {

// true iff a/b is the square of an element of O_K
bool integral_square_ratio(const QuadInt& a, const QuadInt& b) {
    const Field& f = a.field();
    QuadRat q = a.emb(0) / b.emb(0);  // u + v sqrt(d)
    mpq_class r;
    if (!mpq_is_square(q.norm_q(), &r)) return false;
    const mpq_class& u = q.u();
    const mpq_class& v = q.v();
    mpq_class dd(f->d());
    mpq_class root;
    if (v == 0) {
        if (u < 0) return false;
        if (mpq_is_square(u, &root)) {
            if (QuadRat(f, root, 0).to_integral()) return true;
        }
        if (mpq_is_square(u / dd, &root)) {
            if (QuadRat(f, 0, root).to_integral()) return true;
        }
        return false;
    }
    // x = e + fe*sqrt(d) with e^2 + fe^2 d = u and 2 e fe = v; e^2 is one of
    // (u +- r)/2 with r = sqrt(u^2 - v^2 d)
    for (int branch = 0; branch < 2; ++branch) {
        mpq_class e2 = (branch == 0) ? mpq_class((u + r) / 2) : mpq_class((u - r) / 2);
        if (e2 <= 0) continue;
        mpq_class e;
        if (!mpq_is_square(e2, &e)) continue;
        mpq_class fe = v / (2 * e);
        if (e * e + fe * fe * dd != u) continue;
        if (QuadRat(f, e, fe).to_integral()) return true;
    }
    return false;
}

}  // namespace

bool same_square_class(const QuadInt& a, const QuadInt& b) {
    require_same_field(a.field(), b.field(), "same_square_class");
    if (a.is_zero() || b.is_zero())
        throw ZeroElement("same_square_class: elements must be nonzero");
    return integral_square_ratio(a, b) || integral_square_ratio(b, a);
}

namespace {

// all (s, t) with s, t >= 0 and s^2 - d t^2 = m (m >= 1), up to the action of
// the units and of conjugation; may contain redundant orbit members.  A
// solution with s = z t (mod m) lies in the planar lattice spanned by m and
// z + sqrt(d), has |norm product| = m there, and hence is a lattice minimum;
// every minimum appears among the continued fraction convergents of
// (sqrt(d) - z)/m, so walking one full period of each such surd finds an
// orbit member for every class.  This stays cheap even when the fundamental
// solution is astronomically large, where a direct scan over t is hopeless.
std::vector<std::pair<mpz_class, mpz_class>> norm_form_solutions(const mpz_class& d,
                                                                 const mpz_class& m) {
    std::vector<std::pair<mpz_class, mpz_class>> out;
    if (m == 1) out.emplace_back(1, 0);  // the 0th convergent below starts past it
    mpz_class s0 = isqrt(d);
    for (mpz_class z = 0; z < m; ++z) {
        if ((z * z - d) % m != 0) continue;

        // surd state (p + sqrt(d))/q with q | d - p^2; a_i by exact floor
        mpz_class p = -z, q = m;
        mpz_class am1 = 1, am2 = 0, bm1 = 0, bm2 = 1;
        std::map<std::pair<mpz_class, mpz_class>, long> seen;
        long stop = -1;
        for (long i = 0; stop < 0 || i < stop; ++i) {
            if (i > 100000) throw LogicError("norm_form_solutions: period not closing");
            auto ins = seen.emplace(std::make_pair(p, q), i);
            if (!ins.second && stop < 0) stop = i + (i - ins.first->second);  // one more cycle

            mpz_class num = p + s0 + (q < 0 ? 1 : 0);
            mpz_class a;
            mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
            mpz_class ai = a * am1 + am2, bi = a * bm1 + bm2;
            am2 = am1;
            am1 = ai;
            bm2 = bm1;
            bm1 = bi;

            mpz_class s = ai * m + bi * z, t = bi;
            if (s * s - d * t * t == m) out.emplace_back(abs(s), t);

            p = a * q - p;
            q = (d - p * p) / q;
        }
    }
    return out;
}

}  // namespace

std::vector<QuadInt> norm_representatives(const Field& f, const mpz_class& n) {
    if (n < 1) throw OutOfRange("norm_representatives: n must be >= 1");
    const mpz_class& d = f->d();

    QuadInt eps = fundamental_unit(f);
    QuadInt eps_tp = (eps.norm() == -1) ? eps * eps : eps;
    QuadInt eps_tp_inv = eps_tp.conj();  // norm 1, so the conjugate inverts

    // solutions of s^2 - d t^2 = 4n, split off the content g of (s, t) so
    // that the remaining part is covered by the primitive classes
    std::vector<QuadInt> out;
    mpz_class m = 4 * n;
    for (mpz_class g = 1; g * g <= m; ++g) {
        if (m % (g * g) != 0) continue;
        for (const auto& [s, t] : norm_form_solutions(d, m / (g * g))) {
            int flips = (t == 0) ? 1 : 2;
            for (int fl = 0; fl < flips; ++fl) {
                auto a = QuadInt::from_half_sqrt_basis(f, g * s, fl == 0 ? mpz_class(g * t)
                                                                         : mpz_class(-(g * t)));
                if (!a) continue;
                // normalize within the orbit: smallest first embedding that
                // still dominates the conjugate one
                QuadInt x = *a;
                while (x.t_half() < 0) x = x * eps_tp;
                while (true) {
                    QuadInt y = x * eps_tp_inv;
                    if (y.t_half() < 0) break;
                    x = y;
                }
                out.push_back(x);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const QuadInt& a, const QuadInt& b) { return a.canonical_less(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<QuadInt> small_norm_generators(const Field& f, const mpz_class& nmax) {
    if (nmax < 1) throw OutOfRange("small_norm_generators: nmax must be >= 1");
    std::vector<QuadInt> out;
    out.push_back(QuadInt::integer(f, 1));
    mpz_class disc = f->one_mod_four() ? f->d() : 4 * f->d();
    for (mpz_class n = 2; n <= nmax; ++n) {
        auto fac = factorize(n);
        if (squarefree_status(fac) != Tri::yes) continue;
        // r(n) = prod over p | n of (1 + chi(p)) with chi the Kronecker
        // symbol of the discriminant; nonzero iff no inert prime divides n
        bool admits = true;
        for (const auto& term : fac.terms) {
            if (mpz_kronecker(disc.get_mpz_t(), term.base.get_mpz_t()) == -1) {
                admits = false;
                break;
            }
        }
        if (!admits) continue;
        auto reps = norm_representatives(f, n);
        if (reps.empty())
            throw NoGeneratorFound("no totally positive element of norm " + n.get_str() +
                                   " in " + f->describe() +
                                   " although an ideal of that norm exists");
        QuadInt best = reps.front();
        for (std::size_t i = 1; i < reps.size(); ++i) {
            if ((reps[i].emb(0) - best.emb(0)).sign() < 0) best = reps[i];
        }
        out.push_back(best);
    }
    return out;
}

Certificate certify_element_set(const Field& f, const std::vector<QuadInt>& elems,
                                PairCheckMode mode) {
    if (elems.empty() || !elems.front().is_one())
        throw FirstElementNotOne("certify_element_set: the element list must start with 1");
    for (const QuadInt& a : elems) {
        require_same_field(f, a.field(), "certify_element_set");
        if (!a.is_totally_positive())
            throw NotTotallyPositive("certify_element_set: " + a.str() +
                                     " is not totally positive");
    }

    Certificate cert;
    cert.field = f;
    cert.elements = elems;
    cert.mode = mode;
    cert.m = static_cast<int>(elems.size());

    bool all = true;
    auto add = [&](CertCondition c) {
        all = all && c.verdict;
        cert.conditions.push_back(std::move(c));
    };

    add({"first_element_is_one", 0, -1, true, elems.front().str()});

    const mpz_class& d2 = f->delta_sq();
    for (int i = 0; i < cert.m; ++i) {
        mpz_class nn = elems[i].norm();
        std::ostringstream ev;
        ev << "norm " << nn.get_str() << " vs delta^2 = " << d2.get_str();
        add({"norm_le_delta", i, -1, nn > 0 && nn * nn < d2, ev.str()});
        mpz_class ct = elems[i].content();
        add({"primitive", i, -1, ct == 1, "content " + ct.get_str()});
    }

    for (int i = 0; i < cert.m; ++i) {
        for (int j = i + 1; j < cert.m; ++j) {
            bool distinct = !same_square_class(elems[i], elems[j]);
            add({"distinct_square_class", i, j, distinct,
                 distinct ? "no integral square ratio" : "integral square ratio exists"});
        }
    }

    for (int i = 0; i < cert.m; ++i) {
        for (int j = i + 1; j < cert.m; ++j) {
            if (mode == PairCheckMode::exhaustive) {
                auto doms = dominated_squares(elems[i] * elems[j]);
                bool only_zero = doms.size() == 1 && doms.front().is_zero();
                std::ostringstream ev;
                ev << doms.size() << " dominated square root(s)";
                if (!only_zero) {
                    for (const QuadInt& c : doms) {
                        if (!c.is_zero()) {
                            ev << ", e.g. " << c.str();
                            break;
                        }
                    }
                }
                add({"no_dominated_square", i, j, only_zero, ev.str()});
            } else {
                mpz_class ni = elems[i].norm(), nj = elems[j].norm();
                mpz_class pc = (elems[i] * elems[j]).content();
                bool ok = ni > 0 && nj > 0 && ni * ni * ni * ni < d2 &&
                          nj * nj * nj * nj < d2 && pc == 1;
                std::ostringstream ev;
                ev << "norms " << ni.get_str() << ", " << nj.get_str() << "; product content "
                   << pc.get_str();
                add({"product_primitive_small_norm", i, j, ok, ev.str()});
            }
        }
    }

    cert.valid = all;
    return cert;
}

}  // namespace uqf

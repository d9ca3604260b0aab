#include "uqf/cfrac.hpp"

namespace uqf {

CFExpansion expand_sqrt(const mpz_class& d) {
    if (d < 0) throw OutOfRange("expand_sqrt: need d >= 2, got " + d.get_str());
    mpz_class a0 = isqrt(d);
    if (a0 * a0 == d) throw PerfectSquare("sqrt(" + d.get_str() + ") is an integer");

    CFExpansion out;
    out.d = d;
    out.a0 = a0;
    // surd state (sqrt(d) + p) / q; the state after a0 is split off is
    // reduced, so the expansion returns to it exactly at the period end
    mpz_class p = a0, q = d - a0 * a0;
    const mpz_class p1 = p, q1 = q;
    while (true) {
        mpz_class a = (p + a0) / q;
        out.period.push_back(a);
        p = a * q - p;
        q = (d - p * p) / q;
        if (p == p1 && q == q1) break;
    }
    // cheap flag only; callers needing certainty factor d themselves
    out.squarefree = is_squarefree(d, FactorEffort{1000, 0});
    return out;
}

mpz_class coefficient_after(const CFExpansion& exp, long i) {
    if (i < 0) throw OutOfRange("coefficient_after: index must be >= 0");
    return exp.period[static_cast<std::size_t>(i) % exp.period.size()];
}

std::vector<Convergent> convergents(const CFExpansion& exp, std::size_t count) {
    if (count < 1) throw OutOfRange("convergents: count must be >= 1");
    // sqrt(D) = 2^a sqrt(D') with D' not divisible by 4, so alpha = p + q sqrt(D)
    // stays representable even for the diagnostic radicands expand_sqrt admits
    mpz_class d_red = exp.d, scale = 1;
    while (mpz_divisible_ui_p(d_red.get_mpz_t(), 4)) {
        d_red /= 4;
        scale *= 2;
    }
    Field f = make_field_trusted(d_red);
    std::vector<Convergent> out;
    out.reserve(count);
    mpz_class pm1 = 1, qm1 = 0;   // p_{-1}, q_{-1}
    mpz_class p = exp.a0, q = 1;  // p_0, q_0
    for (long i = 0; i < static_cast<long>(count); ++i) {
        if (i > 0) {
            mpz_class a = coefficient_after(exp, i - 1);  // a_i
            mpz_class pn = a * p + pm1, qn = a * q + qm1;
            pm1 = p;
            qm1 = q;
            p = pn;
            q = qn;
        }
        out.push_back(Convergent{i, p, q, QuadInt::from_sqrt_basis(f, p, q * scale),
                                 p * p - exp.d * q * q});
    }
    return out;
}

bool check_size_bound(const Convergent& conv, const mpz_class& a_next) {
    if (a_next < 1) throw OutOfRange("check_size_bound: coefficient must be >= 1");
    mpz_class d = (conv.p * conv.p - conv.n) / (conv.q * conv.q);  // the radicand, exactly
    mpq_class lhs(abs(conv.n));
    // 2 sqrt(d)/a = sqrt(4d/a^2)
    mpq_class under(4 * d, a_next * a_next);
    under.canonicalize();
    mpq_class tail(1, a_next * conv.q * conv.q);
    tail.canonicalize();
    Verdict v = decide_with_precision([&](unsigned bits) {
        QInterval rhs = QInterval::sqrt_of(under, bits) + QInterval(tail);
        return certify_less(QInterval(lhs), rhs);
    });
    if (v == Verdict::undecided)
        throw LogicError("size bound comparison failed to resolve");
    return v == Verdict::holds;
}

QuadInt fundamental_unit(const Field& f) {
    CFExpansion exp = expand_sqrt(f->d());
    auto conv = convergents(exp, exp.period.size());
    const Convergent& last = conv.back();  // closes the first period
    QuadInt u0 = last.alpha;               // norm (-1)^r
    if (!f->one_mod_four()) return u0;

    // d = 1 (mod 4): the unit group of O_K can exceed that of Z[sqrt(d)],
    // with index 3.  Then the fundamental unit eps = (s + t sqrt(d))/2
    // satisfies eps^3 = u0, which pins s via s^3 - 3 m s = 2 p (m = norm of
    // u0) and t by exact division.
    mpz_class m = u0.norm();
    mpz_class two_x0 = 2 * last.p;
    mpz_class sroot;
    mpz_root(sroot.get_mpz_t(), two_x0.get_mpz_t(), 3);
    for (mpz_class s = sroot - 2; s <= sroot + 2; ++s) {
        if (s <= 0) continue;
        if (s * s * s - 3 * m * s != two_x0) continue;
        mpz_class den = s * s - m;
        if (den == 0) continue;
        mpz_class two_y0 = 2 * last.q;
        if (two_y0 % den != 0) continue;
        mpz_class t = two_y0 / den;
        if (s * s - f->d() * t * t != 4 * m) continue;
        auto eps = QuadInt::from_half_sqrt_basis(f, s, t);
        if (!eps) continue;
        if (eps->pow_ui(3) == u0) return *eps;
    }
    return u0;
}

std::pair<mpz_class, mpz_class> pell_unit(const mpz_class& d) {
    CFExpansion exp = expand_sqrt(d);
    auto conv = convergents(exp, exp.period.size());
    const mpz_class& p = conv.back().p;
    const mpz_class& q = conv.back().q;
    if (conv.back().n == 1) return {p, q};
    // period-end norm is -1; its square solves the +1 equation
    return {p * p + d * q * q, 2 * p * q};
}

std::vector<mpz_class> q_sequence(const mpz_class& u, long l) {
    if (u < 1 || l < 1) throw OutOfRange("q_sequence: need u >= 1 and l >= 1");
    std::vector<mpz_class> q;
    q.reserve(static_cast<std::size_t>(l) + 1);
    q.push_back(1);
    q.push_back(u);
    for (long i = 2; i <= l; ++i) q.push_back(u * q[i - 1] + q[i - 2]);
    return q;
}

QIdentityReport check_q_identities(const mpz_class& u, long l) {
    auto seq = q_sequence(u, l);
    auto qat = [&](long i) -> mpz_class { return i < 0 ? mpz_class(0) : seq[i]; };
    QIdentityReport rep;
    for (long i = 1; i <= l && rep.pass; ++i) {
        for (long j = 0; j < i; ++j) {
            mpz_class lhs = qat(i) * qat(j - 1) - qat(i - 1) * qat(j);
            mpz_class rhs = qat(i - j - 1);
            if (j % 2 == 0) rhs = -rhs;  // (-1)^{j+1}
            if (lhs != rhs) {
                rep.pass = false;
                rep.bad_i = i;
                rep.bad_j = j;
                rep.which = "cross";
                break;
            }
        }
    }
    for (long i = 1; i <= l && rep.pass; ++i) {
        mpz_class lhs = qat(i) * qat(i - 2) - qat(i - 1) * qat(i - 1);
        mpz_class rhs = (i % 2 == 0) ? 1 : -1;
        if (lhs != rhs) {
            rep.pass = false;
            rep.bad_i = i;
            rep.which = "consecutive";
        }
    }
    if (u % 2 == 0) {
        for (long i = 1; i <= l && rep.pass; i += 2) {
            if (seq[i] % 2 != 0) {
                rep.pass = false;
                rep.bad_i = i;
                rep.which = "parity";
            }
        }
    }
    return rep;
}

BinetQuantities BinetQuantities::enclose(unsigned new_bits) const {
    return binet_quantities(u, k, d, new_bits);
}

bool BinetQuantities::product_is_minus_one() const {
    mpz_class e = u * u + 4;
    mpq_class prod(u * u - e, 4);
    prod.canonicalize();
    return prod == -1;
}

BinetQuantities binet_quantities(const mpz_class& u, const mpz_class& k, const mpz_class& d,
                                 unsigned bits) {
    if (u < 1 || k < 1 || d < 2)
        throw OutOfRange("binet_quantities: need u >= 1, k >= 1, d >= 2");
    BinetQuantities b;
    b.u = u;
    b.k = k;
    b.d = d;
    b.bits = bits;
    mpz_class e = u * u + 4;
    QInterval se = QInterval::sqrt_of(mpq_class(e), bits);
    QInterval sd = QInterval::sqrt_of(mpq_class(d), bits);
    mpq_class half(1, 2);
    b.rho_plus = half * (mpq_class(u) + se);
    b.rho_minus = half * (QInterval(mpq_class(u)) - se);
    QInterval kp = QInterval(mpq_class(k)) + sd;
    QInterval km = QInterval(mpq_class(k)) - sd;
    QInterval one(mpq_class(1));
    b.c_plus = (one + kp * b.rho_plus) / se;
    b.c_minus = -(one + kp * b.rho_minus) / se;
    b.cprime_plus = (one + km * b.rho_plus) / se;
    b.cprime_minus = -(one + km * b.rho_minus) / se;
    return b;
}

bool TechnicalReport::all_applicable_hold() const {
    auto ok = [](TechStatus s) {
        return s == TechStatus::holds || s == TechStatus::hypothesis_not_met;
    };
    return ok(c_minus_positive) && ok(cprime_minus_bounds) && ok(cprime_plus_small) &&
           ok(plus_term_dominated);
}

namespace {

TechStatus to_status(Verdict v) {
    switch (v) {
        case Verdict::holds: return TechStatus::holds;
        case Verdict::fails: return TechStatus::fails;
        default: return TechStatus::undecided;
    }
}

}  // namespace

TechnicalReport check_technical(const mpz_class& u, const mpz_class& k, long l,
                                const mpz_class& d) {
    if (u < 1 || k < 1 || l < 1 || d < 2)
        throw OutOfRange("check_technical: need u >= 1, k >= 1, l >= 1, d >= 2");
    TechnicalReport rep;

    if (k < u) {
        rep.c_minus_positive = TechStatus::hypothesis_not_met;
    } else {
        rep.c_minus_positive = to_status(decide_with_precision([&](unsigned bits) {
            BinetQuantities b = binet_quantities(u, k, d, bits);
            return certify_less(QInterval(mpq_class(0)), b.c_minus);
        }));
    }

    if (u < 2) {
        rep.cprime_minus_bounds = TechStatus::hypothesis_not_met;
        rep.cprime_plus_small = TechStatus::hypothesis_not_met;
        rep.plus_term_dominated = TechStatus::hypothesis_not_met;
        return rep;
    }

    rep.cprime_minus_bounds = to_status(decide_with_precision([&](unsigned bits) {
        BinetQuantities b = binet_quantities(u, k, d, bits);
        QInterval a = b.cprime_minus.abs();
        Verdict left = certify_less(b.rho_minus.pow_ui(2), a);
        Verdict right = certify_less(a, QInterval(mpq_class(1)));
        if (left == Verdict::fails || right == Verdict::fails) return Verdict::fails;
        if (left == Verdict::holds && right == Verdict::holds) return Verdict::holds;
        return Verdict::undecided;
    }));

    // |c'_plus| < 2 rho_plus^-l, multiplied through by rho_plus^l.  The
    // left side is a near-cancellation, so start with generous precision.
    rep.cprime_plus_small = to_status(decide_with_precision(
        [&](unsigned bits) {
            BinetQuantities b = binet_quantities(u, k, d, bits);
            QInterval lhs = b.cprime_plus.abs() * b.rho_plus.pow_ui(static_cast<unsigned long>(l));
            return certify_less(lhs, QInterval(mpq_class(2)));
        },
        128));

    if (l < 4) {
        rep.plus_term_dominated = TechStatus::hypothesis_not_met;
    } else {
        long nmax = (l - 4) / 2;
        TechStatus agg = TechStatus::holds;
        for (long n = 0; n <= nmax; ++n) {
            Verdict v = decide_with_precision(
                [&](unsigned bits) {
                    BinetQuantities b = binet_quantities(u, k, d, bits);
                    auto nn = static_cast<unsigned long>(n);
                    QInterval lhs = (b.cprime_plus * b.rho_plus.pow_ui(nn)).abs();
                    QInterval rhs =
                        (b.cprime_minus * b.rho_minus.pow_ui(nn)).abs() * QInterval(mpq_class(1, 2));
                    return certify_less(lhs, rhs);
                },
                128);
            if (v == Verdict::fails) {
                agg = TechStatus::fails;
                rep.first_bad_n = n;
                break;
            }
            if (v == Verdict::undecided) agg = TechStatus::undecided;
        }
        rep.plus_term_dominated = agg;
    }
    return rep;
}

}  // namespace uqf

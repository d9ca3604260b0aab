#include "uqf/enumerate.hpp"

#include <algorithm>

namespace uqf {

Bound Bound::rational(mpq_class b) {
    Bound out;
    out.is_sqrt_ = false;
    out.rat_ = std::move(b);
    return out;
}

Bound Bound::sqrt_of(QuadRat r) {
    Bound out;
    out.is_sqrt_ = true;
    out.sq_ = std::move(r);
    return out;
}

bool Bound::abs_le(const QuadRat& val) const {
    if (!is_sqrt_) {
        if (sgn(rat_) < 0) return false;
        return (val - rat_).sign() <= 0 && (val + rat_).sign() >= 0;
    }
    if (sq_.sign() < 0) return false;
    // |val| <= sqrt(r)  iff  val^2 <= r
    return (val * val - sq_).sign() <= 0;
}

mpq_class Bound::upper_rat() const {
    if (!is_sqrt_) return rat_ < 0 ? mpq_class(0) : rat_;
    if (sq_.sign() <= 0) return mpq_class(0);
    return ub_sqrt(sq_.upper_within(mpq_class(1, 4)));
}

namespace {

struct Vec {
    mpz_class x, y;  // coordinates on {1, w}
};

QuadRat emb_of(const Field& f, const Vec& v, int which) {
    return QuadInt(f, v.x, v.y).emb(which);
}

// scaled inner product: e1(a)e1(b)/r1^2 + e2(a)e2(b)/r2^2
QuadRat scaled_ip(const Field& f, const Vec& a, const Vec& b, const mpq_class& r1sq,
                  const mpq_class& r2sq) {
    QuadRat t1 = emb_of(f, a, 0) * emb_of(f, b, 0);
    QuadRat t2 = emb_of(f, a, 1) * emb_of(f, b, 1);
    return t1 * mpq_class(1 / r1sq) + t2 * mpq_class(1 / r2sq);
}

}  // namespace

std::vector<QuadInt> candidates_in_rect(const Field& f, const EmbRect& rect) {
    std::vector<QuadInt> out;
    if (rect.hi1 < rect.lo1 || rect.hi2 < rect.lo2) return out;

    // centre and half-widths.  Zero-width directions are inflated for the
    // geometry pass only (callers filter exactly); the inflated area stays
    // around one covolume, so this adds O(1) spurious candidates.  Thin but
    // positive boxes need no help: the reduction aligns the basis with them.
    mpq_class mid1 = (rect.lo1 + rect.hi1) / 2, mid2 = (rect.lo2 + rect.hi2) / 2;
    mpq_class r1 = (rect.hi1 - rect.lo1) / 2, r2 = (rect.hi2 - rect.lo2) / 2;
    mpq_class cov_sq(f->one_mod_four() ? f->d() : 4 * f->d());  // covolume^2
    mpq_class cov_ub = ub_sqrt(cov_sq);
    if (r1 == 0 && r2 == 0) {
        r1 = r2 = ub_sqrt(cov_ub);
    } else if (r1 == 0) {
        r1 = cov_ub / (4 * r2);
    } else if (r2 == 0) {
        r2 = cov_ub / (4 * r1);
    }
    mpq_class r1sq = r1 * r1, r2sq = r2 * r2;

    // Lagrange-reduce the basis {1, w} against the scaled metric
    Vec b1{1, 0}, b2{0, 1};
    QuadRat g11 = scaled_ip(f, b1, b1, r1sq, r2sq);
    QuadRat g22 = scaled_ip(f, b2, b2, r1sq, r2sq);
    QuadRat g12 = scaled_ip(f, b1, b2, r1sq, r2sq);
    if ((g22 - g11).sign() < 0) {
        std::swap(b1, b2);
        std::swap(g11, g22);
    }
    for (int guard = 0; guard < 4096; ++guard) {
        mpz_class mu = (g12 / g11).round_nearest();
        if (mu != 0) {
            b2.x -= mu * b1.x;
            b2.y -= mu * b1.y;
            g22 = scaled_ip(f, b2, b2, r1sq, r2sq);
            g12 = scaled_ip(f, b1, b2, r1sq, r2sq);
        }
        if ((g22 - g11).sign() >= 0) break;
        std::swap(b1, b2);
        std::swap(g11, g22);
    }

    mpz_class det = b1.x * b2.y - b2.x * b1.y;
    if (det != 1 && det != -1) throw LogicError("candidates_in_rect: basis not unimodular");

    // real coordinates (c1, c2) of the centre in the embedded basis:
    // mid = c1*emb(b1) + c2*emb(b2), one scalar per basis vector across both
    // embeddings, solved from the 2x2 embedding matrix
    QuadRat e1b1 = emb_of(f, b1, 0), e2b1 = emb_of(f, b1, 1);
    QuadRat e1b2 = emb_of(f, b2, 0), e2b2 = emb_of(f, b2, 1);
    QuadRat det_emb = e1b1 * e2b2 - e1b2 * e2b1;
    if (det_emb.sign() == 0) throw LogicError("candidates_in_rect: degenerate embedding");
    QuadRat c1 = (e2b2 * mid1 - e1b2 * mid2) / det_emb;
    QuadRat c2 = (e1b1 * mid2 - e2b1 * mid1) / det_emb;

    // rectangle fits in the ellipse Q(m - c) <= 2 with Gram matrix G
    QuadRat detg = g11 * g22 - g12 * g12;
    if (detg.sign() <= 0) throw LogicError("candidates_in_rect: degenerate Gram");
    const mpq_class quarter(1, 4);
    mpq_class w2max = ub_sqrt((g11 * mpq_class(2) / detg).upper_within(quarter));
    mpz_class m2_lo;
    {
        mpq_class q = c2.lower_within(quarter) - w2max;
        mpz_fdiv_q(m2_lo.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        m2_lo -= 1;
    }
    mpz_class m2_hi;
    {
        mpq_class q = c2.upper_within(quarter) + w2max;
        mpz_cdiv_q(m2_hi.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        m2_hi += 1;
    }

    const mpz_class hard_cap = 30000000;
    if (m2_hi - m2_lo > hard_cap)
        throw Error("box enumeration range too large (" + mpz_class(m2_hi - m2_lo).get_str() +
                    " rows)");
    mpz_class emitted = 0;

    for (mpz_class m2 = m2_lo; m2 <= m2_hi; ++m2) {
        QuadRat beta = QuadRat(f, mpq_class(m2), 0) - c2;
        // G11 a^2 + 2 G12 a b + G22 b^2 <= 2, a = m1 - c1
        QuadRat rhs = QuadRat(f, mpq_class(2), 0) - beta * beta * detg / g11;
        if (rhs.upper_within(quarter) < 0) continue;
        QuadRat centre_a = -(g12 / g11) * beta;  // a-centre of the interval
        mpq_class halfw = ub_sqrt((rhs / g11).upper_within(quarter));
        QuadRat m1c = c1 + centre_a;
        mpz_class m1_lo, m1_hi;
        {
            mpq_class q = m1c.lower_within(quarter) - halfw;
            mpz_fdiv_q(m1_lo.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
            m1_lo -= 1;
        }
        {
            mpq_class q = m1c.upper_within(quarter) + halfw;
            mpz_cdiv_q(m1_hi.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
            m1_hi += 1;
        }
        for (mpz_class m1 = m1_lo; m1 <= m1_hi; ++m1) {
            out.emplace_back(f, m1 * b1.x + m2 * b2.x, m1 * b1.y + m2 * b2.y);
            if (++emitted > hard_cap)
                throw Error("box enumeration emitted too many candidates");
        }
    }
    return out;
}

std::vector<QuadInt> elements_in_rect(const Field& f, const EmbRect& rect) {
    std::vector<QuadInt> out;
    for (auto& g : candidates_in_rect(f, rect)) {
        QuadRat e1 = g.emb(0), e2 = g.emb(1);
        if ((e1 - rect.lo1).sign() < 0 || (e1 - rect.hi1).sign() > 0) continue;
        if ((e2 - rect.lo2).sign() < 0 || (e2 - rect.hi2).sign() > 0) continue;
        out.push_back(g);
    }
    std::sort(out.begin(), out.end(),
              [](const QuadInt& a, const QuadInt& b) { return a.canonical_less(b); });
    return out;
}

std::vector<QuadInt> enumerate_box(const Field& f, const Bound& b1, const Bound& b2) {
    mpq_class u1 = b1.upper_rat(), u2 = b2.upper_rat();
    EmbRect rect{-u1, u1, -u2, u2};
    std::vector<QuadInt> out;
    for (auto& g : candidates_in_rect(f, rect)) {
        if (!b1.abs_le(g.emb(0))) continue;
        if (!b2.abs_le(g.emb(1))) continue;
        out.push_back(g);
    }
    std::sort(out.begin(), out.end(),
              [](const QuadInt& a, const QuadInt& b) { return a.canonical_less(b); });
    return out;
}

}  // namespace uqf

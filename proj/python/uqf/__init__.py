"""Exact arithmetic toolkit for universal quadratic forms over real quadratic fields.

Python face of the C++ core: big integers travel as decimal strings through
the raw ``_uqf`` module and come back as ordinary ints here.
"""

import json as _json

from . import _uqf as _raw

__all__ = [
    "cfrac",
    "fundamental_unit",
    "element_facts",
    "dominated_squares",
    "small_norm_generators",
    "certify",
    "lower_bound",
    "diagonal_lower_bound",
    "family_search",
    "count_squarefree",
    "euler_enclosure",
]


def _s(n):
    return str(int(n))


def _pairs(elements):
    return [(_s(x), _s(y)) for x, y in elements]


def _tuples(records):
    return [(int(x), int(y)) for x, y in records]


def cfrac(d):
    """Continued fraction of sqrt(d): {"D", "a0", "period"} with int values."""
    j = _json.loads(_raw.cfrac_json(_s(d)))
    return {"D": int(j["D"]), "a0": int(j["a0"]), "period": [int(a) for a in j["period"]]}


def fundamental_unit(d):
    """(x, y, norm) of the fundamental unit x + y*omega of Q(sqrt(d))."""
    j = _json.loads(_raw.fundamental_unit_json(_s(d)))
    return int(j["x"]), int(j["y"]), int(j["norm"])


def element_facts(d, x, y):
    """Norm, trace, total positivity and unit flag of x + y*omega."""
    j = _json.loads(_raw.element_facts_json(_s(d), _s(x), _s(y)))
    return {
        "norm": int(j["norm"]),
        "trace": int(j["trace"]),
        "totally_positive": j["totally_positive"],
        "unit": j["unit"],
    }


def dominated_squares(d, x, y):
    """All c with (x + y*omega) - c^2 totally positive or zero, as (x, y) tuples."""
    return _tuples(_json.loads(_raw.dominated_squares_json(_s(d), _s(x), _s(y))))


def small_norm_generators(d, nmax):
    """{1} plus one primitive totally positive generator per admissible norm <= nmax."""
    return _tuples(_json.loads(_raw.small_norm_generators_json(_s(d), _s(nmax))))


def certify(d, elements, mode="exhaustive"):
    """Run the element-set conditions; returns the certificate as a dict."""
    cert = _json.loads(_raw.certify_json(_s(d), _pairs(elements), mode))
    cert["D"] = int(cert["D"])
    cert["elements"] = _tuples(cert["elements"])
    return cert


def lower_bound(d, queue, max_depth=8):
    """Escalation lower bound for the rank of a universal classical form."""
    rb = _json.loads(_raw.lower_bound_json(_s(d), _pairs(queue), max_depth))
    rb["D"] = int(rb["D"])
    rb["queue"] = _tuples(rb["queue"])
    return rb


def diagonal_lower_bound(d, elements):
    """Variable-count lower bound for universal diagonal forms."""
    return _raw.diagonal_lower_bound(_s(d), _pairs(elements))


def family_search(u, l, t_min, t_max, mod4=False):
    """Surviving members of the family sqrt(D) = [k; u, ..., u, 2k] for t in range."""
    hits = _json.loads(_raw.family_search_json(u, l, _s(t_min), _s(t_max), mod4))
    return [
        {
            "t": int(h["t"]),
            "D": int(h["D"]),
            "k": int(h["k"]),
            "N": {int(i): int(n) for i, n in h["N"].items()},
        }
        for h in hits
    ]


def count_squarefree(f, x, g=()):
    """#{1 <= n <= x} where f(n) = a n^2 + b n + c and every k n + r are squarefree."""
    a, b, c = f
    j = _json.loads(_raw.count_squarefree_json(_s(a), _s(b), _s(c), _pairs(g), x))
    return int(j["count"])


def euler_enclosure(f, p, g=()):
    """(lo, hi) floats bracketing the squarefree density constant."""
    a, b, c = f
    j = _json.loads(_raw.euler_enclosure_json(_s(a), _s(b), _s(c), _pairs(g), p))
    return float(j["lo"]), float(j["hi"])

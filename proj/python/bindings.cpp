#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "uqf/cfrac.hpp"
#include "uqf/escalation.hpp"
#include "uqf/family.hpp"
#include "uqf/json_io.hpp"
#include "uqf/quadfield.hpp"
#include "uqf/sieve.hpp"

namespace py = pybind11;
using namespace uqf;
using nlohmann::json;

// Thin raw layer: big integers cross the boundary as decimal strings and
// structured results as JSON text; the uqf package turns them back into
// Python ints.  See python/uqf/__init__.py.

namespace {

using StrPair = std::pair<std::string, std::string>;

mpz_class num(const std::string& s, const char* what) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw InputError(std::string(what) + ": \"" + s + "\" is not a decimal integer");
    }
}

Field field_of(const std::string& d) { return make_field(num(d, "d")); }

QuadInt elem(const Field& f, const StrPair& xy) {
    return QuadInt(f, num(xy.first, "x"), num(xy.second, "y"));
}

std::vector<QuadInt> elems(const Field& f, const std::vector<StrPair>& xys) {
    std::vector<QuadInt> out;
    out.reserve(xys.size());
    for (const StrPair& xy : xys) out.push_back(elem(f, xy));
    return out;
}

json quadint_list(const std::vector<QuadInt>& v) {
    json out = json::array();
    for (const QuadInt& e : v) out.push_back(to_json(e));
    return out;
}

}  // namespace

PYBIND11_MODULE(_uqf, m) {
    m.doc() = "raw bindings; import the uqf package instead";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const UnresolvedFactorization& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("cfrac_json", [](const std::string& d) {
        CFExpansion e = expand_sqrt(num(d, "d"));
        json period = json::array();
        for (const mpz_class& a : e.period) period.push_back(a.get_str());
        return json{{"D", e.d.get_str()}, {"a0", e.a0.get_str()}, {"period", period}}.dump();
    });

    m.def("fundamental_unit_json", [](const std::string& d) {
        QuadInt u = fundamental_unit(field_of(d));
        return json{{"x", u.x().get_str()}, {"y", u.y().get_str()}, {"norm", u.norm().get_str()}}
            .dump();
    });

    m.def("element_facts_json", [](const std::string& d, const std::string& x,
                                   const std::string& y) {
        QuadInt a = elem(field_of(d), {x, y});
        return json{{"norm", a.norm().get_str()},
                    {"trace", a.trace().get_str()},
                    {"totally_positive", a.is_totally_positive()},
                    {"unit", a.is_unit()}}
            .dump();
    });

    m.def("dominated_squares_json",
          [](const std::string& d, const std::string& x, const std::string& y) {
              return quadint_list(dominated_squares(elem(field_of(d), {x, y}))).dump();
          });

    m.def("small_norm_generators_json", [](const std::string& d, const std::string& nmax) {
        return quadint_list(small_norm_generators(field_of(d), num(nmax, "nmax"))).dump();
    });

    m.def("certify_json",
          [](const std::string& d, const std::vector<StrPair>& xs, const std::string& mode) {
              Field f = field_of(d);
              PairCheckMode pm = mode == "product_norm" ? PairCheckMode::product_norm
                                                        : PairCheckMode::exhaustive;
              return to_json(certify_element_set(f, elems(f, xs), pm)).dump();
          });

    m.def("lower_bound_json",
          [](const std::string& d, const std::vector<StrPair>& queue, int max_depth) {
              Field f = field_of(d);
              return to_json(lower_bound_search(f, elems(f, queue), max_depth), false).dump();
          });

    m.def("diagonal_lower_bound",
          [](const std::string& d, const std::vector<StrPair>& xs) {
              Field f = field_of(d);
              return diagonal_lower_bound(f, elems(f, xs));
          });

    m.def("family_search_json", [](long u, long l, const std::string& t_min,
                                   const std::string& t_max, bool mod4) {
        SearchFilters filters;
        filters.require_two_mod_four = mod4;
        json out = json::array();
        for (const SearchHit& hit : search_t(u, l, num(t_min, "t_min"), num(t_max, "t_max"),
                                             filters)) {
            json nmap = json::object();
            for (long i = 1; i <= (l - 1) / 2; i += 2)
                nmap[std::to_string(i)] = hit.inst.n_at(i).get_str();
            out.push_back({{"t", hit.inst.t.get_str()},
                           {"D", hit.inst.d.get_str()},
                           {"k", hit.inst.k.get_str()},
                           {"N", nmap}});
        }
        return out.dump();
    });

    m.def("count_squarefree_json",
          [](const std::string& a, const std::string& b, const std::string& c,
             const std::vector<StrPair>& gs, long x) {
              std::vector<std::pair<mpz_class, mpz_class>> side;
              for (const StrPair& kr : gs)
                  side.emplace_back(num(kr.first, "k"), num(kr.second, "r"));
              SieveSpec spec =
                  make_sieve_spec(num(a, "a"), num(b, "b"), num(c, "c"), side);
              return json{{"count", count_simultaneous(spec, x).get_str()}, {"X", x}}.dump();
          });

    m.def("euler_enclosure_json",
          [](const std::string& a, const std::string& b, const std::string& c,
             const std::vector<StrPair>& gs, unsigned long p) {
              std::vector<std::pair<mpz_class, mpz_class>> side;
              for (const StrPair& kr : gs)
                  side.emplace_back(num(kr.first, "k"), num(kr.second, "r"));
              SieveSpec spec =
                  make_sieve_spec(num(a, "a"), num(b, "b"), num(c, "c"), side);
              QInterval enc = euler_constant(spec, p);
              return json{{"lo", mpq_decimal(enc.lo(), 17, -1)},
                          {"hi", mpq_decimal(enc.hi(), 17, 1)}}
                  .dump();
          });
}

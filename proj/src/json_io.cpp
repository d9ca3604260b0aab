#include "uqf/json_io.hpp"

#include <sstream>

#include "uqf/errors.hpp"

namespace uqf {

using nlohmann::json;

nlohmann::json to_json(const QuadInt& a) {
    return json::array({a.x().get_str(), a.y().get_str()});
}

namespace {

const char* mode_name(PairCheckMode mode) {
    return mode == PairCheckMode::exhaustive ? "exhaustive" : "product_norm";
}

PairCheckMode mode_from_name(const std::string& name) {
    if (name == "exhaustive") return PairCheckMode::exhaustive;
    if (name == "product_norm") return PairCheckMode::product_norm;
    throw InputError("unknown pair-check mode \"" + name + "\"");
}

mpz_class mpz_from_json(const json& j, const char* what) {
    try {
        if (j.is_string()) return mpz_class(j.get<std::string>());
        if (j.is_number_integer()) return mpz_class(j.get<long>());
    } catch (const std::invalid_argument&) {
    }
    throw InputError(std::string(what) + ": expected a decimal integer, got " + j.dump());
}

}  // namespace

nlohmann::json to_json(const Certificate& cert) {
    json conds = json::array();
    for (const CertCondition& c : cert.conditions) {
        conds.push_back({{"kind", c.kind},
                         {"index", c.index},
                         {"other", c.other},
                         {"verdict", c.verdict},
                         {"evidence", c.evidence}});
    }
    json elems = json::array();
    for (const QuadInt& e : cert.elements) elems.push_back(to_json(e));
    return json{{"D", cert.field->d().get_str()},
                {"mode", mode_name(cert.mode)},
                {"elements", elems},
                {"M", cert.m},
                {"valid", cert.valid},
                {"conditions", conds}};
}

nlohmann::json to_json(const GramLattice& lat) {
    json rows = json::array();
    for (std::size_t i = 0; i < lat.n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < lat.n; ++j) row.push_back(to_json(lat.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(const RankBound& rb, bool with_tree) {
    json queue = json::array();
    for (const QuadInt& e : rb.queue) queue.push_back(to_json(e));
    json out{{"D", rb.field->d().get_str()},
             {"queue", queue},
             {"bound", rb.bound},
             {"exhaustive", rb.exhaustive},
             {"tree_summary", rb.tree_summary}};
    if (with_tree) {
        json tree = json::array();
        for (const auto& level : rb.levels) {
            json nodes = json::array();
            for (const EscalationNode& node : level) {
                json cross = json::array();
                for (const QuadInt& c : node.cross_vector) cross.push_back(to_json(c));
                nodes.push_back({{"parent", node.parent},
                                 {"added", node.parent < 0 ? json() : to_json(node.added_target)},
                                 {"cross", cross},
                                 {"gram", to_json(node.lattice)}});
            }
            tree.push_back(std::move(nodes));
        }
        out["tree"] = std::move(tree);
    }
    return out;
}

QuadInt quadint_from_json(const Field& f, const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw InputError("element: expected [x, y], got " + j.dump());
    return QuadInt(f, mpz_from_json(j[0], "element x"), mpz_from_json(j[1], "element y"));
}

Certificate certificate_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("certificate: expected a JSON object");
    for (const char* key : {"D", "mode", "elements", "M", "valid", "conditions"})
        if (!j.contains(key)) throw InputError(std::string("certificate: missing \"") + key + "\"");

    Certificate cert;
    cert.field = make_field(mpz_from_json(j.at("D"), "certificate D"));
    cert.mode = mode_from_name(j.at("mode").get<std::string>());
    if (!j.at("elements").is_array()) throw InputError("certificate: \"elements\" must be an array");
    for (const json& e : j.at("elements"))
        cert.elements.push_back(quadint_from_json(cert.field, e));
    cert.m = j.at("M").get<int>();
    cert.valid = j.at("valid").get<bool>();
    if (!j.at("conditions").is_array())
        throw InputError("certificate: \"conditions\" must be an array");
    for (const json& c : j.at("conditions")) {
        CertCondition cond;
        cond.kind = c.at("kind").get<std::string>();
        cond.index = c.value("index", -1);
        cond.other = c.value("other", -1);
        cond.verdict = c.at("verdict").get<bool>();
        cond.evidence = c.value("evidence", std::string());
        cert.conditions.push_back(std::move(cond));
    }
    return cert;
}

std::string mpq_decimal(const mpq_class& q, int digits, int mode) {
    if (digits < 0) throw OutOfRange("mpq_decimal: digits must be >= 0");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class num = q.get_num() * scale;
    mpz_class quot;
    if (mode < 0)
        mpz_fdiv_q(quot.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    else if (mode > 0)
        mpz_cdiv_q(quot.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    else
        mpz_tdiv_q(quot.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());

    bool neg = quot < 0;
    std::string body = mpz_class(abs(quot)).get_str();
    if (static_cast<int>(body.size()) <= digits)
        body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    if (digits > 0) body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    return neg ? "-" + body : body;
}

namespace {

// The cheap recomputation for one recorded condition; nullopt means the kind
// is enumeration-backed and only its bookkeeping is checked.
std::optional<bool> recompute(const Certificate& cert, const CertCondition& c) {
    int m = static_cast<int>(cert.elements.size());
    auto el = [&](int i) -> const QuadInt& { return cert.elements[static_cast<std::size_t>(i)]; };
    if (c.kind == "first_element_is_one") {
        if (c.index < 0 || c.index >= m) throw InputError("condition index out of range");
        return el(c.index).is_one();
    }
    if (c.kind == "norm_le_delta") {
        if (c.index < 0 || c.index >= m) throw InputError("condition index out of range");
        mpz_class n = el(c.index).norm();
        return n > 0 && n * n < cert.field->delta_sq();
    }
    if (c.kind == "primitive") {
        if (c.index < 0 || c.index >= m) throw InputError("condition index out of range");
        return el(c.index).content() == 1;
    }
    if (c.kind == "distinct_square_class") {
        if (c.index < 0 || c.other < 0 || c.index >= m || c.other >= m)
            throw InputError("condition pair out of range");
        return !same_square_class(el(c.index), el(c.other));
    }
    if (c.kind == "product_primitive_small_norm") {
        if (c.index < 0 || c.other < 0 || c.index >= m || c.other >= m)
            throw InputError("condition pair out of range");
        mpz_class ni = el(c.index).norm(), nj = el(c.other).norm();
        const mpz_class& d2 = cert.field->delta_sq();
        return ni > 0 && nj > 0 && ni * ni * ni * ni < d2 && nj * nj * nj * nj < d2 &&
               (el(c.index) * el(c.other)).content() == 1;
    }
    if (c.kind == "norm_squarefree") {
        if (c.index < 0 || c.index >= m) throw InputError("condition index out of range");
        mpz_class n = el(c.index).norm();
        Tri sf = is_squarefree(n);
        if (sf == Tri::unknown) throw UnresolvedFactorization("norm_squarefree recheck: " + n.get_str());
        return sf == Tri::yes && n != 1;
    }
    if (c.kind == "no_dominated_square") {
        if (c.index < 0 || c.other < 0 || c.index >= m || c.other >= m)
            throw InputError("condition pair out of range");
        return std::nullopt;  // enumeration result, kept as recorded
    }
    throw InputError("unrecognized condition kind \"" + c.kind + "\"");
}

}  // namespace

VerifyResult verify_certificate(const Certificate& cert) {
    VerifyResult r;
    r.valid = cert.valid;
    r.consistent = true;
    auto flag = [&](const std::string& msg) {
        if (r.consistent) {
            r.consistent = false;
            r.message = msg;
        }
    };

    if (cert.m != static_cast<int>(cert.elements.size()))
        flag("m does not match the element count");
    if (cert.elements.empty() || !cert.elements.front().is_one())
        flag("first element is not 1");
    for (const QuadInt& e : cert.elements)
        if (!e.is_totally_positive()) flag("element " + e.str() + " is not totally positive");

    bool all = true;
    for (const CertCondition& c : cert.conditions) {
        all = all && c.verdict;
        std::optional<bool> again;
        try {
            again = recompute(cert, c);
        } catch (const InputError& e) {
            flag(std::string(e.what()));
            continue;
        }
        if (again && *again != c.verdict) {
            std::ostringstream msg;
            msg << c.kind << "(" << c.index;
            if (c.other >= 0) msg << "," << c.other;
            msg << ") rechecks as " << (*again ? "true" : "false") << ", recorded "
                << (c.verdict ? "true" : "false");
            flag(msg.str());
        }
    }
    if (cert.valid != all) flag("valid flag does not match the conjunction of the verdicts");
    return r;
}

}  // namespace uqf

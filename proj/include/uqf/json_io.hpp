#pragma once

#include <json.hpp>

#include "uqf/escalation.hpp"
#include "uqf/quadfield.hpp"

namespace uqf {

// Big integers serialize as decimal strings (D and the coefficients outgrow
// 64 bits quickly); small structural numbers stay JSON numbers.

nlohmann::json to_json(const QuadInt& a);  // ["x", "y"] on the integral basis
nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const GramLattice& lat);   // row-major matrix
nlohmann::json to_json(const RankBound& rb, bool with_tree);

QuadInt quadint_from_json(const Field& f, const nlohmann::json& j);
Certificate certificate_from_json(const nlohmann::json& j);

// Decimal rendering of an exact rational with directed rounding, so interval
// endpoints stay outer bounds after formatting.  mode -1 rounds down, +1 up,
// 0 truncates toward zero.
std::string mpq_decimal(const mpq_class& q, int digits, int mode);

// Cheap re-validation of a parsed certificate: arithmetic identities and
// recorded verdict bookkeeping only; the enumeration-heavy pair conditions
// are checked for internal consistency, not re-run.
struct VerifyResult {
    bool consistent = false;  // recomputed checks agree with the record
    bool valid = false;       // the certificate's own verdict
    std::string message;      // first discrepancy, when not consistent
};
VerifyResult verify_certificate(const Certificate& cert);

}  // namespace uqf

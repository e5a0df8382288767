#pragma once

// JSON interchange for certificates. Processes travel as printed text,
// abstractions as a displayed binder plus the opened body. The schema is
// described in docs/certificates.md.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pi/congruence.hpp"
#include "pi/lts_late.hpp"
#include "pi/reduction.hpp"
#include "pi/step.hpp"

namespace pi {

using Json = nlohmann::json;

class CertFormatError : public std::runtime_error {
public:
    CertFormatError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

Json to_json(const Action& a);
Json to_json(const Transition& t);
Json to_json(const CongCert& c);
Json to_json(const StepCert& c);
Json to_json(const RedCert& c);
Json to_json(const TelescopeDecomposition& d);
Json to_json(const RedexDecomposition& d);

Action action_from_json(const Json& j);
Transition transition_from_json(const Json& j);
CongCert cong_from_json(const Json& j);
StepCert step_from_json(const Json& j);
RedCert red_from_json(const Json& j);
TelescopeDecomposition telescope_from_json(const Json& j);
RedexDecomposition redex_from_json(const Json& j);

/// Top-level documents: {"kind": ..., "cert": ...}, plus "semantics" for
/// step certificates.
Json cong_document(const CongCert& c);
Json step_document(const StepCert& c, Semantics sem = Semantics::Late);
Json red_document(const RedCert& c);
Json telescope_document(const TelescopeDecomposition& d);
Json redex_document(const RedexDecomposition& d);

/// Deserializes and checks any document. Format problems are reported as a
/// failed result whose path is the JSON pointer of the offending field.
CheckResult check_document(const Json& doc);

/// Node-by-node equality, processes compared up to alpha.
bool cert_equal(const CongCert& a, const CongCert& b);
bool cert_equal(const StepCert& a, const StepCert& b);
bool cert_equal(const RedCert& a, const RedCert& b);
bool cert_equal(const TelescopeDecomposition& a, const TelescopeDecomposition& b);
bool cert_equal(const RedexDecomposition& a, const RedexDecomposition& b);

}  // namespace pi

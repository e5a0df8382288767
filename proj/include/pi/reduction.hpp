#pragma once

// Reduction up to structural congruence: certificates, enumeration on the
// canonical form, and the redex decomposition.

#include <memory>
#include <optional>
#include <vector>

#include "pi/congruence.hpp"

namespace pi {

enum class RedRule { RCom, RPar, RRes, RStruct };

const char* to_string(RedRule r);
std::optional<RedRule> red_rule_from_string(std::string_view s);

struct RedNode;

/// Derivation of lhs -> rhs. RRes records the opened name; RStruct holds
/// one premise and the congruences before and after it.
class RedCert {
public:
    RedCert() = default;
    RedCert(RedRule rule, Process lhs, Process rhs, std::vector<RedCert> premises = {},
            std::optional<Name> binder = std::nullopt, CongCert left = {}, CongCert right = {});

    RedRule rule() const;
    const Process& lhs() const;
    const Process& rhs() const;
    const std::vector<RedCert>& premises() const;
    const std::optional<Name>& binder() const;
    const CongCert& left_cong() const;
    const CongCert& right_cong() const;
    bool empty() const { return !node_; }
    std::size_t node_count() const;

private:
    std::shared_ptr<const RedNode> node_;
};

struct RedNode {
    RedRule rule;
    Process lhs;
    Process rhs;
    std::vector<RedCert> premises;
    std::optional<Name> binder;
    CongCert left;
    CongCert right;
};

CheckResult check_red(const RedCert& cert);
CheckResult check_red(const RedCert& cert, const Process& p, const Process& q);

NameSet red_cert_names(const RedCert& c);

namespace red {

/// x!y.P | x(z).Q -> P | Q{y/z}
RedCert r_com(const Process& out, const Process& in);
RedCert r_par(const RedCert& inner, const Process& right);
/// Restricts `z`, which is free in the premise.
RedCert r_res(Name z, const RedCert& inner);
RedCert r_res_chain(const std::vector<Name>& names, const RedCert& inner);
RedCert r_struct(const CongCert& left, const RedCert& inner, const CongCert& right);

}  // namespace red

struct Reduct {
    Process target;
    RedCert cert;
};

/// One-step reducts modulo alpha. Targets are embedded canonical forms.
std::vector<Reduct> reducts(const Process& p);

/// p == nu w. ((x!y.R1 | x(z).R2) | S) and q == nu w. ((R1 | R2{y/z}) | S).
/// z is a fresh name free in R2.
struct RedexDecomposition {
    Name subject;
    Name payload;
    Name var;
    std::vector<Name> binders;
    Process R1;
    Process R2;
    Process S;
    CongCert cert_source;
    CongCert cert_target;

    Process redex() const;
    Process contractum() const;
    Process source_shape() const;
    Process target_shape() const;
};

RedexDecomposition decompose_reduction(const Process& p, const Process& q, const RedCert& cert);
RedexDecomposition decompose_reduction(const Process& p, const Process& q, const RedCert& cert, NameSupply& supply);

}  // namespace pi

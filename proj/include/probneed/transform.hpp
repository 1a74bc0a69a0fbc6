#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "probneed/rational.hpp"
#include "probneed/syntax.hpp"

namespace probneed {

enum class TransformationId {
    // concrete rules
    lbeta, lapp, llet_in, llet_e, cp_in, cp_e, cpx_in, cpx_e,
    ucp1, ucp2, ucp3, xch, gc1, gc2,
    probid, probcomm, probassoc, probdistr, probreorder,
    // concrete rules of the extended syntax
    seq_c, seq_in, seq_e, case_c, case_in, case_e, lcase, lseq,
    cpcx_in, cpcx_e, abs,
    // unions and variants
    cpx, llet, lll, gc, ucp, cp, cpd, cpS, cpcx, case_u, seq_u, lacs,
};

std::string to_string(TransformationId t);
TransformationId transformation_from_string(const std::string& s);
std::vector<TransformationId> all_transformations(bool extended);
bool is_union_label(TransformationId t);

// Member rules of a union label (a concrete rule resolves to itself).
// cpd/cpS resolve to {cp-in, cp-e}; the variant is a per-match property.
std::vector<TransformationId> union_members(TransformationId t, bool extended);
bool union_contains(TransformationId u, TransformationId member, bool extended);

struct RedexMatch {
    TransformationId rule; // always a concrete rule
    Position site;         // position of the matched subterm (the anchor)
    // rule-specific witnesses
    VarName var_a{}, var_b{};     // involved binders (copied/removed/exchanged)
    Position occ{};               // target occurrence, relative to the anchor
    std::vector<VarName> removed; // gc-1: dropped bindings
    bool target_surface = false;  // cp/cpcx: occurrence context is a surface context
};

struct StaleMatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All redexes of t (resolving unions) whose anchor position lies in class
// cls; deterministically ordered by position, binding and occurrence.
std::vector<RedexMatch> match_sites(const ExprPtr& e, TransformationId t, ContextClass cls,
                                    const CtorTable& table = CtorTable::defaults(),
                                    bool extended = false);

// Applies a match produced by match_sites on this very term; throws
// StaleMatch when the witness no longer fits.
ExprPtr apply(const ExprPtr& e, const RedexMatch& m,
              const CtorTable& table = CtorTable::defaults());

// Polynomial size measure for the let-flattening termination argument:
// LM(x)=1, LM(\x.s)=1+LM(s), LM(s t)=2 LM(s)+LM(t),
// LM(let env in s)=2 LM(env)+LM(s), LM(env)=sum of the bindings.
boost::multiprecision::cpp_int lm_measure(const ExprPtr& e);

struct LmpMeasure {
    std::uint64_t lets;
    boost::multiprecision::cpp_int lm;
    bool operator<(const LmpMeasure& o) const {
        return lets < o.lets || (lets == o.lets && lm < o.lm);
    }
    bool operator==(const LmpMeasure& o) const = default;
};
LmpMeasure lmp_measure(const ExprPtr& e);

enum class Correctness { yes, no, not_claimed };

struct TransformationMetadata {
    Correctness correct;
    bool preserves_prob_sequences;
    bool direction_invertible;
};
TransformationMetadata transformation_metadata(TransformationId t);

} // namespace probneed

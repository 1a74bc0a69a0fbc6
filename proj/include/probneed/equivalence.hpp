#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probneed/convergence.hpp"
#include "probneed/transform.hpp"

namespace probneed {

struct Verdict {
    enum class Kind { holds, fails, inconclusive };
    Kind kind;
    std::string witness; // replayable witness for fails (context, prob-sequence, ...)
    std::string reason;  // inconclusive: fuel | budget | enumeration-limit

    static Verdict holds() { return {Kind::holds, "", ""}; }
    static Verdict fails(std::string w) { return {Kind::fails, std::move(w), ""}; }
    static Verdict inconclusive(std::string r) { return {Kind::inconclusive, "", std::move(r)}; }
    bool is_holds() const { return kind == Kind::holds; }
    bool is_fails() const { return kind == Kind::fails; }
};
std::string to_string(Verdict::Kind k);

// An expression with exactly one occurrence of the hole variable.
struct ContextSpec {
    ExprPtr ctx;
    Position hole;

    ContextClassSet classes() const { return classify_position(ctx, hole); }
    // Plugs s into the hole; capture is intended. The result is freshened so
    // evaluation sees a convention-obeying term.
    ExprPtr plug(const ExprPtr& s) const;
    std::string str() const;
};

// Sufficient criterion "same prob-sequences", one direction: every success
// leaf of s at bound k has a success leaf of t with the same prob-sequence.
Verdict same_prob_sequences_check(const ExprPtr& s, const ExprPtr& t, std::uint32_t k,
                                  std::uint64_t fuel,
                                  const CtorTable& table = CtorTable::defaults());

enum class EqCriterion { eqcr1, eqcr2, eqcr3 };
std::string to_string(EqCriterion c);

// Frontier-result comparison criteria. Expressions are identified up to
// alpha-equivalence; eqcr3 skips entries that are certified divergent
// (expected-convergence interval exactly [0,0]) at the working budget.
Verdict frontier_criteria_check(const FrontierResult& a, const FrontierResult& b, EqCriterion c,
                                std::uint32_t k = 2, std::uint64_t fuel = 500,
                                const CtorTable& table = CtorTable::defaults());

// Bounded form of the context-lemma precondition: for every supplied
// reduction context R, ExCv(R[s],k) <= ExCv(R[t],k+d), certified through
// the interval bounds. Non-R contexts are rejected.
Verdict excv_offset_check(const ExprPtr& s, const ExprPtr& t,
                          const std::vector<ContextSpec>& contexts, std::uint32_t k,
                          std::uint32_t d, std::uint64_t fuel,
                          const CtorTable& table = CtorTable::defaults());

// All contexts of the context grammar with at most `budget` nodes whose hole
// lies in class cls, deduplicated up to alpha. Pool leaves count one node;
// id, K, K2 and Bot are always included in the pool.
std::vector<ContextSpec> enumerate_contexts(std::size_t budget, ContextClass cls,
                                            const std::vector<ExprPtr>& leaf_pool = {});

// Searches for a context C whose expected-convergence intervals for C[s]
// and C[t] are disjoint - a certified refutation of contextual equivalence.
Verdict counterexample_search(const ExprPtr& s, const ExprPtr& t, std::size_t ctx_budget,
                              std::uint32_t k, std::uint64_t fuel,
                              const CtorTable& table = CtorTable::defaults());

// ---------------------------------------------------------------------------
// randomized soundness fuzzing

struct FuzzParams {
    TransformationId rule = TransformationId::gc;
    ContextClass cls = ContextClass::S;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::size_t size = 25;
    std::uint32_t k = 4;
    std::uint64_t fuel = 2000;
    double bot_weight = 0.12;
    bool extended = false;
    std::size_t gen_retries = 40; // regenerations until the rule matches
};

struct FuzzTrial {
    std::size_t index;
    enum class Status { ok, violation, inconclusive, no_match } status;
    std::string term;       // source term (violations and sps failures only)
    std::string transformed;
    std::string lo_before, hi_before, lo_after, hi_after;
    bool decided = false;     // both trees fully decided
    bool sps_checked = false; // prob-sequence preservation checked
    bool sps_holds = false;
};

struct FuzzReport {
    FuzzParams params;
    std::vector<FuzzTrial> trials;
    std::size_t matched = 0;
    std::size_t violations = 0;
    std::size_t inconclusive = 0;
    std::size_t no_match = 0;
    std::size_t sps_decided = 0;
    std::size_t sps_failures = 0;
    std::optional<FuzzTrial> first_violation;
};

FuzzReport soundness_fuzz(const FuzzParams& params,
                          const CtorTable& table = CtorTable::defaults());

} // namespace probneed

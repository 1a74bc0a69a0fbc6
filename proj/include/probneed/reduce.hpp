#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "probneed/syntax.hpp"

namespace probneed {

enum class RuleName {
    lbeta, cp_in, cp_e, llet_in, llet_e, lapp, probl, probr,
    // extended
    case_c, case_in, case_e, lcase, seq_c, seq_in, seq_e, lseq,
};

std::string to_string(RuleName r);
bool is_prob_rule(RuleName r);

enum class StuckReason { open_variable, blackhole, ill_typed };
std::string to_string(StuckReason r);

struct StepWhnf {};
struct StepStuck {
    StuckReason reason;
    std::string detail;
};
struct StepUnique {
    RuleName rule;
    ExprPtr result;
};
// Exactly one choice redex; both successors replace the same position.
struct StepProbBranch {
    Position redex;
    ExprPtr left;
    ExprPtr right;
};
using StepVerdict = std::variant<StepWhnf, StepStuck, StepUnique, StepProbBranch>;

// WHNFs: abstractions, `let env in \x.s`, and in the extended syntax
// saturated constructor applications, `let env in c ...` and
// `let {x_i=x_{i+1}}, x_m = c ..., env in x_1`.
bool is_whnf(const ExprPtr& e);

// One standard-reduction attempt. The input must obey the distinct variable
// convention (parse_program and all exported operations maintain it).
StepVerdict sr_step(const ExprPtr& e, const CtorTable& table = CtorTable::defaults());

struct DetOutcome {
    enum class Kind { reached_whnf, reached_stuck, fuel_exhausted, at_prob };
    Kind kind;
    ExprPtr expr;                 // WHNF, stuck term, or current term
    StuckReason stuck_reason = StuckReason::open_variable;
    std::string stuck_detail;
    ExprPtr prob_left, prob_right; // at_prob only
    std::vector<RuleName> trace;   // deterministic rules applied, in order
};

// Applies sr_step while it is deterministic; `fuel` bounds the number of
// deterministic steps (prob steps are budgeted by the caller).
DetOutcome run_until_prob(ExprPtr e, std::uint64_t fuel,
                          const CtorTable& table = CtorTable::defaults());

struct ReplayOutcome {
    enum class Kind { reached_whnf, reached_stuck, fuel_exhausted, choices_exhausted };
    Kind kind;
    ExprPtr expr;
    StuckReason stuck_reason = StuckReason::open_variable;
    std::vector<RuleName> trace; // all applied rules including probl/probr
    std::size_t consumed = 0;    // prob choices consumed
};

// Replays an evaluation, consuming one L/R decision per prob branch.
ReplayOutcome reduce_trace(ExprPtr e, const std::string& choices, std::uint64_t fuel,
                           const CtorTable& table = CtorTable::defaults());

} // namespace probneed

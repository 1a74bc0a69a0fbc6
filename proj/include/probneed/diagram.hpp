#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probneed/reduce.hpp"
#include "probneed/transform.hpp"

namespace probneed {

enum class Mult { one, opt, plus, star };

// Pattern for a standard-reduction edge label. A pattern may refer to the
// diagram's label variable (the given sr step's label instantiates it).
struct SrPat {
    bool any = false;
    bool same_as_given = false;
    std::vector<RuleName> set;

    static SrPat anylabel() { return {true, false, {}}; }
    static SrPat same() { return {false, true, {}}; }
    static SrPat of(std::vector<RuleName> s) { return {false, false, std::move(s)}; }
};

// Pattern for a transformation edge label; entries may be union labels.
// cpS/cpd entries additionally constrain the copy-target classification.
struct TransPat {
    bool same_as_given = false; // instantiates to the given step's group
    std::vector<TransformationId> labels;

    static TransPat same() { return {true, {}}; }
    static TransPat of(std::vector<TransformationId> l) { return {false, std::move(l)}; }
};

struct JoinEdge {
    bool is_sr;
    SrPat sr{};
    TransPat trans{};
    Mult mult = Mult::one;
};
JoinEdge je_sr(SrPat p, Mult m = Mult::one);
JoinEdge je_tr(TransPat p, Mult m = Mult::one);

struct Diagram {
    std::string id;
    SrPat given_sr;
    Mult given_sr_mult = Mult::one; // commuting diagrams may consume a run
    TransPat given_trans;
    bool coincide = false;          // the two given steps are the same step
    // forking: `left` are transformation steps from s', `right` sr steps
    // from t; commuting: `left` is the mixed closing path from s (meeting
    // the end of the given steps), `right` unused.
    std::vector<JoinEdge> left, right;
};

struct BaseCase {
    // commuting base: closing sr edges from s to a WHNF when t is a WHNF
    // (forking base is always: if s is a WHNF then t is a WHNF)
    std::vector<JoinEdge> closing;
};

struct DiagramSet {
    std::string name;
    bool extended = false;
    TransformationId subject; // union whose members the set covers
    std::vector<Diagram> fork;
    std::vector<Diagram> commute;
    BaseCase base;
};

const std::vector<DiagramSet>& builtin_diagram_sets();
const DiagramSet* find_diagram_set(const std::string& name);
std::vector<std::string> diagram_set_names();

struct MatchReport {
    enum class Status { closed, closed_trivially, unclosed, no_overlap };
    Status status = Status::unclosed;
    std::string diagram_id; // which diagram closed the overlap
    std::string meet;       // the joined term
    bool prob_labels_equal = true;
    std::string detail;
};
std::string to_string(MatchReport::Status s);

struct SearchLimits {
    std::size_t plus_cap = 8;     // expansions of + and * edges
    std::size_t breadth_cap = 4000;
    std::uint64_t fuel = 2000;
};

// Constructs the concrete fork overlap s' <-sr- s -S,T-> t (taking `branch`
// at a prob step) and searches the set's forking diagrams for a closing.
MatchReport fork_join_search(const ExprPtr& s, const RedexMatch& trans, const DiagramSet& set,
                             bool branch_right = false, SearchLimits limits = {},
                             const CtorTable& table = CtorTable::defaults());

// Commuting overlap s -S,T-> t -sr-> t'.
MatchReport commute_join_search(const ExprPtr& s, const RedexMatch& trans, const DiagramSet& set,
                                bool branch_right = false, SearchLimits limits = {},
                                const CtorTable& table = CtorTable::defaults());

// Validates the commuting base case: t = apply(s, trans) is a WHNF, so s
// must reach a WHNF along the set's closing specification.
bool check_commute_base(const ExprPtr& s, const DiagramSet& set, SearchLimits limits = {},
                        const CtorTable& table = CtorTable::defaults());

struct DiagramTrial {
    std::size_t index;
    MatchReport report;
    std::string term;
    std::string rule;
    std::size_t base_cases_seen = 0;
};

struct DiagramRun {
    std::string set_name;
    std::string mode; // fork | commute
    std::size_t trials = 0;
    std::size_t closed = 0;
    std::size_t unclosed = 0;
    std::size_t base_case_checks = 0;
    std::size_t base_case_failures = 0;
    std::vector<DiagramTrial> failures;
};

// Generates `trials` random concrete overlaps (seeded, deterministic) and
// reports how each was closed. Base cases encountered along the way are
// validated and counted; generation keeps retrying until a genuine overlap
// exists, so every trial carries one.
DiagramRun run_diagram_trials(const DiagramSet& set, bool commute_mode, std::size_t trials,
                              std::uint64_t seed, std::size_t term_size = 22,
                              SearchLimits limits = {},
                              const CtorTable& table = CtorTable::defaults());

} // namespace probneed

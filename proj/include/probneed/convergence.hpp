#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "probneed/rational.hpp"
#include "probneed/reduce.hpp"
#include "probneed/syntax.hpp"

namespace probneed {

// Word over {L,R}: one letter per prob step, L for probl, R for probr.
using ProbSeq = std::string;

enum class LeafKind { success, stuck, fuel_exhausted, budget_exhausted };
std::string to_string(LeafKind k);

struct EvalLeaf {
    LeafKind kind;
    ExprPtr expr;     // WHNF for success, otherwise the term where we stopped
    Rat weight;       // 2^-(prob depth)
    ProbSeq probseq;
    StuckReason stuck_reason = StuckReason::open_variable;
    std::vector<RuleName> det_trace; // deterministic rules of the last segment
};

// Finite exploration tree under a prob-length budget and deterministic fuel.
struct EvalTree {
    ExprPtr root;
    struct Node {
        bool is_leaf;
        EvalLeaf leaf;                       // when is_leaf
        std::vector<RuleName> det_trace;     // segment before the branch
        std::unique_ptr<Node> left, right;   // when !is_leaf
    };
    std::unique_ptr<Node> top;

    std::vector<const EvalLeaf*> leaves() const; // in lexicographic ProbSeq order
};

// Each prob branch halves the weight; branches stop after k prob steps
// (budget_exhausted) or when a deterministic segment runs out of fuel.
// Fuel applies per deterministic segment.
EvalTree explore(const ExprPtr& e, std::uint32_t prob_budget, std::uint64_t fuel,
                 const CtorTable& table = CtorTable::defaults());

struct LeafMasses {
    Rat success, stuck, fuel_exhausted, budget_exhausted;
    std::size_t n_success = 0, n_stuck = 0, n_fuel = 0, n_budget = 0;
};

// Interval for the expected convergence of e. lo sums the success leaves,
// hi additionally counts every undecided leaf; exact means all leaves were
// decided, in which case lo == hi is the expected convergence itself (for
// terms whose evaluation set fits in the budget). The mass of
// fuel-exhausted leaves alone bounds the k-bounded measure: the value at
// prob-length <= k lies in [lo, lo + fuel_exhausted mass].
struct ExcvBounds {
    Rat lo, hi;
    bool exact = false;
    LeafMasses masses;
};

ExcvBounds excv_bounds(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                       const CtorTable& table = CtorTable::defaults());
ExcvBounds excv_of_tree(const EvalTree& tree);

// Bounds of excv_bounds scaled by the start weight p (0 < p <= 1).
ExcvBounds excv_scaled(const Rat& p, const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                       const CtorTable& table = CtorTable::defaults());

struct Evaluation {
    ProbSeq probseq;
    Rat weight;
    ExprPtr whnf;
};

// Success leaves of explore in lexicographic order (L < R).
std::vector<Evaluation> evaluations(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                                    const CtorTable& table = CtorTable::defaults());

enum class ConvergenceClass { may_convergent_witnessed, all_branches_divergent_at_bound, undetermined };
std::string to_string(ConvergenceClass c);

ConvergenceClass convergence_class(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                                   const CtorTable& table = CtorTable::defaults());

// ---------------------------------------------------------------------------
// Frontiers

// A complete prefix-free set of words over {L,R}, generated from {""} by
// repeatedly splitting a word w into wL and wR.
struct Frontier {
    std::vector<ProbSeq> words;

    static Frontier full(std::uint32_t depth);
    bool valid() const;
    std::uint32_t depth() const;
};

struct FrontierEntry {
    Rat weight;
    ExprPtr expr;
    ProbSeq word;
};
using FrontierResult = std::vector<FrontierEntry>;

struct StrictnessViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unfolds only prob steps along the frontier words. In strict mode every
// demanded prob redex must be immediately available; the relaxed mode runs
// deterministic steps in between (nonstandard, opt-in).
FrontierResult frontier_evaluate(const ExprPtr& e, const Frontier& f, bool relaxed = false,
                                 std::uint64_t fuel = 10000,
                                 const CtorTable& table = CtorTable::defaults());

// The maximal frontier up to `depth` that is strict for e: words stop early
// where no prob redex is immediately available.
Frontier frontier_auto(const ExprPtr& e, std::uint32_t depth, bool relaxed = false,
                       std::uint64_t fuel = 10000,
                       const CtorTable& table = CtorTable::defaults());

} // namespace probneed

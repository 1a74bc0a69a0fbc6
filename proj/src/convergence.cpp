#include "probneed/convergence.hpp"

#include <algorithm>
#include <cassert>

namespace probneed {

std::string to_string(LeafKind k) {
    switch (k) {
    case LeafKind::success: return "success";
    case LeafKind::stuck: return "stuck";
    case LeafKind::fuel_exhausted: return "fuel-exhausted";
    case LeafKind::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

std::string to_string(ConvergenceClass c) {
    switch (c) {
    case ConvergenceClass::may_convergent_witnessed: return "may-convergent-witnessed";
    case ConvergenceClass::all_branches_divergent_at_bound: return "all-branches-divergent-at-bound";
    case ConvergenceClass::undetermined: return "undetermined";
    }
    return "?";
}

namespace {

std::unique_ptr<EvalTree::Node> explore_rec(ExprPtr e, std::uint32_t depth, std::uint32_t budget,
                                            std::uint64_t fuel, ProbSeq& word,
                                            const CtorTable& table) {
    auto node = std::make_unique<EvalTree::Node>();
    DetOutcome d = run_until_prob(std::move(e), fuel, table);
    node->det_trace = d.trace;
    auto leaf = [&](LeafKind kind) {
        node->is_leaf = true;
        node->leaf.kind = kind;
        node->leaf.expr = d.expr;
        node->leaf.weight = rat_pow2_inv(depth);
        node->leaf.probseq = word;
        node->leaf.stuck_reason = d.stuck_reason;
        node->leaf.det_trace = d.trace;
    };
    switch (d.kind) {
    case DetOutcome::Kind::reached_whnf: leaf(LeafKind::success); break;
    case DetOutcome::Kind::reached_stuck: leaf(LeafKind::stuck); break;
    case DetOutcome::Kind::fuel_exhausted: leaf(LeafKind::fuel_exhausted); break;
    case DetOutcome::Kind::at_prob:
        if (depth == budget) {
            leaf(LeafKind::budget_exhausted);
            break;
        }
        node->is_leaf = false;
        word.push_back('L');
        node->left = explore_rec(d.prob_left, depth + 1, budget, fuel, word, table);
        word.back() = 'R';
        node->right = explore_rec(d.prob_right, depth + 1, budget, fuel, word, table);
        word.pop_back();
        break;
    }
    return node;
}

void collect_leaves(const EvalTree::Node* n, std::vector<const EvalLeaf*>& out) {
    if (!n) return;
    if (n->is_leaf) {
        out.push_back(&n->leaf);
        return;
    }
    collect_leaves(n->left.get(), out);
    collect_leaves(n->right.get(), out);
}

} // namespace

std::vector<const EvalLeaf*> EvalTree::leaves() const {
    std::vector<const EvalLeaf*> out;
    collect_leaves(top.get(), out);
    return out;
}

EvalTree explore(const ExprPtr& e, std::uint32_t prob_budget, std::uint64_t fuel,
                 const CtorTable& table) {
    EvalTree t;
    t.root = e;
    ProbSeq word;
    t.top = explore_rec(e, 0, prob_budget, fuel, word, table);
    return t;
}

ExcvBounds excv_of_tree(const EvalTree& tree) {
    ExcvBounds b;
    b.lo = 0;
    for (const EvalLeaf* l : tree.leaves()) {
        switch (l->kind) {
        case LeafKind::success:
            b.lo += l->weight;
            b.masses.success += l->weight;
            ++b.masses.n_success;
            break;
        case LeafKind::stuck:
            b.masses.stuck += l->weight;
            ++b.masses.n_stuck;
            break;
        case LeafKind::fuel_exhausted:
            b.masses.fuel_exhausted += l->weight;
            ++b.masses.n_fuel;
            break;
        case LeafKind::budget_exhausted:
            b.masses.budget_exhausted += l->weight;
            ++b.masses.n_budget;
            break;
        }
    }
    b.hi = b.lo + b.masses.fuel_exhausted + b.masses.budget_exhausted;
    b.exact = b.masses.n_fuel == 0 && b.masses.n_budget == 0;
    return b;
}

ExcvBounds excv_bounds(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                       const CtorTable& table) {
    return excv_of_tree(explore(e, k, fuel, table));
}

ExcvBounds excv_scaled(const Rat& p, const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                       const CtorTable& table) {
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("weight must satisfy 0 < p <= 1");
    ExcvBounds b = excv_bounds(e, k, fuel, table);
    b.lo *= p;
    b.hi *= p;
    b.masses.success *= p;
    b.masses.stuck *= p;
    b.masses.fuel_exhausted *= p;
    b.masses.budget_exhausted *= p;
    return b;
}

std::vector<Evaluation> evaluations(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                                    const CtorTable& table) {
    EvalTree t = explore(e, k, fuel, table);
    std::vector<Evaluation> out;
    for (const EvalLeaf* l : t.leaves())
        if (l->kind == LeafKind::success) out.push_back({l->probseq, l->weight, l->expr});
    return out; // DFS left-first is lexicographic (L < R)
}

ConvergenceClass convergence_class(const ExprPtr& e, std::uint32_t k, std::uint64_t fuel,
                                   const CtorTable& table) {
    EvalTree t = explore(e, k, fuel, table);
    bool any_success = false, all_stuck = true;
    for (const EvalLeaf* l : t.leaves()) {
        any_success |= l->kind == LeafKind::success;
        all_stuck &= l->kind == LeafKind::stuck;
    }
    if (any_success) return ConvergenceClass::may_convergent_witnessed;
    if (all_stuck) return ConvergenceClass::all_branches_divergent_at_bound;
    return ConvergenceClass::undetermined;
}

// ---------------------------------------------------------------------------
// Frontiers

Frontier Frontier::full(std::uint32_t depth) {
    Frontier f;
    std::size_t n = std::size_t{1} << depth;
    for (std::size_t i = 0; i < n; ++i) {
        ProbSeq w(depth, 'L');
        for (std::uint32_t b = 0; b < depth; ++b)
            if (i & (std::size_t{1} << (depth - 1 - b))) w[b] = 'R';
        f.words.push_back(std::move(w));
    }
    return f;
}

bool Frontier::valid() const {
    if (words.empty()) return false;
    for (auto& w : words)
        for (char c : w)
            if (c != 'L' && c != 'R') return false;
    // complete prefix-free code: the Kraft sum is 1 and no word prefixes another
    Rat kraft = 0;
    for (auto& w : words) kraft += rat_pow2_inv((std::uint32_t)w.size());
    if (kraft != 1) return false;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (i == j) continue;
            if (words[i].size() <= words[j].size() &&
                words[j].compare(0, words[i].size(), words[i]) == 0)
                return false;
        }
    return true;
}

std::uint32_t Frontier::depth() const {
    std::size_t d = 0;
    for (auto& w : words) d = std::max(d, w.size());
    return (std::uint32_t)d;
}

FrontierResult frontier_evaluate(const ExprPtr& e, const Frontier& f, bool relaxed,
                                 std::uint64_t fuel, const CtorTable& table) {
    if (!f.valid())
        throw std::invalid_argument("not a frontier (must be a complete prefix-free set over {L,R})");
    FrontierResult out;
    for (const ProbSeq& w : f.words) {
        ExprPtr cur = e;
        for (std::size_t i = 0; i < w.size(); ++i) {
            StepVerdict v = sr_step(cur, table);
            const StepProbBranch* pb = std::get_if<StepProbBranch>(&v);
            if (!pb && relaxed) {
                DetOutcome d = run_until_prob(cur, fuel, table);
                if (d.kind != DetOutcome::Kind::at_prob)
                    throw StrictnessViolation("word " + w + ": no prob redex reachable at letter " +
                                              std::to_string(i + 1));
                cur = w[i] == 'L' ? d.prob_left : d.prob_right;
                continue;
            }
            if (!pb)
                throw StrictnessViolation("word " + w + ": prob redex not immediately available at letter " +
                                          std::to_string(i + 1) + " (strict mode)");
            cur = w[i] == 'L' ? pb->left : pb->right;
        }
        out.push_back({rat_pow2_inv((std::uint32_t)w.size()), cur, w});
    }
    return out;
}

Frontier frontier_auto(const ExprPtr& e, std::uint32_t depth, bool relaxed, std::uint64_t fuel,
                       const CtorTable& table) {
    Frontier f;
    struct Item {
        ExprPtr expr;
        ProbSeq word;
    };
    std::vector<Item> stack{{e, ""}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        const StepProbBranch* pb = nullptr;
        StepVerdict v = sr_step(it.expr, table);
        pb = std::get_if<StepProbBranch>(&v);
        ExprPtr left, right;
        if (pb) {
            left = pb->left;
            right = pb->right;
        } else if (relaxed) {
            DetOutcome d = run_until_prob(it.expr, fuel, table);
            if (d.kind == DetOutcome::Kind::at_prob) {
                left = d.prob_left;
                right = d.prob_right;
            }
        }
        if (left && it.word.size() < depth) {
            stack.push_back({right, it.word + "R"});
            stack.push_back({left, it.word + "L"});
        } else {
            f.words.push_back(it.word);
        }
    }
    std::sort(f.words.begin(), f.words.end());
    return f;
}

} // namespace probneed

#include "probneed/equivalence.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "probneed/generator.hpp"
#include "probneed/parser.hpp"

namespace probneed {

std::string to_string(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::holds: return "holds";
    case Verdict::Kind::fails: return "fails";
    case Verdict::Kind::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(EqCriterion c) {
    switch (c) {
    case EqCriterion::eqcr1: return "eqcr1";
    case EqCriterion::eqcr2: return "eqcr2";
    case EqCriterion::eqcr3: return "eqcr3";
    }
    return "?";
}

ExprPtr ContextSpec::plug(const ExprPtr& s) const {
    // capture is intended: the hole is replaced verbatim, then the whole
    // term is renamed into the distinct variable convention
    return freshen(replace_at(ctx, hole, s), {});
}

std::string ContextSpec::str() const { return print_expr(ctx); }

// ---------------------------------------------------------------------------
// same prob-sequences

namespace {

enum class WordLookup { found, absent, undecided };

WordLookup lookup_word(const EvalTree& t, const ProbSeq& w) {
    const EvalTree::Node* n = t.top.get();
    for (char c : w) {
        if (n->is_leaf) {
            if (n->leaf.kind == LeafKind::fuel_exhausted || n->leaf.kind == LeafKind::budget_exhausted)
                return WordLookup::undecided;
            return WordLookup::absent; // finished before consuming the whole word
        }
        n = c == 'L' ? n->left.get() : n->right.get();
    }
    if (!n->is_leaf) return WordLookup::absent; // evaluation needs more prob steps
    switch (n->leaf.kind) {
    case LeafKind::success: return WordLookup::found;
    case LeafKind::stuck: return WordLookup::absent;
    default: return WordLookup::undecided;
    }
}

} // namespace

Verdict same_prob_sequences_check(const ExprPtr& s, const ExprPtr& t, std::uint32_t k,
                                  std::uint64_t fuel, const CtorTable& table) {
    EvalTree ts = explore(s, k, fuel, table);
    EvalTree tt = explore(t, k, fuel, table);
    bool undecided = false;
    for (const EvalLeaf* l : ts.leaves()) {
        if (l->kind == LeafKind::fuel_exhausted || l->kind == LeafKind::budget_exhausted) {
            undecided = true;
            continue;
        }
        if (l->kind != LeafKind::success) continue;
        switch (lookup_word(tt, l->probseq)) {
        case WordLookup::found: break;
        case WordLookup::absent:
            return Verdict::fails("no matching evaluation with prob-sequence \"" + l->probseq + "\"");
        case WordLookup::undecided: undecided = true; break;
        }
    }
    if (undecided) return Verdict::inconclusive("budget");
    return Verdict::holds();
}

// ---------------------------------------------------------------------------
// frontier criteria

namespace {

struct AlphaClasses {
    std::vector<ExprPtr> reps;
    int class_of(const ExprPtr& e) {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (alpha_equiv(reps[i], e)) return (int)i;
        reps.push_back(e);
        return (int)reps.size() - 1;
    }
};

} // namespace

Verdict frontier_criteria_check(const FrontierResult& a, const FrontierResult& b, EqCriterion c,
                                std::uint32_t k, std::uint64_t fuel, const CtorTable& table) {
    if (c == EqCriterion::eqcr1) {
        for (auto& ea : a) {
            bool ok = false;
            for (auto& eb : b)
                if (ea.weight <= eb.weight && alpha_equiv(ea.expr, eb.expr)) {
                    ok = true;
                    break;
                }
            if (!ok)
                return Verdict::fails("no entry covering (" + rat_str(ea.weight) + ", " +
                                      print_expr(ea.expr) + ")");
        }
        return Verdict::holds();
    }
    AlphaClasses classes;
    std::map<int, Rat> wa, wb;
    for (auto& ea : a) wa[classes.class_of(ea.expr)] += ea.weight;
    for (auto& eb : b) wb[classes.class_of(eb.expr)] += eb.weight;
    for (auto& [cls, weight] : wa) {
        if (c == EqCriterion::eqcr3) {
            // skip certified-divergent entries
            ExcvBounds bounds = excv_bounds(classes.reps[cls], k, fuel, table);
            if (bounds.exact && bounds.hi == 0) continue;
        }
        Rat other = wb.count(cls) ? wb.at(cls) : Rat(0);
        if (weight > other)
            return Verdict::fails("weight of " + print_expr(classes.reps[cls]) + ": " +
                                  rat_str(weight) + " > " + rat_str(other));
    }
    return Verdict::holds();
}

// ---------------------------------------------------------------------------
// context-lemma precondition

Verdict excv_offset_check(const ExprPtr& s, const ExprPtr& t,
                          const std::vector<ContextSpec>& contexts, std::uint32_t k,
                          std::uint32_t d, std::uint64_t fuel, const CtorTable& table) {
    bool undecided = false;
    for (auto& ctx : contexts) {
        if (!ctx.classes().reduction)
            throw std::invalid_argument("excv_offset_check: context is not a reduction context: " +
                                        ctx.str());
        ExprPtr rs = ctx.plug(s);
        ExprPtr rt = ctx.plug(t);
        if (alpha_equiv(rs, rt)) continue; // same term, claim holds by monotonicity in k
        ExcvBounds a = excv_bounds(rs, k, fuel, table);
        ExcvBounds b = excv_bounds(rt, k + d, fuel, table);
        // ExCv(.,k) lies within [lo, lo + fuel-exhausted mass]
        Rat upper_a = a.lo + a.masses.fuel_exhausted;
        Rat upper_b = b.lo + b.masses.fuel_exhausted;
        if (upper_a <= b.lo) continue;
        if (a.lo > upper_b)
            return Verdict::fails("context " + ctx.str() + ": ExCv(R[s]," + std::to_string(k) +
                                  ") >= " + rat_str(a.lo) + " exceeds ExCv(R[t]," +
                                  std::to_string(k + d) + ") <= " + rat_str(upper_b));
        undecided = true;
    }
    if (undecided) return Verdict::inconclusive("fuel");
    return Verdict::holds();
}

// ---------------------------------------------------------------------------
// context enumeration

namespace {

ExprPtr hole_expr() { return mk_var(hole_name()); }

// term slots are filled from the leaf pool; each pool entry counts one node
std::vector<std::vector<ExprPtr>> contexts_by_size(std::size_t budget,
                                                   const std::vector<ExprPtr>& pool) {
    std::vector<std::vector<ExprPtr>> by_size(budget + 1);
    if (budget == 0) return by_size;
    by_size[1].push_back(hole_expr());
    VarName binder{"cv"};
    for (std::size_t n = 2; n <= budget; ++n) {
        for (auto& c : by_size[n - 1]) by_size[n].push_back(mk_lam(binder, c));
        if (n >= 3) {
            for (auto& c : by_size[n - 2]) {
                for (auto& t : pool) {
                    by_size[n].push_back(mk_app(c, t));
                    by_size[n].push_back(mk_app(t, c));
                    by_size[n].push_back(mk_choice(c, t));
                    by_size[n].push_back(mk_choice(t, c));
                }
                std::vector<ExprPtr> slots = pool;
                slots.push_back(mk_var(binder));
                for (auto& t : slots) {
                    by_size[n].push_back(mk_let({Binding{binder, t}}, c));
                    by_size[n].push_back(mk_let({Binding{binder, c}}, t));
                }
            }
        }
    }
    return by_size;
}

} // namespace

std::vector<ContextSpec> enumerate_contexts(std::size_t budget, ContextClass cls,
                                            const std::vector<ExprPtr>& leaf_pool) {
    std::vector<ExprPtr> pool = {combinator_id(), combinator_k(), combinator_k2(),
                                 combinator_bot()};
    for (auto& e : leaf_pool) pool.push_back(e);

    std::vector<ContextSpec> out;
    std::set<std::string> seen;
    auto by_size = contexts_by_size(budget, pool);
    for (std::size_t n = 1; n < by_size.size(); ++n) {
        for (auto& raw : by_size[n]) {
            ExprPtr ctx = freshen(raw, {});
            auto occs = [&] {
                std::vector<Position> o;
                for (auto& p : all_positions(ctx)) {
                    auto sub = *subexpr_at(ctx, p);
                    if (is_hole(sub)) o.push_back(p);
                }
                return o;
            }();
            if (occs.size() != 1) continue;
            ContextSpec spec{ctx, occs[0]};
            if (!position_in_class(ctx, occs[0], cls)) continue;
            std::string key = print_expr(ctx);
            if (!seen.insert(key).second) continue;
            out.push_back(std::move(spec));
        }
    }
    return out;
}

Verdict counterexample_search(const ExprPtr& s, const ExprPtr& t, std::size_t ctx_budget,
                              std::uint32_t k, std::uint64_t fuel, const CtorTable& table) {
    for (auto& ctx : enumerate_contexts(ctx_budget, ContextClass::C, {})) {
        ExcvBounds a = excv_bounds(ctx.plug(s), k, fuel, table);
        ExcvBounds b = excv_bounds(ctx.plug(t), k, fuel, table);
        if (a.lo > b.hi || b.lo > a.hi) {
            return Verdict::fails("context " + ctx.str() + ": intervals [" + rat_str(a.lo) + "," +
                                  rat_str(a.hi) + "] vs [" + rat_str(b.lo) + "," + rat_str(b.hi) +
                                  "]");
        }
    }
    return Verdict::inconclusive("enumeration-limit");
}

// ---------------------------------------------------------------------------
// fuzzing

namespace {

FuzzTrial run_fuzz_trial(const FuzzParams& p, std::size_t index, const CtorTable& table) {
    FuzzTrial trial;
    trial.index = index;
    GenConfig cfg;
    cfg.max_size = p.size;
    cfg.extended = p.extended;
    cfg.bot_weight = p.bot_weight;
    TermGen gen(trial_seed(p.seed, index), cfg, table);
    std::mt19937_64 pick_rng(trial_seed(p.seed ^ 0x5bf03635u, index));

    ExprPtr term;
    std::vector<RedexMatch> matches;
    for (std::size_t retry = 0; retry <= p.gen_retries; ++retry) {
        term = gen.gen();
        matches = match_sites(term, p.rule, p.cls, table, p.extended);
        if (!matches.empty()) break;
    }
    if (matches.empty()) {
        trial.status = FuzzTrial::Status::no_match;
        return trial;
    }
    std::uniform_int_distribution<std::size_t> pick(0, matches.size() - 1);
    const RedexMatch& m = matches[pick(pick_rng)];
    ExprPtr after = apply(term, m, table);

    ExcvBounds a = excv_bounds(term, p.k, p.fuel, table);
    ExcvBounds b = excv_bounds(after, p.k, p.fuel, table);
    trial.decided = a.exact && b.exact;
    bool disjoint = a.lo > b.hi || b.lo > a.hi;
    if (disjoint) {
        trial.status = FuzzTrial::Status::violation;
        trial.term = print_expr(term);
        trial.transformed = print_expr(after);
        trial.lo_before = rat_str(a.lo);
        trial.hi_before = rat_str(a.hi);
        trial.lo_after = rat_str(b.lo);
        trial.hi_after = rat_str(b.hi);
        return trial;
    }
    trial.status = trial.decided ? FuzzTrial::Status::ok : FuzzTrial::Status::inconclusive;

    if (trial.decided && transformation_metadata(p.rule).preserves_prob_sequences) {
        Verdict v1 = same_prob_sequences_check(term, after, p.k, p.fuel, table);
        Verdict v2 = same_prob_sequences_check(after, term, p.k, p.fuel, table);
        trial.sps_checked = true;
        trial.sps_holds = v1.is_holds() && v2.is_holds();
        if (!trial.sps_holds) {
            trial.term = print_expr(term);
            trial.transformed = print_expr(after);
        }
    }
    return trial;
}

} // namespace

FuzzReport soundness_fuzz(const FuzzParams& params, const CtorTable& table) {
    FuzzReport report;
    report.params = params;
    report.trials.resize(params.trials);

    unsigned hw = std::thread::hardware_concurrency();
    unsigned nthreads = std::min<unsigned>(hw ? hw : 1, 4);
    if (params.trials < 64) nthreads = 1;
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < params.trials; ++i)
            report.trials[i] = run_fuzz_trial(params, i, table);
    } else {
        std::vector<std::thread> threads;
        for (unsigned tid = 0; tid < nthreads; ++tid) {
            threads.emplace_back([&, tid] {
                for (std::size_t i = tid; i < params.trials; i += nthreads)
                    report.trials[i] = run_fuzz_trial(params, i, table);
            });
        }
        for (auto& t : threads) t.join();
    }

    for (auto& t : report.trials) {
        switch (t.status) {
        case FuzzTrial::Status::ok: ++report.matched; break;
        case FuzzTrial::Status::inconclusive:
            ++report.matched;
            ++report.inconclusive;
            break;
        case FuzzTrial::Status::violation:
            ++report.matched;
            ++report.violations;
            if (!report.first_violation) report.first_violation = t;
            break;
        case FuzzTrial::Status::no_match: ++report.no_match; break;
        }
        if (t.sps_checked) {
            ++report.sps_decided;
            if (!t.sps_holds) ++report.sps_failures;
        }
    }
    return report;
}

} // namespace probneed

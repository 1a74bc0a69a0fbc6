#include "probneed/diagram.hpp"

#include <algorithm>
#include <map>

#include "probneed/generator.hpp"
#include "probneed/parser.hpp"

namespace probneed {

JoinEdge je_sr(SrPat p, Mult m) { return {true, std::move(p), {}, m}; }
JoinEdge je_tr(TransPat p, Mult m) { return {false, {}, std::move(p), m}; }

std::string to_string(MatchReport::Status s) {
    switch (s) {
    case MatchReport::Status::closed: return "closed";
    case MatchReport::Status::closed_trivially: return "closed-trivially";
    case MatchReport::Status::unclosed: return "unclosed";
    case MatchReport::Status::no_overlap: return "no-overlap";
    }
    return "?";
}

namespace {

using T = TransformationId;
using R = RuleName;

// --- label sets ------------------------------------------------------------

std::vector<R> PROB() { return {R::probl, R::probr}; }
std::vector<R> LLET() { return {R::llet_in, R::llet_e}; }
std::vector<R> LLL(bool ext) {
    std::vector<R> v = {R::llet_in, R::llet_e, R::lapp};
    if (ext) {
        v.push_back(R::lcase);
        v.push_back(R::lseq);
    }
    return v;
}
std::vector<R> CP() { return {R::cp_in, R::cp_e}; }
std::vector<R> CASE() { return {R::case_c, R::case_in, R::case_e}; }
std::vector<R> SEQ() { return {R::seq_c, R::seq_in, R::seq_e}; }

std::vector<R> cat(std::initializer_list<std::vector<R>> parts) {
    std::vector<R> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool sr_pat_matches(const SrPat& p, R label, bool has_given, R given) {
    if (p.any) return true;
    if (p.same_as_given) return has_given && label == given;
    return std::find(p.set.begin(), p.set.end(), label) != p.set.end();
}

bool trans_label_matches(T label, T member, bool surface, bool ext) {
    if (label == T::cpS) return union_contains(T::cp, member, ext) && surface;
    if (label == T::cpd) return union_contains(T::cp, member, ext) && !surface;
    return union_contains(label, member, ext);
}

bool trans_pat_matches(const TransPat& p, T member, bool surface, bool ext, T bound_group,
                       bool has_bound) {
    if (p.same_as_given)
        return has_bound && trans_label_matches(bound_group, member, surface, ext);
    for (auto l : p.labels)
        if (trans_label_matches(l, member, surface, ext)) return true;
    return false;
}

std::optional<T> bind_trans_group(const TransPat& given, T member, bool surface, bool ext) {
    for (auto l : given.labels)
        if (trans_label_matches(l, member, surface, ext)) return l;
    return std::nullopt;
}

// --- path expansion ---------------------------------------------------------

struct PathState {
    ExprPtr term;
    std::string probs;
};

void dedup(std::vector<PathState>& states, std::size_t cap) {
    std::set<std::string> seen;
    std::vector<PathState> out;
    for (auto& s : states) {
        std::string key = print_expr(s.term) + "|" + s.probs;
        if (seen.insert(key).second) out.push_back(std::move(s));
        if (out.size() >= cap) break;
    }
    states = std::move(out);
}

std::vector<PathState> sr_single(const PathState& st, const SrPat& pat, bool has_given, R given,
                                 const CtorTable& table) {
    std::vector<PathState> out;
    StepVerdict v = sr_step(st.term, table);
    if (auto* u = std::get_if<StepUnique>(&v)) {
        if (sr_pat_matches(pat, u->rule, has_given, given)) out.push_back({u->result, st.probs});
    } else if (auto* p = std::get_if<StepProbBranch>(&v)) {
        if (sr_pat_matches(pat, R::probl, has_given, given))
            out.push_back({p->left, st.probs + "L"});
        if (sr_pat_matches(pat, R::probr, has_given, given))
            out.push_back({p->right, st.probs + "R"});
    }
    return out;
}

std::vector<PathState> trans_single(const PathState& st, const TransPat& pat, bool ext,
                                    T bound_group, bool has_bound, const CtorTable& table) {
    std::vector<PathState> out;
    std::vector<T> labels = pat.same_as_given && has_bound ? std::vector<T>{bound_group} : pat.labels;
    for (auto l : labels) {
        for (auto& m : match_sites(st.term, l, ContextClass::S, table, ext))
            out.push_back({apply(st.term, m, table), st.probs});
    }
    return out;
}

std::vector<PathState> expand_edge(const std::vector<PathState>& in, const JoinEdge& edge, bool ext,
                                   R given_sr, bool has_given_sr, T bound_group, bool has_bound,
                                   const SearchLimits& lim, const CtorTable& table) {
    auto once = [&](const std::vector<PathState>& states) {
        std::vector<PathState> out;
        for (auto& st : states) {
            std::vector<PathState> next =
                edge.is_sr ? sr_single(st, edge.sr, has_given_sr, given_sr, table)
                           : trans_single(st, edge.trans, ext, bound_group, has_bound, table);
            out.insert(out.end(), next.begin(), next.end());
        }
        dedup(out, lim.breadth_cap);
        return out;
    };
    std::vector<PathState> result;
    switch (edge.mult) {
    case Mult::one: result = once(in); break;
    case Mult::opt:
        result = in;
        {
            auto stepped = once(in);
            result.insert(result.end(), stepped.begin(), stepped.end());
        }
        break;
    case Mult::plus:
    case Mult::star: {
        if (edge.mult == Mult::star) result = in;
        std::vector<PathState> cur = in;
        for (std::size_t i = 0; i < lim.plus_cap && !cur.empty(); ++i) {
            cur = once(cur);
            result.insert(result.end(), cur.begin(), cur.end());
        }
        break;
    }
    }
    dedup(result, lim.breadth_cap);
    return result;
}

std::vector<PathState> expand_path(PathState start, const std::vector<JoinEdge>& edges, bool ext,
                                   R given_sr, bool has_given_sr, T bound_group, bool has_bound,
                                   const SearchLimits& lim, const CtorTable& table) {
    std::vector<PathState> states{std::move(start)};
    for (auto& edge : edges) {
        states = expand_edge(states, edge, ext, given_sr, has_given_sr, bound_group, has_bound, lim,
                             table);
        if (states.empty()) break;
    }
    return states;
}

std::string prob_letter(R label) { return label == R::probl ? "L" : label == R::probr ? "R" : ""; }

} // namespace

// ---------------------------------------------------------------------------
// searches

MatchReport fork_join_search(const ExprPtr& s, const RedexMatch& trans, const DiagramSet& set,
                             bool branch_right, SearchLimits limits, const CtorTable& table) {
    MatchReport report;
    StepVerdict v = sr_step(s, table);
    R label;
    ExprPtr s1;
    if (auto* u = std::get_if<StepUnique>(&v)) {
        label = u->rule;
        s1 = u->result;
    } else if (auto* p = std::get_if<StepProbBranch>(&v)) {
        label = branch_right ? R::probr : R::probl;
        s1 = branch_right ? p->right : p->left;
    } else {
        report.status = MatchReport::Status::no_overlap;
        report.detail = "term has no standard-reduction step";
        return report;
    }
    ExprPtr t = apply(s, trans, table);
    if (alpha_equiv(s1, t)) {
        report.status = MatchReport::Status::closed_trivially;
        report.meet = print_expr(t);
        return report;
    }
    std::string given_probs = prob_letter(label);
    for (auto& d : set.fork) {
        if (d.coincide) continue; // handled by the trivial check above
        if (!sr_pat_matches(d.given_sr, label, false, label)) continue;
        auto bound = bind_trans_group(d.given_trans, trans.rule, trans.target_surface, set.extended);
        if (!bound) continue;
        auto lefts = expand_path({s1, ""}, d.left, set.extended, label, true, *bound, true, limits,
                                 table);
        auto rights = expand_path({t, ""}, d.right, set.extended, label, true, *bound, true, limits,
                                  table);
        for (auto& l : lefts)
            for (auto& r : rights)
                if (alpha_equiv(l.term, r.term)) {
                    report.status = MatchReport::Status::closed;
                    report.diagram_id = d.id;
                    report.meet = print_expr(l.term);
                    report.prob_labels_equal = given_probs + l.probs == r.probs;
                    return report;
                }
    }
    report.status = MatchReport::Status::unclosed;
    report.detail = "sr," + to_string(label) + " vs S," + to_string(trans.rule);
    return report;
}

MatchReport commute_join_search(const ExprPtr& s, const RedexMatch& trans, const DiagramSet& set,
                                bool branch_right, SearchLimits limits, const CtorTable& table) {
    MatchReport report;
    ExprPtr t = apply(s, trans, table);
    StepVerdict v = sr_step(t, table);
    R label;
    ExprPtr t1;
    if (auto* u = std::get_if<StepUnique>(&v)) {
        label = u->rule;
        t1 = u->result;
    } else if (auto* p = std::get_if<StepProbBranch>(&v)) {
        label = branch_right ? R::probr : R::probl;
        t1 = branch_right ? p->right : p->left;
    } else {
        report.status = MatchReport::Status::no_overlap;
        report.detail = "transformed term has no standard-reduction step";
        return report;
    }
    if (alpha_equiv(s, t1)) {
        report.status = MatchReport::Status::closed_trivially;
        report.meet = print_expr(t1);
        return report;
    }
    for (auto& d : set.commute) {
        if (!sr_pat_matches(d.given_sr, label, false, label)) continue;
        auto bound = bind_trans_group(d.given_trans, trans.rule, trans.target_surface, set.extended);
        if (!bound) continue;
        // the given side may consume a whole run of sr steps
        std::vector<PathState> targets{{t1, prob_letter(label)}};
        if (d.given_sr_mult == Mult::plus) {
            std::vector<PathState> cur = targets;
            for (std::size_t i = 0; i < limits.plus_cap && !cur.empty(); ++i) {
                std::vector<PathState> next;
                for (auto& st : cur) {
                    auto stepped = sr_single(st, d.given_sr, false, label, table);
                    next.insert(next.end(), stepped.begin(), stepped.end());
                }
                targets.insert(targets.end(), next.begin(), next.end());
                cur = std::move(next);
            }
        }
        auto lefts = expand_path({s, ""}, d.left, set.extended, label, true, *bound, true, limits,
                                 table);
        for (auto& l : lefts)
            for (auto& tg : targets)
                if (alpha_equiv(l.term, tg.term)) {
                    report.status = MatchReport::Status::closed;
                    report.diagram_id = d.id;
                    report.meet = print_expr(l.term);
                    report.prob_labels_equal = l.probs == tg.probs;
                    return report;
                }
    }
    report.status = MatchReport::Status::unclosed;
    report.detail = "S," + to_string(trans.rule) + " vs sr," + to_string(label);
    return report;
}

bool check_commute_base(const ExprPtr& s, const DiagramSet& set, SearchLimits limits,
                        const CtorTable& table) {
    auto ends = expand_path({s, ""}, set.base.closing, set.extended, R::lbeta, false,
                            T::gc, false, limits, table);
    for (auto& e : ends)
        if (is_whnf(e.term)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// built-in sets

namespace {

Diagram fork_d(std::string id, SrPat gs, TransPat gt, std::vector<JoinEdge> left,
               std::vector<JoinEdge> right) {
    Diagram d;
    d.id = std::move(id);
    d.given_sr = std::move(gs);
    d.given_trans = std::move(gt);
    d.left = std::move(left);
    d.right = std::move(right);
    return d;
}

Diagram commute_d(std::string id, SrPat gs, TransPat gt, std::vector<JoinEdge> left,
                  Mult given_mult = Mult::one) {
    Diagram d;
    d.id = std::move(id);
    d.given_sr = std::move(gs);
    d.given_sr_mult = given_mult;
    d.given_trans = std::move(gt);
    d.left = std::move(left);
    return d;
}

Diagram coincide_d(std::string id, SrPat gs, TransPat gt) {
    Diagram d;
    d.id = std::move(id);
    d.given_sr = std::move(gs);
    d.given_trans = std::move(gt);
    d.coincide = true;
    return d;
}

DiagramSet make_lll_set() {
    DiagramSet set;
    set.name = "lll";
    set.subject = T::lll;
    set.fork = {
        coincide_d("lll-f1", SrPat::of(LLL(false)), TransPat::of({T::lll})),
        fork_d("lll-f2", SrPat::anylabel(), TransPat::of({T::lll}), {je_tr(TransPat::of({T::lll}))},
               {je_sr(SrPat::same())}),
        fork_d("lll-f3", SrPat::of(PROB()), TransPat::of({T::lll}), {}, {je_sr(SrPat::same())}),
        fork_d("lll-f4", SrPat::of({R::lapp}), TransPat::of({T::llet}),
               {je_tr(TransPat::of({T::lapp})), je_tr(TransPat::of({T::llet}))},
               {je_sr(SrPat::of({R::lapp}))}),
    };
    set.commute = {
        commute_d("lll-c1", SrPat::anylabel(), TransPat::of({T::lapp, T::llet}),
                  {je_sr(SrPat::same()), je_tr(TransPat::same())}),
        commute_d("lll-c2", SrPat::anylabel(), TransPat::of({T::lll}),
                  {je_sr(SrPat::same()), je_sr(SrPat::of(LLL(false)))}),
        commute_d("lll-c3", SrPat::of(PROB()), TransPat::of({T::lll}), {je_sr(SrPat::same())}),
        commute_d("lll-c4", SrPat::of({R::lapp}), TransPat::of({T::llet}),
                  {je_sr(SrPat::of({R::lapp})), je_tr(TransPat::of({T::lapp})),
                   je_tr(TransPat::of({T::llet}))}),
        commute_d("lll-c5", SrPat::of({R::lapp}), TransPat::of({T::llet}),
                  {je_sr(SrPat::of({R::lapp})), je_sr(SrPat::of({R::lapp})),
                   je_tr(TransPat::of({T::llet}))}),
    };
    set.base.closing = {je_sr(SrPat::of(LLET()), Mult::opt)};
    return set;
}

DiagramSet make_cp_set() {
    DiagramSet set;
    set.name = "cp";
    set.subject = T::cp;
    set.fork = {
        coincide_d("cp-f1", SrPat::of(CP()), TransPat::of({T::cpS})),
        fork_d("cp-f2", SrPat::anylabel(), TransPat::of({T::cpS}), {je_tr(TransPat::of({T::cpS}))},
               {je_sr(SrPat::same())}),
        fork_d("cp-f3", SrPat::of(PROB()), TransPat::of({T::cpS}), {}, {je_sr(SrPat::same())}),
        fork_d("cp-f4", SrPat::anylabel(), TransPat::of({T::cpd}), {je_tr(TransPat::of({T::cpd}))},
               {je_sr(SrPat::same())}),
        fork_d("cp-f5", SrPat::of({R::lbeta}), TransPat::of({T::cpd}),
               {je_tr(TransPat::of({T::cpS}))}, {je_sr(SrPat::of({R::lbeta}))}),
        fork_d("cp-f6", SrPat::of(PROB()), TransPat::of({T::cpd}), {}, {je_sr(SrPat::same())}),
        fork_d("cp-f7", SrPat::of(CP()), TransPat::of({T::cpd}),
               {je_tr(TransPat::of({T::cpd})), je_tr(TransPat::of({T::cpd}))},
               {je_sr(SrPat::of(CP()))}),
    };
    set.commute = {
        commute_d("cp-c1", SrPat::anylabel(), TransPat::of({T::cpS}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::cpS}))}),
        commute_d("cp-c2", SrPat::of(PROB()), TransPat::of({T::cpS}), {je_sr(SrPat::same())}),
        commute_d("cp-c3", SrPat::anylabel(), TransPat::of({T::cpd}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::cpd}))}),
        commute_d("cp-c4", SrPat::of({R::lbeta}), TransPat::of({T::cpd}),
                  {je_sr(SrPat::of({R::lbeta})), je_tr(TransPat::of({T::cpS}))}),
        commute_d("cp-c5", SrPat::of(PROB()), TransPat::of({T::cpd}), {je_sr(SrPat::same())}),
        commute_d("cp-c6", SrPat::of(CP()), TransPat::of({T::cpd}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpd})),
                   je_tr(TransPat::of({T::cpd}))}),
        commute_d("cp-c7", SrPat::of({R::lbeta}), TransPat::of({T::cpS}),
                  {je_sr(SrPat::of({R::lbeta})), je_sr(SrPat::of(CP()))}),
    };
    set.base.closing = {je_sr(SrPat::of(CP()), Mult::opt)};
    return set;
}

DiagramSet make_cpx_set() {
    DiagramSet set;
    set.name = "cpx";
    set.subject = T::cpx;
    set.fork = {
        fork_d("cpx-f1", SrPat::anylabel(), TransPat::of({T::cpx}), {je_tr(TransPat::of({T::cpx}))},
               {je_sr(SrPat::same())}),
        fork_d("cpx-f2", SrPat::of(cat({CP(), PROB()})), TransPat::of({T::cpx}), {},
               {je_sr(SrPat::same())}),
        fork_d("cpx-f3", SrPat::of(CP()), TransPat::of({T::cpx}),
               {je_tr(TransPat::of({T::cpx})), je_tr(TransPat::of({T::cpx}))},
               {je_sr(SrPat::of(CP()))}),
    };
    set.commute = {
        commute_d("cpx-c1", SrPat::anylabel(), TransPat::of({T::cpx}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::cpx}))}),
        commute_d("cpx-c2", SrPat::of(cat({CP(), PROB()})), TransPat::of({T::cpx}),
                  {je_sr(SrPat::same())}),
        commute_d("cpx-c3", SrPat::of(CP()), TransPat::of({T::cpx}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpx})),
                   je_tr(TransPat::of({T::cpx}))}),
    };
    return set;
}

DiagramSet make_xch_set() {
    DiagramSet set;
    set.name = "xch";
    set.subject = T::xch;
    set.fork = {
        fork_d("xch-f1", SrPat::anylabel(), TransPat::of({T::xch}), {je_tr(TransPat::of({T::xch}))},
               {je_sr(SrPat::same())}),
        fork_d("xch-f2", SrPat::of(PROB()), TransPat::of({T::xch}), {}, {je_sr(SrPat::same())}),
    };
    set.commute = {
        commute_d("xch-c1", SrPat::anylabel(), TransPat::of({T::xch}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::xch}))}),
        commute_d("xch-c2", SrPat::of(PROB()), TransPat::of({T::xch}), {je_sr(SrPat::same())}),
    };
    return set;
}

DiagramSet make_gc_ucp_set() {
    DiagramSet set;
    set.name = "gc-ucp";
    set.subject = T::gc; // extended below by the runner: subject covers gc and ucp
    set.fork = {
        fork_d("ug-f1", SrPat::anylabel(), TransPat::of({T::gc, T::ucp}),
               {je_tr(TransPat::same())}, {je_sr(SrPat::same())}),
        fork_d("ug-f2", SrPat::of(cat({LLL(false), PROB()})), TransPat::of({T::gc}), {},
               {je_sr(SrPat::same())}),
        fork_d("ug-f3", SrPat::of(PROB()), TransPat::of({T::ucp}), {}, {je_sr(SrPat::same())}),
        fork_d("ug-f4", SrPat::of(cat({PROB(), CP()})), TransPat::of({T::ucp}),
               {je_tr(TransPat::of({T::gc}))}, {je_sr(SrPat::same())}),
        fork_d("ug-f5", SrPat::of(CP()), TransPat::of({T::ucp}), {je_tr(TransPat::of({T::gc}))},
               {}),
        fork_d("ug-f6", SrPat::of(LLET()), TransPat::of({T::ucp}), {je_tr(TransPat::of({T::ucp}))},
               {je_sr(SrPat::of(LLL(false)), Mult::plus)}),
    };
    set.commute = {
        commute_d("ug-c1", SrPat::anylabel(), TransPat::of({T::gc, T::ucp}),
                  {je_sr(SrPat::same()), je_tr(TransPat::same())}),
        commute_d("ug-c2", SrPat::of({R::lbeta}), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(LLL(false)), Mult::plus), je_sr(SrPat::of(CP())),
                   je_sr(SrPat::of({R::lbeta})), je_tr(TransPat::of({T::gc}))}),
        commute_d("ug-c3", SrPat::of(PROB()), TransPat::of({T::gc, T::ucp}),
                  {je_sr(SrPat::same())}),
        commute_d("ug-c4", SrPat::anylabel(), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(LLL(false)), Mult::plus), je_sr(SrPat::same()),
                   je_tr(TransPat::of({T::ucp, T::gc}))}),
        commute_d("ug-c5", SrPat::anylabel(), TransPat::of({T::gc}),
                  {je_sr(SrPat::same()), je_sr(SrPat::of(LLL(false)), Mult::plus),
                   je_tr(TransPat::of({T::gc}))}),
        commute_d("ug-c6", SrPat::of({R::lbeta}), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(CP())), je_sr(SrPat::of({R::lbeta})),
                   je_tr(TransPat::of({T::gc}))}),
        commute_d("ug-c7", SrPat::of(cat({PROB(), CP()})), TransPat::of({T::ucp}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::gc}))}),
        commute_d("ug-c8", SrPat::of(LLL(false)), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(LLL(false))), je_tr(TransPat::of({T::ucp}))}, Mult::plus),
        commute_d("ug-c9", SrPat::of(LLL(false)), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(LLL(false))), je_sr(SrPat::of(LLL(false)), Mult::plus),
                   je_tr(TransPat::of({T::ucp}))},
                  Mult::plus),
        commute_d("ug-c10", SrPat::of(cat({{R::lbeta}, CP(), {R::lapp}})), TransPat::of({T::gc}),
                  {je_sr(SrPat::of(LLL(false))), je_sr(SrPat::same()),
                   je_sr(SrPat::of(LLL(false))), je_tr(TransPat::of({T::gc}))}),
    };
    set.base.closing = {je_sr(SrPat::of(LLET()), Mult::opt), je_sr(SrPat::of(CP()), Mult::opt)};
    return set;
}

// --- extended-calculus sets -------------------------------------------------

DiagramSet make_ext_lll_set() {
    DiagramSet set;
    set.name = "ext-lll";
    set.extended = true;
    set.subject = T::lll;
    auto lll_x = LLL(true);
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        coincide_d("xlll-f1", SrPat::of(lll_x), TransPat::of({T::lll})),
        fork_d("xlll-f2", SrPat::anylabel(), TransPat::of({T::lacs, T::llet}),
               {je_tr(TransPat::same())}, {je_sr(SrPat::same())}),
        fork_d("xlll-f3", SrPat::of(pcs), TransPat::of({T::lacs, T::llet}), {},
               {je_sr(SrPat::same())}),
        fork_d("xlll-f4", SrPat::of(lll_x), TransPat::of({T::llet}),
               {je_tr(TransPat::of({T::lacs})), je_tr(TransPat::of({T::llet}))},
               {je_sr(SrPat::of(lll_x))}),
    };
    set.commute = {
        commute_d("xlll-c1", SrPat::anylabel(), TransPat::of({T::lacs, T::llet}),
                  {je_sr(SrPat::same()), je_tr(TransPat::same())}),
        commute_d("xlll-c2", SrPat::of(pcs), TransPat::of({T::lacs, T::llet}),
                  {je_sr(SrPat::same())}),
        commute_d("xlll-c3", SrPat::anylabel(), TransPat::of({T::lacs, T::llet}),
                  {je_sr(SrPat::same()), je_sr(SrPat::of(lll_x))}),
        commute_d("xlll-c4", SrPat::of(lll_x), TransPat::of({T::lacs, T::llet}),
                  {je_sr(SrPat::of(lll_x), Mult::plus)}),
        commute_d("xlll-c5", SrPat::of(lll_x), TransPat::of({T::llet}),
                  {je_sr(SrPat::of(lll_x)), je_tr(TransPat::of({T::lacs})),
                   je_tr(TransPat::of({T::llet}))}),
    };
    set.base.closing = {je_sr(SrPat::of(lll_x), Mult::opt)};
    return set;
}

DiagramSet make_ext_cp_set() {
    DiagramSet set;
    set.name = "ext-cp";
    set.extended = true;
    set.subject = T::cp;
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("xcp-f1", SrPat::anylabel(), TransPat::of({T::cpS, T::cpd}),
               {je_tr(TransPat::same())}, {je_sr(SrPat::same())}),
        fork_d("xcp-f2", SrPat::of(pcs), TransPat::of({T::cpS, T::cpd}), {},
               {je_sr(SrPat::same())}),
        coincide_d("xcp-f3", SrPat::of(CP()), TransPat::of({T::cpS})),
        fork_d("xcp-f4", SrPat::of({R::lbeta}), TransPat::of({T::cpd}),
               {je_tr(TransPat::of({T::cpS}))}, {je_sr(SrPat::of({R::lbeta}))}),
        fork_d("xcp-f5", SrPat::of(CP()), TransPat::of({T::cpd}),
               {je_tr(TransPat::of({T::cpd})), je_tr(TransPat::of({T::cpd}))},
               {je_sr(SrPat::of(CP()))}),
    };
    set.commute = {
        commute_d("xcp-c1", SrPat::anylabel(), TransPat::of({T::cpS, T::cpd}),
                  {je_sr(SrPat::same()), je_tr(TransPat::same())}),
        commute_d("xcp-c2", SrPat::of(pcs), TransPat::of({T::cpS, T::cpd}),
                  {je_sr(SrPat::same())}),
        commute_d("xcp-c3", SrPat::of(cat({SEQ(), {R::lbeta}})), TransPat::of({T::cpS}),
                  {je_sr(SrPat::same()), je_sr(SrPat::of(CP()))}),
        commute_d("xcp-c4", SrPat::of({R::lbeta}), TransPat::of({T::cpd}),
                  {je_sr(SrPat::of({R::lbeta})), je_tr(TransPat::of({T::cpS}))}),
        commute_d("xcp-c5", SrPat::of(CP()), TransPat::of({T::cpd}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpd})),
                   je_tr(TransPat::of({T::cpd}))}),
    };
    set.base.closing = {je_sr(SrPat::of(CP()), Mult::opt)};
    return set;
}

DiagramSet make_ext_xch_set() {
    DiagramSet set = make_xch_set();
    set.name = "ext-xch";
    set.extended = true;
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork[1].given_sr = SrPat::of(pcs);
    set.commute[1].given_sr = SrPat::of(pcs);
    for (auto& d : set.fork) d.id = "x" + d.id;
    for (auto& d : set.commute) d.id = "x" + d.id;
    return set;
}

DiagramSet make_ext_cpx_set() {
    DiagramSet set;
    set.name = "ext-cpx";
    set.extended = true;
    set.subject = T::cpx;
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("xcpx-f1", SrPat::anylabel(), TransPat::of({T::cpx}),
               {je_tr(TransPat::of({T::cpx}))}, {je_sr(SrPat::same())}),
        fork_d("xcpx-f2", SrPat::of(pcs), TransPat::of({T::cpx}), {}, {je_sr(SrPat::same())}),
        fork_d("xcpx-f3", SrPat::of(CP()), TransPat::of({T::cpx}),
               {je_tr(TransPat::of({T::cpx})), je_tr(TransPat::of({T::cpx}))},
               {je_sr(SrPat::of(CP()))}),
    };
    set.commute = {
        commute_d("xcpx-c1", SrPat::anylabel(), TransPat::of({T::cpx}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::cpx}))}),
        commute_d("xcpx-c2", SrPat::of(cat({pcs, CP()})), TransPat::of({T::cpx}),
                  {je_sr(SrPat::same())}),
        commute_d("xcpx-c3", SrPat::of(CP()), TransPat::of({T::cpx}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpx})),
                   je_tr(TransPat::of({T::cpx}))}),
    };
    return set;
}

DiagramSet make_ext_cpcx_set() {
    DiagramSet set;
    set.name = "ext-cpcx";
    set.extended = true;
    set.subject = T::cpcx;
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("cpcx-f1", SrPat::anylabel(), TransPat::of({T::cpcx}),
               {je_tr(TransPat::of({T::cpcx}))}, {je_sr(SrPat::same())}),
        fork_d("cpcx-f2", SrPat::of(pcs), TransPat::of({T::cpcx}), {}, {je_sr(SrPat::same())}),
        fork_d("cpcx-f3", SrPat::of(pcs), TransPat::of({T::cpcx}),
               {je_tr(TransPat::of({T::abs}))}, {je_sr(SrPat::same())}),
        fork_d("cpcx-f4", SrPat::of(CASE()), TransPat::of({T::cpcx}),
               {je_tr(TransPat::of({T::cpcx, T::abs})), je_tr(TransPat::of({T::cpx}), Mult::plus),
                je_tr(TransPat::of({T::xch}), Mult::plus)},
               {je_sr(SrPat::of(CASE()))}),
        fork_d("cpcx-f5", SrPat::of(CP()), TransPat::of({T::cpcx}),
               {je_tr(TransPat::of({T::cpcx})), je_tr(TransPat::of({T::cpcx}))},
               {je_sr(SrPat::of(CP()))}),
        fork_d("cpcx-f6", SrPat::of(CP()), TransPat::of({T::cpcx}),
               {je_tr(TransPat::of({T::cpcx}), Mult::plus), je_tr(TransPat::of({T::cpx}), Mult::plus),
                je_tr(TransPat::of({T::gc}))},
               {je_sr(SrPat::of(CP()))}),
    };
    set.commute = {
        commute_d("cpcx-c1", SrPat::anylabel(), TransPat::of({T::cpcx}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::cpcx}))}),
        commute_d("cpcx-c2", SrPat::of(pcs), TransPat::of({T::cpcx}), {je_sr(SrPat::same())}),
        commute_d("cpcx-c3", SrPat::of(pcs), TransPat::of({T::cpcx}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::abs}))}),
        commute_d("cpcx-c4", SrPat::of(CASE()), TransPat::of({T::cpcx}),
                  {je_sr(SrPat::of(CASE())), je_tr(TransPat::of({T::cpcx, T::abs})),
                   je_tr(TransPat::of({T::cpx}), Mult::plus),
                   je_tr(TransPat::of({T::xch}), Mult::plus)}),
        commute_d("cpcx-c5", SrPat::of(CP()), TransPat::of({T::cpcx}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpcx})),
                   je_tr(TransPat::of({T::cpcx}))}),
        commute_d("cpcx-c6", SrPat::of(CP()), TransPat::of({T::cpcx}),
                  {je_sr(SrPat::of(CP())), je_tr(TransPat::of({T::cpcx}), Mult::plus),
                   je_tr(TransPat::of({T::cpx}), Mult::plus), je_tr(TransPat::of({T::gc}))}),
    };
    return set;
}

DiagramSet make_ext_abs_set() {
    DiagramSet set;
    set.name = "ext-abs";
    set.extended = true;
    set.subject = T::abs;
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("abs-f1", SrPat::anylabel(), TransPat::of({T::abs}), {je_tr(TransPat::of({T::abs}))},
               {je_sr(SrPat::same())}),
        fork_d("abs-f2", SrPat::of(pcs), TransPat::of({T::abs}), {}, {je_sr(SrPat::same())}),
        fork_d("abs-f3", SrPat::of(CASE()), TransPat::of({T::abs}),
               {je_tr(TransPat::of({T::abs})), je_tr(TransPat::of({T::cpx}), Mult::plus),
                je_tr(TransPat::of({T::xch}), Mult::plus)},
               {je_sr(SrPat::of(CASE()))}),
    };
    set.commute = {
        commute_d("abs-c1", SrPat::anylabel(), TransPat::of({T::abs}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::abs}))}),
        commute_d("abs-c2", SrPat::of(pcs), TransPat::of({T::abs}), {je_sr(SrPat::same())}),
        commute_d("abs-c3", SrPat::of(CASE()), TransPat::of({T::abs}),
                  {je_sr(SrPat::of(CASE())), je_tr(TransPat::of({T::abs})),
                   je_tr(TransPat::of({T::cpx}), Mult::plus),
                   je_tr(TransPat::of({T::xch}), Mult::plus)}),
    };
    return set;
}

DiagramSet make_ext_gc_set() {
    DiagramSet set;
    set.name = "ext-gc";
    set.extended = true;
    set.subject = T::gc;
    auto lll_x = LLL(true);
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("xgc-f1", SrPat::anylabel(), TransPat::of({T::gc}), {je_tr(TransPat::of({T::gc}))},
               {je_sr(SrPat::same())}),
        fork_d("xgc-f2", SrPat::of(cat({pcs, lll_x})), TransPat::of({T::gc}), {},
               {je_sr(SrPat::same())}),
    };
    set.commute = {
        commute_d("xgc-c1", SrPat::anylabel(), TransPat::of({T::gc}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::gc}))}),
        commute_d("xgc-c2", SrPat::of(pcs), TransPat::of({T::gc}), {je_sr(SrPat::same())}),
        commute_d("xgc-c3", SrPat::anylabel(), TransPat::of({T::gc}),
                  {je_sr(SrPat::of(lll_x), Mult::plus), je_sr(SrPat::same()),
                   je_tr(TransPat::of({T::gc}))}),
        commute_d("xgc-c4", SrPat::of(cat({{R::lbeta}, lll_x, CASE()})), TransPat::of({T::gc}),
                  {je_sr(SrPat::of(lll_x), Mult::plus), je_sr(SrPat::same()),
                   je_sr(SrPat::of(lll_x)), je_tr(TransPat::of({T::gc}))}),
    };
    set.base.closing = {je_sr(SrPat::of(lll_x), Mult::opt)};
    return set;
}

DiagramSet make_ext_ucp_set() {
    DiagramSet set;
    set.name = "ext-ucp";
    set.extended = true;
    set.subject = T::ucp;
    auto lll_x = LLL(true);
    auto pcs = cat({PROB(), CASE(), SEQ()});
    set.fork = {
        fork_d("xucp-f1", SrPat::anylabel(), TransPat::of({T::ucp}),
               {je_tr(TransPat::of({T::ucp}))}, {je_sr(SrPat::same())}),
        fork_d("xucp-f2", SrPat::of(CP()), TransPat::of({T::ucp}), {je_tr(TransPat::of({T::gc}))},
               {}),
        fork_d("xucp-f3", SrPat::of(pcs), TransPat::of({T::ucp}), {}, {je_sr(SrPat::same())}),
        fork_d("xucp-f4", SrPat::of(cat({CASE(), SEQ(), CP(), PROB()})), TransPat::of({T::ucp}),
               {je_tr(TransPat::of({T::gc}))}, {je_sr(SrPat::same())}),
        fork_d("xucp-f5", SrPat::of(lll_x), TransPat::of({T::ucp}),
               {je_tr(TransPat::of({T::ucp}))}, {je_sr(SrPat::of(lll_x), Mult::star)}),
        fork_d("xucp-f6", SrPat::of(CASE()), TransPat::of({T::ucp}),
               {je_tr(TransPat::of({T::gc})), je_tr(TransPat::of({T::ucp}), Mult::plus)},
               {je_sr(SrPat::of(CASE()))}),
    };
    set.commute = {
        commute_d("xucp-c1", SrPat::anylabel(), TransPat::of({T::ucp}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::ucp}))}),
        commute_d("xucp-c2", SrPat::of(pcs), TransPat::of({T::ucp}), {je_sr(SrPat::same())}),
        commute_d("xucp-c3", SrPat::of(pcs), TransPat::of({T::ucp}),
                  {je_sr(SrPat::same()), je_tr(TransPat::of({T::gc}))}),
        commute_d("xucp-c4", SrPat::of({R::lbeta}), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of({R::lbeta})), je_sr(SrPat::of(lll_x)),
                   je_tr(TransPat::of({T::ucp}))}),
        commute_d("xucp-c5", SrPat::of(cat({{R::lbeta}, SEQ()})), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x), Mult::star), je_sr(SrPat::of(CP())),
                   je_sr(SrPat::same()), je_tr(TransPat::of({T::gc}))}),
        commute_d("xucp-c6", SrPat::of(cat({{R::lbeta}, CP(), PROB(), CASE(), SEQ()})),
                  TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x), Mult::plus), je_sr(SrPat::same()),
                   je_tr(TransPat::of({T::ucp, T::gc}))}),
        commute_d("xucp-c7", SrPat::of(CASE()), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x)), je_sr(SrPat::of(CASE())), je_sr(SrPat::of(lll_x)),
                   je_tr(TransPat::of({T::ucp}))}),
        commute_d("xucp-c8", SrPat::of(CASE()), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x)), je_sr(SrPat::of(CASE())),
                   je_sr(SrPat::of(lll_x), Mult::opt), je_tr(TransPat::of({T::gc})),
                   je_tr(TransPat::of({T::ucp}), Mult::plus)}),
        commute_d("xucp-c9", SrPat::of(lll_x), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x), Mult::plus), je_tr(TransPat::of({T::ucp}))},
                  Mult::plus),
        commute_d("xucp-c10", SrPat::of({R::lbeta}), TransPat::of({T::ucp}),
                  {je_sr(SrPat::of(lll_x)), je_sr(SrPat::of(CP())), je_sr(SrPat::of({R::lbeta})),
                   je_sr(SrPat::of(lll_x)), je_tr(TransPat::of({T::gc}))}),
    };
    set.base.closing = {je_sr(SrPat::of(lll_x), Mult::opt), je_sr(SrPat::of(CP()), Mult::opt)};
    return set;
}

} // namespace

const std::vector<DiagramSet>& builtin_diagram_sets() {
    static const std::vector<DiagramSet> sets = [] {
        std::vector<DiagramSet> v;
        v.push_back(make_lll_set());
        v.push_back(make_cp_set());
        v.push_back(make_cpx_set());
        v.push_back(make_xch_set());
        v.push_back(make_gc_ucp_set());
        v.push_back(make_ext_lll_set());
        v.push_back(make_ext_cp_set());
        v.push_back(make_ext_cpx_set());
        v.push_back(make_ext_xch_set());
        v.push_back(make_ext_cpcx_set());
        v.push_back(make_ext_abs_set());
        v.push_back(make_ext_gc_set());
        v.push_back(make_ext_ucp_set());
        return v;
    }();
    return sets;
}

const DiagramSet* find_diagram_set(const std::string& name) {
    for (auto& s : builtin_diagram_sets())
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<std::string> diagram_set_names() {
    std::vector<std::string> out;
    for (auto& s : builtin_diagram_sets()) out.push_back(s.name);
    return out;
}

// ---------------------------------------------------------------------------
// randomized overlap trials

namespace {

std::vector<RedexMatch> subject_matches(const DiagramSet& set, const ExprPtr& term,
                                        const CtorTable& table) {
    std::vector<RedexMatch> matches = match_sites(term, set.subject, ContextClass::S, table,
                                                  set.extended);
    if (set.name == "gc-ucp") {
        auto ucp_matches = match_sites(term, T::ucp, ContextClass::S, table, set.extended);
        matches.insert(matches.end(), ucp_matches.begin(), ucp_matches.end());
    }
    return matches;
}

} // namespace

DiagramRun run_diagram_trials(const DiagramSet& set, bool commute_mode, std::size_t trials,
                              std::uint64_t seed, std::size_t term_size, SearchLimits limits,
                              const CtorTable& table) {
    DiagramRun run;
    run.set_name = set.name;
    run.mode = commute_mode ? "commute" : "fork";
    GenConfig cfg;
    cfg.max_size = term_size;
    cfg.extended = set.extended;
    cfg.bot_weight = 0.08;

    for (std::size_t i = 0; i < trials; ++i) {
        DiagramTrial trial;
        trial.index = i;
        bool made_overlap = false;
        for (std::size_t attempt = 0; attempt < 400 && !made_overlap; ++attempt) {
            std::uint64_t s0 = trial_seed(seed, i * 1000 + attempt);
            TermGen gen(s0, cfg, table);
            std::mt19937_64 pick_rng(trial_seed(s0, 7));
            ExprPtr term = gen.gen();
            auto matches = subject_matches(set, term, table);
            if (matches.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, matches.size() - 1);
            const RedexMatch& m = matches[pick(pick_rng)];
            bool branch = std::uniform_int_distribution<int>(0, 1)(pick_rng) == 1;

            if (!commute_mode) {
                StepVerdict v = sr_step(term, table);
                if (std::holds_alternative<StepWhnf>(v)) {
                    // forking base case: a WHNF stays a WHNF
                    ++run.base_case_checks;
                    if (!is_whnf(apply(term, m, table))) {
                        ++run.base_case_failures;
                        trial.report.status = MatchReport::Status::unclosed;
                        trial.report.detail = "fork base case violated";
                        trial.term = print_expr(term);
                        trial.rule = to_string(m.rule);
                        made_overlap = true;
                    }
                    continue;
                }
                if (std::holds_alternative<StepStuck>(v)) continue;
                trial.report = fork_join_search(term, m, set, branch, limits, table);
                trial.term = print_expr(term);
                trial.rule = to_string(m.rule);
                made_overlap = true;
            } else {
                ExprPtr t = apply(term, m, table);
                StepVerdict v = sr_step(t, table);
                if (std::holds_alternative<StepWhnf>(v)) {
                    ++run.base_case_checks;
                    if (!check_commute_base(term, set, limits, table)) {
                        ++run.base_case_failures;
                        trial.report.status = MatchReport::Status::unclosed;
                        trial.report.detail = "commute base case violated";
                        trial.term = print_expr(term);
                        trial.rule = to_string(m.rule);
                        made_overlap = true;
                    }
                    continue;
                }
                if (std::holds_alternative<StepStuck>(v)) continue;
                trial.report = commute_join_search(term, m, set, branch, limits, table);
                trial.term = print_expr(term);
                trial.rule = to_string(m.rule);
                made_overlap = true;
            }
        }
        if (!made_overlap) {
            trial.report.status = MatchReport::Status::no_overlap;
            trial.report.detail = "no overlap constructed within the retry budget";
        }
        ++run.trials;
        bool ok = trial.report.status == MatchReport::Status::closed ||
                  trial.report.status == MatchReport::Status::closed_trivially;
        ok = ok && trial.report.prob_labels_equal;
        if (ok) {
            ++run.closed;
        } else {
            ++run.unclosed;
            run.failures.push_back(trial);
        }
    }
    return run;
}

} // namespace probneed

#include "doctest.h"

#include "probneed/diagram.hpp"
#include "probneed/parser.hpp"

using namespace probneed;

namespace {
ExprPtr P(const std::string& s) { return parse_program(s); }

RedexMatch first_match(const ExprPtr& e, TransformationId t, bool extended = false) {
    auto ms = match_sites(e, t, ContextClass::S, CtorTable::defaults(), extended);
    REQUIRE_FALSE(ms.empty());
    return ms.front();
}
} // namespace

TEST_CASE("builtin sets are present") {
    for (const char* n : {"lll", "cp", "cpx", "xch", "gc-ucp", "ext-lll", "ext-cp", "ext-cpx",
                          "ext-xch", "ext-cpcx", "ext-abs", "ext-gc", "ext-ucp"}) {
        CAPTURE(n);
        CHECK(find_diagram_set(n) != nullptr);
    }
    CHECK(find_diagram_set("nope") == nullptr);
}

TEST_CASE("fork: an lll step that coincides with the sr step closes trivially") {
    // the sr step of this term is lapp, and S,lapp at the same site is the
    // same rewrite
    ExprPtr e = P("(let x=K in x) K2");
    MatchReport r = fork_join_search(e, first_match(e, TransformationId::lapp),
                                     *find_diagram_set("lll"));
    CHECK(r.status == MatchReport::Status::closed_trivially);
}

TEST_CASE("fork: prob branch absorbs a transformation in the discarded arm") {
    // the sr step branches on the choice; the llet-in transformation sits
    // inside the right branch and disappears when probl discards it
    ExprPtr e = P("(\\q.q) <+> (let a=K in let b=K2 in b)");
    auto ms = match_sites(e, TransformationId::llet_in, ContextClass::S);
    REQUIRE(ms.size() == 1);
    MatchReport r = fork_join_search(e, ms[0], *find_diagram_set("lll"), /*branch_right=*/false);
    CHECK(r.status == MatchReport::Status::closed);
    CHECK(r.diagram_id == "lll-f3");
    CHECK(r.prob_labels_equal);
}

TEST_CASE("fork: square diagram with commuting lll step") {
    // sr step is lbeta at the root; the transformation merges unrelated lets
    ExprPtr e = P("(\\x.x) (let a=K in let b=K2 in b)");
    auto ms = match_sites(e, TransformationId::llet_in, ContextClass::S);
    REQUIRE_FALSE(ms.empty());
    MatchReport r = fork_join_search(e, ms.front(), *find_diagram_set("lll"));
    CHECK(r.status == MatchReport::Status::closed);
    CHECK(r.diagram_id == "lll-f2");
}

TEST_CASE("fork: lapp vs llet needs the two-step square") {
    // sr: lapp floats the inner let out of the application; S,llet-in merges
    // the outer environment into it first
    ExprPtr e = P("let a=K in (let b=K2 in b) a");
    auto ms = match_sites(e, TransformationId::llet, ContextClass::S);
    // pick the llet-in match that merges a's environment with b's
    MatchReport r;
    bool tried = false;
    for (auto& m : ms) {
        if (m.rule != TransformationId::llet_in) continue;
        r = fork_join_search(e, m, *find_diagram_set("lll"));
        tried = true;
    }
    REQUIRE(tried);
    CHECK(r.status == MatchReport::Status::closed);
}

TEST_CASE("commute: square diagram for cpS") {
    // copy the abstraction to the surface argument position, then reduce
    ExprPtr e = P("let f=\\q.q in (\\w.w) f");
    auto ms = match_sites(e, TransformationId::cpS, ContextClass::S);
    REQUIRE_FALSE(ms.empty());
    MatchReport r = commute_join_search(e, ms.front(), *find_diagram_set("cp"));
    CHECK((r.status == MatchReport::Status::closed ||
           r.status == MatchReport::Status::closed_trivially));
}

TEST_CASE("commute base case validation") {
    // gc on a WHNF target: let x=K in \y.y  --gc-->  \y.y (a WHNF);
    // the source closes by zero or one llet and cp steps
    ExprPtr e = P("let x=K in \\y.y");
    CHECK(check_commute_base(e, *find_diagram_set("gc-ucp")));
    // cp: let f=\q.q in f --cp--> let f=\q.q in \q'.q' (WHNF); source needs one cp
    ExprPtr e2 = P("let f=\\q.q in f");
    CHECK(check_commute_base(e2, *find_diagram_set("cp")));
    CHECK_FALSE(check_commute_base(P("let x=x in x"), *find_diagram_set("cp")));
}

TEST_CASE("no overlap on whnf or stuck terms") {
    ExprPtr e = P("let x=K, q=K2 in \\y.y");
    auto ms = match_sites(e, TransformationId::gc, ContextClass::S);
    REQUIRE_FALSE(ms.empty());
    CHECK(fork_join_search(e, ms.front(), *find_diagram_set("gc-ucp")).status ==
          MatchReport::Status::no_overlap);
}

TEST_CASE("seeded trials close for every core set (smoke)") {
    for (const char* name : {"lll", "cp", "cpx", "xch", "gc-ucp"}) {
        CAPTURE(name);
        const DiagramSet* set = find_diagram_set(name);
        for (bool commute : {false, true}) {
            DiagramRun run = run_diagram_trials(*set, commute, 25, 1234, 20);
            CAPTURE(commute);
            if (!run.failures.empty()) {
                CAPTURE(run.failures[0].term);
                CAPTURE(run.failures[0].rule);
                CAPTURE(run.failures[0].report.detail);
            }
            CHECK(run.unclosed == 0);
            CHECK(run.closed == run.trials);
            CHECK(run.base_case_failures == 0);
        }
    }
}

TEST_CASE("seeded trials close for every extended set (smoke)") {
    for (const char* name : {"ext-lll", "ext-cp", "ext-cpx", "ext-xch", "ext-cpcx", "ext-abs",
                             "ext-gc", "ext-ucp"}) {
        CAPTURE(name);
        const DiagramSet* set = find_diagram_set(name);
        for (bool commute : {false, true}) {
            DiagramRun run = run_diagram_trials(*set, commute, 15, 777, 18);
            CAPTURE(commute);
            if (!run.failures.empty()) {
                CAPTURE(run.failures[0].term);
                CAPTURE(run.failures[0].rule);
                CAPTURE(run.failures[0].report.detail);
            }
            CHECK(run.unclosed == 0);
            CHECK(run.closed == run.trials);
            CHECK(run.base_case_failures == 0);
        }
    }
}

#include "doctest.h"

#include "probneed/parser.hpp"
#include "probneed/reduce.hpp"

using namespace probneed;

namespace {
ExprPtr P(const std::string& s) { return parse_program(s); }
ExprPtr PX(const std::string& s) { return parse_program(s, CtorTable::defaults(), true); }

StepUnique expect_unique(StepVerdict v, RuleName rule) {
    REQUIRE(std::holds_alternative<StepUnique>(v));
    auto u = std::get<StepUnique>(v);
    CHECK(to_string(u.rule) == to_string(rule));
    return u;
}
} // namespace

TEST_CASE("is_whnf") {
    CHECK(is_whnf(P("\\x.x")));
    CHECK(is_whnf(P("let x=K in \\y.y")));
    CHECK_FALSE(is_whnf(P("let x = x in x")));
    CHECK_FALSE(is_whnf(P("(\\x.x) K")));
    CHECK_FALSE(is_whnf(P("let x=\\y.y in x")));
    // extended: constructor forms
    CHECK(is_whnf(PX("Cons a b")));
    CHECK(is_whnf(PX("let y=K in Cons a b")));
    CHECK(is_whnf(PX("let x=y, y=Cons a b in x")));
    CHECK_FALSE(is_whnf(PX("let x=y, y=Cons a b in seq x x")));
}

TEST_CASE("sr_step lbeta") {
    auto u = expect_unique(sr_step(P("(\\x.x) K")), RuleName::lbeta);
    CHECK(alpha_equiv(u.result, P("let x=K in x")));
}

TEST_CASE("sr_step prob branch") {
    StepVerdict v = sr_step(P("K <+> K2"));
    REQUIRE(std::holds_alternative<StepProbBranch>(v));
    auto& p = std::get<StepProbBranch>(v);
    CHECK(p.redex.empty());
    CHECK(alpha_equiv(p.left, P("K")));
    CHECK(alpha_equiv(p.right, P("K2")));
}

TEST_CASE("sr_step blackhole and open variables") {
    StepVerdict v = sr_step(P("let x = x in x"));
    REQUIRE(std::holds_alternative<StepStuck>(v));
    CHECK(std::get<StepStuck>(v).reason == StuckReason::blackhole);

    StepVerdict v2 = sr_step(P("let x = y in x"));
    REQUIRE(std::holds_alternative<StepStuck>(v2));
    CHECK(std::get<StepStuck>(v2).reason == StuckReason::open_variable);

    StepVerdict v3 = sr_step(P("y K"));
    REQUIRE(std::holds_alternative<StepStuck>(v3));
    CHECK(std::get<StepStuck>(v3).reason == StuckReason::open_variable);

    // cyclic chain through application spines
    StepVerdict v4 = sr_step(P("let x = y id, y = x K in x"));
    REQUIRE(std::holds_alternative<StepStuck>(v4));
    CHECK(std::get<StepStuck>(v4).reason == StuckReason::blackhole);
}

TEST_CASE("sr_step cp-in copies a freshened abstraction to the body occurrence") {
    auto u = expect_unique(sr_step(P("let x=\\y.y in x")), RuleName::cp_in);
    CHECK(alpha_equiv(u.result, P("let x=\\y.y in \\y.y")));

    // chain of trivial bindings
    auto u2 = expect_unique(sr_step(P("let a=b, b=\\y.y in a")), RuleName::cp_in);
    CHECK(alpha_equiv(u2.result, P("let a=b, b=\\y.y in \\y.y")));
}

TEST_CASE("sr_step cp-e copies into the needed binding") {
    auto u = expect_unique(sr_step(P("let x = z K, z = \\y.y in x")), RuleName::cp_e);
    CHECK(alpha_equiv(u.result, P("let x = (\\y.y) K, z = \\y.y in x")));
}

TEST_CASE("sr_step let floating") {
    auto u1 = expect_unique(sr_step(P("(let x=K in x) K2")), RuleName::lapp);
    CHECK(alpha_equiv(u1.result, P("let x=K in x K2")));

    auto u2 = expect_unique(sr_step(P("let x=K in let y=K2 in y")), RuleName::llet_in);
    CHECK(alpha_equiv(u2.result, P("let x=K, y=K2 in y")));

    auto u3 = expect_unique(sr_step(P("let x = (let y=K2 in y) in x")), RuleName::llet_e);
    CHECK(alpha_equiv(u3.result, P("let x = y, y = K2 in x")));
}

TEST_CASE("whnf terms do not step") {
    for (const char* s : {"\\x.x", "let x=K in \\y.y"}) {
        CHECK(std::holds_alternative<StepWhnf>(sr_step(P(s))));
    }
}

TEST_CASE("run_until_prob identity application") {
    DetOutcome d = run_until_prob(P("(\\x.x) (\\y.y)"), 10);
    REQUIRE(d.kind == DetOutcome::Kind::reached_whnf);
    REQUIRE(d.trace.size() == 2);
    CHECK(d.trace[0] == RuleName::lbeta);
    CHECK(d.trace[1] == RuleName::cp_in);
    CHECK(alpha_equiv(d.expr, P("let x=\\y.y in \\q.q")));
}

TEST_CASE("run_until_prob fuel") {
    DetOutcome d = run_until_prob(P("Omega"), 50);
    CHECK(d.kind == DetOutcome::Kind::fuel_exhausted);
}

TEST_CASE("run_until_prob stops at needed choice") {
    DetOutcome d = run_until_prob(P("let z = K <+> K2 in z"), 10);
    REQUIRE(d.kind == DetOutcome::Kind::at_prob);
    CHECK(d.trace.empty());
    CHECK(alpha_equiv(d.prob_left, P("let z = K in z")));
    CHECK(alpha_equiv(d.prob_right, P("let z = K2 in z")));
}

// the two evaluations written out in full in the worked example; the four
// leaves are distinct abstractions so the final cp step can fire
TEST_CASE("sharing evaluation golden trace") {
    std::string src = "let z = K <+> K2 in z (z (\\p1.p1) (\\p2.p2 p2)) "
                      "(z (\\p3.\\q3.p3) (\\p4.\\q4.q4 p4))";
    ReplayOutcome left = reduce_trace(P(src), "L", 100);
    REQUIRE(left.kind == ReplayOutcome::Kind::reached_whnf);
    std::vector<RuleName> expected = {
        RuleName::probl, RuleName::cp_in, RuleName::lbeta, RuleName::lapp, RuleName::llet_in,
        RuleName::lbeta, RuleName::llet_in, RuleName::cp_e, RuleName::lbeta, RuleName::lapp,
        RuleName::llet_e, RuleName::lbeta, RuleName::llet_e, RuleName::cp_in};
    REQUIRE(left.trace.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(to_string(left.trace[i]) == to_string(expected[i]));
    auto* lt = left.expr->get_if<Let>();
    REQUIRE(lt);
    CHECK(alpha_equiv(lt->body, P("\\p1.p1")));

    ReplayOutcome right = reduce_trace(P(src), "R", 100);
    REQUIRE(right.kind == ReplayOutcome::Kind::reached_whnf);
    auto* rt = right.expr->get_if<Let>();
    REQUIRE(rt);
    CHECK(alpha_equiv(rt->body, P("\\p4.\\q4.q4 p4")));
}

TEST_CASE("reduce_trace reports exhausted choices") {
    ReplayOutcome r = reduce_trace(P("K <+> K2"), "", 10);
    CHECK(r.kind == ReplayOutcome::Kind::choices_exhausted);
    ReplayOutcome r2 = reduce_trace(P("K"), "", 10);
    CHECK(r2.kind == ReplayOutcome::Kind::reached_whnf);
    CHECK(r2.consumed == 0);
}

TEST_CASE("extended standard reduction rules") {
    auto u1 = expect_unique(sr_step(PX("case True of {True -> a; False -> b}")), RuleName::case_c);
    CHECK(alpha_equiv(u1.result, PX("a")));

    auto u2 = expect_unique(sr_step(PX("seq (\\x.x) K")), RuleName::seq_c);
    CHECK(alpha_equiv(u2.result, PX("K")));

    auto u3 = expect_unique(sr_step(PX("seq (Cons a b) c")), RuleName::seq_c);
    CHECK(alpha_equiv(u3.result, PX("c")));

    auto u4 = expect_unique(sr_step(PX("case (let x=True in x) of {True -> a; False -> b}")),
                             RuleName::lcase);
    CHECK(alpha_equiv(u4.result, PX("let x=True in case x of {True -> a; False -> b}")));

    auto u5 = expect_unique(sr_step(PX("seq (let x=K in x) c")), RuleName::lseq);
    CHECK(alpha_equiv(u5.result, PX("let x=K in seq x c")));

    // case-c on a non-nullary constructor introduces a sharing let
    auto u6 = expect_unique(sr_step(PX("case (Cons a b) of {Nil -> n; Cons h t -> h}")),
                             RuleName::case_c);
    CHECK(alpha_equiv(u6.result, PX("let h=a, t=b in h")));
}

TEST_CASE("case-in shares constructor arguments") {
    auto u = expect_unique(
        sr_step(PX("let x = Cons a b in case x of {Nil -> n; Cons h t -> h t}")),
        RuleName::case_in);
    CHECK(alpha_equiv(u.result,
                      PX("let x = Cons z1 z2, z1 = a, z2 = b in let h=z1, t=z2 in h t")));

    // nullary constructor: no shares introduced
    auto u2 = expect_unique(
        sr_step(PX("let x = True in case x of {True -> a; False -> b}")), RuleName::case_in);
    CHECK(alpha_equiv(u2.result, PX("let x = True in a")));
}

TEST_CASE("case-e fires inside a needed binding") {
    auto u = expect_unique(
        sr_step(PX("let v = (case w of {True -> a; False -> b}) id, w = True in v")),
        RuleName::case_e);
    CHECK(alpha_equiv(u.result, PX("let v = a id, w = True in v")));
}

TEST_CASE("seq-in discards without copying") {
    auto u = expect_unique(sr_step(PX("let x = Cons a b in seq x r")), RuleName::seq_in);
    CHECK(alpha_equiv(u.result, PX("let x = Cons a b in r")));
}

TEST_CASE("seq-e fires inside a needed binding") {
    auto u = expect_unique(sr_step(PX("let v = seq w t, w = Nil in v")), RuleName::seq_e);
    CHECK(alpha_equiv(u.result, PX("let v = t, w = Nil in v")));
}

TEST_CASE("ill-typed terms get stuck") {
    for (const char* s : {
             "case (\\x.x) of {True -> a; False -> b}", // abstraction scrutinee
             "(Cons a b) c",                            // constructor applied
             "case (Cons a b) of {True -> x; False -> y}", // wrong type
             "let x = Nil in x y",                      // constructor applied via chain
         }) {
        CAPTURE(s);
        StepVerdict v = sr_step(PX(s));
        ReplayOutcome r = reduce_trace(PX(s), "", 50);
        bool ok = std::holds_alternative<StepStuck>(v) ||
                  (r.kind == ReplayOutcome::Kind::reached_stuck &&
                   r.stuck_reason == StuckReason::ill_typed);
        CHECK(ok);
        if (std::holds_alternative<StepStuck>(v))
            CHECK(std::get<StepStuck>(v).reason == StuckReason::ill_typed);
    }
}

TEST_CASE("determinism and whnf agreement on a mixed bag of terms") {
    for (const char* s : {
             "(\\x.x x) (\\y.y)", "let a=\\q.q, b=a a in b", "K <+> (K2 <+> K)",
             "let f = \\x.f x in f K", "(let x=K in x) (let y=K2 in y)",
         }) {
        ExprPtr e = P(s);
        StepVerdict v1 = sr_step(e);
        StepVerdict v2 = sr_step(e);
        CHECK(v1.index() == v2.index());
        if (std::holds_alternative<StepWhnf>(v1)) CHECK(is_whnf(e));
        if (auto* u = std::get_if<StepUnique>(&v1))
            CHECK(alpha_equiv(u->result, std::get<StepUnique>(v2).result));
        if (is_whnf(e)) CHECK(std::holds_alternative<StepWhnf>(v1));
    }
}

#include "doctest.h"

#include "probneed/convergence.hpp"
#include "probneed/parser.hpp"

using namespace probneed;

namespace {
ExprPtr P(const std::string& s) { return parse_program(s); }
ExprPtr PX(const std::string& s) { return parse_program(s, CtorTable::defaults(), true); }
Rat R(const std::string& s) { return rat_parse(s); }
} // namespace

TEST_CASE("rational serialization") {
    CHECK(rat_str(Rat(1, 2)) == "1/2");
    CHECK(rat_str(Rat(0)) == "0/1");
    CHECK(rat_str(Rat(2, 2)) == "1/1");
    CHECK(rat_parse("3/12") == Rat(1, 4));
    CHECK(rat_pow2_inv(10) == Rat(1, 1024));
    CHECK_THROWS_AS(rat_parse("x"), std::invalid_argument);
}

TEST_CASE("explore single success leaf") {
    EvalTree t = explore(P("K"), 2, 100);
    auto ls = t.leaves();
    REQUIRE(ls.size() == 1);
    CHECK(ls[0]->kind == LeafKind::success);
    CHECK(ls[0]->weight == 1);
    CHECK(ls[0]->probseq.empty());
}

TEST_CASE("leaf weights always sum to one") {
    for (const char* s : {
             "K <+> K2", "K <+> Bot", "(id <+> Bot) <+> (Bot <+> id)",
             "let x = (\\y.y) <+> (Bot <+> x) in x", "Omega <+> K",
             "let z = K <+> K2 in z (z a b) (z c d)",
         }) {
        CAPTURE(s);
        EvalTree t = explore(P(s), 3, 60);
        Rat sum = 0;
        for (auto* l : t.leaves()) sum += l->weight;
        CHECK(sum == 1);
    }
}

TEST_CASE("excv of Bot is exactly zero") {
    ExcvBounds b = excv_bounds(P("Bot"), 3, 100);
    CHECK(b.lo == 0);
    CHECK(b.hi == 0);
    CHECK(b.exact);
    CHECK(convergence_class(P("Bot"), 3, 100) ==
          ConvergenceClass::all_branches_divergent_at_bound);
}

TEST_CASE("excv one half example") {
    ExcvBounds b = excv_bounds(P("let x = (\\y.y) <+> (Bot <+> x) in x"), 2, 100);
    CHECK(b.lo == R("1/2"));
    CHECK(b.hi == R("1/2"));
    CHECK(b.exact);
}

TEST_CASE("excv with literal Omega stays an interval") {
    for (std::uint64_t fuel : {50ull, 500ull, 5000ull}) {
        ExcvBounds b = excv_bounds(P("let x = (\\y.y) <+> (Omega <+> x) in x"), 2, fuel);
        CHECK(b.lo == R("1/2"));
        CHECK(b.hi == R("3/4"));
        CHECK_FALSE(b.exact);
    }
}

TEST_CASE("convergence classes") {
    CHECK(convergence_class(P("K <+> Bot"), 1, 100) ==
          ConvergenceClass::may_convergent_witnessed);
    CHECK(convergence_class(P("Omega"), 1, 100) == ConvergenceClass::undetermined);
}

TEST_CASE("excv_scaled multiplies exactly") {
    ExcvBounds b = excv_scaled(R("1/4"), P("let x = (\\y.y) <+> (Bot <+> x) in x"), 2, 100);
    CHECK(b.lo == R("1/8"));
    CHECK(b.hi == R("1/8"));
    ExcvBounds b2 = excv_scaled(R("1/2"), P("K"), 0, 10);
    CHECK(b2.lo == R("1/2"));
    CHECK_THROWS_AS(excv_scaled(R("0/1"), P("K"), 0, 10), std::invalid_argument);
}

TEST_CASE("evaluations in lexicographic order") {
    auto ev = evaluations(P("K <+> K2"), 1, 50);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].probseq == "L");
    CHECK(ev[0].weight == R("1/2"));
    CHECK(alpha_equiv(ev[0].whnf, P("K")));
    CHECK(ev[1].probseq == "R");
    CHECK(alpha_equiv(ev[1].whnf, P("K2")));

    auto ev2 = evaluations(P("K"), 0, 50);
    REQUIRE(ev2.size() == 1);
    CHECK(ev2[0].probseq.empty());
    CHECK(ev2[0].weight == 1);
}

TEST_CASE("budget exhaustion only at the budget depth") {
    EvalTree t = explore(P("let x = K <+> x in x"), 2, 100);
    for (auto* l : t.leaves())
        if (l->kind == LeafKind::budget_exhausted) CHECK(l->probseq.size() == 2);
}

TEST_CASE("sharing golden tree") {
    // only the two outer projections can appear
    ExprPtr e = P("let z = K <+> K2 in z (z (\\p1.p1) (\\p2.p2 p2)) "
                  "(z (\\p3.\\q3.p3) (\\p4.\\q4.q4 p4))");
    EvalTree t = explore(e, 1, 100);
    auto ls = t.leaves();
    REQUIRE(ls.size() == 2);
    for (auto* l : ls) {
        CHECK(l->kind == LeafKind::success);
        CHECK(l->weight == Rat(1, 2));
    }
    CHECK(alpha_equiv(ls[0]->expr->get_if<Let>()->body, P("\\p1.p1")));
    CHECK(alpha_equiv(ls[1]->expr->get_if<Let>()->body, P("\\p4.\\q4.q4 p4")));
}

TEST_CASE("lambda-lifted variant has four evaluations") {
    ExprPtr e = P("let z = \\x.\\y.(x <+> y) in z (z (\\p1.p1) (\\p2.p2 p2)) "
                  "(z (\\p3.\\q3.p3) (\\p4.\\q4.q4 p4))");
    EvalTree t = explore(e, 2, 200);
    auto ls = t.leaves();
    REQUIRE(ls.size() == 4);
    std::vector<std::string> expected = {"\\p1.p1", "\\p2.p2 p2", "\\p3.\\q3.p3",
                                         "\\p4.\\q4.q4 p4"};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(ls[i]->kind == LeafKind::success);
        CHECK(ls[i]->weight == Rat(1, 4));
        CHECK(alpha_equiv(ls[i]->expr->get_if<Let>()->body, P(expected[i])));
    }
}

TEST_CASE("replay reproduces each success leaf") {
    ExprPtr e = P("let z = \\x.\\y.(x <+> y) in z (z (\\p1.p1) (\\p2.p2 p2)) "
                  "(z (\\p3.\\q3.p3) (\\p4.\\q4.q4 p4))");
    for (auto& ev : evaluations(e, 2, 200)) {
        ReplayOutcome r = reduce_trace(e, ev.probseq, 200);
        REQUIRE(r.kind == ReplayOutcome::Kind::reached_whnf);
        CHECK(r.consumed == ev.probseq.size());
        CHECK(alpha_equiv(r.expr, ev.whnf));
    }
}

TEST_CASE("frontier validity") {
    CHECK(Frontier{{""}}.valid());
    CHECK(Frontier{{"L", "R"}}.valid());
    CHECK(Frontier{{"L", "RL", "RR"}}.valid());
    CHECK_FALSE(Frontier{{"L"}}.valid());
    CHECK_FALSE(Frontier{{"L", "R", "RL"}}.valid());
    CHECK_FALSE(Frontier{{"L", "X"}}.valid());
    CHECK(Frontier::full(2).valid());
    CHECK(Frontier::full(2).words == std::vector<ProbSeq>{"LL", "LR", "RL", "RR"});
}

TEST_CASE("frontier evaluation of the worked examples") {
    ExprPtr s1 = P("\\s1a.s1a");
    ExprPtr e1 = P("((\\s1a.s1a) <+> (\\s2a.s2a s2a)) <+> ((\\s1a.s1a) <+> (\\s3a.\\s3b.s3a))");
    FrontierResult r1 = frontier_evaluate(e1, Frontier::full(2));
    REQUIRE(r1.size() == 4);
    for (auto& entry : r1) CHECK(entry.weight == Rat(1, 4));
    CHECK(alpha_equiv(r1[0].expr, s1));
    CHECK(alpha_equiv(r1[2].expr, s1));

    ExprPtr e2 = P("(\\s1a.s1a) <+> ((\\s2a.s2a s2a) <+> (\\s3a.\\s3b.s3a))");
    FrontierResult r2 = frontier_evaluate(e2, Frontier{{"L", "RL", "RR"}});
    REQUIRE(r2.size() == 3);
    CHECK(r2[0].weight == Rat(1, 2));
    CHECK(r2[1].weight == Rat(1, 4));
    CHECK(r2[2].weight == Rat(1, 4));

    // trivial frontier
    FrontierResult r3 = frontier_evaluate(e2, Frontier{{""}});
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].weight == 1);
    CHECK(alpha_equiv(r3[0].expr, e2));
}

TEST_CASE("strictness violations") {
    CHECK_THROWS_AS(frontier_evaluate(P("(\\x.x) (K <+> K2)"), Frontier{{"L", "R"}}),
                    StrictnessViolation);
    // relaxed mode runs the deterministic prefix
    FrontierResult r = frontier_evaluate(P("(\\x.x) (K <+> K2)"), Frontier{{"L", "R"}}, true);
    REQUIRE(r.size() == 2);
    CHECK(r[0].weight == Rat(1, 2));
}

TEST_CASE("frontier_auto stops where no prob redex is available") {
    ExprPtr e2 = P("(\\s1a.s1a) <+> ((\\s2a.s2a s2a) <+> (\\s3a.\\s3b.s3a))");
    Frontier f = frontier_auto(e2, 2);
    CHECK(f.words == std::vector<ProbSeq>{"L", "RL", "RR"});
    CHECK(frontier_auto(P("K"), 3).words == std::vector<ProbSeq>{""});
}

TEST_CASE("frontier weights sum to one") {
    ExprPtr e = P("(a <+> (b <+> c)) <+> d");
    for (auto f : {frontier_auto(e, 1), frontier_auto(e, 2), frontier_auto(e, 3)}) {
        Rat sum = 0;
        for (auto& entry : frontier_evaluate(e, f)) sum += entry.weight;
        CHECK(sum == 1);
    }
}

TEST_CASE("extended exploration golden") {
    EvalTree t = explore(PX("case (True <+> False) of {True -> \\u.u; False -> \\v.\\w.v}"), 1, 100);
    auto ls = t.leaves();
    REQUIRE(ls.size() == 2);
    CHECK(ls[0]->probseq == "L");
    CHECK(ls[0]->weight == Rat(1, 2));
    CHECK(alpha_equiv(ls[0]->expr, P("\\u.u")));
    CHECK(ls[1]->probseq == "R");
    CHECK(alpha_equiv(ls[1]->expr, P("\\v.\\w.v")));
}

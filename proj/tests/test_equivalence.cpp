#include "doctest.h"

#include "probneed/equivalence.hpp"
#include "probneed/generator.hpp"
#include "probneed/parser.hpp"

using namespace probneed;

namespace {
ExprPtr P(const std::string& s) { return parse_program(s); }
Rat R(const std::string& s) { return rat_parse(s); }

FrontierResult FR(std::vector<std::pair<std::string, std::string>> entries) {
    FrontierResult out;
    for (auto& [w, e] : entries) out.push_back({R(w), P(e), ""});
    return out;
}
} // namespace

TEST_CASE("same prob-sequences: sr successor") {
    ExprPtr s = P("(\\x.x) (K <+> K2)");
    ExprPtr t = P("let x = K <+> K2 in x");
    CHECK(same_prob_sequences_check(s, t, 3, 100).is_holds());
    CHECK(same_prob_sequences_check(t, s, 3, 100).is_holds());
}

TEST_CASE("same prob-sequences is about convergence, not results") {
    // both terms have a success leaf at L and at R, so both directions hold
    CHECK(same_prob_sequences_check(P("K <+> K2"), P("K2 <+> K"), 2, 100).is_holds());
}

TEST_CASE("same prob-sequences fails with a witness") {
    Verdict v = same_prob_sequences_check(P("K <+> Bot"), P("K"), 2, 100);
    CHECK(v.is_fails());
    CHECK(v.witness.find("\"L\"") != std::string::npos);
}

TEST_CASE("same prob-sequences is inconclusive under fuel starvation") {
    Verdict v = same_prob_sequences_check(P("K <+> Omega"), P("K <+> Omega"), 2, 30);
    CHECK(v.kind == Verdict::Kind::inconclusive);
}

TEST_CASE("frontier criteria on the worked distributions") {
    // probdistr sides
    ExprPtr lhs = P("r1 <+> (s1 <+> t1)");
    ExprPtr rhs = P("(r1 <+> s1) <+> (r1 <+> t1)");
    FrontierResult a = frontier_evaluate(lhs, frontier_auto(lhs, 2));
    FrontierResult b = frontier_evaluate(rhs, frontier_auto(rhs, 2));
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr2).is_holds());
    CHECK(frontier_criteria_check(b, a, EqCriterion::eqcr2).is_holds());
    // eqcr1 also holds right-to-left but not left-to-right (1/2 vs 1/4)
    CHECK(frontier_criteria_check(b, a, EqCriterion::eqcr1).is_holds());
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr1).is_fails());
}

TEST_CASE("eqcr3 ignores certified divergent entries") {
    FrontierResult a = FR({{"1/2", "\\u.u"}, {"1/2", "Bot"}});
    FrontierResult b = FR({{"7/10", "\\u.u"}, {"3/10", "Bot"}});
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr3).is_holds());
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr2).is_fails());
    // literal Omega is not certified divergent at finite fuel: not skipped
    FrontierResult ao = FR({{"1/2", "\\u.u"}, {"1/2", "Omega"}});
    FrontierResult bo = FR({{"7/10", "\\u.u"}, {"3/10", "Omega"}});
    CHECK(frontier_criteria_check(ao, bo, EqCriterion::eqcr3).is_fails());
}

TEST_CASE("the second worked triple fails every criterion") {
    FrontierResult a = FR({{"1/10", "Bot"}, {"6/10", "\\u.u"}, {"3/10", "\\v.\\w.v"}});
    FrontierResult b = FR({{"2/10", "Bot"}, {"5/10", "\\u.u"}, {"3/10", "\\v.\\w.v"}});
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr1).is_fails());
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr2).is_fails());
    CHECK(frontier_criteria_check(a, b, EqCriterion::eqcr3).is_fails());
}

TEST_CASE("eqcr2 is reflexive") {
    for (auto& e : {P("K <+> (K2 <+> Bot)"), P("(a <+> b) <+> a")}) {
        FrontierResult fr = frontier_evaluate(e, frontier_auto(e, 2));
        CHECK(frontier_criteria_check(fr, fr, EqCriterion::eqcr2).is_holds());
    }
}

TEST_CASE("context enumeration") {
    auto all = enumerate_contexts(1, ContextClass::C);
    REQUIRE(all.size() == 1);
    CHECK(all[0].str() == "[.]");

    auto b3 = enumerate_contexts(3, ContextClass::C);
    bool has_app_left = false, has_app_right = false;
    for (auto& c : b3) {
        if (c.str() == "[.] (\\x.x)") has_app_left = true;
        if (c.str() == "(\\x.x) [.]") has_app_right = true;
    }
    CHECK(has_app_left);
    CHECK(has_app_right);

    // the discriminating context of the running example appears by budget 5
    bool found = false;
    for (auto& c : enumerate_contexts(5, ContextClass::C))
        if (c.str() == "[.] (\\x.x) (let x=x in x)") found = true;
    CHECK(found);

    // classes filter
    for (auto& c : enumerate_contexts(4, ContextClass::R)) {
        CHECK(c.classes().reduction);
    }
    // hole under a lambda is not surface
    for (auto& c : enumerate_contexts(4, ContextClass::S)) CHECK(c.classes().surface);
}

TEST_CASE("plugging captures") {
    ContextSpec lamctx;
    lamctx.ctx = mk_lam({"x"}, mk_app(mk_var(hole_name()), mk_var("x")));
    lamctx.hole = {sel_child(0), sel_child(0)};
    ExprPtr plugged = lamctx.plug(P("x"));
    // the free x of the plugged term is captured by the binder
    CHECK(free_vars(plugged).empty());
}

TEST_CASE("excv offset check") {
    std::vector<ContextSpec> holes = {{mk_var(hole_name()), {}}};
    // reflexivity at d=0
    CHECK(excv_offset_check(P("Omega"), P("Omega"), holes, 2, 0, 50).is_holds());
    CHECK(excv_offset_check(P("Bot <+> a1"), P("a1"), holes, 1, 0, 100).is_holds());
    // probid needs one extra prob step
    CHECK(excv_offset_check(P("\\u.u"), P("(\\u.u) <+> (\\u.u)"), holes, 0, 1, 100).is_holds());
    CHECK(excv_offset_check(P("\\u.u"), P("(\\u.u) <+> (\\u.u)"), holes, 0, 0, 100).is_fails());
    // rejects non-R contexts
    std::vector<ContextSpec> bad = {{mk_lam({"x"}, mk_var(hole_name())), {sel_child(0)}}};
    CHECK_THROWS_AS(excv_offset_check(P("K"), P("K"), bad, 1, 0, 10), std::invalid_argument);
    // needed-binding contexts work
    auto rctxs = enumerate_contexts(3, ContextClass::R);
    CHECK(excv_offset_check(P("K <+> Bot"), P("K"), rctxs, 2, 0, 200).is_holds());
}

TEST_CASE("counterexample search refutes probassoc") {
    Verdict v = counterexample_search(P("id <+> (Bot <+> Bot)"), P("(id <+> Bot) <+> Bot"), 3, 2,
                                      100);
    REQUIRE(v.is_fails());
    CHECK(v.witness.find("context [.]:") != std::string::npos);
    CHECK(v.witness.find("[1/2,1/2] vs [1/4,1/4]") != std::string::npos);
}

TEST_CASE("counterexample search finds the applied-to-id-Bot context") {
    Verdict v = counterexample_search(P("K <+> K2"), P("K"), 7, 2, 50);
    REQUIRE(v.is_fails());
    CHECK(v.witness.find("[.] (\\x.x) (let x=x in x)") != std::string::npos);
}

TEST_CASE("counterexample search is inconclusive on equal terms") {
    Verdict v = counterexample_search(P("K"), P("K"), 4, 2, 50);
    CHECK(v.kind == Verdict::Kind::inconclusive);
    CHECK(v.reason == "enumeration-limit");
}

TEST_CASE("generator produces closed convention-obeying terms") {
    for (std::uint64_t seed : {1ull, 2ull, 42ull}) {
        GenConfig cfg;
        cfg.max_size = 30;
        TermGen gen(seed, cfg);
        for (int i = 0; i < 20; ++i) {
            ExprPtr e = gen.gen();
            CHECK(free_vars(e).empty());
            CHECK(alpha_equiv(e, freshen(e, {})));
        }
    }
    // determinism
    GenConfig cfg;
    TermGen g1(7, cfg), g2(7, cfg);
    for (int i = 0; i < 10; ++i) CHECK(print_expr(g1.gen()) == print_expr(g2.gen()));
}

TEST_CASE("extended generator produces wellformed terms") {
    GenConfig cfg;
    cfg.max_size = 24;
    cfg.extended = true;
    TermGen gen(11, cfg);
    auto table = CtorTable::defaults();
    for (int i = 0; i < 30; ++i) {
        ExprPtr e = gen.gen();
        CHECK(free_vars(e).empty());
        CHECK_FALSE(check_wellformed(e, table).has_value());
    }
}

TEST_CASE("small fuzz runs: correct rules show no violations") {
    for (auto rule : {TransformationId::gc, TransformationId::probcomm, TransformationId::lbeta}) {
        FuzzParams p;
        p.rule = rule;
        p.trials = 60;
        p.seed = 3;
        p.size = 18;
        p.k = 3;
        p.fuel = 600;
        FuzzReport r = soundness_fuzz(p);
        CAPTURE(to_string(rule));
        CHECK(r.violations == 0);
        CHECK(r.matched > 20);
        CHECK(r.sps_failures == 0);
    }
}

TEST_CASE("fuzz finds the probassoc counterexample") {
    FuzzParams p;
    p.rule = TransformationId::probassoc;
    p.trials = 400;
    p.seed = 5;
    p.size = 14;
    p.k = 3;
    p.fuel = 400;
    p.bot_weight = 0.45;
    FuzzReport r = soundness_fuzz(p);
    CHECK(r.violations >= 1);
    REQUIRE(r.first_violation.has_value());
    CHECK_FALSE(r.first_violation->term.empty());
}

TEST_CASE("fuzz reports are deterministic for a fixed seed") {
    FuzzParams p;
    p.rule = TransformationId::cpx;
    p.trials = 40;
    p.seed = 9;
    p.size = 16;
    p.k = 2;
    p.fuel = 300;
    FuzzReport r1 = soundness_fuzz(p);
    FuzzReport r2 = soundness_fuzz(p);
    CHECK(r1.matched == r2.matched);
    CHECK(r1.violations == r2.violations);
    CHECK(r1.no_match == r2.no_match);
    CHECK(r1.inconclusive == r2.inconclusive);
}

#include "doctest.h"

#include "probneed/trs.hpp"
#include <stdexcept>

using namespace probneed;

namespace {
TrsTerm X() { return TrsTerm::var("x"); }
TrsTerm U(const char* f, TrsTerm a) { return TrsTerm::fun(f, {std::move(a)}); }
} // namespace

TEST_CASE("kbo on the published lll order") {
    KboWeights w;
    w.weight = {{"Slll", 0}, {"SR", 1}, {"SRlll", 1}};
    PrecedenceOrder prec({{"Slll", "SR"}, {"Slll", "SRlll"}});
    std::set<std::string> syms = {"Slll", "SR", "SRlll"};

    CHECK(kbo_greater(U("Slll", U("SR", X())), U("SR", U("Slll", X())), w, prec, syms));
    CHECK_FALSE(kbo_greater(U("SR", X()), U("Slll", U("SR", X())), w, prec, syms));
    // strict subterm with positive weight
    KboWeights w2;
    w2.weight = {{"f", 1}};
    CHECK(kbo_greater(U("f", X()), X(), w2, PrecedenceOrder(std::vector<std::pair<std::string, std::string>>{}), {"f"}));
    // weight-0 symbol must be maximal
    KboWeights bad;
    bad.weight = {{"Slll", 0}, {"SR", 1}};
    CHECK_THROWS_AS(kbo_greater(U("Slll", X()), X(), bad, PrecedenceOrder(std::vector<std::pair<std::string, std::string>>{}), {"Slll", "SR"}),
                    std::invalid_argument);
}

TEST_CASE("kbo special case f^n(x) > x") {
    KboWeights w;
    w.weight = {{"f", 0}};
    PrecedenceOrder prec(std::vector<std::pair<std::string, std::string>>{{"f", "g"}});
    std::set<std::string> syms = {"f", "g"};
    CHECK(kbo_greater(U("f", X()), X(), w, prec, syms));
    CHECK_FALSE(kbo_greater(U("f", X()), TrsTerm::var("y"), w, prec, syms)); // var condition
}

TEST_CASE("lpo basics") {
    PrecedenceOrder prec(std::vector<std::pair<std::string, std::string>>{{"Sllet", "Slapp"}, {"Slapp", "SR"}, {"Slapp", "SRlll"}});
    CHECK(lpo_greater(U("Sllet", U("SR", X())), U("SR", U("Sllet", X())), prec));
    CHECK(lpo_greater(U("Slapp", U("SRlll", X())), U("SRlll", U("SRlll", X())), prec));
    CHECK_FALSE(lpo_greater(X(), X(), prec)); // irreflexive
    CHECK(lpo_greater(U("SR", X()), X(), prec));
    CHECK_FALSE(lpo_greater(X(), U("SR", X()), prec));
}

TEST_CASE("lpo and kbo are irreflexive and transitive on sampled terms") {
    PrecedenceOrder prec(std::vector<std::pair<std::string, std::string>>{{"f", "g"}, {"g", "h"}});
    KboWeights w;
    w.weight = {{"f", 2}, {"g", 1}, {"h", 1}};
    std::set<std::string> syms = {"f", "g", "h"};
    std::vector<TrsTerm> terms = {
        X(), U("f", X()), U("g", X()), U("h", X()), U("f", U("g", X())), U("g", U("f", X())),
        U("h", U("h", X())), U("f", U("f", X()))};
    for (auto& a : terms) {
        CHECK_FALSE(lpo_greater(a, a, prec));
        CHECK_FALSE(kbo_greater(a, a, w, prec, syms));
        for (auto& b : terms)
            for (auto& c : terms) {
                if (lpo_greater(a, b, prec) && lpo_greater(b, c, prec))
                    CHECK(lpo_greater(a, c, prec));
                if (kbo_greater(a, b, w, prec, syms) && kbo_greater(b, c, w, prec, syms))
                    CHECK(kbo_greater(a, c, w, prec, syms));
            }
    }
}

TEST_CASE("builtin systems have the figure rule counts") {
    CHECK(builtin_trs(TrsSystem::lll_r1).rules.size() == 5);
    CHECK(builtin_trs(TrsSystem::lll_r2).rules.size() == 12);
    CHECK(builtin_trs(TrsSystem::cp_r1).rules.size() == 7);
    CHECK(builtin_trs(TrsSystem::cp_r2).rules.size() == 9);
    CHECK(builtin_trs(TrsSystem::cpx_r).rules.size() == 3);
    CHECK(builtin_trs(TrsSystem::gc_ucp_r1).rules.size() == 9);
    CHECK(builtin_trs(TrsSystem::gc_ucp_r2).rules.size() == 30);
}

TEST_CASE("termination certificates hold with the published parameters") {
    for (auto s : {TrsSystem::lll_r1, TrsSystem::lll_r2, TrsSystem::cp_r1, TrsSystem::cp_r2,
                   TrsSystem::cpx_r}) {
        TerminationCheck c = verify_termination_claim(s);
        CAPTURE(to_string(s));
        CHECK(c.holds);
        for (auto& r : c.rules) {
            CAPTURE(r.rule);
            CHECK_FALSE(r.oriented_by.empty());
        }
    }
}

TEST_CASE("gc-ucp systems are emit-only") {
    CHECK_THROWS_AS(verify_termination_claim(TrsSystem::gc_ucp_r1), std::invalid_argument);
    CHECK_THROWS_AS(verify_termination_claim(TrsSystem::gc_ucp_r2), std::invalid_argument);
}

TEST_CASE("emission format") {
    std::string lll1 = emit_trs(TrsSystem::lll_r1);
    CHECK(lll1.substr(0, 8) == "(VAR x)\n");
    CHECK(lll1.find("Slll(SRlll(x)) -> x") != std::string::npos);
    std::string ug1 = emit_trs(TrsSystem::gc_ucp_r1);
    CHECK(ug1.substr(0, 10) == "(VAR k x)\n");
    CHECK(ug1.find("Sug(SRlll(x)) -> W(k,x)") != std::string::npos);
    CHECK(emit_trs(TrsSystem::cp_r1).find("Scp(SR(x)) -> SR(Scp(Scp(x)))") != std::string::npos);
}

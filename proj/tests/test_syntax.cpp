#include "doctest.h"

#include "probneed/parser.hpp"
#include "probneed/syntax.hpp"

using namespace probneed;

namespace {
ExprPtr P(const std::string& s) { return parse_expr(s); }
ExprPtr PX(const std::string& s) { return parse_expr(s, CtorTable::defaults(), true); }
} // namespace

TEST_CASE("free_vars") {
    CHECK(free_vars(P("\\x.x")).empty());
    CHECK(free_vars(P("let x = y in x")) == std::set<VarName>{{"y"}});
    CHECK(free_vars(P("let x = x in x")).empty());
    CHECK(free_vars(P("\\x.y z")) == std::set<VarName>{{"y"}, {"z"}});
    CHECK(free_vars(PX("case xs of {Nil -> n; Cons h t -> h r}")) ==
          std::set<VarName>{{"xs"}, {"n"}, {"r"}});
}

TEST_CASE("alpha_equiv basics") {
    CHECK(alpha_equiv(P("\\x.x"), P("\\y.y")));
    CHECK_FALSE(alpha_equiv(P("\\x.\\y.x"), P("\\x.\\y.y")));
    CHECK(alpha_equiv(P("\\x.\\y.x"), P("\\a.\\b.a")));
    CHECK_FALSE(alpha_equiv(P("x"), P("y")));
    CHECK(alpha_equiv(P("x"), P("x")));
}

TEST_CASE("alpha_equiv treats environments as multisets") {
    CHECK(alpha_equiv(P("let a=K, b=K2 in a"), P("let b=K2, a=K in a")));
    CHECK(alpha_equiv(P("let a=K, b=K2 in a"), P("let u=K2, t=K in t")));
    CHECK_FALSE(alpha_equiv(P("let a=K, b=K2 in a"), P("let a=K, b=K2 in b")));
    // mutually recursive bindings
    CHECK(alpha_equiv(P("let p=q, q=p in p"), P("let u=v, v=u in u")));
    CHECK_FALSE(alpha_equiv(P("let p=q, q=p in p"), P("let u=v, v=v in u")));
}

TEST_CASE("freshen establishes the distinct variable convention") {
    ExprPtr e = P("\\x.\\x.x");
    ExprPtr f = freshen(e, {});
    CHECK(print_expr(f) == "\\x.\\x#1.x#1");
    CHECK(alpha_equiv(e, f));

    // idempotent on already distinctly named closed terms
    ExprPtr g = P("\\a.\\b.a b");
    CHECK(print_expr(freshen(g, {})) == print_expr(g));

    // avoid-set collision
    CHECK(print_expr(freshen(P("\\x.y"), {VarName{"x"}})) == "\\x#1.y");
}

TEST_CASE("substitute") {
    VarName x{"x"};
    CHECK(alpha_equiv(substitute(P("x"), x, P("K")), P("K")));
    CHECK(print_expr(substitute(P("\\x.x"), x, P("K"))) == "\\x.x");
    // capture avoidance: \y.x [y/x] forces a rename of the binder
    ExprPtr r = substitute(P("\\y.x"), x, P("y"));
    CHECK(print_expr(r) == "\\y#1.y");
    CHECK(free_vars(r) == std::set<VarName>{{"y"}});
}

TEST_CASE("substitute free_vars identity") {
    VarName x{"x"};
    ExprPtr e = P("let u = x q in u x");
    ExprPtr t = P("w (\\z.z)");
    auto fv = free_vars(substitute(e, x, t));
    std::set<VarName> expected = free_vars(e);
    expected.erase(x);
    for (auto& v : free_vars(t)) expected.insert(v);
    CHECK(fv == expected);
}

TEST_CASE("positions and replace") {
    ExprPtr e = P("let x=K in x y");
    auto ps = all_positions(e);
    CHECK(ps.size() == node_count(e));
    Position body{sel_let_body()};
    auto sub = subexpr_at(e, body);
    REQUIRE(sub.has_value());
    CHECK(print_expr(*sub) == "x y");
    ExprPtr e2 = replace_at(e, body, P("z"));
    CHECK(print_expr(e2) == "let x=\\x.\\y.x in z");
}

TEST_CASE("classify_position") {
    // hole in the function position of a top-level application: A,R,S,C
    ExprPtr e = P("(\\x.x) K");
    auto c = classify_position(e, {sel_child(0)});
    CHECK(c.app);
    CHECK(c.reduction);
    CHECK(c.surface);
    CHECK(c.ctx);

    // hole in a lambda body: only C
    auto c2 = classify_position(P("\\x.x"), {sel_child(0)});
    CHECK_FALSE(c2.app);
    CHECK_FALSE(c2.reduction);
    CHECK_FALSE(c2.surface);
    CHECK(c2.ctx);

    // let x=[.] in x : R,S,C but not A
    ExprPtr e3 = P("let x=K in x");
    auto c3 = classify_position(e3, {sel_let_binding({"x"})});
    CHECK_FALSE(c3.app);
    CHECK(c3.reduction);
    CHECK(c3.surface);
    CHECK(c3.ctx);

    // a binding that is not needed is not a reduction position
    ExprPtr e4 = P("let x=K, z=K2 in x");
    auto c4 = classify_position(e4, {sel_let_binding({"z"})});
    CHECK_FALSE(c4.reduction);
    CHECK(c4.surface);

    // needed chain through an application spine
    ExprPtr e5 = P("let x = y K, y = K2 in x id");
    auto c5 = classify_position(e5, {sel_let_binding({"y"})});
    CHECK(c5.reduction);

    // argument positions are surface but not reduction
    auto c6 = classify_position(P("x y"), {sel_child(1)});
    CHECK_FALSE(c6.app);
    CHECK_FALSE(c6.reduction);
    CHECK(c6.surface);
}

TEST_CASE("classification inclusion chain on all positions") {
    for (const char* s :
         {"let x = y K, y = \\q.q in x id", "(\\x.x x) (K <+> K2)", "let a=b, b=K in a (\\w.a)"}) {
        ExprPtr e = P(s);
        for (auto& p : all_positions(e)) {
            auto c = classify_position(e, p);
            CHECK(c.ctx);
            if (c.app) CHECK(c.reduction);
            if (c.reduction) CHECK(c.surface);
            if (c.surface) CHECK(c.ctx);
        }
    }
}

TEST_CASE("alpha invariance of freshen") {
    for (const char* s : {"\\x.\\x.x x", "let a=a, b=\\q.a in b a", "(\\x.x) ((\\x.x) K)"}) {
        ExprPtr e = P(s);
        CHECK(alpha_equiv(e, freshen(e, {})));
    }
}

TEST_CASE("constructor table") {
    auto t = CtorTable::defaults();
    REQUIRE(t.lookup("Cons"));
    CHECK(t.lookup("Cons")->arity == 2);
    CHECK(t.lookup("Cons")->type == "List");
    CHECK(t.lookup("Nope") == nullptr);

    auto t2 = CtorTable::parse_text("Maybe: Nothing/0 Just/1\n-- comment\nUnit: MkUnit/0\n");
    REQUIRE(t2.lookup("Just"));
    CHECK(t2.lookup("Just")->arity == 1);
    CHECK(t2.type_names() == std::vector<std::string>{"Maybe", "Unit"});
}

TEST_CASE("wellformedness of extended terms") {
    CHECK_THROWS_AS(PX("Cons x"), ParseError);                    // unsaturated
    CHECK_THROWS_AS(PX("case True of {True -> a}"), ParseError);  // missing alternative
    CHECK_NOTHROW(PX("case True of {True -> a; False -> b}"));
    CHECK_NOTHROW(PX("Cons (\\x.x) Nil"));
}

#include "doctest.h"

#include "probneed/parser.hpp"

using namespace probneed;

TEST_CASE("parse basics") {
    CHECK(print_expr(parse_expr("\\x.x")) == "\\x.x");
    CHECK(print_expr(parse_expr("\\x y. x y")) == "\\x.\\y.x y");
    CHECK(print_expr(parse_expr("f a b")) == "f a b");
    CHECK(print_expr(parse_expr("f (a b)")) == "f (a b)");
    CHECK(print_expr(parse_expr("let x=K, y=K2 in x y")) ==
          "let x=\\x.\\y.x, y=\\x.\\y.y in x y");
    CHECK(print_expr(parse_expr("a <+> b")) == "a <+> b");
    CHECK(print_expr(parse_expr("a <+> (b <+> c)")) == "a <+> (b <+> c)");
    CHECK(print_expr(parse_expr("x#3 y")) == "x#3 y");
}

TEST_CASE("choice is not associative") {
    CHECK_THROWS_AS(parse_expr("a <+> b <+> c"), ParseError);
}

TEST_CASE("shorthands") {
    CHECK(alpha_equiv(parse_expr("id"), combinator_id()));
    CHECK(alpha_equiv(parse_expr("K"), combinator_k()));
    CHECK(alpha_equiv(parse_expr("K2"), combinator_k2()));
    CHECK(alpha_equiv(parse_expr("Bot"), combinator_bot()));
    CHECK(alpha_equiv(parse_expr("Omega"), combinator_omega()));
    CHECK_THROWS_AS(parse_expr("\\id.id"), ParseError);
}

TEST_CASE("comments and errors") {
    CHECK(print_expr(parse_expr("-- hello\nx -- trailing\n")) == "x");
    CHECK_THROWS_AS(parse_expr("(x"), ParseError);
    CHECK_THROWS_AS(parse_expr("let x = in x"), ParseError);
    CHECK_THROWS_AS(parse_expr("let x=K, x=K2 in x"), ParseError);
    CHECK_THROWS_AS(parse_expr("case True of {True -> a; False -> b}"), ParseError); // core mode
    try {
        parse_expr("f )");
        CHECK(false);
    } catch (const ParseError& pe) {
        CHECK(pe.line == 1);
        CHECK(pe.column == 3);
    }
}

TEST_CASE("extended syntax") {
    auto t = CtorTable::defaults();
    CHECK(print_expr(parse_expr("Cons x (Cons y Nil)", t, true)) == "Cons x (Cons y Nil)");
    CHECK(print_expr(parse_expr("seq x y", t, true)) == "seq x y");
    CHECK(print_expr(parse_expr("seq x y z", t, true)) == "seq x y z");
    CHECK(print_expr(parse_expr("case b of {True -> x; False -> y}", t, true)) ==
          "case b of {True -> x; False -> y}");
    CHECK(print_expr(parse_expr("(Cons a b) c", t, true)) == "Cons a b c");
}

TEST_CASE("hole token") {
    ExprPtr h = parse_expr("[.] id Bot");
    CHECK(print_expr(h).substr(0, 3) == "[.]");
}

TEST_CASE("round trip") {
    auto t = CtorTable::defaults();
    for (const char* s : {
             "\\x.x", "let x=K in x x", "(a <+> b) c", "a (b <+> c)",
             "let x=a <+> b, y=\\q.q q in x y id",
             "\\f.\\x.f (f x)", "let o=Omega in o",
         }) {
        ExprPtr e = parse_expr(s);
        CHECK(alpha_equiv(parse_expr(print_expr(e)), e));
    }
    for (const char* s : {
             "case xs of {Nil -> a; Cons h t -> h (f t)}",
             "seq (Pair a b) (case p of {Pair l r -> l})",
             "Cons (a <+> b) Nil",
         }) {
        ExprPtr e = parse_expr(s, t, true);
        CHECK(alpha_equiv(parse_expr(print_expr(e), t, true), e));
    }
}

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace probneed {

// Variable names carry a freshness counter so renaming is deterministic.
// Printed as "base" when index is 0, otherwise "base#index".
struct VarName {
    std::string base;
    std::uint32_t index = 0;

    auto operator<=>(const VarName&) const = default;
    std::string str() const;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Var {
    VarName name;
};
struct Lam {
    VarName binder;
    ExprPtr body;
};
struct App {
    ExprPtr fun;
    ExprPtr arg;
};
// Binary fair choice between the two subexpressions.
struct Choice {
    ExprPtr left;
    ExprPtr right;
};
struct Binding {
    VarName name;
    ExprPtr rhs;
};
// Recursive let. Bindings are a multiset: order is kept for printing but is
// irrelevant for equality; all names scope over every rhs and the body.
struct Let {
    std::vector<Binding> env;
    ExprPtr body;
};
// Saturated constructor application (argument count == declared arity).
struct CtorApp {
    std::string ctor;
    std::vector<ExprPtr> args;
};
struct Alt {
    std::string ctor;
    std::vector<VarName> binders;
    ExprPtr body;
};
// Case with exactly one alternative per constructor of the scrutinee's type.
struct Case {
    std::string type_name;
    ExprPtr scrut;
    std::vector<Alt> alts;
};
struct Seq {
    ExprPtr first;
    ExprPtr second;
};

class Expr {
  public:
    using Node = std::variant<Var, Lam, App, Choice, Let, CtorApp, Case, Seq>;
    Node node;

    explicit Expr(Node n) : node(std::move(n)) {}

    template <class T> const T* get_if() const { return std::get_if<T>(&node); }
    template <class T> bool is() const { return std::holds_alternative<T>(node); }
};

ExprPtr mk_var(VarName v);
ExprPtr mk_var(std::string base, std::uint32_t index = 0);
ExprPtr mk_lam(VarName binder, ExprPtr body);
ExprPtr mk_app(ExprPtr fun, ExprPtr arg);
ExprPtr mk_choice(ExprPtr left, ExprPtr right);
ExprPtr mk_let(std::vector<Binding> env, ExprPtr body);
ExprPtr mk_ctor(std::string ctor, std::vector<ExprPtr> args);
ExprPtr mk_case(std::string type_name, ExprPtr scrut, std::vector<Alt> alts);
ExprPtr mk_seq(ExprPtr first, ExprPtr second);

// Closed combinators used throughout: id, K, K2, omega, Omega, Bot.
ExprPtr combinator_id();
ExprPtr combinator_k();
ExprPtr combinator_k2();
ExprPtr combinator_omega_fn();   // \x.(x x)
ExprPtr combinator_omega();      // (\x.x x) (\x.x x)
ExprPtr combinator_bot();        // let x=x in x

// ---------------------------------------------------------------------------
// Positions

struct Selector {
    enum class Tag { kChild, kLetBody, kLetBinding };
    Tag tag = Tag::kChild;
    int child = 0;    // kChild: index into the node's subexpression list
    VarName name{};   // kLetBinding: the bound name

    bool operator==(const Selector&) const = default;
};
using Position = std::vector<Selector>;

Selector sel_child(int i);
Selector sel_let_body();
Selector sel_let_binding(VarName name);

// Number of direct subexpression children for kChild addressing.
// Lam: body=0. App: fun=0, arg=1. Choice: left=0, right=1.
// CtorApp: arg i. Case: scrut=0, alt i body=1+i. Seq: first=0, second=1.
std::optional<ExprPtr> subexpr_at(const ExprPtr& e, const Position& p);
ExprPtr replace_at(const ExprPtr& e, const Position& p, const ExprPtr& replacement);

// All positions of e in preorder (the empty position comes first).
std::vector<Position> all_positions(const ExprPtr& e);

std::size_t node_count(const ExprPtr& e);
bool uses_extended_syntax(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Binding discipline

std::set<VarName> free_vars(const ExprPtr& e);
// Every name occurring anywhere: free, bound, and binder occurrences.
std::set<VarName> all_names(const ExprPtr& e);

bool alpha_equiv(const ExprPtr& a, const ExprPtr& b);

// Alpha-renames so that binders are pairwise distinct and disjoint from
// `avoid` and from the free variables. Deterministic: a colliding binder
// gets the smallest unused index for its base name.
ExprPtr freshen(const ExprPtr& e, const std::set<VarName>& avoid);

// Capture-free substitution of freshly renamed copies of t for the free
// occurrences of x.
ExprPtr substitute(const ExprPtr& e, const VarName& x, const ExprPtr& t);

// ---------------------------------------------------------------------------
// Context classification

struct ContextClassSet {
    bool app = false;      // A
    bool reduction = false;// R
    bool surface = false;  // S
    bool ctx = false;      // C

    bool operator==(const ContextClassSet&) const = default;
};

enum class ContextClass { A, R, S, C };

// Classifies the context obtained by putting a hole at p. The inclusion
// chain A <= R <= S <= C always holds for the result.
ContextClassSet classify_position(const ExprPtr& e, const Position& p);
bool position_in_class(const ExprPtr& e, const Position& p, ContextClass cls);

// Binders of a top-level let reachable from the body through the needed
// chain (body spine head, then binding spine heads).
std::set<VarName> needed_binders(const Let& let);

// Descends the application spine: App.fun, Seq.first, Case.scrut.
const Expr* spine_head(const Expr* e);

// ---------------------------------------------------------------------------
// Constructor tables (extended calculus)

struct CtorInfo {
    std::string type;
    int arity = 0;
    int tag = 0; // position within the type's constructor list
};

class CtorTable {
  public:
    // Bool{False/0,True/0}, List{Nil/0,Cons/2}, Pair{Pair/2}
    static CtorTable defaults();
    static CtorTable from_file(const std::string& path);
    static CtorTable parse_text(const std::string& text);

    void add_type(const std::string& type, const std::vector<std::pair<std::string, int>>& ctors);
    const CtorInfo* lookup(const std::string& ctor) const;
    const std::vector<std::pair<std::string, int>>* ctors_of(const std::string& type) const;
    std::vector<std::string> type_names() const;

  private:
    std::vector<std::string> type_order_;
    std::map<std::string, std::vector<std::pair<std::string, int>>> types_;
    std::map<std::string, CtorInfo> ctors_;
};

// Validates saturation, alternative completeness and binder arity against
// the table; returns an error description or nullopt.
std::optional<std::string> check_wellformed(const ExprPtr& e, const CtorTable& table);

} // namespace probneed

#include "probneed/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace probneed {

std::string VarName::str() const {
    if (index == 0) return base;
    return base + "#" + std::to_string(index);
}

ExprPtr mk_var(VarName v) { return std::make_shared<Expr>(Expr::Node{Var{std::move(v)}}); }
ExprPtr mk_var(std::string base, std::uint32_t index) {
    return mk_var(VarName{std::move(base), index});
}
ExprPtr mk_lam(VarName binder, ExprPtr body) {
    return std::make_shared<Expr>(Expr::Node{Lam{std::move(binder), std::move(body)}});
}
ExprPtr mk_app(ExprPtr fun, ExprPtr arg) {
    return std::make_shared<Expr>(Expr::Node{App{std::move(fun), std::move(arg)}});
}
ExprPtr mk_choice(ExprPtr left, ExprPtr right) {
    return std::make_shared<Expr>(Expr::Node{Choice{std::move(left), std::move(right)}});
}
ExprPtr mk_let(std::vector<Binding> env, ExprPtr body) {
    assert(!env.empty());
    return std::make_shared<Expr>(Expr::Node{Let{std::move(env), std::move(body)}});
}
ExprPtr mk_ctor(std::string ctor, std::vector<ExprPtr> args) {
    return std::make_shared<Expr>(Expr::Node{CtorApp{std::move(ctor), std::move(args)}});
}
ExprPtr mk_case(std::string type_name, ExprPtr scrut, std::vector<Alt> alts) {
    return std::make_shared<Expr>(Expr::Node{Case{std::move(type_name), std::move(scrut), std::move(alts)}});
}
ExprPtr mk_seq(ExprPtr first, ExprPtr second) {
    return std::make_shared<Expr>(Expr::Node{Seq{std::move(first), std::move(second)}});
}

ExprPtr combinator_id() { return mk_lam({"x"}, mk_var("x")); }
ExprPtr combinator_k() { return mk_lam({"x"}, mk_lam({"y"}, mk_var("x"))); }
ExprPtr combinator_k2() { return mk_lam({"x"}, mk_lam({"y"}, mk_var("y"))); }
ExprPtr combinator_omega_fn() { return mk_lam({"x"}, mk_app(mk_var("x"), mk_var("x"))); }
ExprPtr combinator_omega() {
    return mk_app(mk_lam({"x"}, mk_app(mk_var("x"), mk_var("x"))),
                  mk_lam({VarName{"x", 1}}, mk_app(mk_var("x", 1), mk_var("x", 1))));
}
ExprPtr combinator_bot() {
    return mk_let({Binding{{"x"}, mk_var("x")}}, mk_var("x"));
}

Selector sel_child(int i) { return Selector{Selector::Tag::kChild, i, {}}; }
Selector sel_let_body() { return Selector{Selector::Tag::kLetBody, 0, {}}; }
Selector sel_let_binding(VarName name) { return Selector{Selector::Tag::kLetBinding, 0, std::move(name)}; }

namespace {

// Resolves one selector against a node; nullptr when invalid.
const ExprPtr* child_at(const Expr& e, const Selector& s) {
    switch (s.tag) {
    case Selector::Tag::kChild:
        if (auto* l = e.get_if<Lam>()) return s.child == 0 ? &l->body : nullptr;
        if (auto* a = e.get_if<App>()) return s.child == 0 ? &a->fun : s.child == 1 ? &a->arg : nullptr;
        if (auto* c = e.get_if<Choice>()) return s.child == 0 ? &c->left : s.child == 1 ? &c->right : nullptr;
        if (auto* k = e.get_if<CtorApp>())
            return (s.child >= 0 && s.child < (int)k->args.size()) ? &k->args[s.child] : nullptr;
        if (auto* cs = e.get_if<Case>()) {
            if (s.child == 0) return &cs->scrut;
            int i = s.child - 1;
            return (i >= 0 && i < (int)cs->alts.size()) ? &cs->alts[i].body : nullptr;
        }
        if (auto* sq = e.get_if<Seq>()) return s.child == 0 ? &sq->first : s.child == 1 ? &sq->second : nullptr;
        return nullptr;
    case Selector::Tag::kLetBody:
        if (auto* l = e.get_if<Let>()) return &l->body;
        return nullptr;
    case Selector::Tag::kLetBinding:
        if (auto* l = e.get_if<Let>()) {
            for (auto& b : l->env)
                if (b.name == s.name) return &b.rhs;
        }
        return nullptr;
    }
    return nullptr;
}

} // namespace

std::optional<ExprPtr> subexpr_at(const ExprPtr& e, const Position& p) {
    ExprPtr cur = e;
    for (auto& s : p) {
        const ExprPtr* next = child_at(*cur, s);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return cur;
}

ExprPtr replace_at(const ExprPtr& e, const Position& p, const ExprPtr& replacement) {
    if (p.empty()) return replacement;
    const Selector& s = p.front();
    Position rest(p.begin() + 1, p.end());
    Expr::Node n = e->node;
    const ExprPtr* slot = child_at(*e, s);
    if (!slot) throw std::invalid_argument("replace_at: invalid position");
    ExprPtr sub = replace_at(*slot, rest, replacement);

    if (auto* l = std::get_if<Lam>(&n)) { l->body = sub; }
    else if (auto* a = std::get_if<App>(&n)) { (s.child == 0 ? a->fun : a->arg) = sub; }
    else if (auto* c = std::get_if<Choice>(&n)) { (s.child == 0 ? c->left : c->right) = sub; }
    else if (auto* k = std::get_if<CtorApp>(&n)) { k->args[s.child] = sub; }
    else if (auto* cs = std::get_if<Case>(&n)) {
        if (s.child == 0) cs->scrut = sub; else cs->alts[s.child - 1].body = sub;
    }
    else if (auto* sq = std::get_if<Seq>(&n)) { (s.child == 0 ? sq->first : sq->second) = sub; }
    else if (auto* lt = std::get_if<Let>(&n)) {
        if (s.tag == Selector::Tag::kLetBody) lt->body = sub;
        else {
            for (auto& b : lt->env)
                if (b.name == s.name) { b.rhs = sub; break; }
        }
    }
    return std::make_shared<Expr>(std::move(n));
}

namespace {
void collect_positions(const ExprPtr& e, Position& cur, std::vector<Position>& out) {
    out.push_back(cur);
    auto descend = [&](Selector s, const ExprPtr& c) {
        cur.push_back(s);
        collect_positions(c, cur, out);
        cur.pop_back();
    };
    if (auto* l = e->get_if<Lam>()) descend(sel_child(0), l->body);
    else if (auto* a = e->get_if<App>()) { descend(sel_child(0), a->fun); descend(sel_child(1), a->arg); }
    else if (auto* c = e->get_if<Choice>()) { descend(sel_child(0), c->left); descend(sel_child(1), c->right); }
    else if (auto* k = e->get_if<CtorApp>()) {
        for (int i = 0; i < (int)k->args.size(); ++i) descend(sel_child(i), k->args[i]);
    } else if (auto* cs = e->get_if<Case>()) {
        descend(sel_child(0), cs->scrut);
        for (int i = 0; i < (int)cs->alts.size(); ++i) descend(sel_child(1 + i), cs->alts[i].body);
    } else if (auto* sq = e->get_if<Seq>()) {
        descend(sel_child(0), sq->first); descend(sel_child(1), sq->second);
    } else if (auto* lt = e->get_if<Let>()) {
        for (auto& b : lt->env) descend(sel_let_binding(b.name), b.rhs);
        descend(sel_let_body(), lt->body);
    }
}
} // namespace

std::vector<Position> all_positions(const ExprPtr& e) {
    std::vector<Position> out;
    Position cur;
    collect_positions(e, cur, out);
    return out;
}

std::size_t node_count(const ExprPtr& e) {
    std::size_t n = 1;
    if (auto* l = e->get_if<Lam>()) n += node_count(l->body);
    else if (auto* a = e->get_if<App>()) n += node_count(a->fun) + node_count(a->arg);
    else if (auto* c = e->get_if<Choice>()) n += node_count(c->left) + node_count(c->right);
    else if (auto* k = e->get_if<CtorApp>())
        for (auto& x : k->args) n += node_count(x);
    else if (auto* cs = e->get_if<Case>()) {
        n += node_count(cs->scrut);
        for (auto& alt : cs->alts) n += node_count(alt.body);
    } else if (auto* sq = e->get_if<Seq>()) n += node_count(sq->first) + node_count(sq->second);
    else if (auto* lt = e->get_if<Let>()) {
        for (auto& b : lt->env) n += node_count(b.rhs);
        n += node_count(lt->body);
    }
    return n;
}

bool uses_extended_syntax(const ExprPtr& e) {
    if (e->is<CtorApp>() || e->is<Case>() || e->is<Seq>()) return true;
    if (auto* l = e->get_if<Lam>()) return uses_extended_syntax(l->body);
    if (auto* a = e->get_if<App>()) return uses_extended_syntax(a->fun) || uses_extended_syntax(a->arg);
    if (auto* c = e->get_if<Choice>()) return uses_extended_syntax(c->left) || uses_extended_syntax(c->right);
    if (auto* lt = e->get_if<Let>()) {
        for (auto& b : lt->env)
            if (uses_extended_syntax(b.rhs)) return true;
        return uses_extended_syntax(lt->body);
    }
    return false;
}

// ---------------------------------------------------------------------------
// free_vars / all_names

namespace {
void free_vars_rec(const ExprPtr& e, std::set<VarName>& scope, std::set<VarName>& out) {
    if (auto* v = e->get_if<Var>()) {
        if (!scope.count(v->name)) out.insert(v->name);
    } else if (auto* l = e->get_if<Lam>()) {
        bool added = scope.insert(l->binder).second;
        free_vars_rec(l->body, scope, out);
        if (added) scope.erase(l->binder);
    } else if (auto* a = e->get_if<App>()) {
        free_vars_rec(a->fun, scope, out);
        free_vars_rec(a->arg, scope, out);
    } else if (auto* c = e->get_if<Choice>()) {
        free_vars_rec(c->left, scope, out);
        free_vars_rec(c->right, scope, out);
    } else if (auto* lt = e->get_if<Let>()) {
        std::vector<VarName> added;
        for (auto& b : lt->env)
            if (scope.insert(b.name).second) added.push_back(b.name);
        for (auto& b : lt->env) free_vars_rec(b.rhs, scope, out);
        free_vars_rec(lt->body, scope, out);
        for (auto& n : added) scope.erase(n);
    } else if (auto* k = e->get_if<CtorApp>()) {
        for (auto& x : k->args) free_vars_rec(x, scope, out);
    } else if (auto* cs = e->get_if<Case>()) {
        free_vars_rec(cs->scrut, scope, out);
        for (auto& alt : cs->alts) {
            std::vector<VarName> added;
            for (auto& b : alt.binders)
                if (scope.insert(b).second) added.push_back(b);
            free_vars_rec(alt.body, scope, out);
            for (auto& n : added) scope.erase(n);
        }
    } else if (auto* sq = e->get_if<Seq>()) {
        free_vars_rec(sq->first, scope, out);
        free_vars_rec(sq->second, scope, out);
    }
}

void all_names_rec(const ExprPtr& e, std::set<VarName>& out) {
    if (auto* v = e->get_if<Var>()) out.insert(v->name);
    else if (auto* l = e->get_if<Lam>()) { out.insert(l->binder); all_names_rec(l->body, out); }
    else if (auto* a = e->get_if<App>()) { all_names_rec(a->fun, out); all_names_rec(a->arg, out); }
    else if (auto* c = e->get_if<Choice>()) { all_names_rec(c->left, out); all_names_rec(c->right, out); }
    else if (auto* lt = e->get_if<Let>()) {
        for (auto& b : lt->env) { out.insert(b.name); all_names_rec(b.rhs, out); }
        all_names_rec(lt->body, out);
    } else if (auto* k = e->get_if<CtorApp>()) {
        for (auto& x : k->args) all_names_rec(x, out);
    } else if (auto* cs = e->get_if<Case>()) {
        all_names_rec(cs->scrut, out);
        for (auto& alt : cs->alts) {
            for (auto& b : alt.binders) out.insert(b);
            all_names_rec(alt.body, out);
        }
    } else if (auto* sq = e->get_if<Seq>()) {
        all_names_rec(sq->first, out); all_names_rec(sq->second, out);
    }
}
} // namespace

std::set<VarName> free_vars(const ExprPtr& e) {
    std::set<VarName> scope, out;
    free_vars_rec(e, scope, out);
    return out;
}

std::set<VarName> all_names(const ExprPtr& e) {
    std::set<VarName> out;
    all_names_rec(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// alpha equivalence

namespace {

// Shape of a term with every variable occurrence and binder erased; used to
// prune the binding-bijection search for let environments.
void skeleton_rec(const ExprPtr& e, std::string& out) {
    if (e->is<Var>()) out += 'v';
    else if (auto* l = e->get_if<Lam>()) { out += 'L'; skeleton_rec(l->body, out); }
    else if (auto* a = e->get_if<App>()) { out += '('; skeleton_rec(a->fun, out); skeleton_rec(a->arg, out); out += ')'; }
    else if (auto* c = e->get_if<Choice>()) { out += '+'; skeleton_rec(c->left, out); skeleton_rec(c->right, out); }
    else if (auto* k = e->get_if<CtorApp>()) {
        out += 'C'; out += k->ctor; out += '/';
        for (auto& x : k->args) skeleton_rec(x, out);
    } else if (auto* cs = e->get_if<Case>()) {
        out += 'M'; out += cs->type_name;
        skeleton_rec(cs->scrut, out);
        for (auto& alt : cs->alts) { out += ';'; out += alt.ctor; skeleton_rec(alt.body, out); }
    } else if (auto* sq = e->get_if<Seq>()) {
        out += 'S'; skeleton_rec(sq->first, out); skeleton_rec(sq->second, out);
    } else if (auto* lt = e->get_if<Let>()) {
        out += '{';
        std::vector<std::string> parts;
        for (auto& b : lt->env) { std::string s; skeleton_rec(b.rhs, s); parts.push_back(std::move(s)); }
        std::sort(parts.begin(), parts.end());
        for (auto& s : parts) { out += s; out += ','; }
        out += '}';
        skeleton_rec(lt->body, out);
    }
}

std::string skeleton(const ExprPtr& e) {
    std::string out;
    skeleton_rec(e, out);
    return out;
}

struct AlphaCtx {
    std::map<VarName, int> left, right;
    int next_id = 0;
};

bool alpha_rec(const ExprPtr& a, const ExprPtr& b, AlphaCtx& ctx);

bool alpha_env(const Let& la, const Let& lb, AlphaCtx& ctx) {
    const std::size_t n = la.env.size();
    if (lb.env.size() != n) return false;

    std::vector<std::string> skel_a(n), skel_b(n);
    for (std::size_t i = 0; i < n; ++i) skel_a[i] = skeleton(la.env[i].rhs);
    for (std::size_t i = 0; i < n; ++i) skel_b[i] = skeleton(lb.env[i].rhs);

    std::vector<int> match(n, -1);
    std::vector<bool> used(n, false);

    // Pick a full binder correspondence first (letrec binders scope over all
    // right-hand sides), then verify the bodies under the extended context.
    std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
        if (i == n) {
            AlphaCtx saved = ctx;
            for (std::size_t j = 0; j < n; ++j) {
                int id = ctx.next_id++;
                ctx.left[la.env[j].name] = id;
                ctx.right[lb.env[match[j]].name] = id;
            }
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j)
                ok = alpha_rec(la.env[j].rhs, lb.env[match[j]].rhs, ctx);
            if (ok) ok = alpha_rec(la.body, lb.body, ctx);
            if (!ok) ctx = saved;
            return ok;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || skel_a[i] != skel_b[j]) continue;
            used[j] = true;
            match[i] = (int)j;
            if (assign(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return assign(0);
}

bool alpha_rec(const ExprPtr& a, const ExprPtr& b, AlphaCtx& ctx) {
    if (a->node.index() != b->node.index()) return false;
    if (auto* va = a->get_if<Var>()) {
        auto* vb = b->get_if<Var>();
        auto ia = ctx.left.find(va->name);
        auto ib = ctx.right.find(vb->name);
        if (ia == ctx.left.end() && ib == ctx.right.end()) return va->name == vb->name;
        if (ia == ctx.left.end() || ib == ctx.right.end()) return false;
        return ia->second == ib->second;
    }
    if (auto* la = a->get_if<Lam>()) {
        auto* lb = b->get_if<Lam>();
        AlphaCtx saved = ctx;
        int id = ctx.next_id++;
        ctx.left[la->binder] = id;
        ctx.right[lb->binder] = id;
        bool ok = alpha_rec(la->body, lb->body, ctx);
        ctx = saved;
        return ok;
    }
    if (auto* aa = a->get_if<App>()) {
        auto* ab = b->get_if<App>();
        return alpha_rec(aa->fun, ab->fun, ctx) && alpha_rec(aa->arg, ab->arg, ctx);
    }
    if (auto* ca = a->get_if<Choice>()) {
        auto* cb = b->get_if<Choice>();
        return alpha_rec(ca->left, cb->left, ctx) && alpha_rec(ca->right, cb->right, ctx);
    }
    if (auto* la = a->get_if<Let>()) {
        auto* lb = b->get_if<Let>();
        AlphaCtx saved = ctx;
        bool ok = alpha_env(*la, *lb, ctx);
        ctx = saved;
        return ok;
    }
    if (auto* ka = a->get_if<CtorApp>()) {
        auto* kb = b->get_if<CtorApp>();
        if (ka->ctor != kb->ctor || ka->args.size() != kb->args.size()) return false;
        for (std::size_t i = 0; i < ka->args.size(); ++i)
            if (!alpha_rec(ka->args[i], kb->args[i], ctx)) return false;
        return true;
    }
    if (auto* csa = a->get_if<Case>()) {
        auto* csb = b->get_if<Case>();
        if (csa->type_name != csb->type_name || csa->alts.size() != csb->alts.size()) return false;
        if (!alpha_rec(csa->scrut, csb->scrut, ctx)) return false;
        // Alternatives correspond by constructor, not by order.
        for (auto& alt_a : csa->alts) {
            const Alt* alt_b = nullptr;
            for (auto& cand : csb->alts)
                if (cand.ctor == alt_a.ctor) { alt_b = &cand; break; }
            if (!alt_b || alt_b->binders.size() != alt_a.binders.size()) return false;
            AlphaCtx saved = ctx;
            for (std::size_t i = 0; i < alt_a.binders.size(); ++i) {
                int id = ctx.next_id++;
                ctx.left[alt_a.binders[i]] = id;
                ctx.right[alt_b->binders[i]] = id;
            }
            bool ok = alpha_rec(alt_a.body, alt_b->body, ctx);
            ctx = saved;
            if (!ok) return false;
        }
        return true;
    }
    auto* sa = a->get_if<Seq>();
    auto* sb = b->get_if<Seq>();
    return alpha_rec(sa->first, sb->first, ctx) && alpha_rec(sa->second, sb->second, ctx);
}

} // namespace

bool alpha_equiv(const ExprPtr& a, const ExprPtr& b) {
    AlphaCtx ctx;
    return alpha_rec(a, b, ctx);
}

// ---------------------------------------------------------------------------
// freshen

namespace {

VarName pick_fresh(const VarName& want, std::set<VarName>& used) {
    if (!used.count(want)) {
        used.insert(want);
        return want;
    }
    for (std::uint32_t i = 0;; ++i) {
        VarName cand{want.base, i};
        if (!used.count(cand)) {
            used.insert(cand);
            return cand;
        }
    }
}

ExprPtr freshen_rec(const ExprPtr& e, std::map<VarName, VarName> ren, std::set<VarName>& used) {
    if (auto* v = e->get_if<Var>()) {
        auto it = ren.find(v->name);
        return it == ren.end() ? e : mk_var(it->second);
    }
    if (auto* l = e->get_if<Lam>()) {
        VarName nb = pick_fresh(l->binder, used);
        auto r2 = ren;
        r2[l->binder] = nb;
        return mk_lam(nb, freshen_rec(l->body, std::move(r2), used));
    }
    if (auto* a = e->get_if<App>()) {
        ExprPtr fun = freshen_rec(a->fun, ren, used);
        ExprPtr arg = freshen_rec(a->arg, ren, used);
        return mk_app(std::move(fun), std::move(arg));
    }
    if (auto* c = e->get_if<Choice>()) {
        ExprPtr left = freshen_rec(c->left, ren, used);
        ExprPtr right = freshen_rec(c->right, ren, used);
        return mk_choice(std::move(left), std::move(right));
    }
    if (auto* lt = e->get_if<Let>()) {
        auto r2 = ren;
        std::vector<Binding> env;
        env.reserve(lt->env.size());
        for (auto& b : lt->env) r2[b.name] = pick_fresh(b.name, used);
        for (auto& b : lt->env) env.push_back({r2.at(b.name), {}});
        for (std::size_t i = 0; i < env.size(); ++i)
            env[i].rhs = freshen_rec(lt->env[i].rhs, r2, used);
        return mk_let(std::move(env), freshen_rec(lt->body, std::move(r2), used));
    }
    if (auto* k = e->get_if<CtorApp>()) {
        std::vector<ExprPtr> args;
        args.reserve(k->args.size());
        for (auto& x : k->args) args.push_back(freshen_rec(x, ren, used));
        return mk_ctor(k->ctor, std::move(args));
    }
    if (auto* cs = e->get_if<Case>()) {
        std::vector<Alt> alts;
        alts.reserve(cs->alts.size());
        ExprPtr scrut = freshen_rec(cs->scrut, ren, used);
        for (auto& alt : cs->alts) {
            auto r2 = ren;
            std::vector<VarName> bs;
            bs.reserve(alt.binders.size());
            for (auto& b : alt.binders) {
                VarName nb = pick_fresh(b, used);
                r2[b] = nb;
                bs.push_back(nb);
            }
            alts.push_back({alt.ctor, std::move(bs), freshen_rec(alt.body, std::move(r2), used)});
        }
        return mk_case(cs->type_name, std::move(scrut), std::move(alts));
    }
    auto* sq = e->get_if<Seq>();
    ExprPtr first = freshen_rec(sq->first, ren, used);
    ExprPtr second = freshen_rec(sq->second, ren, used);
    return mk_seq(std::move(first), std::move(second));
}

} // namespace

ExprPtr freshen(const ExprPtr& e, const std::set<VarName>& avoid) {
    std::set<VarName> used = avoid;
    for (auto& v : free_vars(e)) used.insert(v);
    return freshen_rec(e, {}, used);
}

// ---------------------------------------------------------------------------
// substitution

namespace {

struct SubstCtx {
    VarName x;
    ExprPtr t;
    std::set<VarName> fv_t;
    std::set<VarName> used; // grows as fresh copies are made
};

ExprPtr subst_rec(const ExprPtr& e, std::map<VarName, VarName> ren, bool shadowed, SubstCtx& sc) {
    if (auto* v = e->get_if<Var>()) {
        auto it = ren.find(v->name);
        if (it != ren.end()) return mk_var(it->second);
        if (!shadowed && v->name == sc.x) {
            ExprPtr copy = freshen_rec(sc.t, {}, sc.used);
            return copy;
        }
        return e;
    }
    auto bind_one = [&](const VarName& b, std::map<VarName, VarName>& r2, bool& sh2) {
        if (b == sc.x) sh2 = true;
        else if (sc.fv_t.count(b) && !sh2) {
            // A binder that would capture the replacement's free variables is
            // renamed (only relevant when x occurs below it).
            r2[b] = pick_fresh(b, sc.used);
        }
    };
    if (auto* l = e->get_if<Lam>()) {
        auto r2 = ren;
        bool sh2 = shadowed;
        bind_one(l->binder, r2, sh2);
        VarName nb = r2.count(l->binder) ? r2.at(l->binder) : l->binder;
        return mk_lam(nb, subst_rec(l->body, std::move(r2), sh2, sc));
    }
    if (auto* a = e->get_if<App>()) {
        ExprPtr fun = subst_rec(a->fun, ren, shadowed, sc);
        ExprPtr arg = subst_rec(a->arg, ren, shadowed, sc);
        return mk_app(std::move(fun), std::move(arg));
    }
    if (auto* c = e->get_if<Choice>()) {
        ExprPtr left = subst_rec(c->left, ren, shadowed, sc);
        ExprPtr right = subst_rec(c->right, ren, shadowed, sc);
        return mk_choice(std::move(left), std::move(right));
    }
    if (auto* lt = e->get_if<Let>()) {
        auto r2 = ren;
        bool sh2 = shadowed;
        for (auto& b : lt->env) bind_one(b.name, r2, sh2);
        std::vector<Binding> env;
        env.reserve(lt->env.size());
        for (auto& b : lt->env) {
            VarName nb = r2.count(b.name) ? r2.at(b.name) : b.name;
            env.push_back({nb, subst_rec(b.rhs, r2, sh2, sc)});
        }
        return mk_let(std::move(env), subst_rec(lt->body, std::move(r2), sh2, sc));
    }
    if (auto* k = e->get_if<CtorApp>()) {
        std::vector<ExprPtr> args;
        args.reserve(k->args.size());
        for (auto& x : k->args) args.push_back(subst_rec(x, ren, shadowed, sc));
        return mk_ctor(k->ctor, std::move(args));
    }
    if (auto* cs = e->get_if<Case>()) {
        ExprPtr scrut = subst_rec(cs->scrut, ren, shadowed, sc);
        std::vector<Alt> alts;
        alts.reserve(cs->alts.size());
        for (auto& alt : cs->alts) {
            auto r2 = ren;
            bool sh2 = shadowed;
            for (auto& b : alt.binders) bind_one(b, r2, sh2);
            std::vector<VarName> bs;
            for (auto& b : alt.binders) bs.push_back(r2.count(b) ? r2.at(b) : b);
            alts.push_back({alt.ctor, std::move(bs), subst_rec(alt.body, std::move(r2), sh2, sc)});
        }
        return mk_case(cs->type_name, std::move(scrut), std::move(alts));
    }
    auto* sq = e->get_if<Seq>();
    ExprPtr first = subst_rec(sq->first, ren, shadowed, sc);
    ExprPtr second = subst_rec(sq->second, ren, shadowed, sc);
    return mk_seq(std::move(first), std::move(second));
}

} // namespace

ExprPtr substitute(const ExprPtr& e, const VarName& x, const ExprPtr& t) {
    SubstCtx sc{x, t, free_vars(t), {}};
    sc.used = all_names(e);
    for (auto& n : all_names(t)) sc.used.insert(n);
    return subst_rec(e, {}, false, sc);
}

// ---------------------------------------------------------------------------
// context classification

const Expr* spine_head(const Expr* e) {
    for (;;) {
        if (auto* a = e->get_if<App>()) e = a->fun.get();
        else if (auto* sq = e->get_if<Seq>()) e = sq->first.get();
        else if (auto* cs = e->get_if<Case>()) e = cs->scrut.get();
        else return e;
    }
}

std::set<VarName> needed_binders(const Let& let) {
    std::map<VarName, ExprPtr> env;
    for (auto& b : let.env) env[b.name] = b.rhs;
    std::set<VarName> out;
    const Expr* h = spine_head(let.body.get());
    while (auto* v = h->get_if<Var>()) {
        auto it = env.find(v->name);
        if (it == env.end() || out.count(v->name)) break;
        out.insert(v->name);
        h = spine_head(it->second.get());
    }
    return out;
}

namespace {

// A position is an application-context path if every step descends into the
// function position of an application (or the scrutinee/first argument of
// case/seq in the extended syntax).
bool is_app_path(const ExprPtr& e, const Position& p, std::size_t from) {
    ExprPtr cur = e;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i >= from) {
            const Selector& s = p[i];
            bool ok = s.tag == Selector::Tag::kChild && s.child == 0 &&
                      (cur->is<App>() || cur->is<Seq>() || cur->is<Case>());
            if (!ok) return false;
        }
        cur = *child_at(*cur, p[i]);
    }
    return true;
}

} // namespace

ContextClassSet classify_position(const ExprPtr& e, const Position& p) {
    if (!subexpr_at(e, p)) throw std::invalid_argument("classify_position: invalid position");
    ContextClassSet out;
    out.ctx = true;

    // surface: the path never enters a lambda body
    bool under_lam = false;
    {
        ExprPtr cur = e;
        for (auto& s : p) {
            if (cur->is<Lam>() && s.tag == Selector::Tag::kChild) under_lam = true;
            cur = *child_at(*cur, s);
        }
    }
    out.surface = !under_lam;

    out.app = is_app_path(e, p, 0);
    out.reduction = out.app;
    if (!out.reduction) {
        if (auto* lt = e->get_if<Let>()) {
            if (!p.empty() && p.front().tag == Selector::Tag::kLetBody) {
                out.reduction = is_app_path(e, p, 1);
            } else if (!p.empty() && p.front().tag == Selector::Tag::kLetBinding) {
                if (needed_binders(*lt).count(p.front().name))
                    out.reduction = is_app_path(e, p, 1);
            }
        }
    }
    if (out.reduction) out.surface = true; // inclusion chain (R-paths never cross a lambda)
    return out;
}

bool position_in_class(const ExprPtr& e, const Position& p, ContextClass cls) {
    auto cs = classify_position(e, p);
    switch (cls) {
    case ContextClass::A: return cs.app;
    case ContextClass::R: return cs.reduction;
    case ContextClass::S: return cs.surface;
    case ContextClass::C: return cs.ctx;
    }
    return false;
}

// ---------------------------------------------------------------------------
// constructor tables

CtorTable CtorTable::defaults() {
    CtorTable t;
    t.add_type("Bool", {{"False", 0}, {"True", 0}});
    t.add_type("List", {{"Nil", 0}, {"Cons", 2}});
    t.add_type("Pair", {{"Pair", 2}});
    return t;
}

void CtorTable::add_type(const std::string& type, const std::vector<std::pair<std::string, int>>& ctors) {
    if (types_.count(type)) throw std::invalid_argument("duplicate type: " + type);
    types_[type] = ctors;
    type_order_.push_back(type);
    int tag = 0;
    for (auto& [name, arity] : ctors) {
        if (ctors_.count(name)) throw std::invalid_argument("duplicate constructor: " + name);
        ctors_[name] = CtorInfo{type, arity, tag++};
    }
}

const CtorInfo* CtorTable::lookup(const std::string& ctor) const {
    auto it = ctors_.find(ctor);
    return it == ctors_.end() ? nullptr : &it->second;
}

const std::vector<std::pair<std::string, int>>* CtorTable::ctors_of(const std::string& type) const {
    auto it = types_.find(type);
    return it == types_.end() ? nullptr : &it->second;
}

std::vector<std::string> CtorTable::type_names() const { return type_order_; }

CtorTable CtorTable::parse_text(const std::string& text) {
    CtorTable t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find("--");
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head.back() != ':') throw std::invalid_argument("constructor table: expected 'Type:' in: " + line);
        head.pop_back();
        std::vector<std::pair<std::string, int>> ctors;
        std::string item;
        while (ls >> item) {
            auto slash = item.find('/');
            if (slash == std::string::npos)
                throw std::invalid_argument("constructor table: expected Name/arity, got: " + item);
            ctors.emplace_back(item.substr(0, slash), std::stoi(item.substr(slash + 1)));
        }
        if (ctors.empty()) throw std::invalid_argument("constructor table: type with no constructors: " + head);
        t.add_type(head, ctors);
    }
    return t;
}

CtorTable CtorTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open constructor table: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

std::optional<std::string> check_wellformed(const ExprPtr& e, const CtorTable& table) {
    if (auto* k = e->get_if<CtorApp>()) {
        const CtorInfo* info = table.lookup(k->ctor);
        if (!info) return "unknown constructor: " + k->ctor;
        if ((int)k->args.size() != info->arity)
            return "unsaturated constructor " + k->ctor + ": got " + std::to_string(k->args.size()) +
                   " arguments, arity is " + std::to_string(info->arity);
        for (auto& x : k->args)
            if (auto err = check_wellformed(x, table)) return err;
        return std::nullopt;
    }
    if (auto* cs = e->get_if<Case>()) {
        auto* ctors = table.ctors_of(cs->type_name);
        if (!ctors) return "unknown case type: " + cs->type_name;
        if (cs->alts.size() != ctors->size())
            return "case of " + cs->type_name + " must have exactly one alternative per constructor";
        std::set<std::string> seen;
        for (auto& alt : cs->alts) {
            const CtorInfo* info = table.lookup(alt.ctor);
            if (!info || info->type != cs->type_name)
                return "alternative constructor " + alt.ctor + " does not belong to type " + cs->type_name;
            if (!seen.insert(alt.ctor).second) return "duplicate alternative for " + alt.ctor;
            if ((int)alt.binders.size() != info->arity)
                return "alternative " + alt.ctor + " binds " + std::to_string(alt.binders.size()) +
                       " variables, arity is " + std::to_string(info->arity);
            std::set<VarName> dist(alt.binders.begin(), alt.binders.end());
            if (dist.size() != alt.binders.size()) return "alternative " + alt.ctor + " has repeated pattern variables";
            if (auto err = check_wellformed(alt.body, table)) return err;
        }
        return check_wellformed(cs->scrut, table);
    }
    if (auto* l = e->get_if<Lam>()) return check_wellformed(l->body, table);
    if (auto* a = e->get_if<App>()) {
        if (auto err = check_wellformed(a->fun, table)) return err;
        return check_wellformed(a->arg, table);
    }
    if (auto* c = e->get_if<Choice>()) {
        if (auto err = check_wellformed(c->left, table)) return err;
        return check_wellformed(c->right, table);
    }
    if (auto* lt = e->get_if<Let>()) {
        std::set<VarName> names;
        for (auto& b : lt->env)
            if (!names.insert(b.name).second) return "repeated let binder: " + b.name.str();
        for (auto& b : lt->env)
            if (auto err = check_wellformed(b.rhs, table)) return err;
        return check_wellformed(lt->body, table);
    }
    if (auto* sq = e->get_if<Seq>()) {
        if (auto err = check_wellformed(sq->first, table)) return err;
        return check_wellformed(sq->second, table);
    }
    return std::nullopt;
}

} // namespace probneed

#include "probneed/transform.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace probneed {

namespace {

struct NameEntry {
    TransformationId id;
    const char* name;
};

constexpr NameEntry kNames[] = {
    {TransformationId::lbeta, "lbeta"},
    {TransformationId::lapp, "lapp"},
    {TransformationId::llet_in, "llet-in"},
    {TransformationId::llet_e, "llet-e"},
    {TransformationId::cp_in, "cp-in"},
    {TransformationId::cp_e, "cp-e"},
    {TransformationId::cpx_in, "cpx-in"},
    {TransformationId::cpx_e, "cpx-e"},
    {TransformationId::ucp1, "ucp-1"},
    {TransformationId::ucp2, "ucp-2"},
    {TransformationId::ucp3, "ucp-3"},
    {TransformationId::xch, "xch"},
    {TransformationId::gc1, "gc-1"},
    {TransformationId::gc2, "gc-2"},
    {TransformationId::probid, "probid"},
    {TransformationId::probcomm, "probcomm"},
    {TransformationId::probassoc, "probassoc"},
    {TransformationId::probdistr, "probdistr"},
    {TransformationId::probreorder, "probreorder"},
    {TransformationId::seq_c, "seq-c"},
    {TransformationId::seq_in, "seq-in"},
    {TransformationId::seq_e, "seq-e"},
    {TransformationId::case_c, "case-c"},
    {TransformationId::case_in, "case-in"},
    {TransformationId::case_e, "case-e"},
    {TransformationId::lcase, "lcase"},
    {TransformationId::lseq, "lseq"},
    {TransformationId::cpcx_in, "cpcx-in"},
    {TransformationId::cpcx_e, "cpcx-e"},
    {TransformationId::abs, "abs"},
    {TransformationId::cpx, "cpx"},
    {TransformationId::llet, "llet"},
    {TransformationId::lll, "lll"},
    {TransformationId::gc, "gc"},
    {TransformationId::ucp, "ucp"},
    {TransformationId::cp, "cp"},
    {TransformationId::cpd, "cpd"},
    {TransformationId::cpS, "cpS"},
    {TransformationId::cpcx, "cpcx"},
    {TransformationId::case_u, "case"},
    {TransformationId::seq_u, "seq"},
    {TransformationId::lacs, "lacs"},
};

bool is_extended_rule(TransformationId t) {
    switch (t) {
    case TransformationId::seq_c:
    case TransformationId::seq_in:
    case TransformationId::seq_e:
    case TransformationId::case_c:
    case TransformationId::case_in:
    case TransformationId::case_e:
    case TransformationId::lcase:
    case TransformationId::lseq:
    case TransformationId::cpcx_in:
    case TransformationId::cpcx_e:
    case TransformationId::abs:
    case TransformationId::cpcx:
    case TransformationId::case_u:
    case TransformationId::seq_u:
    case TransformationId::lacs:
        return true;
    default:
        return false;
    }
}

} // namespace

std::string to_string(TransformationId t) {
    for (auto& e : kNames)
        if (e.id == t) return e.name;
    return "?";
}

TransformationId transformation_from_string(const std::string& s) {
    for (auto& e : kNames)
        if (s == e.name) return e.id;
    throw std::invalid_argument("unknown transformation: " + s);
}

std::vector<TransformationId> all_transformations(bool extended) {
    std::vector<TransformationId> out;
    for (auto& e : kNames)
        if (extended || !is_extended_rule(e.id)) out.push_back(e.id);
    return out;
}

bool is_union_label(TransformationId t) {
    switch (t) {
    case TransformationId::cpx:
    case TransformationId::llet:
    case TransformationId::lll:
    case TransformationId::gc:
    case TransformationId::ucp:
    case TransformationId::cp:
    case TransformationId::cpd:
    case TransformationId::cpS:
    case TransformationId::cpcx:
    case TransformationId::case_u:
    case TransformationId::seq_u:
    case TransformationId::lacs:
        return true;
    default:
        return false;
    }
}

std::vector<TransformationId> union_members(TransformationId t, bool extended) {
    using T = TransformationId;
    switch (t) {
    case T::cpx: return {T::cpx_in, T::cpx_e};
    case T::llet: return {T::llet_in, T::llet_e};
    case T::lll:
        if (extended) return {T::llet_in, T::llet_e, T::lapp, T::lcase, T::lseq};
        return {T::llet_in, T::llet_e, T::lapp};
    case T::gc: return {T::gc1, T::gc2};
    case T::ucp: return {T::ucp1, T::ucp2, T::ucp3};
    case T::cp:
    case T::cpd:
    case T::cpS: return {T::cp_in, T::cp_e};
    case T::cpcx: return {T::cpcx_in, T::cpcx_e};
    case T::case_u: return {T::case_c, T::case_in, T::case_e};
    case T::seq_u: return {T::seq_c, T::seq_in, T::seq_e};
    case T::lacs: return {T::lapp, T::lcase, T::lseq};
    default: return {t};
    }
}

bool union_contains(TransformationId u, TransformationId member, bool extended) {
    for (auto m : union_members(u, extended))
        if (m == member) return true;
    return false;
}

// ---------------------------------------------------------------------------
// matching helpers

namespace {

// Free occurrence positions of x within root (tracking shadowing).
void occurrences_rec(const ExprPtr& e, const VarName& x, Position& cur, std::vector<Position>& out) {
    if (auto* v = e->get_if<Var>()) {
        if (v->name == x) out.push_back(cur);
        return;
    }
    auto descend = [&](Selector s, const ExprPtr& c) {
        cur.push_back(s);
        occurrences_rec(c, x, cur, out);
        cur.pop_back();
    };
    if (auto* l = e->get_if<Lam>()) {
        if (l->binder == x) return;
        descend(sel_child(0), l->body);
    } else if (auto* a = e->get_if<App>()) {
        descend(sel_child(0), a->fun);
        descend(sel_child(1), a->arg);
    } else if (auto* c = e->get_if<Choice>()) {
        descend(sel_child(0), c->left);
        descend(sel_child(1), c->right);
    } else if (auto* lt = e->get_if<Let>()) {
        for (auto& b : lt->env)
            if (b.name == x) return; // x rebound: nothing below is free
        for (auto& b : lt->env) descend(sel_let_binding(b.name), b.rhs);
        descend(sel_let_body(), lt->body);
    } else if (auto* k = e->get_if<CtorApp>()) {
        for (int i = 0; i < (int)k->args.size(); ++i) descend(sel_child(i), k->args[i]);
    } else if (auto* cs = e->get_if<Case>()) {
        descend(sel_child(0), cs->scrut);
        for (int i = 0; i < (int)cs->alts.size(); ++i) {
            bool shadowed = false;
            for (auto& b : cs->alts[i].binders) shadowed |= b == x;
            if (!shadowed) descend(sel_child(1 + i), cs->alts[i].body);
        }
    } else if (auto* sq = e->get_if<Seq>()) {
        descend(sel_child(0), sq->first);
        descend(sel_child(1), sq->second);
    }
}

std::vector<Position> occurrences_of(const ExprPtr& root, const VarName& x) {
    std::vector<Position> out;
    Position cur;
    occurrences_rec(root, x, cur, out);
    return out;
}

bool surface_within(const ExprPtr& root, const Position& q) {
    ExprPtr cur = root;
    for (auto& s : q) {
        if (cur->is<Lam>()) return false;
        cur = *subexpr_at(cur, {s});
    }
    return true;
}

// Binders of env unreachable from the body through kept bindings; removing
// them never unbinds a surviving occurrence.
std::vector<VarName> garbage_bindings(const Let& lt) {
    std::set<VarName> binders;
    for (auto& b : lt.env) binders.insert(b.name);
    std::set<VarName> live;
    std::vector<VarName> work;
    for (auto& v : free_vars(lt.body))
        if (binders.count(v)) {
            live.insert(v);
            work.push_back(v);
        }
    std::map<VarName, ExprPtr> rhs;
    for (auto& b : lt.env) rhs[b.name] = b.rhs;
    while (!work.empty()) {
        VarName v = work.back();
        work.pop_back();
        for (auto& w : free_vars(rhs.at(v)))
            if (binders.count(w) && live.insert(w).second) work.push_back(w);
    }
    std::vector<VarName> garbage;
    for (auto& b : lt.env)
        if (!live.count(b.name)) garbage.push_back(b.name);
    return garbage;
}

VarName fresh_name(const VarName& want, std::set<VarName>& used) {
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

// ucp: the binding's variable has exactly one free occurrence in the whole
// let (apart from the binding's own left-hand side), at a surface position,
// and the binding is not recursive.
struct UcpInfo {
    bool applies = false;
    bool in_body = false;
    VarName container{};
    Position occ; // relative to the let node
};

UcpInfo ucp_info(const Let& lt, const Binding& b) {
    UcpInfo out;
    if (free_vars(b.rhs).count(b.name)) return out;
    std::vector<std::pair<Position, bool>> found;
    for (auto& q : occurrences_of(lt.body, b.name)) {
        Position p{sel_let_body()};
        p.insert(p.end(), q.begin(), q.end());
        found.emplace_back(p, surface_within(lt.body, q));
    }
    VarName container{};
    for (auto& other : lt.env) {
        if (other.name == b.name) continue;
        for (auto& q : occurrences_of(other.rhs, b.name)) {
            Position p{sel_let_binding(other.name)};
            p.insert(p.end(), q.begin(), q.end());
            found.emplace_back(p, surface_within(other.rhs, q));
            container = other.name;
        }
    }
    if (found.size() != 1 || !found[0].second) return out;
    out.applies = true;
    out.occ = found[0].first;
    out.in_body = found[0].first.front().tag == Selector::Tag::kLetBody;
    out.container = container;
    return out;
}

void match_rule_at(const ExprPtr& e, const Position& p, const ExprPtr& s, TransformationId rule,
                   const CtorTable& table, std::vector<RedexMatch>& out) {
    using T = TransformationId;
    auto push = [&](RedexMatch m) {
        m.rule = rule;
        m.site = p;
        out.push_back(std::move(m));
    };

    switch (rule) {
    case T::lbeta: {
        auto* a = s->get_if<App>();
        if (a && a->fun->is<Lam>()) push({});
        break;
    }
    case T::lapp: {
        auto* a = s->get_if<App>();
        if (a && a->fun->is<Let>()) push({});
        break;
    }
    case T::llet_in: {
        auto* lt = s->get_if<Let>();
        if (lt && lt->body->is<Let>()) push({});
        break;
    }
    case T::llet_e: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env)
            if (b.rhs->is<Let>()) {
                RedexMatch m;
                m.var_a = b.name;
                push(std::move(m));
            }
        break;
    }
    case T::cp_in: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            if (!b.rhs->is<Lam>()) continue;
            for (auto& q : occurrences_of(lt->body, b.name)) {
                RedexMatch m;
                m.var_a = b.name;
                m.occ = Position{sel_let_body()};
                m.occ.insert(m.occ.end(), q.begin(), q.end());
                m.target_surface = surface_within(lt->body, q);
                push(std::move(m));
            }
        }
        break;
    }
    case T::cp_e: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& src : lt->env) {
            if (!src.rhs->is<Lam>()) continue;
            for (auto& dst : lt->env) {
                if (dst.name == src.name) continue;
                for (auto& q : occurrences_of(dst.rhs, src.name)) {
                    RedexMatch m;
                    m.var_a = src.name;
                    m.var_b = dst.name;
                    m.occ = Position{sel_let_binding(dst.name)};
                    m.occ.insert(m.occ.end(), q.begin(), q.end());
                    m.target_surface = surface_within(dst.rhs, q);
                    push(std::move(m));
                }
            }
        }
        break;
    }
    case T::cpx_in: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            auto* v = b.rhs->get_if<Var>();
            if (!v || v->name == b.name) continue;
            for (auto& q : occurrences_of(lt->body, b.name)) {
                RedexMatch m;
                m.var_a = b.name;
                m.var_b = v->name;
                m.occ = Position{sel_let_body()};
                m.occ.insert(m.occ.end(), q.begin(), q.end());
                push(std::move(m));
            }
        }
        break;
    }
    case T::cpx_e: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            auto* v = b.rhs->get_if<Var>();
            if (!v || v->name == b.name) continue;
            for (auto& dst : lt->env) {
                if (dst.name == b.name) continue;
                for (auto& q : occurrences_of(dst.rhs, b.name)) {
                    RedexMatch m;
                    m.var_a = b.name;
                    m.var_b = v->name;
                    m.occ = Position{sel_let_binding(dst.name)};
                    m.occ.insert(m.occ.end(), q.begin(), q.end());
                    push(std::move(m));
                }
            }
        }
        break;
    }
    case T::ucp1:
    case T::ucp2:
    case T::ucp3: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            UcpInfo info = ucp_info(*lt, b);
            if (!info.applies) continue;
            bool fits = (rule == T::ucp1 && info.in_body && lt->env.size() >= 2) ||
                        (rule == T::ucp2 && !info.in_body) ||
                        (rule == T::ucp3 && info.in_body && lt->env.size() == 1);
            if (!fits) continue;
            RedexMatch m;
            m.var_a = b.name;
            m.var_b = info.container;
            m.occ = info.occ;
            push(std::move(m));
        }
        break;
    }
    case T::xch: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        std::set<VarName> binders;
        for (auto& b : lt->env) binders.insert(b.name);
        for (auto& b : lt->env) {
            auto* v = b.rhs->get_if<Var>();
            if (!v || v->name == b.name || !binders.count(v->name)) continue;
            RedexMatch m;
            m.var_a = b.name; // x = y with y bound here as well
            m.var_b = v->name;
            push(std::move(m));
        }
        break;
    }
    case T::gc1: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        auto garbage = garbage_bindings(*lt);
        if (!garbage.empty() && garbage.size() < lt->env.size()) {
            RedexMatch m;
            m.removed = garbage;
            push(std::move(m));
        }
        break;
    }
    case T::gc2: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        if (garbage_bindings(*lt).size() == lt->env.size()) push({});
        break;
    }
    case T::probid: {
        auto* c = s->get_if<Choice>();
        if (c && alpha_equiv(c->left, c->right)) push({});
        break;
    }
    case T::probcomm: {
        if (s->is<Choice>()) push({});
        break;
    }
    case T::probassoc:
    case T::probdistr: {
        auto* c = s->get_if<Choice>();
        if (c && c->right->is<Choice>()) push({});
        break;
    }
    case T::probreorder: {
        auto* c = s->get_if<Choice>();
        if (c && c->left->is<Choice>() && c->right->is<Choice>()) push({});
        break;
    }
    case T::seq_c: {
        auto* sq = s->get_if<Seq>();
        if (sq && (sq->first->is<Lam>() || sq->first->is<CtorApp>())) push({});
        break;
    }
    case T::seq_in:
    case T::seq_e:
    case T::case_in:
    case T::case_e: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        bool want_seq = rule == T::seq_in || rule == T::seq_e;
        bool want_body = rule == T::seq_in || rule == T::case_in;
        for (auto& b : lt->env) {
            auto* k = b.rhs->get_if<CtorApp>();
            if (!k) continue;
            const CtorInfo* info = table.lookup(k->ctor);
            if (!info) continue;
            auto scan = [&](const ExprPtr& root, const Position& base, const VarName& container) {
                auto occs = occurrences_of(root, b.name);
                for (auto& q : all_positions(root)) {
                    ExprPtr sub = *subexpr_at(root, q);
                    bool hit = false;
                    if (want_seq) {
                        auto* sq = sub->get_if<Seq>();
                        auto* v = sq ? sq->first->get_if<Var>() : nullptr;
                        hit = v && v->name == b.name;
                    } else {
                        auto* cs = sub->get_if<Case>();
                        auto* v = cs ? cs->scrut->get_if<Var>() : nullptr;
                        hit = v && v->name == b.name && cs->type_name == info->type;
                    }
                    if (!hit) continue;
                    Position varpos = q;
                    varpos.push_back(sel_child(0));
                    if (std::find(occs.begin(), occs.end(), varpos) == occs.end()) continue;
                    RedexMatch m;
                    m.var_a = b.name;
                    m.var_b = container;
                    m.occ = base;
                    m.occ.insert(m.occ.end(), q.begin(), q.end());
                    push(std::move(m));
                }
            };
            if (want_body) {
                scan(lt->body, {sel_let_body()}, {});
            } else {
                for (auto& dst : lt->env) {
                    if (dst.name == b.name) continue;
                    scan(dst.rhs, {sel_let_binding(dst.name)}, dst.name);
                }
            }
        }
        break;
    }
    case T::case_c: {
        auto* cs = s->get_if<Case>();
        if (!cs) break;
        auto* k = cs->scrut->get_if<CtorApp>();
        if (!k) break;
        const CtorInfo* info = table.lookup(k->ctor);
        if (info && info->type == cs->type_name) push({});
        break;
    }
    case T::lcase: {
        auto* cs = s->get_if<Case>();
        if (cs && cs->scrut->is<Let>()) push({});
        break;
    }
    case T::lseq: {
        auto* sq = s->get_if<Seq>();
        if (sq && sq->first->is<Let>()) push({});
        break;
    }
    case T::cpcx_in: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            if (!b.rhs->is<CtorApp>()) continue;
            for (auto& q : occurrences_of(lt->body, b.name)) {
                RedexMatch m;
                m.var_a = b.name;
                m.occ = Position{sel_let_body()};
                m.occ.insert(m.occ.end(), q.begin(), q.end());
                m.target_surface = surface_within(lt->body, q);
                push(std::move(m));
            }
        }
        break;
    }
    case T::cpcx_e: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            if (!b.rhs->is<CtorApp>()) continue;
            for (auto& dst : lt->env) {
                if (dst.name == b.name) continue;
                for (auto& q : occurrences_of(dst.rhs, b.name)) {
                    RedexMatch m;
                    m.var_a = b.name;
                    m.var_b = dst.name;
                    m.occ = Position{sel_let_binding(dst.name)};
                    m.occ.insert(m.occ.end(), q.begin(), q.end());
                    m.target_surface = surface_within(dst.rhs, q);
                    push(std::move(m));
                }
            }
        }
        break;
    }
    case T::abs: {
        auto* lt = s->get_if<Let>();
        if (!lt) break;
        for (auto& b : lt->env) {
            auto* k = b.rhs->get_if<CtorApp>();
            if (k && !k->args.empty()) {
                RedexMatch m;
                m.var_a = b.name;
                push(std::move(m));
            }
        }
        break;
    }
    default:
        break; // unions are resolved by the caller
    }
}

} // namespace

std::vector<RedexMatch> match_sites(const ExprPtr& e, TransformationId t, ContextClass cls,
                                    const CtorTable& table, bool extended) {
    std::vector<TransformationId> rules = union_members(t, extended);
    std::vector<RedexMatch> out;
    for (auto& p : all_positions(e)) {
        if (!position_in_class(e, p, cls)) continue;
        ExprPtr s = *subexpr_at(e, p);
        for (auto rule : rules) match_rule_at(e, p, s, rule, table, out);
    }
    if (t == TransformationId::cpd || t == TransformationId::cpS) {
        bool want_surface = t == TransformationId::cpS;
        std::erase_if(out, [&](const RedexMatch& m) { return m.target_surface != want_surface; });
    }
    return out;
}

// ---------------------------------------------------------------------------
// apply

namespace {

[[noreturn]] void stale(const std::string& why) { throw StaleMatch("stale match: " + why); }

const Binding* find_binding(const Let& lt, const VarName& v) {
    for (auto& b : lt.env)
        if (b.name == v) return &b;
    return nullptr;
}

ExprPtr with_binding_rhs(const Let& lt, const VarName& v, const ExprPtr& rhs,
                         const std::vector<Binding>& extra) {
    std::vector<Binding> env;
    env.reserve(lt.env.size() + extra.size());
    for (auto& b : lt.env) {
        env.push_back(b.name == v ? Binding{v, rhs} : b);
        if (b.name == v) env.insert(env.end(), extra.begin(), extra.end());
    }
    return mk_let(std::move(env), lt.body);
}

ExprPtr without_binding(const Let& lt, const VarName& v, const ExprPtr& new_body) {
    std::vector<Binding> env;
    for (auto& b : lt.env)
        if (b.name != v) env.push_back(b);
    return mk_let(std::move(env), new_body);
}

} // namespace

ExprPtr apply(const ExprPtr& e, const RedexMatch& m, const CtorTable& table) {
    using T = TransformationId;
    auto anchor_opt = subexpr_at(e, m.site);
    if (!anchor_opt) stale("site no longer exists");
    ExprPtr s = *anchor_opt;

    auto occ_term = [&]() -> ExprPtr {
        auto sub = subexpr_at(s, m.occ);
        if (!sub) stale("occurrence no longer exists");
        return *sub;
    };
    auto expect_occ_var = [&](const VarName& v) {
        auto* var = occ_term()->get_if<Var>();
        if (!var || var->name != v) stale("occurrence is not the expected variable");
    };
    auto replace_anchor = [&](const ExprPtr& repl) { return replace_at(e, m.site, repl); };

    switch (m.rule) {
    case T::lbeta: {
        auto* a = s->get_if<App>();
        auto* l = a ? a->fun->get_if<Lam>() : nullptr;
        if (!l) stale("lbeta: not a beta redex");
        return replace_anchor(mk_let({Binding{l->binder, a->arg}}, l->body));
    }
    case T::lapp: {
        auto* a = s->get_if<App>();
        auto* lt = a ? a->fun->get_if<Let>() : nullptr;
        if (!lt) stale("lapp: function is not a let");
        return replace_anchor(mk_let(lt->env, mk_app(lt->body, a->arg)));
    }
    case T::llet_in: {
        auto* lt = s->get_if<Let>();
        auto* inner = lt ? lt->body->get_if<Let>() : nullptr;
        if (!inner) stale("llet-in: body is not a let");
        std::vector<Binding> env = lt->env;
        env.insert(env.end(), inner->env.begin(), inner->env.end());
        return replace_anchor(mk_let(std::move(env), inner->body));
    }
    case T::llet_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        auto* inner = b ? b->rhs->get_if<Let>() : nullptr;
        if (!inner) stale("llet-e: binding is not a let");
        return replace_anchor(with_binding_rhs(*lt, m.var_a, inner->body, inner->env));
    }
    case T::cp_in:
    case T::cp_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        if (!b || !b->rhs->is<Lam>()) stale("cp: source binding is not an abstraction");
        expect_occ_var(m.var_a);
        ExprPtr copy = freshen(b->rhs, all_names(e));
        return replace_anchor(replace_at(s, m.occ, copy));
    }
    case T::cpx_in:
    case T::cpx_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        auto* v = b ? b->rhs->get_if<Var>() : nullptr;
        if (!v || v->name != m.var_b) stale("cpx: binding is not the expected variable");
        expect_occ_var(m.var_a);
        return replace_anchor(replace_at(s, m.occ, mk_var(m.var_b)));
    }
    case T::ucp1:
    case T::ucp2:
    case T::ucp3: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        if (!b) stale("ucp: binding vanished");
        UcpInfo info = ucp_info(*lt, *b);
        if (!info.applies || info.occ != m.occ) stale("ucp: occurrence conditions changed");
        expect_occ_var(m.var_a);
        ExprPtr inlined = replace_at(s, m.occ, b->rhs);
        auto* lt2 = inlined->get_if<Let>();
        if (m.rule == T::ucp3) {
            if (lt->env.size() != 1) stale("ucp-3: not the only binding");
            return replace_anchor(lt2->body);
        }
        if (lt->env.size() < 2) stale("ucp: environment too small");
        return replace_anchor(without_binding(*lt2, m.var_a, lt2->body));
    }
    case T::xch: {
        auto* lt = s->get_if<Let>();
        const Binding* bx = lt ? find_binding(*lt, m.var_a) : nullptr;
        const Binding* by = lt ? find_binding(*lt, m.var_b) : nullptr;
        auto* v = bx ? bx->rhs->get_if<Var>() : nullptr;
        if (!by || !v || v->name != m.var_b) stale("xch: shape changed");
        std::vector<Binding> env;
        for (auto& b : lt->env) {
            if (b.name == m.var_a) env.push_back({m.var_a, by->rhs});
            else if (b.name == m.var_b) env.push_back({m.var_b, mk_var(m.var_a)});
            else env.push_back(b);
        }
        return replace_anchor(mk_let(std::move(env), lt->body));
    }
    case T::gc1: {
        auto* lt = s->get_if<Let>();
        if (!lt) stale("gc-1: not a let");
        std::set<VarName> drop(m.removed.begin(), m.removed.end());
        std::vector<Binding> kept;
        for (auto& b : lt->env)
            if (!drop.count(b.name)) kept.push_back(b);
        if (kept.size() + drop.size() != lt->env.size() || kept.empty())
            stale("gc-1: bindings changed");
        std::set<VarName> fv = free_vars(lt->body);
        for (auto& b : kept)
            for (auto& v : free_vars(b.rhs)) fv.insert(v);
        for (auto& v : m.removed)
            if (fv.count(v)) stale("gc-1: dropped binding is referenced");
        return replace_anchor(mk_let(std::move(kept), lt->body));
    }
    case T::gc2: {
        auto* lt = s->get_if<Let>();
        if (!lt) stale("gc-2: not a let");
        std::set<VarName> fv = free_vars(lt->body);
        for (auto& b : lt->env)
            if (fv.count(b.name)) stale("gc-2: environment is referenced");
        return replace_anchor(lt->body);
    }
    case T::probid: {
        auto* c = s->get_if<Choice>();
        if (!c || !alpha_equiv(c->left, c->right)) stale("probid: arguments differ");
        return replace_anchor(c->left);
    }
    case T::probcomm: {
        auto* c = s->get_if<Choice>();
        if (!c) stale("probcomm: not a choice");
        return replace_anchor(mk_choice(c->right, c->left));
    }
    case T::probassoc: {
        auto* c = s->get_if<Choice>();
        auto* rc = c ? c->right->get_if<Choice>() : nullptr;
        if (!rc) stale("probassoc: not right-nested");
        return replace_anchor(mk_choice(mk_choice(c->left, rc->left), rc->right));
    }
    case T::probdistr: {
        auto* c = s->get_if<Choice>();
        auto* rc = c ? c->right->get_if<Choice>() : nullptr;
        if (!rc) stale("probdistr: not right-nested");
        ExprPtr r2 = freshen(c->left, all_names(e));
        return replace_anchor(mk_choice(mk_choice(c->left, rc->left), mk_choice(r2, rc->right)));
    }
    case T::probreorder: {
        auto* c = s->get_if<Choice>();
        auto* lc = c ? c->left->get_if<Choice>() : nullptr;
        auto* rc = c ? c->right->get_if<Choice>() : nullptr;
        if (!lc || !rc) stale("probreorder: not a choice of choices");
        return replace_anchor(
            mk_choice(mk_choice(lc->left, rc->left), mk_choice(lc->right, rc->right)));
    }
    case T::seq_c: {
        auto* sq = s->get_if<Seq>();
        if (!sq || !(sq->first->is<Lam>() || sq->first->is<CtorApp>()))
            stale("seq-c: first argument is not a value");
        return replace_anchor(sq->second);
    }
    case T::seq_in:
    case T::seq_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        if (!b || !b->rhs->is<CtorApp>()) stale("seq: binding is not a constructor application");
        auto* sq = occ_term()->get_if<Seq>();
        auto* v = sq ? sq->first->get_if<Var>() : nullptr;
        if (!v || v->name != m.var_a) stale("seq: occurrence changed");
        return replace_anchor(replace_at(s, m.occ, sq->second));
    }
    case T::case_c: {
        auto* cs = s->get_if<Case>();
        auto* k = cs ? cs->scrut->get_if<CtorApp>() : nullptr;
        if (!k) stale("case-c: scrutinee is not a constructor application");
        const CtorInfo* info = table.lookup(k->ctor);
        if (!info || info->type != cs->type_name) stale("case-c: constructor of the wrong type");
        const Alt* alt = nullptr;
        for (auto& a : cs->alts)
            if (a.ctor == k->ctor) alt = &a;
        if (!alt) stale("case-c: missing alternative");
        if (k->args.empty()) return replace_anchor(alt->body);
        std::vector<Binding> env;
        for (std::size_t i = 0; i < k->args.size(); ++i)
            env.push_back({alt->binders[i], k->args[i]});
        return replace_anchor(mk_let(std::move(env), alt->body));
    }
    case T::case_in:
    case T::case_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        auto* k = b ? b->rhs->get_if<CtorApp>() : nullptr;
        if (!k) stale("case: binding is not a constructor application");
        auto* cs = occ_term()->get_if<Case>();
        auto* v = cs ? cs->scrut->get_if<Var>() : nullptr;
        if (!v || v->name != m.var_a) stale("case: occurrence changed");
        const CtorInfo* info = table.lookup(k->ctor);
        if (!info || info->type != cs->type_name) stale("case: constructor of the wrong type");
        const Alt* alt = nullptr;
        for (auto& a : cs->alts)
            if (a.ctor == k->ctor) alt = &a;
        if (!alt) stale("case: missing alternative");
        if (k->args.empty()) return replace_anchor(replace_at(s, m.occ, alt->body));
        std::set<VarName> used = all_names(e);
        std::vector<VarName> shares;
        std::vector<ExprPtr> share_vars;
        for (std::size_t i = 0; i < k->args.size(); ++i) {
            VarName z = fresh_name(alt->binders[i], used);
            shares.push_back(z);
            share_vars.push_back(mk_var(z));
        }
        std::vector<Binding> inner;
        for (std::size_t i = 0; i < k->args.size(); ++i)
            inner.push_back({alt->binders[i], share_vars[i]});
        ExprPtr s1 = replace_at(s, m.occ, mk_let(std::move(inner), alt->body));
        std::vector<Binding> extra;
        for (std::size_t i = 0; i < k->args.size(); ++i)
            extra.push_back({shares[i], k->args[i]});
        auto* lt1 = s1->get_if<Let>();
        return replace_anchor(with_binding_rhs(*lt1, m.var_a, mk_ctor(k->ctor, share_vars), extra));
    }
    case T::lcase: {
        auto* cs = s->get_if<Case>();
        auto* lt = cs ? cs->scrut->get_if<Let>() : nullptr;
        if (!lt) stale("lcase: scrutinee is not a let");
        return replace_anchor(mk_let(lt->env, mk_case(cs->type_name, lt->body, cs->alts)));
    }
    case T::lseq: {
        auto* sq = s->get_if<Seq>();
        auto* lt = sq ? sq->first->get_if<Let>() : nullptr;
        if (!lt) stale("lseq: first argument is not a let");
        return replace_anchor(mk_let(lt->env, mk_seq(lt->body, sq->second)));
    }
    case T::cpcx_in:
    case T::cpcx_e: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        auto* k = b ? b->rhs->get_if<CtorApp>() : nullptr;
        if (!k) stale("cpcx: binding is not a constructor application");
        expect_occ_var(m.var_a);
        if (k->args.empty())
            return replace_anchor(replace_at(s, m.occ, mk_ctor(k->ctor, {})));
        std::set<VarName> used = all_names(e);
        std::vector<ExprPtr> share_vars;
        std::vector<Binding> extra;
        for (std::size_t i = 0; i < k->args.size(); ++i) {
            VarName y = fresh_name(VarName{"y"}, used);
            share_vars.push_back(mk_var(y));
            extra.push_back({y, k->args[i]});
        }
        ExprPtr s1 = replace_at(s, m.occ, mk_ctor(k->ctor, share_vars));
        auto* lt1 = s1->get_if<Let>();
        return replace_anchor(with_binding_rhs(*lt1, m.var_a, mk_ctor(k->ctor, share_vars), extra));
    }
    case T::abs: {
        auto* lt = s->get_if<Let>();
        const Binding* b = lt ? find_binding(*lt, m.var_a) : nullptr;
        auto* k = b ? b->rhs->get_if<CtorApp>() : nullptr;
        if (!k || k->args.empty()) stale("abs: binding is not a non-nullary constructor application");
        std::set<VarName> used = all_names(e);
        std::vector<ExprPtr> share_vars;
        std::vector<Binding> extra;
        for (std::size_t i = 0; i < k->args.size(); ++i) {
            VarName y = fresh_name(VarName{"y"}, used);
            share_vars.push_back(mk_var(y));
            extra.push_back({y, k->args[i]});
        }
        return replace_anchor(with_binding_rhs(*lt, m.var_a, mk_ctor(k->ctor, share_vars), extra));
    }
    default:
        throw std::invalid_argument("apply: not a concrete rule: " + to_string(m.rule));
    }
}

// ---------------------------------------------------------------------------
// measures

boost::multiprecision::cpp_int lm_measure(const ExprPtr& e) {
    using Int = boost::multiprecision::cpp_int;
    if (e->is<Var>()) return 1;
    if (auto* l = e->get_if<Lam>()) return 1 + lm_measure(l->body);
    if (auto* a = e->get_if<App>()) return 2 * lm_measure(a->fun) + lm_measure(a->arg);
    if (auto* c = e->get_if<Choice>()) return 1 + lm_measure(c->left) + lm_measure(c->right);
    if (auto* lt = e->get_if<Let>()) {
        Int env = 0;
        for (auto& b : lt->env) env += lm_measure(b.rhs);
        return 2 * env + lm_measure(lt->body);
    }
    throw std::invalid_argument("lm_measure is defined for the core syntax only");
}

LmpMeasure lmp_measure(const ExprPtr& e) {
    std::uint64_t lets = 0;
    for (auto& p : all_positions(e))
        if ((*subexpr_at(e, p))->is<Let>()) ++lets;
    return {lets, lm_measure(e)};
}

// ---------------------------------------------------------------------------
// metadata

TransformationMetadata transformation_metadata(TransformationId t) {
    using T = TransformationId;
    if (is_union_label(t)) {
        TransformationMetadata meta{Correctness::yes, true, true};
        for (auto m : union_members(t, true)) {
            auto mm = transformation_metadata(m);
            if (mm.correct == Correctness::no) meta.correct = Correctness::no;
            meta.preserves_prob_sequences &= mm.preserves_prob_sequences;
            meta.direction_invertible &= mm.direction_invertible;
        }
        return meta;
    }
    switch (t) {
    case T::probassoc: return {Correctness::no, false, false};
    case T::probid: return {Correctness::yes, false, false};
    case T::probcomm: return {Correctness::yes, false, true};
    case T::probdistr: return {Correctness::yes, false, false};
    case T::probreorder: return {Correctness::yes, false, true};
    case T::xch: return {Correctness::yes, true, true};
    default: return {Correctness::yes, true, false};
    }
}

} // namespace probneed

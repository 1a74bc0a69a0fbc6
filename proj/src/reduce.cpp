#include "probneed/reduce.hpp"

#include <cassert>
#include <map>

namespace probneed {

std::string to_string(RuleName r) {
    switch (r) {
    case RuleName::lbeta: return "lbeta";
    case RuleName::cp_in: return "cp-in";
    case RuleName::cp_e: return "cp-e";
    case RuleName::llet_in: return "llet-in";
    case RuleName::llet_e: return "llet-e";
    case RuleName::lapp: return "lapp";
    case RuleName::probl: return "probl";
    case RuleName::probr: return "probr";
    case RuleName::case_c: return "case-c";
    case RuleName::case_in: return "case-in";
    case RuleName::case_e: return "case-e";
    case RuleName::lcase: return "lcase";
    case RuleName::seq_c: return "seq-c";
    case RuleName::seq_in: return "seq-in";
    case RuleName::seq_e: return "seq-e";
    case RuleName::lseq: return "lseq";
    }
    return "?";
}

bool is_prob_rule(RuleName r) { return r == RuleName::probl || r == RuleName::probr; }

std::string to_string(StuckReason r) {
    switch (r) {
    case StuckReason::open_variable: return "open-variable";
    case StuckReason::blackhole: return "blackhole";
    case StuckReason::ill_typed: return "ill-typed";
    }
    return "?";
}

bool is_whnf(const ExprPtr& e) {
    if (e->is<Lam>() || e->is<CtorApp>()) return true;
    auto* lt = e->get_if<Let>();
    if (!lt) return false;
    if (lt->body->is<Lam>() || lt->body->is<CtorApp>()) return true;
    // let {x_i = x_{i+1}}, x_m = c ..., env in x_1
    std::map<VarName, ExprPtr> env;
    for (auto& b : lt->env) env[b.name] = b.rhs;
    std::set<VarName> seen;
    const Expr* cur = lt->body.get();
    while (auto* v = cur->get_if<Var>()) {
        if (seen.count(v->name)) return false;
        seen.insert(v->name);
        auto it = env.find(v->name);
        if (it == env.end()) return false;
        if (it->second->is<CtorApp>()) return true;
        cur = it->second.get();
    }
    return false;
}

namespace {

struct Frame {
    enum class Kind { app, seq, kase } kind;
    Position pos; // position of the frame node
};

struct ChainLink {
    VarName var;
    Position occ;       // position of the variable occurrence
    bool trivial;       // the occurrence is the entire focus root
    bool has_frame = false;
    Frame frame;        // innermost frame at the occurrence, if any
    bool in_body;       // occurrence lies in the let body (vs. a binding rhs)
};

VarName fresh_share(const VarName& base, std::set<VarName>& used) {
    if (!used.count(base)) {
        used.insert(base);
        return base;
    }
    for (std::uint32_t i = 0;; ++i) {
        VarName cand{base.base, i};
        if (!used.count(cand)) {
            used.insert(cand);
            return cand;
        }
    }
}

StepVerdict stuck(StuckReason r, std::string detail) {
    return StepStuck{r, std::move(detail)};
}

} // namespace

StepVerdict sr_step(const ExprPtr& e, const CtorTable& table) {
    if (is_whnf(e)) return StepWhnf{};

    const Let* top = e->get_if<Let>();
    std::map<VarName, ExprPtr> top_env;
    if (top)
        for (auto& b : top->env) top_env[b.name] = b.rhs;

    // Rebuilds the top let with binding `v` replaced and extra bindings added.
    auto rebuild_top = [&](const ExprPtr& base, const VarName& v, const ExprPtr& new_rhs,
                           const std::vector<Binding>& extra) -> ExprPtr {
        auto* lt = base->get_if<Let>();
        std::vector<Binding> env = lt->env;
        for (auto& b : env)
            if (b.name == v) b.rhs = new_rhs;
        env.insert(env.end(), extra.begin(), extra.end());
        return mk_let(std::move(env), lt->body);
    };

    std::set<VarName> visited;
    std::vector<ChainLink> chain;

    bool focus_in_body = true;
    ExprPtr focus_root = e;
    Position base_pos;
    VarName focus_binding;
    if (top) {
        focus_root = top->body;
        base_pos = {sel_let_body()};
    }

    for (;;) {
        // descend the application spine
        std::vector<Frame> frames;
        ExprPtr cur = focus_root;
        Position pos = base_pos;
        for (;;) {
            if (auto* a = cur->get_if<App>()) {
                frames.push_back({Frame::Kind::app, pos});
                pos.push_back(sel_child(0));
                cur = a->fun;
            } else if (auto* sq = cur->get_if<Seq>()) {
                frames.push_back({Frame::Kind::seq, pos});
                pos.push_back(sel_child(0));
                cur = sq->first;
            } else if (auto* cs = cur->get_if<Case>()) {
                frames.push_back({Frame::Kind::kase, pos});
                pos.push_back(sel_child(0));
                cur = cs->scrut;
            } else {
                break;
            }
        }

        if (auto* ch = cur->get_if<Choice>()) {
            return StepProbBranch{pos, replace_at(e, pos, ch->left), replace_at(e, pos, ch->right)};
        }

        if (auto* lam = cur->get_if<Lam>()) {
            if (!frames.empty()) {
                const Frame& f = frames.back();
                auto node = *subexpr_at(e, f.pos);
                switch (f.kind) {
                case Frame::Kind::app: {
                    auto* a = node->get_if<App>();
                    ExprPtr repl = mk_let({Binding{lam->binder, a->arg}}, lam->body);
                    return StepUnique{RuleName::lbeta, replace_at(e, f.pos, repl)};
                }
                case Frame::Kind::seq: {
                    auto* sq = node->get_if<Seq>();
                    return StepUnique{RuleName::seq_c, replace_at(e, f.pos, sq->second)};
                }
                case Frame::Kind::kase:
                    return stuck(StuckReason::ill_typed, "case scrutinee is an abstraction");
                }
            }
            // chain ended at an abstraction binding: copy it to the demand site
            if (focus_in_body) return StepWhnf{}; // let env in \x.s (defensive)
            const ChainLink* target = &chain.front();
            for (std::size_t i = chain.size(); i-- > 1;) {
                if (!chain[i].trivial) {
                    target = &chain[i];
                    break;
                }
            }
            ExprPtr copy = freshen(cur, all_names(e));
            RuleName rule = target->in_body ? RuleName::cp_in : RuleName::cp_e;
            return StepUnique{rule, replace_at(e, target->occ, copy)};
        }

        if (auto* k = cur->get_if<CtorApp>()) {
            if (!frames.empty()) {
                const Frame& f = frames.back();
                auto node = *subexpr_at(e, f.pos);
                switch (f.kind) {
                case Frame::Kind::app:
                    return stuck(StuckReason::ill_typed, "constructor application applied to an argument");
                case Frame::Kind::seq: {
                    auto* sq = node->get_if<Seq>();
                    return StepUnique{RuleName::seq_c, replace_at(e, f.pos, sq->second)};
                }
                case Frame::Kind::kase: {
                    auto* cs = node->get_if<Case>();
                    const CtorInfo* info = table.lookup(k->ctor);
                    if (!info || info->type != cs->type_name)
                        return stuck(StuckReason::ill_typed,
                                     "case of type " + cs->type_name + " scrutinizes " + k->ctor);
                    const Alt* alt = nullptr;
                    for (auto& a : cs->alts)
                        if (a.ctor == k->ctor) alt = &a;
                    if (!alt) return stuck(StuckReason::ill_typed, "no alternative for " + k->ctor);
                    ExprPtr repl;
                    if (k->args.empty()) {
                        repl = alt->body;
                    } else {
                        std::vector<Binding> env;
                        for (std::size_t i = 0; i < k->args.size(); ++i)
                            env.push_back({alt->binders[i], k->args[i]});
                        repl = mk_let(std::move(env), alt->body);
                    }
                    return StepUnique{RuleName::case_c, replace_at(e, f.pos, repl)};
                }
                }
            }
            if (focus_in_body) return StepWhnf{}; // let env in c ... (defensive)

            // chain ended at a constructor binding: dispatch on the demand site
            const ChainLink* target = &chain.front();
            for (std::size_t i = chain.size(); i-- > 1;) {
                if (!chain[i].trivial) {
                    target = &chain[i];
                    break;
                }
            }
            if (!target->has_frame) return StepWhnf{}; // trivial chain from the body (defensive)
            const Frame& f = target->frame;
            auto node = *subexpr_at(e, f.pos);
            switch (f.kind) {
            case Frame::Kind::app:
                return stuck(StuckReason::ill_typed, "constructor application applied to an argument");
            case Frame::Kind::seq: {
                auto* sq = node->get_if<Seq>();
                RuleName rule = target->in_body ? RuleName::seq_in : RuleName::seq_e;
                return StepUnique{rule, replace_at(e, f.pos, sq->second)};
            }
            case Frame::Kind::kase: {
                auto* cs = node->get_if<Case>();
                const CtorInfo* info = table.lookup(k->ctor);
                if (!info || info->type != cs->type_name)
                    return stuck(StuckReason::ill_typed,
                                 "case of type " + cs->type_name + " scrutinizes " + k->ctor);
                const Alt* alt = nullptr;
                for (auto& a : cs->alts)
                    if (a.ctor == k->ctor) alt = &a;
                if (!alt) return stuck(StuckReason::ill_typed, "no alternative for " + k->ctor);
                RuleName rule = target->in_body ? RuleName::case_in : RuleName::case_e;
                if (k->args.empty()) {
                    return StepUnique{rule, replace_at(e, f.pos, alt->body)};
                }
                // share the constructor arguments through fresh z_i bindings
                std::set<VarName> used = all_names(e);
                std::vector<VarName> shares;
                std::vector<ExprPtr> share_vars;
                for (std::size_t i = 0; i < k->args.size(); ++i) {
                    VarName z = fresh_share(alt->binders[i], used);
                    shares.push_back(z);
                    share_vars.push_back(mk_var(z));
                }
                std::vector<Binding> inner;
                for (std::size_t i = 0; i < k->args.size(); ++i)
                    inner.push_back({alt->binders[i], share_vars[i]});
                ExprPtr case_repl = mk_let(std::move(inner), alt->body);
                ExprPtr e1 = replace_at(e, f.pos, case_repl);
                std::vector<Binding> extra;
                for (std::size_t i = 0; i < k->args.size(); ++i)
                    extra.push_back({shares[i], k->args[i]});
                ExprPtr new_rhs = mk_ctor(k->ctor, share_vars);
                return StepUnique{rule, rebuild_top(e1, chain.back().var, new_rhs, extra)};
            }
            }
        }

        if (auto* lt2 = cur->get_if<Let>()) {
            if (!frames.empty()) {
                const Frame& f = frames.back();
                auto node = *subexpr_at(e, f.pos);
                switch (f.kind) {
                case Frame::Kind::app: {
                    auto* a = node->get_if<App>();
                    ExprPtr repl = mk_let(lt2->env, mk_app(lt2->body, a->arg));
                    return StepUnique{RuleName::lapp, replace_at(e, f.pos, repl)};
                }
                case Frame::Kind::seq: {
                    auto* sq = node->get_if<Seq>();
                    ExprPtr repl = mk_let(lt2->env, mk_seq(lt2->body, sq->second));
                    return StepUnique{RuleName::lseq, replace_at(e, f.pos, repl)};
                }
                case Frame::Kind::kase: {
                    auto* cs = node->get_if<Case>();
                    ExprPtr repl = mk_let(lt2->env, mk_case(cs->type_name, lt2->body, cs->alts));
                    return StepUnique{RuleName::lcase, replace_at(e, f.pos, repl)};
                }
                }
            }
            if (focus_in_body) {
                // let env1 in let env2 in s
                std::vector<Binding> env = top->env;
                env.insert(env.end(), lt2->env.begin(), lt2->env.end());
                return StepUnique{RuleName::llet_in, mk_let(std::move(env), lt2->body)};
            }
            // needed binding is itself a let: float its environment out
            auto* lt_top = e->get_if<Let>();
            std::vector<Binding> env;
            for (auto& b : lt_top->env) {
                if (b.name == focus_binding) {
                    env.push_back({b.name, lt2->body});
                    env.insert(env.end(), lt2->env.begin(), lt2->env.end());
                } else {
                    env.push_back(b);
                }
            }
            return StepUnique{RuleName::llet_e, mk_let(std::move(env), lt_top->body)};
        }

        auto* v = cur->get_if<Var>();
        assert(v && "spine head must be one of Var/Lam/Choice/Let/CtorApp");
        if (!top) return stuck(StuckReason::open_variable, v->name.str());
        auto it = top_env.find(v->name);
        if (it == top_env.end()) return stuck(StuckReason::open_variable, v->name.str());
        if (visited.count(v->name)) return stuck(StuckReason::blackhole, v->name.str());
        visited.insert(v->name);

        ChainLink link;
        link.var = v->name;
        link.occ = pos;
        link.trivial = frames.empty();
        link.in_body = focus_in_body;
        if (!frames.empty()) {
            link.has_frame = true;
            link.frame = frames.back();
        }
        chain.push_back(std::move(link));

        focus_in_body = false;
        focus_binding = v->name;
        focus_root = it->second;
        base_pos = {sel_let_binding(v->name)};
    }
}

DetOutcome run_until_prob(ExprPtr e, std::uint64_t fuel, const CtorTable& table) {
    DetOutcome out;
    for (;;) {
        StepVerdict v = sr_step(e, table);
        if (std::holds_alternative<StepWhnf>(v)) {
            out.kind = DetOutcome::Kind::reached_whnf;
            out.expr = e;
            return out;
        }
        if (auto* s = std::get_if<StepStuck>(&v)) {
            out.kind = DetOutcome::Kind::reached_stuck;
            out.expr = e;
            out.stuck_reason = s->reason;
            out.stuck_detail = s->detail;
            return out;
        }
        if (auto* p = std::get_if<StepProbBranch>(&v)) {
            out.kind = DetOutcome::Kind::at_prob;
            out.expr = e;
            out.prob_left = p->left;
            out.prob_right = p->right;
            return out;
        }
        auto& u = std::get<StepUnique>(v);
        if (fuel == 0) {
            out.kind = DetOutcome::Kind::fuel_exhausted;
            out.expr = e;
            return out;
        }
        --fuel;
        out.trace.push_back(u.rule);
        e = u.result;
    }
}

ReplayOutcome reduce_trace(ExprPtr e, const std::string& choices, std::uint64_t fuel,
                           const CtorTable& table) {
    ReplayOutcome out;
    std::size_t next = 0;
    for (;;) {
        DetOutcome d = run_until_prob(std::move(e), fuel, table);
        out.trace.insert(out.trace.end(), d.trace.begin(), d.trace.end());
        switch (d.kind) {
        case DetOutcome::Kind::reached_whnf:
            out.kind = ReplayOutcome::Kind::reached_whnf;
            out.expr = d.expr;
            return out;
        case DetOutcome::Kind::reached_stuck:
            out.kind = ReplayOutcome::Kind::reached_stuck;
            out.expr = d.expr;
            out.stuck_reason = d.stuck_reason;
            return out;
        case DetOutcome::Kind::fuel_exhausted:
            out.kind = ReplayOutcome::Kind::fuel_exhausted;
            out.expr = d.expr;
            return out;
        case DetOutcome::Kind::at_prob: {
            if (next >= choices.size()) {
                out.kind = ReplayOutcome::Kind::choices_exhausted;
                out.expr = d.expr;
                return out;
            }
            char c = choices[next++];
            ++out.consumed;
            if (c == 'L' || c == 'l') {
                out.trace.push_back(RuleName::probl);
                e = d.prob_left;
            } else if (c == 'R' || c == 'r') {
                out.trace.push_back(RuleName::probr);
                e = d.prob_right;
            } else {
                throw std::invalid_argument("choices must be a word over {L,R}");
            }
            break;
        }
        }
    }
}

} // namespace probneed

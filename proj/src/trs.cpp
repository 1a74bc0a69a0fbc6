#include "probneed/trs.hpp"

#include <algorithm>
#include <stdexcept>

namespace probneed {

std::string TrsTerm::str() const {
    if (is_var || args.empty()) return symbol;
    std::string out = symbol + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i].str();
    }
    return out + ")";
}

PrecedenceOrder::PrecedenceOrder(std::vector<std::pair<std::string, std::string>> gt_pairs) {
    for (auto& p : gt_pairs) gt_.insert(p);
    // transitive closure
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<std::string, std::string>> todo;
        for (auto& [a, b] : gt_)
            for (auto& [c, d] : gt_)
                if (b == c && !gt_.count({a, d})) todo.emplace_back(a, d);
        for (auto& p : todo) {
            gt_.insert(p);
            changed = true;
        }
    }
    for (auto& [a, b] : gt_)
        if (a == b) throw std::invalid_argument("precedence is not irreflexive");
}

bool PrecedenceOrder::greater(const std::string& a, const std::string& b) const {
    return gt_.count({a, b}) > 0;
}

// ---------------------------------------------------------------------------
// KBO

namespace {

void var_counts(const TrsTerm& t, std::map<std::string, int>& out) {
    if (t.is_var) {
        ++out[t.symbol];
        return;
    }
    for (auto& a : t.args) var_counts(a, out);
}

unsigned long long kbo_weight(const TrsTerm& t, const KboWeights& w) {
    if (t.is_var) return w.var_weight;
    auto it = w.weight.find(t.symbol);
    unsigned long long base = it == w.weight.end() ? 1 : it->second;
    for (auto& a : t.args) base += kbo_weight(a, w);
    return base;
}

void check_admissible(const KboWeights& w, const PrecedenceOrder& prec,
                      const std::set<std::string>& symbols) {
    if (w.var_weight == 0) throw std::invalid_argument("KBO: variable weight must be positive");
    for (auto& [sym, weight] : w.weight) {
        if (weight != 0) continue;
        // a unary symbol of weight 0 must be the greatest element
        for (auto& other : symbols)
            if (other != sym && !prec.greater(sym, other))
                throw std::invalid_argument("KBO: weight-0 symbol " + sym +
                                            " must be maximal in the precedence");
    }
}

bool kbo_rec(const TrsTerm& l, const TrsTerm& r, const KboWeights& w, const PrecedenceOrder& prec) {
    if (l == r) return false;
    std::map<std::string, int> vl, vr;
    var_counts(l, vl);
    var_counts(r, vr);
    for (auto& [v, n] : vr)
        if (vl[v] < n) return false;
    unsigned long long wl = kbo_weight(l, w), wr = kbo_weight(r, w);
    if (wl > wr) return true;
    if (wl < wr) return false;
    if (l.is_var) return false;
    if (r.is_var) {
        // l = f^n(x) with w(f)=0 and l != x
        const TrsTerm* cur = &l;
        while (!cur->is_var) {
            if (cur->args.size() != 1) return false;
            auto it = w.weight.find(cur->symbol);
            if (it == w.weight.end() || it->second != 0) return false;
            cur = &cur->args[0];
        }
        return cur->symbol == r.symbol;
    }
    if (l.symbol != r.symbol) return prec.greater(l.symbol, r.symbol);
    for (std::size_t i = 0; i < std::min(l.args.size(), r.args.size()); ++i) {
        if (l.args[i] == r.args[i]) continue;
        return kbo_rec(l.args[i], r.args[i], w, prec);
    }
    return false;
}

} // namespace

bool kbo_greater(const TrsTerm& l, const TrsTerm& r, const KboWeights& w,
                 const PrecedenceOrder& prec, const std::set<std::string>& all_symbols) {
    check_admissible(w, prec, all_symbols);
    return kbo_rec(l, r, w, prec);
}

// ---------------------------------------------------------------------------
// LPO

bool lpo_greater(const TrsTerm& l, const TrsTerm& r, const PrecedenceOrder& prec) {
    if (l == r) return false;
    if (r.is_var) {
        // l > x iff x occurs in l
        if (l.is_var) return false;
        for (auto& a : l.args)
            if (a == r || lpo_greater(a, r, prec)) return true;
        return false;
    }
    if (l.is_var) return false;
    // (1) some argument of l dominates r
    for (auto& a : l.args)
        if (a == r || lpo_greater(a, r, prec)) return true;
    if (prec.greater(l.symbol, r.symbol)) {
        // (2) l dominates every argument of r
        for (auto& b : r.args)
            if (!lpo_greater(l, b, prec)) return false;
        return true;
    }
    if (l.symbol == r.symbol && l.args.size() == r.args.size()) {
        // (3) lexicographic descent
        for (std::size_t i = 0; i < l.args.size(); ++i) {
            if (l.args[i] == r.args[i]) continue;
            if (!lpo_greater(l.args[i], r.args[i], prec)) return false;
            for (std::size_t j = i + 1; j < r.args.size(); ++j)
                if (!lpo_greater(l, r.args[j], prec)) return false;
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// built-in systems

namespace {

TrsTerm V(const char* v) { return TrsTerm::var(v); }
TrsTerm F(const char* f, std::vector<TrsTerm> args) { return TrsTerm::fun(f, std::move(args)); }
TrsTerm F1(const char* f, TrsTerm a) { return TrsTerm::fun(f, {std::move(a)}); }

SymbolicTRS make_lll_r1() {
    TrsTerm x = V("x");
    return {"lll-R1",
            {"x"},
            {
                {F1("Slll", F1("SRlll", x)), x},
                {F1("Slll", F1("SR", x)), F1("SR", x)},
                {F1("Slll", F1("SR", x)), F1("SR", F1("Slll", x))},
                {F1("Slll", F1("SRlll", x)), F1("SRlll", F1("Slll", x))},
                {F1("Slll", F1("SRlll", x)), F1("SRlll", F1("Slll", F1("Slll", x)))},
            }};
}

SymbolicTRS make_lll_r2() {
    TrsTerm x = V("x");
    return {"lll-R2",
            {"x"},
            {
                {F1("Sllet", F1("SR", x)), F1("SR", F1("Sllet", x))},
                {F1("Sllet", F1("SR", x)), F1("SRlll", F1("SR", x))},
                {F1("Sllet", F1("SR", x)), F1("SR", x)},
                {F1("Sllet", F1("SRlll", x)), F1("SRlll", F1("Sllet", x))},
                {F1("Sllet", F1("SRlll", x)), F1("SRlll", F1("Slapp", F1("Sllet", x)))},
                {F1("Sllet", F1("SRlll", x)), F1("SRlll", F1("SRlll", x))},
                {F1("Slapp", F1("SR", x)), F1("SR", F1("Slapp", x))},
                {F1("Slapp", F1("SR", x)), F1("SRlll", F1("SR", x))},
                {F1("Sllet", F1("SRlll", x)), F1("SRlll", F1("SRlll", F1("SRlll", x)))},
                {F1("Slapp", F1("SR", x)), F1("SR", x)},
                {F1("Slapp", F1("SRlll", x)), F1("SRlll", F1("Slapp", x))},
                {F1("Slapp", F1("SRlll", x)), F1("SRlll", F1("SRlll", x))},
            }};
}

SymbolicTRS make_cp_r1() {
    TrsTerm x = V("x");
    return {"cp-R1",
            {"x"},
            {
                {F1("Scp", F1("SR", x)), F1("SR", F1("Scp", x))},
                {F1("Scp", F1("SR", x)), F1("SR", F1("Scp", x))},
                {F1("Scp", F1("SR", x)), F1("SR", x)},
                {F1("Scp", F1("SR", x)), x},
                {F1("Scp", F1("SR", x)), F1("SR", F1("Scp", x))},
                {F1("Scp", F1("SR", x)), F1("SR", x)},
                {F1("Scp", F1("SR", x)), F1("SR", F1("Scp", F1("Scp", x)))},
            }};
}

SymbolicTRS make_cp_r2() {
    TrsTerm x = V("x");
    return {"cp-R2",
            {"x"},
            {
                {F1("Scpd", F1("SR", x)), F1("SR", x)},
                {F1("Scpd", F1("SRlbeta", x)), F1("SRlbeta", F1("Scpd", x))},
                {F1("Scpd", F1("SRlbeta", x)), F1("SRlbeta", F1("ScpS", x))},
                {F1("Scpd", F1("SR", x)), F1("SR", F1("Scpd", x))},
                {F1("Scpd", F1("SR", x)), F1("SR", F1("Scpd", F1("Scpd", x)))},
                {F1("ScpS", F1("SRlbeta", x)), F1("SRlbeta", F1("ScpS", x))},
                {F1("ScpS", F1("SR", x)), F1("SR", x)},
                {F1("ScpS", F1("SRlbeta", x)), F1("SR", F1("SRlbeta", x))},
                {F1("ScpS", F1("SR", x)), F1("SR", F1("ScpS", x))},
            }};
}

SymbolicTRS make_cpx_r() {
    TrsTerm x = V("x");
    return {"cpx-R",
            {"x"},
            {
                {F1("Scpx", F1("SR", x)), F1("SR", x)},
                {F1("Scpx", F1("SR", x)), F1("SR", F1("Scpx", x))},
                {F1("Scpx", F1("SR", x)), F1("SR", F1("Scpx", F1("Scpx", x)))},
            }};
}

SymbolicTRS make_gc_ucp_r1() {
    TrsTerm x = V("x"), k = V("k");
    return {"gc-ucp-R1",
            {"k", "x"},
            {
                {F1("Sug", F1("SR", x)), F1("SR", x)},
                {F1("Sug", F1("SR", x)), F1("SR", F1("Sug", x))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F1("Sug", x))},
                {F1("Sug", F1("SR", x)), F1("Sug", x)},
                {F1("Sug", F1("SRlll", x)), F("W", {k, x})},
                {F("W", {F1("s", k), x}), F1("SRlll", F("W", {k, x}))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F1("Sug", x))},
                {F1("Sug", F1("SRlll", x)), F1("Sug", x)},
                {F("W", {F1("s", k), x}), F1("SRlll", F1("Sug", x))},
            }};
}

SymbolicTRS make_gc_ucp_r2() {
    TrsTerm x = V("x"), k = V("k");
    return {"gc-ucp-R2",
            {"k", "x"},
            {
                {F1("Sug", F1("SR", x)), F1("SR", F1("Sug", x))},
                {F1("Sug", F1("SR", x)), F1("SR", x)},
                {F1("Sug", F1("SR", x)), F1("SR", F1("SR", F1("Sug", x)))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F1("Sug", x))},
                {F1("Sug", F1("SR", x)), F1("SR", F1("SRlll", F1("Sug", x)))},
                {F1("Sug", F1("SR", x)), F1("SRlll", F1("SR", F1("Sug", x)))},
                {F1("Sug", F1("SR", x)), F1("SRlll", F1("SR", F1("SR", F1("Sug", x))))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F1("SRlll", F1("Sug", x)))},
                {F1("Sug", F1("SR", x)), F1("SRlll", F1("SR", F1("SRlll", F1("Sug", x))))},
                {F1("Sug", F1("SR", x)), F1("SRlll", F1("SRlll", F1("SR", F1("Sug", x))))},
                {F1("Sug", F1("SRlll", F1("SRlll", x))), F1("SRlll", F1("Sug", x))},
                {F1("Sug", F1("SRlll", F1("SRlll", x))),
                 F1("SRlll", F1("SRlll", F1("SRlll", F1("Sug", x))))},
                {F1("Sug", F1("SR", x)),
                 F1("SRlll", F1("SR", F1("SR", F1("SRlll", F1("Sug", x)))))},
                {F1("Sug", F1("SR", x)),
                 F1("SRlll", F1("SRlll", F1("SR", F1("SR", F1("Sug", x)))))},
                {F1("Sug", F1("SRlll", F1("W", x))), F("V", {k, x})},
                {F1("Sug", F1("SRlll", F1("W", F1("SRlll", x)))), F1("Sug", F1("SRlll", F1("W", x)))},
                {F1("Sug", F1("SRlll", F1("SRlll", x))), F1("SRlll", F1("SRlll", F1("Sug", x)))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F1("SRlll", F1("SRlll", F1("Sug", x))))},
                {F1("Sug", F1("SRlll", x)), F1("SRlll", F("V", {k, x}))},
                {F1("Sug", F1("SRlll", F1("SRlll", x))), F1("Sug", F1("SRlll", F1("W", x)))},
                {F("V", {F1("s", k), x}), F1("SRlll", F("V", {k, x}))},
                {F("V", {F1("s", k), x}), F1("SRlll", F1("SRlll", F1("Sug", x)))},
                {F("V", {F1("s", k), x}), F1("SRlll", F1("SR", F1("SR", F1("Sug", x))))},
                {F("V", {F1("s", k), x}), F1("SRlll", F1("SR", F1("Sug", x)))},
                {F1("Sug", F1("SRlll", x)), F("V", {k, x})},
                {F1("Sug", F1("SR", x)), F1("SRlll", F("V", {k, x}))},
                {F1("Sug", F1("SR", x)), F("V", {k, x})},
                {F1("Sug", F1("SRlll", F1("W", x))), F1("SRlll", F1("SRlll", F1("Sug", x)))},
                {F1("Sug", F1("SRlll", F1("W", x))), F1("SRlll", F("V", {k, x}))},
                {F1("Sug", F1("SRlll", F1("W", x))), F1("SRlll", F1("Sug", x))},
            }};
}

} // namespace

std::string to_string(TrsSystem s) {
    switch (s) {
    case TrsSystem::lll_r1: return "lll-R1";
    case TrsSystem::lll_r2: return "lll-R2";
    case TrsSystem::cp_r1: return "cp-R1";
    case TrsSystem::cp_r2: return "cp-R2";
    case TrsSystem::cpx_r: return "cpx-R";
    case TrsSystem::gc_ucp_r1: return "gc-ucp-R1";
    case TrsSystem::gc_ucp_r2: return "gc-ucp-R2";
    }
    return "?";
}

TrsSystem trs_system_from_string(const std::string& s) {
    for (auto sys : all_trs_systems())
        if (to_string(sys) == s) return sys;
    throw std::invalid_argument("unknown TRS system: " + s);
}

std::vector<TrsSystem> all_trs_systems() {
    return {TrsSystem::lll_r1, TrsSystem::lll_r2,    TrsSystem::cp_r1,    TrsSystem::cp_r2,
            TrsSystem::cpx_r,  TrsSystem::gc_ucp_r1, TrsSystem::gc_ucp_r2};
}

const SymbolicTRS& builtin_trs(TrsSystem s) {
    static const SymbolicTRS lll_r1 = make_lll_r1();
    static const SymbolicTRS lll_r2 = make_lll_r2();
    static const SymbolicTRS cp_r1 = make_cp_r1();
    static const SymbolicTRS cp_r2 = make_cp_r2();
    static const SymbolicTRS cpx_r = make_cpx_r();
    static const SymbolicTRS gc_ucp_r1 = make_gc_ucp_r1();
    static const SymbolicTRS gc_ucp_r2 = make_gc_ucp_r2();
    switch (s) {
    case TrsSystem::lll_r1: return lll_r1;
    case TrsSystem::lll_r2: return lll_r2;
    case TrsSystem::cp_r1: return cp_r1;
    case TrsSystem::cp_r2: return cp_r2;
    case TrsSystem::cpx_r: return cpx_r;
    case TrsSystem::gc_ucp_r1: return gc_ucp_r1;
    case TrsSystem::gc_ucp_r2: return gc_ucp_r2;
    }
    throw std::invalid_argument("unknown system");
}

std::string emit_trs(TrsSystem s) {
    const SymbolicTRS& trs = builtin_trs(s);
    std::string out = "(VAR";
    for (auto& v : trs.variables) out += " " + v;
    out += ")\n(RULES\n";
    for (auto& r : trs.rules) out += "  " + r.lhs.str() + " -> " + r.rhs.str() + "\n";
    out += ")\n";
    return out;
}

namespace {

using Prec = std::vector<std::pair<std::string, std::string>>;

void symbols_of(const TrsTerm& t, std::set<std::string>& out) {
    if (t.is_var) return;
    out.insert(t.symbol);
    for (auto& a : t.args) symbols_of(a, out);
}

struct OrderParams {
    bool has_kbo = false;
    KboWeights kbo;
    PrecedenceOrder kbo_prec;
    bool has_lpo = false;
    PrecedenceOrder lpo_prec;
    std::string description;
};

OrderParams order_params(TrsSystem s) {
    OrderParams p;
    switch (s) {
    case TrsSystem::lll_r1:
        p.has_kbo = true;
        p.kbo.weight = {{"Slll", 0}, {"SR", 1}, {"SRlll", 1}};
        p.kbo_prec = PrecedenceOrder(Prec{{"Slll", "SR"}, {"Slll", "SRlll"}});
        p.description = "KBO, w(Slll)=0, w(SR)=w(SRlll)=1, Slll maximal";
        break;
    case TrsSystem::lll_r2:
        p.has_lpo = true;
        p.lpo_prec = PrecedenceOrder(Prec{{"Sllet", "Slapp"}, {"Slapp", "SR"}, {"Slapp", "SRlll"}});
        p.description = "LPO, Sllet > Slapp > SR and Slapp > SRlll";
        break;
    case TrsSystem::cp_r1:
        p.has_kbo = true;
        p.kbo.weight = {{"Scp", 0}, {"SR", 1}};
        p.kbo_prec = PrecedenceOrder(Prec{{"Scp", "SR"}});
        p.description = "KBO, w(Scp)=0, w(SR)=1, Scp maximal";
        break;
    case TrsSystem::cp_r2:
        p.has_kbo = true;
        p.kbo.weight = {{"Scpd", 0}, {"ScpS", 1}, {"SR", 1}, {"SRlbeta", 1}};
        p.kbo_prec = PrecedenceOrder(Prec{{"Scpd", "ScpS"},
                                      {"Scpd", "SR"},
                                      {"Scpd", "SRlbeta"},
                                      {"ScpS", "SR"},
                                      {"ScpS", "SRlbeta"}});
        p.has_lpo = true;
        p.lpo_prec = PrecedenceOrder(Prec{{"Scpd", "ScpS"}, {"ScpS", "SRlbeta"}, {"ScpS", "SR"}});
        p.description =
            "per rule: KBO (w(Scpd)=0, w(ScpS)=w(SR)=w(SRlbeta)=1, Scpd maximal, ScpS > SR, "
            "ScpS > SRlbeta) or LPO (Scpd > ScpS > SRlbeta, ScpS > SR)";
        break;
    case TrsSystem::cpx_r:
        p.has_kbo = true;
        p.kbo.weight = {{"Scpx", 0}, {"SR", 1}};
        p.kbo_prec = PrecedenceOrder(Prec{{"Scpx", "SR"}});
        p.description = "KBO, w(Scpx)=0, w(SR)=1, Scpx maximal";
        break;
    default:
        throw std::invalid_argument(
            "verify_termination_claim: system " + to_string(s) +
            " has right-hand-side-only variables and is emit-only (external provers)");
    }
    return p;
}

} // namespace

TerminationCheck verify_termination_claim(TrsSystem s) {
    OrderParams params = order_params(s);
    const SymbolicTRS& trs = builtin_trs(s);
    std::set<std::string> symbols;
    for (auto& r : trs.rules) {
        symbols_of(r.lhs, symbols);
        symbols_of(r.rhs, symbols);
    }
    TerminationCheck out;
    out.holds = true;
    out.order_description = params.description;
    for (auto& r : trs.rules) {
        RuleOrientation ro;
        ro.rule = r.lhs.str() + " -> " + r.rhs.str();
        if (params.has_kbo && kbo_greater(r.lhs, r.rhs, params.kbo, params.kbo_prec, symbols))
            ro.oriented_by = "kbo";
        else if (params.has_lpo && lpo_greater(r.lhs, r.rhs, params.lpo_prec))
            ro.oriented_by = "lpo";
        else
            out.holds = false;
        out.rules.push_back(std::move(ro));
    }
    return out;
}

} // namespace probneed

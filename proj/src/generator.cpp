#include "probneed/generator.hpp"

namespace probneed {

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

TermGen::TermGen(std::uint64_t seed, GenConfig cfg, const CtorTable& table)
    : rng_(seed), cfg_(cfg), table_(table) {}

VarName TermGen::fresh_binder() { return VarName{"v", ++counter_}; }

ExprPtr TermGen::gen() {
    std::vector<VarName> scope;
    return gen_expr(cfg_.max_size, scope);
}

ExprPtr TermGen::gen_leaf(std::vector<VarName>& scope) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng_) < cfg_.bot_weight) return combinator_bot();
    // prefer bound variables so lets and lambdas are actually exercised
    if (!scope.empty() && coin(rng_) < 0.62) {
        std::uniform_int_distribution<std::size_t> pick(0, scope.size() - 1);
        return mk_var(scope[pick(rng_)]);
    }
    switch (std::uniform_int_distribution<int>(0, 3)(rng_)) {
    case 0: return combinator_id();
    case 1: return combinator_k();
    case 2: return combinator_k2();
    default: {
        VarName b = fresh_binder();
        return mk_lam(b, mk_var(b));
    }
    }
}

ExprPtr TermGen::gen_expr(std::size_t budget, std::vector<VarName>& scope) {
    if (budget <= 1) return gen_leaf(scope);
    std::vector<double> weights = {cfg_.w_app, cfg_.w_lam, cfg_.w_let, cfg_.w_choice};
    if (cfg_.extended && budget >= 2) weights.push_back(cfg_.w_ext);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::uniform_int_distribution<std::size_t> splitter(1, budget - 1);

    switch (pick(rng_)) {
    case 0: { // application
        std::size_t l = splitter(rng_);
        ExprPtr fun = gen_expr(l, scope);
        ExprPtr arg = gen_expr(budget - l, scope);
        return mk_app(std::move(fun), std::move(arg));
    }
    case 1: { // abstraction
        VarName b = fresh_binder();
        scope.push_back(b);
        ExprPtr body = gen_expr(budget - 1, scope);
        scope.pop_back();
        return mk_lam(b, std::move(body));
    }
    case 2: { // recursive let with 1..3 bindings
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng_);
        n = std::min(n, budget > 2 ? (budget - 1) / 2 : 1);
        if (n == 0) n = 1;
        std::vector<VarName> binders;
        for (std::size_t i = 0; i < n; ++i) binders.push_back(fresh_binder());
        for (auto& b : binders) scope.push_back(b);
        std::size_t part = (budget - 1) / (n + 1);
        if (part == 0) part = 1;
        std::vector<Binding> env;
        for (std::size_t i = 0; i < n; ++i) env.push_back({binders[i], gen_expr(part, scope)});
        ExprPtr body = gen_expr(part, scope);
        for (std::size_t i = 0; i < n; ++i) scope.pop_back();
        return mk_let(std::move(env), std::move(body));
    }
    case 3: { // choice
        std::size_t l = splitter(rng_);
        ExprPtr left = gen_expr(l, scope);
        ExprPtr right = gen_expr(budget - l, scope);
        return mk_choice(std::move(left), std::move(right));
    }
    default: { // extended: constructor application, case, or seq
        int which = std::uniform_int_distribution<int>(0, 2)(rng_);
        if (which == 0) {
            auto types = table_.type_names();
            std::uniform_int_distribution<std::size_t> tpick(0, types.size() - 1);
            auto* ctors = table_.ctors_of(types[tpick(rng_)]);
            std::uniform_int_distribution<std::size_t> cpick(0, ctors->size() - 1);
            auto [name, arity] = (*ctors)[cpick(rng_)];
            std::vector<ExprPtr> args;
            std::size_t part = arity ? std::max<std::size_t>(1, (budget - 1) / arity) : 1;
            for (int i = 0; i < arity; ++i) args.push_back(gen_expr(part, scope));
            return mk_ctor(name, std::move(args));
        }
        if (which == 1) {
            auto types = table_.type_names();
            std::uniform_int_distribution<std::size_t> tpick(0, types.size() - 1);
            std::string type = types[tpick(rng_)];
            auto* ctors = table_.ctors_of(type);
            std::size_t part = std::max<std::size_t>(1, (budget - 1) / (ctors->size() + 1));
            ExprPtr scrut = gen_expr(part, scope);
            std::vector<Alt> alts;
            for (auto& [name, arity] : *ctors) {
                std::vector<VarName> bs;
                for (int i = 0; i < arity; ++i) bs.push_back(fresh_binder());
                for (auto& b : bs) scope.push_back(b);
                ExprPtr body = gen_expr(part, scope);
                for (int i = 0; i < arity; ++i) scope.pop_back();
                alts.push_back({name, std::move(bs), std::move(body)});
            }
            return mk_case(type, std::move(scrut), std::move(alts));
        }
        std::size_t l = splitter(rng_);
        ExprPtr first = gen_expr(l, scope);
        ExprPtr second = gen_expr(budget - l, scope);
        return mk_seq(std::move(first), std::move(second));
    }
    }
}

} // namespace probneed

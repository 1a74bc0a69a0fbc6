#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace probneed {

// First-order terms over unary step symbols (plus the Peano successor and
// the binary generator symbols of the gc/ucp systems).
struct TrsTerm {
    bool is_var = false;
    std::string symbol;
    std::vector<TrsTerm> args;

    static TrsTerm var(std::string name) { return {true, std::move(name), {}}; }
    static TrsTerm fun(std::string sym, std::vector<TrsTerm> args = {}) {
        return {false, std::move(sym), std::move(args)};
    }
    bool operator==(const TrsTerm&) const = default;
    std::string str() const;
};

struct TrsRule {
    TrsTerm lhs, rhs;
};

struct SymbolicTRS {
    std::string name;
    std::vector<std::string> variables; // declared in emission order
    std::vector<TrsRule> rules;         // in figure order
};

struct KboWeights {
    std::map<std::string, unsigned> weight;
    unsigned var_weight = 1;
};

class PrecedenceOrder {
  public:
    PrecedenceOrder() = default;
    explicit PrecedenceOrder(std::vector<std::pair<std::string, std::string>> gt_pairs);
    bool greater(const std::string& a, const std::string& b) const;

  private:
    std::set<std::pair<std::string, std::string>> gt_;
};

// Standard KBO: variable-count condition, then weight comparison, then the
// special f^n(x) case, precedence, and lexicographic recursion. Throws on
// inadmissible parameters (a weight-0 unary symbol must be the maximum).
bool kbo_greater(const TrsTerm& l, const TrsTerm& r, const KboWeights& w,
                 const PrecedenceOrder& prec, const std::set<std::string>& all_symbols);

// Standard LPO with strict precedence.
bool lpo_greater(const TrsTerm& l, const TrsTerm& r, const PrecedenceOrder& prec);

enum class TrsSystem { lll_r1, lll_r2, cp_r1, cp_r2, cpx_r, gc_ucp_r1, gc_ucp_r2 };
std::string to_string(TrsSystem s);
TrsSystem trs_system_from_string(const std::string& s);
std::vector<TrsSystem> all_trs_systems();

const SymbolicTRS& builtin_trs(TrsSystem s);

// Plain (VAR ...) (RULES ...) format, rules in figure order.
std::string emit_trs(TrsSystem s);

struct RuleOrientation {
    std::string rule;      // "lhs -> rhs"
    std::string oriented_by; // "kbo", "lpo", or "" when not oriented
};

struct TerminationCheck {
    bool holds = false;
    std::string order_description;
    std::vector<RuleOrientation> rules;
};

// Checks that every rule is oriented by the documented KBO or LPO
// parameters of the system. The gc/ucp systems have variables that occur
// only on right-hand sides, which no reduction order accepts; they are
// emit-only and rejected here.
TerminationCheck verify_termination_claim(TrsSystem s);

} // namespace probneed

#pragma once

#include <cstdint>
#include <random>

#include "probneed/syntax.hpp"

namespace probneed {

// Random well-scoped closed terms. Binder names are generated fresh, so the
// output obeys the distinct variable convention by construction.
struct GenConfig {
    std::size_t max_size = 25; // node budget
    bool extended = false;
    // relative weights of the productions at inner nodes
    double w_app = 1.0;
    double w_lam = 0.7;
    double w_let = 0.8;
    double w_choice = 0.9;
    double w_ext = 0.8; // ctor/case/seq combined (extended mode)
    // probability that a leaf is Bot (divergence-rich generation)
    double bot_weight = 0.12;
};

class TermGen {
  public:
    TermGen(std::uint64_t seed, GenConfig cfg, const CtorTable& table = CtorTable::defaults());

    ExprPtr gen();

  private:
    ExprPtr gen_expr(std::size_t budget, std::vector<VarName>& scope);
    ExprPtr gen_leaf(std::vector<VarName>& scope);
    VarName fresh_binder();

    std::mt19937_64 rng_;
    GenConfig cfg_;
    const CtorTable& table_;
    std::uint32_t counter_ = 0;
};

// Derives a per-trial seed from a base seed (splitmix64 step), so parallel
// trials are deterministic regardless of scheduling.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

} // namespace probneed

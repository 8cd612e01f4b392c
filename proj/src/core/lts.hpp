#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "machine.hpp"
#include "trace.hpp"

namespace hosc {

/// A configuration of the HOSC, GOSC, HOS or GOS LTS. Passive configurations
/// ignore `term`/`cont`; `visible` is meaningful only when passive under a
/// model with visibility, `topc` only when passive under bracketing.
struct Config {
    Model model = Model::HOSC;
    bool active = true;
    TermP term;
    Name cont;
    std::map<Name, TermP> gamma_f;
    std::map<Name, Context> gamma_c;
    std::map<Name, Name> xi;  // bottom_name() stands for ⊥
    std::set<Name> phi;
    Heap heap;
    std::map<Name, std::set<Name>> F;
    std::set<Name> visible;
    Name topc;
    NameAlloc alloc;
    std::uint32_t space = 0;    // location space for allocations of this side
    std::vector<Name> amb_o;    // initial names usable by P
    std::vector<Name> amb_p;    // initial names usable by O
};

/// C_M^{ρ,c} adapted to the model. Names of ρ and c are reserved.
Config init_term_config(const TermP& m, const Assignment& rho, const Name& c, Model model);

/// Convenience: canonical ρ, then c allocated after it.
Config init_term_config(const TermP& m, const VarEnv& gamma, TypeP type, Model model,
                        const std::vector<mpz_class>& ints = int_range(0, 1));

/// The context configuration for (h, K, γ) with c of the hole type. The
/// substitution values may mention the variable `err`; unnamed cont values
/// are staged at the final name of their result type.
struct ContextInput {
    Heap heap;
    Context k;
    TypeP hole = nullptr;
    TypeP result = nullptr;
    std::vector<std::pair<std::string, TermP>> gamma;
    VarEnv gamma_types;
};

Config init_context_config(const ContextInput& in, const Name& c);

/// Replaces unnamed cont values by cont(K, ◦) and `err` by errn.
TermP upgrade_term(const TermP& m, const std::map<Loc, TypeP>& sigma);
Context upgrade_context(const Context& k, const std::map<Loc, TypeP>& sigma);

Trace empty_trace_of(const Config& c);

enum class PKind : std::uint8_t { Answer, Question, Diverged, Stuck };

struct PResult {
    PKind kind = PKind::Stuck;
    Action action;
    Config next;
    MachineState normal_form;  // the state reached by the τ-steps
    std::size_t steps = 0;
};

PResult p_transition(const Config& cfg, std::size_t fuel = kDefaultFuel);

struct OMove {
    Action action;
    Config next;
};

std::vector<OMove> enumerate_o_moves(const Config& cfg, const std::vector<mpz_class>& ints);

/// Why O may not play `a` here, or nothing when the move is legal.
std::optional<std::string> o_move_refusal(const Config& cfg, const Action& a);

/// Throws std::invalid_argument with the refusal reason for an illegal move.
Config apply_o_move(const Config& cfg, const Action& a);

/// Refusal of `a` after `t` under `model`, judged on the trace alone.
std::optional<std::string> trace_refusal(const Trace& t, const Action& a, Model model);

std::string show_config(const Config& c);

}  // namespace hosc

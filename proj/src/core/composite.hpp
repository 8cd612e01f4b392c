#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lts.hpp"

namespace hosc {

/// ⟨M, c, γ_P, γ_O, ξ, φ, h_P, h_O⟩. The P side is the term, the O side the
/// context; h_P lives in location space 0 and h_O in space 1.
struct CompositeConfig {
    TermP term;
    Name cont;
    std::map<Name, TermP> gp_f, go_f;
    std::map<Name, Context> gp_c, go_c;
    std::map<Name, Name> xi;
    std::set<Name> phi;
    Heap hp, ho;
    NameAlloc alloc;
};

struct Validity {
    bool ok = true;
    std::string reason;
};

Validity check_valid(const CompositeConfig& d);

/// Throws std::invalid_argument naming the failed compatibility condition.
CompositeConfig merge(const Config& term_side, const Config& context_side);

enum class CStepKind : std::uint8_t { Tau, Visible, Final, ErrStuck, Stuck };

struct CStep {
    CStepKind kind = CStepKind::Stuck;
    std::optional<Action> label;  // from the term's point of view
    CompositeConfig next;
};

CStep composite_step(const CompositeConfig& d);

/// True when the P side (the term) owns the evaluation.
bool p_running(const CompositeConfig& d);

/// θ(D) = ((K_c[M]){δ}, (h_P·h_O){δ}). Throws std::logic_error when the
/// name graph is cyclic or δ does not stabilise.
std::pair<TermP, Heap> theta(const CompositeConfig& d);

enum class CompositeEnd : std::uint8_t { Final, Err, FuelExhausted, Stuck };

std::string composite_end_name(CompositeEnd e);

struct CompositeRun {
    CompositeEnd end = CompositeEnd::Stuck;
    Trace trace;
    std::size_t steps = 0;     // all composite steps
    std::size_t tau_steps = 0;
    bool bisimulation_ok = true;
    std::string discrepancy;   // first θ mismatch, if any
    bool validity_ok = true;
    std::vector<std::string> audit;  // per-step θ images when requested
    CompositeConfig last;
};

CompositeRun composite_run(const CompositeConfig& d, const Trace& ambient, std::size_t fuel, bool check_theta,
                           bool keep_audit = false);

struct CompositeObservation {
    bool yes = false;
    Trace trace;
    CompositeRun run;
};

CompositeObservation composite_observes(const Config& term_side, const Config& context_side, Observation kind,
                                        std::size_t fuel = kDefaultFuel);

}  // namespace hosc

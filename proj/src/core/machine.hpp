#pragma once

#include <map>
#include <optional>
#include <string>

#include "lang.hpp"

namespace hosc {

/// A finite type-respecting store. `sigma` records the declared cell types.
struct Heap {
    std::map<Loc, TermP> cells;
    std::map<Loc, TypeP> sigma;

    Loc alloc(std::uint32_t space, TermP v, TypeP t);
    bool disjoint(const Heap& other) const;
    Heap merged(const Heap& other) const;
};

std::string show_heap(const Heap& h);
bool heap_equal(const Heap& a, const Heap& b);

/// Plain: the base reduction, continuations are cont(K).
/// Extended: continuation names are tracked and callcc captures cont(K,c).
enum class Mode : std::uint8_t { Plain, Extended };

struct MachineState {
    TermP term;
    Name cont;
    Heap heap;
    std::uint32_t space = 0;  // location space used for fresh cells
};

/// Splits a non-value into K[r] with r a redex or a stuck form.
struct Decomposition {
    Context k;
    TermP redex;
};
std::optional<Decomposition> decompose(const TermP& m);

std::optional<MachineState> step(const MachineState& s, Mode mode);

/// One step of the base reduction on (M,h).
std::optional<std::pair<TermP, Heap>> step_base(const TermP& m, const Heap& h, std::uint32_t space = 0);
std::optional<MachineState> step_ext(const MachineState& s);

enum class Outcome : std::uint8_t { Value, Callback, ErrStuck, FuelExhausted, Stuck };

std::string outcome_name(Outcome o);

struct RunResult {
    Outcome kind = Outcome::Stuck;
    MachineState state;      // the final state (for Value/Callback/ErrStuck/Stuck)
    Context k;               // Callback/ErrStuck: the surrounding context
    Name head;               // Callback/ErrStuck: the applied function name
    TermP arg;               // Callback/ErrStuck: the argument
    std::size_t steps = 0;
    bool cycle = false;      // FuelExhausted was reported early because a state repeated
};

constexpr std::size_t kDefaultFuel = 10000;

RunResult run(const MachineState& s, std::size_t fuel, Mode mode = Mode::Extended);

enum class Observation : std::uint8_t { Ter, Err };

/// (M,h)⇓ter or (M,h)⇓err within fuel, under the base reduction. The err
/// variable must already be replaced by the errn name.
bool observes(const TermP& m, const Heap& h, Observation kind, std::size_t fuel = kDefaultFuel);

std::size_t term_hash(const TermP& m);

}  // namespace hosc

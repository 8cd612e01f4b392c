#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "equiv.hpp"

namespace hosc {

/// A precondition failure: the trace is not in the image of the model's
/// contexts. `position` is the offending action, or -1.
struct SynthError : std::runtime_error {
    int position;
    SynthError(const std::string& what, int pos) : std::runtime_error(what), position(pos) {}
};

struct SynthOptions {
    TypeP answer = nullptr;  // ◦'s type when the trace does not fix it; Unit by default
    bool corrupt = false;    // negative control: misroute the dispatch of the first O-action
};

/// A context configuration (h, K, γ) realising a trace, in the extended
/// syntax: errn and cont(·, ◦) appear as names. Locations live in space 1.
struct SynthResult {
    Model model = Model::HOSC;
    TypeP answer = nullptr;
    Name c;
    Trace trace;  // the canonicalised input
    Heap heap;
    Context k;
    std::vector<std::pair<Name, TermP>> gamma;  // ambient function names, in order
    std::vector<std::string> cell_names;        // by location index
};

SynthResult synthesize_context(const Trace& t, Model model, const SynthOptions& opt = {});

/// The same triple in source form: `err` for errn and unnamed cont literals.
/// Substitution entries are called g0, g1, ... in ambient order.
ContextInput to_context_input(const SynthResult& r);

/// init_context_config of the source form.
Config synthesized_config(const SynthResult& r);

struct SynthReport {
    bool ok = true;
    bool exact = true;         // even traces == canonical even prefixes
    bool fragment_ok = true;   // h, K, γ typecheck inside the target fragment
    bool determinate = true;   // off-script O-moves diverge
    std::vector<Trace> missing, extra;
    std::size_t expected = 0, found = 0;
    std::vector<std::string> notes;
};

SynthReport verify_synthesis(const Trace& t, Model model, const SynthResult& r, std::size_t fuel = kDefaultFuel);

/// Integer constants occurring in the payloads of t, plus 0 and 1.
std::vector<mpz_class> trace_ints(const Trace& t);

}  // namespace hosc

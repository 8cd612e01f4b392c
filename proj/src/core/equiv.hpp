#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lts.hpp"

namespace hosc {

struct Bounds {
    std::size_t depth = 8;
    std::size_t fuel = kDefaultFuel;
    std::vector<mpz_class> ints = int_range(0, 1);
    bool exhaustive = false;  // every Γ-assignment over `ints` rather than the canonical one
};

/// What happens after a trace: P still has to move and diverges or gets
/// stuck, O has no move, the depth bound cuts it, or it has extensions.
enum class Terminal : std::uint8_t { Open, Passive, Diverged, Stuck, DepthLimit };

std::string terminal_name(Terminal t);

struct TraceEntry {
    Trace trace;
    Terminal status = Terminal::Open;
};

/// Canonical traces ordered by length, then by their key.
struct TraceSet {
    Model model = Model::HOSC;
    std::size_t depth = 0;
    std::vector<TraceEntry> entries;
    std::map<std::string, std::size_t> index;

    bool contains(const Trace& t) const { return index.count(trace_key(t)) > 0; }
    std::vector<Trace> traces() const;
};

TraceSet enumerate_traces(const Config& cfg, const Bounds& b);

/// One trace set per Γ-assignment; a single entry in canonical mode.
struct TermTraces {
    std::vector<Assignment> rhos;
    std::vector<TraceSet> sets;
};

TermTraces term_traces(const TermP& m, const VarEnv& gamma, TypeP type, Model model, const Bounds& b);

struct Inclusion {
    bool included = true;
    std::optional<Trace> witness;  // in the left set, not in the right one
    std::size_t rho = 0;           // assignment index of the witness
};

/// Minimal trace of `left` missing from `right`.
Inclusion set_included(const TraceSet& left, const TraceSet& right, bool complete_only);

Inclusion trace_included(const TermP& m1, const TermP& m2, const VarEnv& gamma, TypeP type, Model model,
                         const Bounds& b, bool complete_only);

enum class Verdict : std::uint8_t { Distinct, EquivalentUpToDepth };

std::string verdict_name(Verdict v);

struct EquivResult {
    Verdict verdict = Verdict::EquivalentUpToDepth;
    Model model = Model::HOSC;
    std::size_t depth = 0;
    bool complete_only = false;
    Inclusion left_in_right;  // Tr(M1) ⊆ Tr(M2)
    Inclusion right_in_left;
};

EquivResult compare_terms(const TermP& m1, const TermP& m2, const VarEnv& gamma, TypeP type, Model model,
                          const Bounds& b, bool complete_only = false);

struct Distinguishing {
    Trace trace;
    int direction = 1;  // 1: only the first term has it, 2: only the second
};

std::optional<Distinguishing> find_distinguishing_trace(const TermP& m1, const TermP& m2, const VarEnv& gamma,
                                                        TypeP type, Model model, const Bounds& b);

/// A recorded run of the LTS along a given trace: each τ* block and each
/// action together with the configuration it reaches.
struct DerivationRow {
    std::string label;  // "tau*" or the action
    Config config;
};

struct Replay {
    bool ok = true;
    int failed_at = -1;
    std::string reason;
    std::vector<DerivationRow> rows;
    Config last;
};

Replay replay(const Config& start, const Trace& t, std::size_t fuel = kDefaultFuel);

}  // namespace hosc

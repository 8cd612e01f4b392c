#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "avals.hpp"

namespace hosc {

enum class Pol : std::uint8_t { P, O };

inline Pol opposite(Pol p) { return p == Pol::P ? Pol::O : Pol::P; }

struct Action {
    Pol pol = Pol::P;
    bool question = false;
    Name subject;
    AVal payload;
    Name cont;  // questions only

    /// Names introduced by this action: ν(A), then the fresh continuation.
    std::vector<Name> introduced() const;
};

Action p_answer(const Name& c, AVal a);
Action o_answer(const Name& c, AVal a);
Action p_question(const Name& f, AVal a, const Name& c);
Action o_question(const Name& f, AVal a, const Name& c);

bool action_equal(const Action& x, const Action& y);

/// `ambient_o` holds the names P may use without introduction (N_O),
/// `ambient_p` the names O may use (N_P).
struct Trace {
    std::vector<Name> ambient_o;
    std::vector<Name> ambient_p;
    std::vector<Action> acts;

    std::size_t size() const { return acts.size(); }
    Trace prefix(std::size_t n) const;
};

bool trace_equal(const Trace& x, const Trace& y);

// ---------------------------------------------------------------------------
// Wire format.

std::string show_action(const Action& a);
Action parse_action(const std::string& line);

/// Header lines `ambient O <name>` / `ambient P <name>`, then one action per
/// line. A line may also hold several actions joined by ` . ` as in
/// trace_key. `#` starts a comment.
std::string show_trace(const Trace& t);
Trace parse_trace(const std::string& text);

/// Compact one-line form used in listings and as a set key.
std::string trace_key(const Trace& t);

// ---------------------------------------------------------------------------
// Structure.

struct WellFormed {
    bool ok = true;
    int position = -1;
    std::string reason;
};

WellFormed check_well_formed(const Trace& t);

/// Position introducing the subject of action i, or -1 when it is ambient.
int justifier(const Trace& t, std::size_t i);

/// A set of names that may additionally contain every ◦_σ at once.
struct NameView {
    std::set<Name> names;
    bool all_final = false;

    bool contains(const Name& n) const { return names.count(n) || (all_final && n.is_final()); }
};

NameView compute_oav(const Trace& t);
NameView compute_pav(const Trace& t);

/// Returns bottom_name() for ⊥.
Name compute_topo(const Trace& t);
/// The base ◦_τ' is taken from the ambient names; `tau` overrides it.
Name compute_topp(const Trace& t, TypeP tau = nullptr);

enum class Predicate : std::uint8_t { OVisible, PVisible, OBracketed, PBracketed, Complete };

std::string predicate_name(Predicate p);
bool parse_predicate(const std::string& s, Predicate& out);

struct PredicateResult {
    bool holds = true;
    int violation = -1;  // offending action, or -1
};

PredicateResult check_predicate(const Trace& t, Predicate p, TypeP tau = nullptr);

Trace dualize(const Trace& t);

/// t^⊥ · quest! errn () c' with c' fresh, errn added to the ambient set.
Trace dual_with_err(const Trace& t);

/// Renames every name outside `fixed` to the canonical sequence: ambient
/// names first, then names in order of introduction.
Trace canonicalize(const Trace& t, const std::set<Name>& fixed);

/// Highest plain name indices used in t, for continuing allocation.
NameAlloc alloc_after(const Trace& t);

}  // namespace hosc

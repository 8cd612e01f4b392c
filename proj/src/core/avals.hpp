#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lang.hpp"

namespace hosc {

/// Abstract values are ordinary terms built from (), tt, ff, integers,
/// function names and pairs.
using AVal = TermP;

using NameSubst = std::vector<std::pair<Name, TermP>>;

struct Decomposition;  // machine.hpp

struct AValSplit {
    AVal pattern;
    NameSubst gamma;  // fresh function name -> the value it stands for
};

/// The canonical element of AVal(V)_σ. Throws TypeError when σ is not a
/// boundary type or V does not match it.
AValSplit aval_decompose(const TermP& v, TypeP t, NameAlloc& fresh);

/// Every abstract value of type t with integer leaves drawn from `ints`.
/// Arrow leaves receive one fresh name each, shared by all alternatives.
std::vector<AVal> enumerate_avals(TypeP t, const std::vector<mpz_class>& ints, NameAlloc& fresh);

/// Closed-form size of enumerate_avals.
std::size_t count_avals(TypeP t, std::size_t n_ints);

bool is_aval(const TermP& a);
bool aval_linear(const AVal& a);
std::vector<Name> aval_names(const AVal& a);
TypeP aval_type(const AVal& a);

std::string show_aval(const AVal& a);
AVal parse_aval(const std::string& text);
Name parse_name(const std::string& text);

/// Reads a name token starting at `pos`; advances `pos` past it.
Name read_name(const std::string& text, std::size_t& pos);

using Assignment = std::vector<std::pair<std::string, AVal>>;

Assignment canonical_assignment(const VarEnv& gamma, const std::vector<mpz_class>& ints, NameAlloc& fresh);

/// All Γ-assignments over `ints`, sharing the fresh names of the canonical one.
std::vector<Assignment> all_assignments(const VarEnv& gamma, const std::vector<mpz_class>& ints, NameAlloc& fresh);

std::vector<Name> assignment_names(const Assignment& rho);

std::vector<mpz_class> int_range(long lo, long hi);

}  // namespace hosc

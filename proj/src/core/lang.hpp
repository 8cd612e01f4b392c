#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "syntax.hpp"

namespace hosc {

enum class Model : std::uint8_t { HOSC, GOSC, HOS, GOS };

inline const Model kAllModels[] = {Model::HOSC, Model::GOSC, Model::HOS, Model::GOS};

std::string model_name(Model m);        // "HOSC", ...
bool parse_model(const std::string& s, Model& out);  // case-insensitive
inline bool has_visibility(Model m) { return m == Model::GOSC || m == Model::GOS; }
inline bool has_bracketing(Model m) { return m == Model::HOS || m == Model::GOS; }

using VarEnv = std::vector<std::pair<std::string, TypeP>>;

struct TypeEnv {
    std::map<Loc, TypeP> sigma;
    VarEnv gamma;  // later entries shadow earlier ones
};

// ---------------------------------------------------------------------------
// Parsing and printing.

TypeP parse_type(const std::string& text);

/// Parses and elaborates a source term under Γ. The result is fully annotated.
TermP parse_term(const std::string& text, const VarEnv& gamma = {});

/// Parses a context with exactly one `[]` hole in evaluation position.
Context parse_context(const std::string& text, TypeP hole, const VarEnv& gamma = {});

/// A term file: `#gamma x : T` lines declare Γ, `#` starts a comment.
struct TermFile {
    VarEnv gamma;
    TermP term;
    TypeP type = nullptr;
};
TermFile parse_term_file(const std::string& text);

std::string show_term(const TermP& m);
std::string show_context(const Context& k);

// ---------------------------------------------------------------------------
// Typing.

TypeP infer_type(const TypeEnv& env, const TermP& m);
TypeP infer_context_type(const TypeEnv& env, const Context& k, TypeP hole);

std::set<Model> classify_type_fragment(TypeP t);

/// Every type occurring in the typing derivation of `m` lies in the fragment.
bool term_in_fragment(const TypeEnv& env, const TermP& m, Model frag);
bool context_in_fragment(const TypeEnv& env, const Context& k, TypeP hole, Model frag);

bool check_cr_free(const TypeEnv& env, const TermP& m, TypeP boundary);

}  // namespace hosc

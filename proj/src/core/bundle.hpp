#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lts.hpp"

namespace hosc {

/// A context configuration in source form, as read from or written to a
/// bundle file:
///
///     hole Int
///     result Unit
///     cell tick : Int = 0
///     gamma g0 : Unit -> Unit = fun(x:Unit) tick := !tick + 1
///     context (fun(x:Int) x) []
///
/// Cells are named and live in location space 1 in declaration order. Terms
/// may mention any cell and the variable `err`. A line starting with
/// whitespace continues the previous declaration.
struct Bundle {
    ContextInput input;
    std::vector<std::string> cell_names;
};

struct BundleError : std::runtime_error {
    int line;
    BundleError(const std::string& what, int ln) : std::runtime_error(what), line(ln) {}
};

Bundle parse_bundle(const std::string& text);
std::string show_bundle(const Bundle& b);

/// Replaces every location with its cell name, for printing.
TermP name_cells(const TermP& m, const std::vector<std::string>& cell_names);

}  // namespace hosc

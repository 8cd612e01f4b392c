#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "bundle.hpp"
#include "composite.hpp"
#include "equiv.hpp"
#include "synth.hpp"

namespace testing {

inline std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(HOSC_SOURCE_DIR) + "/" + rel);
    if (!in) throw std::runtime_error("missing test input " + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline hosc::TermFile corpus(const std::string& name) { return hosc::parse_term_file(slurp("corpus/" + name + ".hosc")); }

inline hosc::Trace fixture(const std::string& name) { return hosc::parse_trace(slurp("tests/data/" + name + ".trace")); }

inline hosc::Config term_config(const hosc::TermFile& f, hosc::Model m = hosc::Model::HOSC) {
    return hosc::init_term_config(f.term, f.gamma, f.type, m);
}

inline hosc::TraceSet traces_of(const hosc::TermFile& f, hosc::Model m, std::size_t depth) {
    hosc::Bounds b;
    b.depth = depth;
    return hosc::term_traces(f.term, f.gamma, f.type, m, b).sets.at(0);
}

inline std::set<std::string> names_of(const hosc::NameView& v) {
    std::set<std::string> out;
    for (const auto& n : v.names) out.insert(hosc::show_name(n));
    return out;
}

}  // namespace testing

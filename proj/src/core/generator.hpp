#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lang.hpp"

namespace hosc {

/// Random cr-free HOSC terms: boundary types for Γ and the result, with local
/// (possibly higher-order) references and call/cc inside.
struct GenOptions {
    int depth = 3;
    bool control = true;
    bool higher_order_store = true;
    int max_gamma = 2;
};

/// Each result is elaborated through the parser and checked cr-free.
TermFile generate_term(std::mt19937_64& rng, const GenOptions& opt = {});
std::vector<TermFile> generate_corpus(std::uint64_t seed, std::size_t n, const GenOptions& opt = {});

}  // namespace hosc

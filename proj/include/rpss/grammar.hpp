#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "symbols.hpp"

namespace rpss {

// Straight-line grammar over dense symbol ids.  Rule i defines symbol
// terminal_count + i; right-hand sides hold at least two symbols and only
// reference earlier ids, so expansion is a single forward pass.
struct grammar {
    std::size_t terminal_count = 0;
    std::vector<std::vector<symbol_type>> rules;
    std::vector<symbol_type> final_sequence;

    std::size_t symbol_count() const { return terminal_count + rules.size(); }

    symbol_type add_rule(std::vector<symbol_type> rhs) {
        assert(rhs.size() >= 2);
        symbol_type id = symbol_type(symbol_count());
        rules.push_back(std::move(rhs));
        return id;
    }

    // total right-hand-side length plus the final sequence
    std::size_t size() const {
        std::size_t total = final_sequence.size();
        for (const auto& r : rules) total += r.size();
        return total;
    }

    std::uint64_t expanded_length() const {
        std::vector<std::uint64_t> len(rules.size());
        for (std::size_t i = 0; i < rules.size(); ++i) {
            std::uint64_t sum = 0;
            for (symbol_type s : rules[i]) {
                assert(s < terminal_count + i);
                sum += s < terminal_count ? 1 : len[s - terminal_count];
            }
            len[i] = sum;
        }
        std::uint64_t total = 0;
        for (symbol_type s : final_sequence)
            total += s < terminal_count ? 1 : len[s - terminal_count];
        return total;
    }

    std::vector<symbol_type> expand_symbol(symbol_type start) const {
        std::vector<symbol_type> out;
        std::vector<symbol_type> stack{start};
        while (!stack.empty()) {
            symbol_type s = stack.back();
            stack.pop_back();
            if (s < terminal_count) {
                out.push_back(s);
                continue;
            }
            assert(s < symbol_count());
            const auto& rhs = rules[s - terminal_count];
            for (std::size_t i = rhs.size(); i-- > 0;) stack.push_back(rhs[i]);
        }
        return out;
    }

    std::vector<symbol_type> expand() const {
        std::vector<symbol_type> out;
        for (symbol_type s : final_sequence) {
            auto part = expand_symbol(s);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
};

}  // namespace rpss

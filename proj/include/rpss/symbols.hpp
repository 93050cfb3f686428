#pragma once

#include <bit>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>

namespace rpss {

// Symbol ids are dense: terminals occupy 0..sigma-1 and the i-th
// non-terminal (1-based) gets id sigma-1+i.
using symbol_type = std::uint32_t;

struct bigram {
    symbol_type left = 0;
    symbol_type right = 0;
    friend constexpr auto operator<=>(const bigram&, const bigram&) = default;
};

constexpr std::uint64_t pair_key(bigram b) {
    return (std::uint64_t(b.left) << 32) | b.right;
}

// ceil(lg v): bits needed to address v distinct values, never less than 1
constexpr unsigned ceil_lg(std::uint64_t v) {
    return v <= 2 ? 1u : unsigned(std::bit_width(v - 1));
}

// cell width that holds every id of an alphabet with tau symbols
constexpr unsigned width_for(std::uint64_t tau) { return ceil_lg(tau); }

template <typename T>
concept symbol_text = requires(const T& t, std::size_t i) {
    { t.size() } -> std::convertible_to<std::size_t>;
    { t[i] } -> std::convertible_to<symbol_type>;
};

}  // namespace rpss

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "engine.hpp"

namespace rpss {

struct maximal_repeat {
    std::vector<symbol_type> content;
    std::vector<std::size_t> positions;  // non-overlapping occurrence starts
    bigram source;
};

// Grow a bigram's greedy occurrence list into the longest string all
// occurrences still share: extend left, then right, stopping as soon as the
// occurrences disagree on the next symbol, hit the text ends, or would
// start overlapping each other.
template <symbol_text Text>
maximal_repeat extend_to_maximal_repeat(const Text& t, bigram bg) {
    maximal_repeat mr;
    mr.source = bg;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n;) {
        if (symbol_type(t[i]) == bg.left && symbol_type(t[i + 1]) == bg.right) {
            mr.positions.push_back(i);
            i += 2;
        } else {
            ++i;
        }
    }
    std::size_t len = 2;
    if (!mr.positions.empty()) {
        for (;;) {  // left
            bool ok = true;
            symbol_type c0 = 0;
            for (std::size_t k = 0; k < mr.positions.size() && ok; ++k) {
                std::size_t p = mr.positions[k];
                if (p == 0) ok = false;
                else if (k == 0) c0 = symbol_type(t[p - 1]);
                else if (symbol_type(t[p - 1]) != c0) ok = false;
                else if (mr.positions[k] < mr.positions[k - 1] + len + 1) ok = false;
            }
            if (!ok) break;
            for (auto& p : mr.positions) --p;
            ++len;
        }
        for (;;) {  // right
            bool ok = true;
            symbol_type c0 = 0;
            for (std::size_t k = 0; k < mr.positions.size() && ok; ++k) {
                std::size_t p = mr.positions[k];
                if (p + len >= n) ok = false;
                else if (k == 0) c0 = symbol_type(t[p + len]);
                else if (symbol_type(t[p + len]) != c0) ok = false;
                else if (mr.positions[k] < mr.positions[k - 1] + len + 1) ok = false;
            }
            if (!ok) break;
            ++len;
        }
        mr.content.assign(len, 0);
        for (std::size_t i = 0; i < len; ++i)
            mr.content[i] = symbol_type(t[mr.positions[0] + i]);
    }
    return mr;
}

// Replacement loop that recounts from scratch each turn, picks the most
// frequent bigram, widens it to a maximal repeat and replaces every
// occurrence with one fresh symbol, giving variable-length right-hand sides.
template <typename OnRule>
run_result mr_repair(const std::vector<symbol_type>& input, std::size_t alphabet,
                     const engine_config& cfg, OnRule&& on_rule) {
    if (input.empty()) throw std::invalid_argument("empty input");
    run_result res;
    res.g.terminal_count = alphabet;
    memory_accountant acct(input.size(), cfg.policy.c, std::max<std::size_t>(alphabet, 1), false);
    std::vector<symbol_type> text = input;
    while (text.size() >= 2) {
        auto all = all_frequencies(text);
        const freq_entry* best = nullptr;
        for (const auto& e : all)
            if (!best || pick_before(e, *best)) best = &e;
        if (!best || best->freq < 2) break;
        maximal_repeat mr = extend_to_maximal_repeat(text, best->bg);
        on_rule(text, mr);
        symbol_type x = res.g.add_rule(mr.content);
        acct.note_alphabet(res.g.symbol_count());
        std::vector<symbol_type> next;
        next.reserve(text.size());
        std::size_t pi = 0;
        for (std::size_t i = 0; i < text.size();) {
            if (pi < mr.positions.size() && i == mr.positions[pi]) {
                next.push_back(x);
                i += mr.content.size();
                ++pi;
            } else {
                next.push_back(text[i++]);
            }
        }
        text.swap(next);
        res.turns.push_back({res.turns.size(), mr.source, mr.positions.size(), x, 0, false});
    }
    res.g.final_sequence = std::move(text);
    res.peak_bits = acct.peak_bits();
    res.budget_bits = acct.budget_bits();
    return res;
}

inline run_result mr_repair(const std::vector<symbol_type>& input, std::size_t alphabet,
                            const engine_config& cfg = {}) {
    auto ignore = [](const std::vector<symbol_type>&, const maximal_repeat&) {};
    return mr_repair(input, alphabet, cfg, ignore);
}

struct full_table_result {
    grammar g;
    bool budget_exhausted = false;
};

// Keeps a dense alphabet-squared count matrix and replaces the global
// maximum while the matrix still fits the given allowance.  Returns the
// rules minted so far plus whatever text remains when it stops.
inline full_table_result heuristic_full_table(const std::vector<symbol_type>& input,
                                              std::size_t alphabet, std::uint64_t budget_bits) {
    if (input.empty()) throw std::invalid_argument("empty input");
    full_table_result out;
    out.g.terminal_count = alphabet;
    const std::uint64_t n0 = input.size();
    std::size_t tau = std::max<std::size_t>(alphabet, 1);
    packed_text text = packed_text::pack(input, ceil_lg(tau));
    std::vector<std::uint64_t> counts(tau * tau, 0);
    for (const auto& e : all_frequencies(text)) counts[e.bg.left * tau + e.bg.right] = e.freq;
    for (;;) {
        if (text.size() < 2) break;
        if (std::uint64_t(tau + 1) * (tau + 1) * ceil_lg(std::max<std::uint64_t>(n0, 2)) >
            budget_bits) {
            out.budget_exhausted = true;
            break;
        }
        freq_entry best{{0, 0}, 0};
        for (std::size_t a = 0; a < tau; ++a)
            for (std::size_t b = 0; b < tau; ++b) {
                freq_entry e{{symbol_type(a), symbol_type(b)}, counts[a * tau + b]};
                if (e.freq && (best.freq == 0 || pick_before(e, best))) best = e;
            }
        if (best.freq < 2) break;
        symbol_type x = out.g.add_rule({best.bg.left, best.bg.right});
        std::vector<std::uint64_t> grown((tau + 1) * (tau + 1), 0);
        for (std::size_t a = 0; a < tau; ++a)
            for (std::size_t b = 0; b < tau; ++b) grown[a * (tau + 1) + b] = counts[a * tau + b];
        counts.swap(grown);
        ++tau;
        unsigned need = ceil_lg(tau);
        if (need > text.width()) text.widen(need);
        auto on_dec = [&](bigram z) {
            auto& c = counts[std::size_t(z.left) * tau + z.right];
            assert(c > 0);
            --c;
        };
        replace_all(text, best.bg, x, on_dec);
        counts[std::size_t(best.bg.left) * tau + best.bg.right] = 0;
        collect_new_symbol_frequencies(text, x, nullptr, 0, [&](bigram z, std::uint64_t cnt) {
            counts[std::size_t(z.left) * tau + z.right] = cnt;
        });
    }
    out.g.final_sequence = text.to_vector();
    return out;
}

// Most frequent bigram found with alphabet-many counters: one pass per left
// symbol, counting greedily like the compressor does.
inline std::optional<freq_entry> heuristic_position_table(const std::vector<symbol_type>& input,
                                                          std::size_t alphabet) {
    const std::size_t n = input.size();
    if (n < 2) return std::nullopt;
    std::optional<freq_entry> best;
    std::vector<std::uint64_t> counts(alphabet);
    for (std::size_t a = 0; a < alphabet; ++a) {
        std::fill(counts.begin(), counts.end(), 0);
        std::size_t last_aa = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (input[i] != symbol_type(a)) continue;
            symbol_type w = input[i + 1];
            if (w == symbol_type(a)) {
                if (last_aa != std::numeric_limits<std::size_t>::max() && last_aa + 1 == i)
                    continue;
                last_aa = i;
            }
            ++counts[w];
        }
        for (std::size_t w = 0; w < alphabet; ++w) {
            if (!counts[w]) continue;
            freq_entry e{{symbol_type(a), symbol_type(w)}, counts[w]};
            if (!best || pick_before(e, *best)) best = e;
        }
    }
    return best;
}

struct majority_result {
    bigram candidate;
    std::uint64_t freq = 0;       // exact greedy count of the candidate
    bool stream_majority = false;  // candidate fills more than half the adjacent-pair stream
};

// Boyer-Moore vote over the overlapping adjacent-pair stream, then a
// verification pass.  Only a pair covering most of the text can win the
// vote, which is exactly the regime this shortcut is meant for.
inline std::optional<majority_result> heuristic_majority(const std::vector<symbol_type>& input) {
    const std::size_t n = input.size();
    if (n < 2) return std::nullopt;
    bigram cand{};
    std::size_t votes = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bigram bg{input[i], input[i + 1]};
        if (votes == 0) {
            cand = bg;
            votes = 1;
        } else if (bg == cand) {
            ++votes;
        } else {
            --votes;
        }
    }
    std::uint64_t raw = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (input[i] == cand.left && input[i + 1] == cand.right) ++raw;
    majority_result r;
    r.candidate = cand;
    r.stream_majority = 2 * raw > n - 1;
    r.freq = bigram_frequency(input, cand);
    return r;
}

template <typename Observer>
run_result run_strategy(const std::vector<symbol_type>& input, std::size_t alphabet,
                        const engine_config& cfg, Observer& obs) {
    if (cfg.strat == strategy::mr) return mr_repair(input, alphabet, cfg);
    return run_repair(input, alphabet, cfg, obs);
}

inline run_result run_strategy(const std::vector<symbol_type>& input, std::size_t alphabet,
                               const engine_config& cfg = {}) {
    null_observer obs;
    return run_strategy(input, alphabet, cfg, obs);
}

}  // namespace rpss

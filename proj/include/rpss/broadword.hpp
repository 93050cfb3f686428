#pragma once

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "freq.hpp"
#include "memory_accountant.hpp"
#include "packed_text.hpp"
#include "symbols.hpp"

namespace rpss {

// Register-level helpers for one fixed cell width.  Cell 0 lives in the low
// bits, so "prefix" means low-order and "suffix" means high-order throughout.
struct broadword_context {
    unsigned x = 0;           // cell width in bits
    unsigned q = 0;           // cells per 64-bit word
    std::uint64_t low = 0;    // bit 0 of every cell
    std::uint64_t high = 0;   // top bit of every cell
    std::uint64_t cell = 0;   // x ones
    std::uint64_t grid_even = 0;  // bit 0 of cells 0,2,4,...
    std::uint64_t grid_odd = 0;

    static broadword_context make(unsigned x) {
        assert(x >= 1 && x <= 64);
        broadword_context c;
        c.x = x;
        c.q = 64 / x;
        for (unsigned i = 0; i < c.q; ++i) {
            std::uint64_t bit = std::uint64_t(1) << (i * x);
            c.low |= bit;
            if (i % 2 == 0)
                c.grid_even |= bit;
            else
                c.grid_odd |= bit;
        }
        c.cell = x >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << x) - 1;
        c.high = c.low << (x - 1);
        return c;
    }

    std::uint64_t spread(std::uint64_t v) const { return low * v; }

    std::uint64_t msb_mask(unsigned cells) const {
        assert(cells <= q);
        return cells * x >= 64 ? high : high & ((std::uint64_t(1) << (cells * x)) - 1);
    }

    std::uint64_t cell_at(std::uint64_t word, unsigned i) const { return (word >> (i * x)) & cell; }

    // Top bit set in every cell equal to v, exact in all cells; the
    // carry-free form (t + ~high never crosses a cell) avoids the false
    // positives a plain subtraction trick leaks above a matching cell.
    std::uint64_t match_msb(std::uint64_t word, std::uint64_t v, unsigned cells) const {
        std::uint64_t m = word ^ spread(v);
        std::uint64_t t = (m & ~high) + ~high;
        return ~(t | m) & msb_mask(cells);
    }

    // MSB markers to whole-cell masks
    std::uint64_t smear(std::uint64_t msbs) const { return (msbs - (msbs >> (x - 1))) | msbs; }

    std::uint64_t find_char_mask(std::uint64_t word, std::uint64_t v, unsigned cells) const {
        return smear(match_msb(word, v, cells));
    }

    // length in cells of the all-ones run of fill ending at cell idx
    unsigned run_back_cells(std::uint64_t fill, unsigned idx) const {
        unsigned top = (idx + 1) * x;
        return unsigned(std::countl_one(fill << (64 - top))) / x;
    }

    // length in cells of the all-ones run of fill starting at cell idx
    unsigned run_fwd_cells(std::uint64_t fill, unsigned idx) const {
        return unsigned(std::countr_one(fill >> (idx * x))) / x;
    }
};

// strip the run of ones touching bit 0
constexpr std::uint64_t delete_prefix_run(std::uint64_t v) { return v & (v + 1); }

// strip the run of ones touching the top of the low valid_bits bits
inline std::uint64_t delete_suffix_run(std::uint64_t v, unsigned valid_bits) {
    assert(valid_bits >= 1 && valid_bits <= 64);
    unsigned k = unsigned(std::countl_one(v << (64 - valid_bits)));
    if (k == 0) return v;
    std::uint64_t m = (k >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << k) - 1) << (valid_bits - k);
    return v & ~m;
}

// Sum of floor(len/2) over the all-ones cell runs of fill.  Runs must not
// touch cell 0 or the top valid cell (strip them first); with that
// guaranteed, for a run spanning cells [s,e] the difference
// (end<<x) - begin paints markers across the run, and keeping the cells
// whose parity differs from s counts exactly floor(len/2).  Runs whose
// start parity is not selected leave only their end marker, which lands on
// a gap cell and is erased by the marker mask.
inline std::uint64_t pair_count_interior(const broadword_context& c, std::uint64_t fill) {
    std::uint64_t mk = fill & c.low;
    if (!mk) return 0;
    std::uint64_t begins = mk & ~(mk << c.x);
    std::uint64_t ends = mk & ~(mk >> c.x);
    std::uint64_t total = 0;
    const std::uint64_t grids[2] = {c.grid_even, c.grid_odd};
    for (int p = 0; p < 2; ++p) {
        std::uint64_t sel = begins & grids[p];
        std::uint64_t spans = ((ends << c.x) - sel) & mk & grids[1 - p];
        total += std::uint64_t(std::popcount(spans));
    }
    return total;
}

// Greedy non-overlapping count of bg over the packed text, one word of
// cells at a time.
inline std::uint64_t packed_bigram_frequency(const packed_text& t, bigram bg) {
    const std::size_t n = t.size();
    const unsigned x = t.width();
    assert(2 * x <= 64);
    if (n < 2) return 0;

    if (bg.left != bg.right) {
        broadword_context c2 = broadword_context::make(2 * x);
        std::uint64_t v2 = std::uint64_t(bg.left) | (std::uint64_t(bg.right) << x);
        std::uint64_t total = 0;
        for (std::size_t parity = 0; parity < 2; ++parity) {
            std::size_t pos = parity;
            while (pos + 1 < n) {
                unsigned m = unsigned(std::min<std::size_t>(c2.q, (n - pos) / 2));
                if (m == 0) break;
                std::uint64_t w = t.load_cells(pos, 2 * m);
                total += std::uint64_t(std::popcount(c2.match_msb(w, v2, m)));
                pos += 2 * std::size_t(m);
            }
        }
        return total;
    }

    broadword_context cx = broadword_context::make(x);
    std::uint64_t total = 0;
    std::uint64_t carry = 0;  // cells of the symbol run continuing from the previous word
    std::size_t pos = 0;
    while (pos < n) {
        unsigned m = unsigned(std::min<std::size_t>(cx.q, n - pos));
        std::uint64_t w = t.load_cells(pos, m);
        std::uint64_t fill = cx.find_char_mask(w, bg.left, m);
        std::uint64_t live = m * x >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << (m * x)) - 1;
        if (fill == live) {
            carry += m;
            pos += m;
            continue;
        }
        unsigned prefix = unsigned(std::countr_one(fill)) / x;
        total += (carry + prefix) / 2;
        std::uint64_t interior = delete_suffix_run(delete_prefix_run(fill), m * x);
        total += pair_count_interior(cx, interior);
        carry = unsigned(std::countl_one(fill << (64 - m * x))) / x;
        pos += m;
    }
    total += carry / 2;
    return total;
}

// Replaces every greedy occurrence of bg with x_new and reports the bigram
// instances the replacement destroys, so a frequency table tracking the text
// stays exact.  The second cell of each occurrence becomes x_new, the first
// becomes the all-ones sentinel, and the text is compacted before returning.
//
// Event rules, for occurrence at p over the pre-replacement text T:
//  - left pair (T[p-1], left): reported unless the previous occurrence ends
//    at p-1 (that occurrence already reported it as its right pair); when
//    T[p-1] == left the destroyed pair is (left,left), whose greedy count
//    only drops when the left-symbol run ending at p has even length.
//  - right pair (right, T[p+2]): reported always; when T[p+2] == right the
//    pair is (right,right) and the run starting at p+1 decides parity.
// For left == right, one run of length L yields floor(L/2) replacements,
// one left event, and a right event only when L is even (odd runs keep
// their trailing symbol, so the pair beyond the run survives).
template <typename OnDec>
std::size_t packed_replace(packed_text& t, bigram bg, symbol_type x_new, OnDec&& on_dec) {
    const std::size_t n = t.size();
    const unsigned x = t.width();
    assert(2 * x <= 64);
    assert(std::uint64_t(x_new) < ((std::uint64_t(1) << x) - 1));  // sentinel reserved
    if (n < 2) return 0;

    broadword_context cx = broadword_context::make(x);
    std::size_t h = 0;

    if (bg.left != bg.right) {
        broadword_context c2 = broadword_context::make(2 * x);
        std::uint64_t v2 = std::uint64_t(bg.left) | (std::uint64_t(bg.right) << x);
        std::size_t last_second = std::numeric_limits<std::size_t>::max();
        symbol_type border_orig = 0;
        bool has_border = false;
        std::uint64_t border_left_run = 0;  // cells of bg.left ending at the border

        std::size_t pos = 0;
        while (pos < n) {
            unsigned m = unsigned(std::min<std::size_t>(cx.q, n - pos));
            std::uint64_t S = t.load_cells(pos, m);
            std::uint64_t fill_l = cx.find_char_mask(S, bg.left, m);
            std::uint64_t fill_r = cx.find_char_mask(S, bg.right, m);

            unsigned me = m / 2;
            unsigned mo = m >= 2 ? (m - 1) / 2 : 0;
            std::uint64_t marks = me ? c2.match_msb(S, v2, me) : 0;
            if (mo) marks |= c2.match_msb(S >> x, v2, mo) << x;
            // marks now carries the top bit of each occurrence's second cell

            std::uint64_t rem = marks;
            while (rem) {
                unsigned bit = unsigned(std::countr_zero(rem));
                rem &= rem - 1;
                unsigned sc = bit / x;  // in-word index of the second cell
                std::size_t p = pos + sc - 1;
                if (p >= 1 && last_second != p - 1) {
                    symbol_type u = sc >= 2 ? symbol_type(cx.cell_at(S, sc - 2)) : border_orig;
                    if (u == bg.left) {
                        std::uint64_t run = cx.run_back_cells(fill_l, sc - 1);
                        if (run == sc && has_border && border_orig == bg.left) run += border_left_run;
                        if (run % 2 == 0) on_dec(bigram{bg.left, bg.left});
                    } else {
                        on_dec(bigram{u, bg.left});
                    }
                }
                if (p + 2 < n) {
                    unsigned wc = sc + 1;
                    symbol_type w = wc < m ? symbol_type(cx.cell_at(S, wc)) : t.get(p + 2);
                    if (w == bg.right) {
                        std::uint64_t run = 1;
                        if (wc < m) {
                            unsigned rc = cx.run_fwd_cells(fill_r, wc);
                            run += rc;
                            if (wc + rc == m) {
                                std::size_t j = pos + m;
                                while (j < n && t.get(j) == bg.right) ++run, ++j;
                            }
                        } else {
                            std::size_t j = p + 2;
                            while (j < n && t.get(j) == bg.right) ++run, ++j;
                        }
                        if (run % 2 == 0) on_dec(bigram{bg.right, bg.right});
                    } else {
                        on_dec(bigram{bg.right, w});
                    }
                }
                last_second = p + 1;
                ++h;
            }

            std::uint64_t Y = cx.smear(marks);
            std::uint64_t S2 = (S & ~Y) | ((Y & cx.low) * x_new) | (Y >> x);
            t.store_cells(pos, m, S2);

            symbol_type prev_border = border_orig;
            bool prev_has_border = has_border;
            std::uint64_t prev_left_run = border_left_run;

            unsigned sl = unsigned(std::countl_one(fill_l << (64 - m * x))) / x;
            border_left_run = (sl == m && prev_has_border && prev_border == bg.left)
                                  ? prev_left_run + m
                                  : sl;
            border_orig = symbol_type(cx.cell_at(S, m - 1));
            has_border = true;

            // occurrence straddling this word and the next
            if (pos + m < n && cx.cell_at(S, m - 1) == bg.left && t.get(pos + m) == bg.right) {
                std::size_t p = pos + m - 1;
                if (p >= 1 && last_second != p - 1) {
                    symbol_type u = m >= 2 ? symbol_type(cx.cell_at(S, m - 2)) : prev_border;
                    if (u == bg.left) {
                        std::uint64_t run = cx.run_back_cells(fill_l, m - 1);
                        if (run == m && prev_has_border && prev_border == bg.left)
                            run += prev_left_run;
                        if (run % 2 == 0) on_dec(bigram{bg.left, bg.left});
                    } else {
                        on_dec(bigram{u, bg.left});
                    }
                }
                if (p + 2 < n) {
                    symbol_type w = t.get(p + 2);
                    if (w == bg.right) {
                        std::uint64_t run = 1;
                        std::size_t j = p + 2;
                        while (j < n && t.get(j) == bg.right) ++run, ++j;
                        if (run % 2 == 0) on_dec(bigram{bg.right, bg.right});
                    } else {
                        on_dec(bigram{bg.right, w});
                    }
                }
                t.set(p, symbol_type(cx.cell));  // sentinel
                t.set(p + 1, x_new);
                last_second = p + 1;
                ++h;
            }
            pos += m;
        }
        t.compact();
        return h;
    }

    // equal-symbol bigram: walk runs word by word, carrying the phase of an
    // unfinished run across the border
    std::size_t last_gs = 0;
    bool carry_active = false;
    symbol_type border_orig = 0;
    symbol_type pending_left = 0;  // left neighbor of the open run, emitted once
    bool pending_left_valid = false;  // the run proves long enough to replace

    std::size_t pos = 0;
    while (pos < n) {
        unsigned m = unsigned(std::min<std::size_t>(cx.q, n - pos));
        std::uint64_t S = t.load_cells(pos, m);
        std::uint64_t fill = cx.find_char_mask(S, bg.left, m);
        std::uint64_t second_lsb = 0;
        std::uint64_t dead_lsb = 0;
        bool carry_next = false;
        std::size_t carry_start = 0;

        std::uint64_t scan = fill;
        while (scan) {
            unsigned lb = unsigned(std::countr_zero(scan));
            unsigned ones = unsigned(std::countr_one(scan >> lb));
            std::uint64_t run_mask =
                (ones >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << ones) - 1) << lb;
            scan &= ~run_mask;
            unsigned cb = lb / x;
            unsigned rl = ones / x;
            unsigned ce = cb + rl - 1;

            std::size_t gs;
            if (cb == 0 && carry_active) {
                gs = last_gs;
            } else {
                gs = pos + cb;
                pending_left_valid = false;
                if (gs >= 1) {
                    pending_left = cb >= 1 ? symbol_type(cx.cell_at(S, cb - 1)) : border_orig;
                    pending_left_valid = true;
                }
            }
            bool at_top = ce == m - 1;
            bool continues = at_top && pos + m < n && t.get(pos + m) == bg.left;

            std::uint64_t range = run_mask & cx.low;
            std::size_t start_off = pos + cb - gs;
            unsigned p_second = unsigned((1 + cb + (start_off & 1)) & 1);
            std::uint64_t seconds = range & (p_second ? cx.grid_odd : cx.grid_even);
            std::uint64_t firsts = range & (p_second ? cx.grid_even : cx.grid_odd);

            if (continues) {
                carry_next = true;
                carry_start = gs;
            } else {
                std::size_t len = pos + ce + 1 - gs;
                h += len / 2;
                if (len >= 2 && pending_left_valid) on_dec(bigram{pending_left, bg.left});
                pending_left_valid = false;
                if (len % 2 == 1) firsts &= ~(std::uint64_t(1) << (ce * x));  // trailing symbol stays
                if (len % 2 == 0 && pos + ce + 1 < n) {
                    symbol_type w = ce + 1 < m ? symbol_type(cx.cell_at(S, ce + 1)) : t.get(pos + m);
                    on_dec(bigram{bg.left, w});
                }
            }
            second_lsb |= seconds;
            dead_lsb |= firsts;
        }

        std::uint64_t touched = (second_lsb | dead_lsb) * cx.cell;
        std::uint64_t S2 = (S & ~touched) | (second_lsb * x_new) | (dead_lsb * cx.cell);
        t.store_cells(pos, m, S2);

        carry_active = carry_next;
        last_gs = carry_start;
        border_orig = symbol_type(cx.cell_at(S, m - 1));
        pos += m;
    }
    t.compact();
    return h;
}

// Exact top-d table built by probing each text position's bigram with the
// word-parallel counter; already-ranked bigrams are skipped.
inline frequency_table top_d_bitparallel(const packed_text& t, std::size_t d, unsigned entry_bits,
                                         memory_accountant* acct = nullptr) {
    assert(d >= 1);
    frequency_table res(d);
    memory_accountant::scoped_charge guard(acct, std::uint64_t(d) * entry_bits, "top-d table");
    std::uint64_t sink = 0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        bigram bg{t.get(i), t.get(i + 1)};
        if (res.find(bg)) continue;
        res.insert({bg, packed_bigram_frequency(t, bg)}, sink);
    }
    return res;
}

enum class scan_kind { tradeoff, bitparallel };

// Chooses the cheaper counting scan for a round: the block sweep costs about
// (n/f) passes of n log f work, the word-parallel probe about (n-f)^2 cell
// comparisons shrunk by the register packing factor.
inline scan_kind hybrid_pick(std::uint64_t f, std::uint64_t n, std::uint64_t tau, unsigned width) {
    if (n < 2 || f == 0) return scan_kind::tradeoff;
    double lg_n = std::max(1.0, std::log2(double(n)));
    double lg_tau = std::max(1.0, std::log2(double(std::max<std::uint64_t>(tau, 2))));
    if (lg_n / lg_tau <= 1.0) return scan_kind::tradeoff;
    if (64 / (2 * width) < 2) return scan_kind::tradeoff;
    double nf = n > f ? double(n - f) : 0.0;
    double lglglg = std::max(1.0, std::log2(std::max(2.0, std::log2(std::max(2.0, lg_n)))));
    double probe_cost = nf * nf * lglglg / (lg_n / lg_tau);
    double sweep_cost = nf * double(n) * std::max(1.0, std::log2(double(std::max<std::uint64_t>(f, 2)))) / double(f);
    return probe_cost < sweep_cost ? scan_kind::bitparallel : scan_kind::tradeoff;
}

}  // namespace rpss

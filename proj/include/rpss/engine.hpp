#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "broadword.hpp"
#include "capacity.hpp"
#include "freq.hpp"
#include "frequency_index.hpp"
#include "grammar.hpp"
#include "memory_accountant.hpp"
#include "packed_text.hpp"
#include "symbols.hpp"

namespace rpss {

enum class strategy { smallspace, naive, bitparallel, hybrid, mr };

struct engine_config {
    strategy strat = strategy::smallspace;
    capacity_policy policy{};
    bool audit = true;  // enforce the working-space budget while compressing
};

struct turn_record {
    std::size_t index;
    bigram replaced;
    std::uint64_t freq;
    symbol_type new_symbol;
    std::size_t round;
    bool low_freq;
};

struct round_record {
    std::size_t index;
    std::uint64_t capacity;
    std::uint64_t threshold;  // 0 when the scan found nothing above the cutoff
    double gamma_entry;       // growth floor in force when this round began (0 for round 0)
    std::size_t turns;
};

struct run_result {
    grammar g;
    std::vector<turn_record> turns;
    std::vector<round_record> rounds;
    std::size_t round_count = 0;
    bool low_freq_ran = false;
    std::uint64_t peak_bits = 0;
    std::uint64_t budget_bits = 0;
};

struct null_observer {
    void on_pick(const packed_text&, bigram, std::uint64_t, bool) {}
};

// Scalar twin of packed_replace: same greedy replacement, same destroyed-pair
// events (see the rules above packed_replace), compacting in place as it goes.
template <typename OnDec>
std::size_t replace_all(packed_text& t, bigram bg, symbol_type x_new, OnDec&& on_dec) {
    const std::size_t n = t.size();
    if (n < 2) return 0;
    std::size_t r = 0, w = 0, h = 0;

    if (bg.left != bg.right) {
        std::size_t last_second = std::numeric_limits<std::size_t>::max();
        symbol_type prev_orig = 0;
        std::size_t eq_run = 0;  // equal-symbol run of the original text ending at r-1
        while (r < n) {
            symbol_type cur = t.get(r);
            if (r + 1 < n && cur == bg.left && t.get(r + 1) == bg.right) {
                if (r >= 1 && last_second != r - 1) {
                    if (prev_orig == bg.left) {
                        if ((eq_run + 1) % 2 == 0) on_dec(bigram{bg.left, bg.left});
                    } else {
                        on_dec(bigram{prev_orig, bg.left});
                    }
                }
                if (r + 2 < n) {
                    symbol_type nxt = t.get(r + 2);
                    if (nxt == bg.right) {
                        std::size_t run = 1;
                        for (std::size_t j = r + 2; j < n && t.get(j) == bg.right; ++j) ++run;
                        if (run % 2 == 0) on_dec(bigram{bg.right, bg.right});
                    } else {
                        on_dec(bigram{bg.right, nxt});
                    }
                }
                t.set(w++, x_new);
                last_second = r + 1;
                ++h;
                eq_run = cur == prev_orig ? eq_run + 1 : 1;
                eq_run = bg.right == cur ? eq_run + 1 : 1;
                prev_orig = bg.right;
                r += 2;
            } else {
                t.set(w++, cur);
                eq_run = cur == prev_orig ? eq_run + 1 : 1;
                prev_orig = cur;
                ++r;
            }
        }
    } else {
        symbol_type prev_orig = 0;
        while (r < n) {
            symbol_type cur = t.get(r);
            if (cur != bg.left) {
                t.set(w++, cur);
                prev_orig = cur;
                ++r;
                continue;
            }
            std::size_t j = r;
            while (j < n && t.get(j) == bg.left) ++j;
            std::size_t len = j - r;
            if (len >= 2) {
                if (r >= 1) on_dec(bigram{prev_orig, bg.left});
                for (std::size_t k = 0; k < len / 2; ++k) t.set(w++, x_new);
                if (len % 2) t.set(w++, bg.left);
                if (len % 2 == 0 && j < n) on_dec(bigram{bg.left, t.get(j)});
                h += len / 2;
            } else {
                t.set(w++, cur);
            }
            prev_orig = bg.left;
            r = j;
        }
    }
    t.set_live(w);
    return h;
}

// Exact counts of every pair the freshly minted symbol x takes part in,
// reported as (a,x) in ascending a, then (x,x), then (x,w) in ascending w.
// Works off the runs of x: a run contributes one left neighbor, one right
// neighbor and floor(len/2) self-pairs.
template <symbol_text Text, typename Fn>
void collect_new_symbol_frequencies(const Text& t, symbol_type x, memory_accountant* acct,
                                    unsigned neighbor_bits, Fn&& fn) {
    const std::size_t n = t.size();
    std::vector<symbol_type> d;
    std::uint64_t xx = 0;
    for (std::size_t i = 0; i < n;) {
        if (symbol_type(t[i]) != x) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && symbol_type(t[j]) == x) ++j;
        if (i >= 1) d.push_back(symbol_type(t[i - 1]));
        xx += (j - i) / 2;
        i = j;
    }
    auto emit_rle = [&fn, &d](bool left_side, symbol_type x2) {
        std::sort(d.begin(), d.end());
        for (std::size_t k = 0; k < d.size();) {
            std::size_t e = k;
            while (e < d.size() && d[e] == d[k]) ++e;
            if (left_side)
                fn(bigram{d[k], x2}, std::uint64_t(e - k));
            else
                fn(bigram{x2, d[k]}, std::uint64_t(e - k));
            k = e;
        }
    };
    {
        memory_accountant::scoped_charge guard(acct, std::uint64_t(d.size()) * neighbor_bits,
                                               "neighbor buffer");
        emit_rle(true, x);
    }
    if (xx) fn(bigram{x, x}, xx);
    d.clear();
    for (std::size_t i = 0; i < n;) {
        if (symbol_type(t[i]) != x) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && symbol_type(t[j]) == x) ++j;
        if (j < n) d.push_back(symbol_type(t[j]));
        i = j;
    }
    memory_accountant::scoped_charge guard(acct, std::uint64_t(d.size()) * neighbor_bits,
                                           "neighbor buffer");
    emit_rle(false, x);
}

// Tail stage once no bigram reaches frequency 3: find the leftmost position
// whose pair occurs again without overlap, replace both occurrences, then
// resume one position to the left so a pair formed with the new symbol is
// not missed.  Frequencies can only be 1 or 2 here, so replacing the found
// pair always removes all of its occurrences.
template <typename OnTurn>
std::size_t low_freq_phase(packed_text& t, grammar& g, bool reserve_sentinel,
                           memory_accountant* acct, OnTurn&& on_turn) {
    std::size_t replaced = 0;
    std::size_t k = 0;
    memory_accountant::scoped_charge guard(
        acct, 4 * ceil_lg(std::max<std::uint64_t>(t.size(), 2)), "scan cursors");
    for (;;) {
        const std::size_t n = t.size();
        if (n < 4) break;
        bool found = false;
        std::size_t fj = 0, fj2 = 0;
        for (std::size_t j = k; j + 3 < n && !found; ++j) {
            bigram bg{t.get(j), t.get(j + 1)};
            for (std::size_t j2 = j + 2; j2 + 1 < n; ++j2) {
                if (t.get(j2) == bg.left && t.get(j2 + 1) == bg.right) {
                    found = true;
                    fj = j;
                    fj2 = j2;
                    break;
                }
            }
        }
        if (!found) break;
        bigram bg{t.get(fj), t.get(fj + 1)};
        on_turn(t, bg);
        symbol_type x = g.add_rule({bg.left, bg.right});
        if (acct) {
            acct->note_alphabet(g.symbol_count());
            acct->charge(2 * ceil_lg(g.symbol_count()), "rules");
        }
        unsigned need = ceil_lg(g.symbol_count() + (reserve_sentinel ? 1 : 0));
        if (need > t.width()) t.widen(need);
        std::size_t w = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == fj || r == fj2) {
                t.set(w++, x);
                ++r;
            } else {
                t.set(w++, t.get(r));
            }
        }
        t.set_live(w);
        ++replaced;
        k = fj == 0 ? 0 : fj - 1;
    }
    return replaced;
}

namespace detail {

template <typename Table, typename Observer>
run_result run_rounds(const std::vector<symbol_type>& input, std::size_t alphabet,
                      const engine_config& cfg, Observer& obs) {
    const std::size_t n0 = input.size();
    const bool packed_kernels =
        cfg.strat == strategy::bitparallel || cfg.strat == strategy::hybrid;
    run_result res;
    res.g.terminal_count = alphabet;
    memory_accountant acct(n0, cfg.policy.c, std::max<std::size_t>(alphabet, 1), cfg.audit);

    auto width_needed = [&](std::size_t tau) {
        return ceil_lg(std::uint64_t(tau) + (packed_kernels ? 1 : 0));
    };
    packed_text text = packed_text::pack(input, width_needed(std::max<std::size_t>(alphabet, 1)));

    std::uint64_t f = std::max<std::uint64_t>(1, cfg.policy.f0);
    double gamma_entry = 0.0;
    std::uint64_t table_charge = 0;

    for (;;) {
        const std::size_t n_i = text.size();
        if (n_i < 2) break;
        const std::uint64_t sigma_next = res.g.symbol_count() + 1;
        const unsigned delta = table_entry_bits(sigma_next, n_i);
        acct.discharge(table_charge);
        table_charge = f * delta;
        acct.charge(table_charge, "frequency table");

        scan_kind kind = scan_kind::tradeoff;
        if (cfg.strat == strategy::bitparallel)
            kind = scan_kind::bitparallel;
        else if (cfg.strat == strategy::hybrid)
            kind = hybrid_pick(f, n_i, res.g.symbol_count(), text.width());

        frequency_table seed = kind == scan_kind::bitparallel
                                   ? top_d_bitparallel(text, f, delta, &acct)
                                   : top_d_tradeoff(text, f, delta, &acct);
        Table F(f);
        for (const auto& e : seed.entries()) F.push_unchecked(e);
        F.remove_if_freq_below(3);

        round_record rr{res.rounds.size(), f, 0, gamma_entry, 0};
        if (F.empty()) {
            res.rounds.push_back(rr);
            break;
        }
        std::uint64_t t_min = ~std::uint64_t(0);
        for (const auto& e : F.entries()) t_min = std::min(t_min, e.freq);
        rr.threshold = t_min;
        std::uint64_t max_evicted = 0;

        for (;;) {
            auto top = F.max();
            if (!top || top->freq < t_min || top->freq < max_evicted) break;
            const bigram bc = top->bg;
            const std::uint64_t fr = top->freq;
            obs.on_pick(text, bc, fr, false);
            symbol_type x = res.g.add_rule({bc.left, bc.right});
            acct.note_alphabet(res.g.symbol_count());
            acct.charge(2 * ceil_lg(res.g.symbol_count()), "rules");
            unsigned need = width_needed(res.g.symbol_count());
            if (need > text.width()) text.widen(need);
            auto on_dec = [&F](bigram z) { F.decrement(z); };
            std::size_t h = packed_kernels ? packed_replace(text, bc, x, on_dec)
                                           : replace_all(text, bc, x, on_dec);
            if (h != fr) throw std::logic_error("frequency bookkeeping diverged");
            F.erase(bc);
            F.remove_if_freq_below(2);
            collect_new_symbol_frequencies(
                text, x, &acct, 2 * ceil_lg(res.g.symbol_count()),
                [&](bigram z, std::uint64_t cnt) {
                    if (cnt >= t_min) F.insert({z, cnt}, max_evicted);
                });
            res.turns.push_back({res.turns.size(), bc, fr, x, rr.index, false});
            ++rr.turns;
            acct.audit("turn");
        }
        res.rounds.push_back(rr);
        acct.audit("round");

        acct.discharge(table_charge);
        table_charge = 0;
        if (text.size() < 2) break;
        const std::uint64_t committed = acct.charged_bits();
        const std::uint64_t remaining =
            acct.budget_bits() > committed ? acct.budget_bits() - committed : 0;
        const std::uint64_t sn = res.g.symbol_count() + 1;
        const unsigned d2 = table_entry_bits(sn, text.size());
        gamma_entry = capacity_gamma(cfg.policy.alpha,
                                     capacity_beta(cfg.policy.c, d2, sn, n0));
        f = next_capacity(cfg.policy, f, sn, text.size(), n0, remaining);
    }
    acct.discharge(table_charge);

    std::size_t lf = low_freq_phase(
        text, res.g, packed_kernels, &acct, [&](const packed_text& tt, bigram bg) {
            obs.on_pick(tt, bg, 2, true);
            res.turns.push_back({res.turns.size(), bg, 2,
                                 symbol_type(res.g.symbol_count()), res.rounds.size(), true});
        });
    res.low_freq_ran = lf > 0;
    res.round_count = res.rounds.size() + (res.low_freq_ran ? 1 : 0);
    res.g.final_sequence = text.to_vector();
    res.peak_bits = acct.peak_bits();
    res.budget_bits = acct.budget_bits();
    return res;
}

template <typename Observer>
run_result run_naive(const std::vector<symbol_type>& input, std::size_t alphabet,
                     const engine_config& cfg, Observer& obs) {
    run_result res;
    res.g.terminal_count = alphabet;
    memory_accountant acct(input.size(), cfg.policy.c, std::max<std::size_t>(alphabet, 1), false);
    packed_text text = packed_text::pack(input, ceil_lg(std::max<std::size_t>(alphabet, 1)));
    for (;;) {
        if (text.size() < 2) break;
        auto all = all_frequencies(text);
        const freq_entry* best = nullptr;
        for (const auto& e : all)
            if (!best || pick_before(e, *best)) best = &e;
        if (!best || best->freq < 2) break;
        const bigram bc = best->bg;
        const std::uint64_t fr = best->freq;
        obs.on_pick(text, bc, fr, false);
        symbol_type x = res.g.add_rule({bc.left, bc.right});
        acct.note_alphabet(res.g.symbol_count());
        unsigned need = ceil_lg(res.g.symbol_count());
        if (need > text.width()) text.widen(need);
        auto ignore = [](bigram) {};
        std::size_t h = replace_all(text, bc, x, ignore);
        if (h != fr) throw std::logic_error("frequency bookkeeping diverged");
        res.turns.push_back({res.turns.size(), bc, fr, x, 0, false});
    }
    res.g.final_sequence = text.to_vector();
    res.peak_bits = acct.peak_bits();
    res.budget_bits = acct.budget_bits();
    return res;
}

}  // namespace detail

template <typename Observer>
run_result run_repair(const std::vector<symbol_type>& input, std::size_t alphabet,
                      const engine_config& cfg, Observer& obs) {
    if (input.empty()) throw std::invalid_argument("empty input");
#ifndef NDEBUG
    for (symbol_type s : input) assert(s < alphabet);
#endif
    switch (cfg.strat) {
        case strategy::naive:
            return detail::run_naive(input, alphabet, cfg, obs);
        case strategy::bitparallel:
        case strategy::hybrid:
            return detail::run_rounds<frequency_index>(input, alphabet, cfg, obs);
        case strategy::mr:
            throw std::invalid_argument("variable-length rules use mr_repair");
        case strategy::smallspace:
        default:
            return detail::run_rounds<frequency_table>(input, alphabet, cfg, obs);
    }
}

inline run_result run_repair(const std::vector<symbol_type>& input, std::size_t alphabet,
                             const engine_config& cfg = {}) {
    null_observer obs;
    return run_repair(input, alphabet, cfg, obs);
}

}  // namespace rpss

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "memory_accountant.hpp"
#include "symbols.hpp"

namespace rpss {

struct freq_entry {
    bigram bg;
    std::uint64_t freq = 0;
};

// better-first order used when picking the pair to replace
inline bool pick_before(const freq_entry& a, const freq_entry& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    return a.bg < b.bg;
}

// first-to-evict order; mirror of pick_before so the kept set is the same
inline bool evict_before(const freq_entry& a, const freq_entry& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    return b.bg < a.bg;
}

// Greedy leftmost non-overlapping occurrence count; a run of k equal
// symbols holds floor(k/2) occurrences of its square.
template <symbol_text Text>
std::uint64_t bigram_frequency(const Text& text, bigram bg) {
    std::uint64_t count = 0;
    std::size_t n = text.size();
    for (std::size_t i = 0; i + 1 < n;) {
        if (symbol_type(text[i]) == bg.left && symbol_type(text[i + 1]) == bg.right) {
            ++count;
            i += 2;
        } else {
            ++i;
        }
    }
    return count;
}

// Exact non-overlapping counts of every bigram in one pass.  Counting a
// position is skipped when the previous position of the same bigram was
// counted, which reproduces the greedy left-to-right tiling of runs.
template <symbol_text Text>
std::vector<freq_entry> all_frequencies(const Text& text) {
    struct slot {
        std::uint64_t count;
        std::size_t last;
    };
    std::unordered_map<std::uint64_t, slot> counts;
    std::size_t n = text.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bigram bg{symbol_type(text[i]), symbol_type(text[i + 1])};
        auto [it, fresh] = counts.try_emplace(pair_key(bg), slot{0, std::numeric_limits<std::size_t>::max()});
        if (!fresh && it->second.last + 1 == i) continue;
        ++it->second.count;
        it->second.last = i;
    }
    std::vector<freq_entry> out;
    out.reserve(counts.size());
    for (auto& [key, s] : counts)
        out.push_back({bigram{symbol_type(key >> 32), symbol_type(key & 0xffffffffu)}, s.count});
    std::sort(out.begin(), out.end(), [](const freq_entry& a, const freq_entry& b) { return a.bg < b.bg; });
    return out;
}

// Bounded table of bigram frequencies with linear-scan operations.  Small by
// construction (its capacity is the round budget), so scans are cheap.
class frequency_table {
  public:
    frequency_table() = default;
    explicit frequency_table(std::size_t capacity) : capacity_(capacity) {}

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return entries_.empty(); }
    const std::vector<freq_entry>& entries() const { return entries_; }

    const freq_entry* find(bigram bg) const {
        for (const auto& e : entries_)
            if (e.bg == bg) return &e;
        return nullptr;
    }

    std::optional<freq_entry> max() const {
        if (entries_.empty()) return std::nullopt;
        const freq_entry* best = &entries_[0];
        for (const auto& e : entries_)
            if (pick_before(e, *best)) best = &e;
        return *best;
    }

    void decrement(bigram bg, std::uint64_t by = 1) {
        for (auto& e : entries_) {
            if (e.bg == bg) {
                e.freq -= std::min(e.freq, by);
                return;
            }
        }
    }

    void erase(bigram bg) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].bg == bg) {
                entries_[i] = entries_.back();
                entries_.pop_back();
                return;
            }
        }
    }

    // Insert when there is room or the newcomer beats the weakest entry;
    // whoever loses the slot has its frequency recorded so the caller can
    // tell when the table may no longer see the text's true maximum.
    void insert(freq_entry e, std::uint64_t& max_evicted) {
        for (auto& cur : entries_) {
            if (cur.bg == e.bg) {
                cur.freq = e.freq;
                return;
            }
        }
        if (entries_.size() < capacity_) {
            entries_.push_back(e);
            return;
        }
        if (entries_.empty()) {
            max_evicted = std::max(max_evicted, e.freq);
            return;
        }
        std::size_t weakest = 0;
        for (std::size_t i = 1; i < entries_.size(); ++i)
            if (evict_before(entries_[i], entries_[weakest])) weakest = i;
        if (evict_before(e, entries_[weakest])) {
            max_evicted = std::max(max_evicted, e.freq);
            return;
        }
        max_evicted = std::max(max_evicted, entries_[weakest].freq);
        entries_[weakest] = e;
    }

    void remove_if_freq_below(std::uint64_t min_freq) {
        std::erase_if(entries_, [min_freq](const freq_entry& e) { return e.freq < min_freq; });
    }

    void push_unchecked(freq_entry e) {
        assert(entries_.size() < capacity_);
        entries_.push_back(e);
    }

  private:
    std::vector<freq_entry> entries_;
    std::size_t capacity_ = 0;
};

namespace detail {

// One scan of the whole text that counts every candidate bigram at once.
// Candidates must be lex-sorted and duplicate-free.
template <symbol_text Text>
std::vector<std::uint64_t> count_candidates(const Text& text, const std::vector<bigram>& cands) {
    std::vector<std::uint64_t> freq(cands.size(), 0);
    std::vector<std::size_t> last(cands.size(), std::numeric_limits<std::size_t>::max());
    std::size_t n = text.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bigram bg{symbol_type(text[i]), symbol_type(text[i + 1])};
        auto it = std::lower_bound(cands.begin(), cands.end(), bg);
        if (it == cands.end() || *it != bg) continue;
        std::size_t idx = std::size_t(it - cands.begin());
        if (last[idx] + 1 == i && last[idx] != std::numeric_limits<std::size_t>::max()) continue;
        freq[idx] = freq[idx] + 1;
        last[idx] = i;
    }
    return freq;
}

}  // namespace detail

// The d most frequent bigrams of the text with exact counts, found with
// O(d) working entries: sweep blocks of d bigram positions, count each
// block's new candidates in one pass over the whole text, and keep the best
// d seen so far.  Bigrams already held are skipped, which caps the work per
// block that repeats earlier content.
template <symbol_text Text>
frequency_table top_d_tradeoff(const Text& text, std::size_t d, unsigned entry_bits,
                               memory_accountant* acct = nullptr) {
    assert(d >= 1);
    frequency_table result(d);
    std::size_t n = text.size();
    if (n < 2) return result;

    memory_accountant::scoped_charge table_guard(acct, std::uint64_t(d) * entry_bits, "top-d table");

    if (d >= n - 1) {
        auto all = all_frequencies(text);
        std::sort(all.begin(), all.end(), pick_before);
        if (all.size() > d) all.resize(d);
        for (const auto& e : all) result.push_unchecked(e);
        return result;
    }

    memory_accountant::scoped_charge cand_guard(acct, std::uint64_t(d) * entry_bits, "top-d candidates");

    std::vector<freq_entry> kept;  // running top d, exact whole-text counts
    std::vector<bigram> cands;
    cands.reserve(d);
    for (std::size_t block = 0; block < n - 1; block += d) {
        std::size_t end = std::min(block + d, n - 1);
        cands.clear();
        for (std::size_t i = block; i < end; ++i)
            cands.push_back({symbol_type(text[i]), symbol_type(text[i + 1])});
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        std::erase_if(cands, [&](bigram bg) {
            return std::any_of(kept.begin(), kept.end(),
                               [bg](const freq_entry& e) { return e.bg == bg; });
        });
        if (cands.empty()) continue;
        auto freqs = detail::count_candidates(text, cands);
        for (std::size_t i = 0; i < cands.size(); ++i) kept.push_back({cands[i], freqs[i]});
        std::sort(kept.begin(), kept.end(), pick_before);
        if (kept.size() > d) kept.resize(d);
    }
    for (const auto& e : kept) result.push_unchecked(e);
    return result;
}

}  // namespace rpss

#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "freq.hpp"
#include "symbols.hpp"

namespace rpss {

// Same contract as frequency_table (identical pick and evict orders, so both
// drive the compressor to the same grammar) but with heap-backed max/min and
// hashed lookup for logarithmic updates.
class frequency_index {
  public:
    frequency_index() = default;
    explicit frequency_index(std::size_t capacity) : capacity_(capacity) {}

    std::size_t size() const { return map_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return map_.empty(); }

    std::vector<freq_entry> entries() const {
        std::vector<freq_entry> out;
        out.reserve(map_.size());
        for (auto [key, idx] : map_) out.push_back(entry_of(idx));
        return out;
    }

    const freq_entry* find(bigram bg) const {
        auto it = map_.find(pair_key(bg));
        if (it == map_.end()) return nullptr;
        scratch_ = entry_of(it->second);
        return &scratch_;
    }

    std::optional<freq_entry> max() const {
        if (max_heap_.empty()) return std::nullopt;
        return entry_of(max_heap_[0]);
    }

    std::optional<std::uint64_t> min_freq() const {
        if (min_heap_.empty()) return std::nullopt;
        return slots_[min_heap_[0]].freq;
    }

    void decrement(bigram bg, std::uint64_t by = 1) {
        auto it = map_.find(pair_key(bg));
        if (it == map_.end()) return;
        std::size_t idx = it->second;
        slots_[idx].freq -= std::min(slots_[idx].freq, by);
        sift_down(true, slots_[idx].in_max);
        sift_up(false, slots_[idx].in_min);
    }

    void erase(bigram bg) {
        auto it = map_.find(pair_key(bg));
        if (it == map_.end()) return;
        remove_slot(it->second);
    }

    void insert(freq_entry e, std::uint64_t& max_evicted) {
        auto it = map_.find(pair_key(e.bg));
        if (it != map_.end()) {
            std::size_t idx = it->second;
            std::uint64_t old = slots_[idx].freq;
            slots_[idx].freq = e.freq;
            if (e.freq >= old) {
                sift_up(true, slots_[idx].in_max);
                sift_down(false, slots_[idx].in_min);
            } else {
                sift_down(true, slots_[idx].in_max);
                sift_up(false, slots_[idx].in_min);
            }
            return;
        }
        if (map_.size() < capacity_) {
            add_slot(e);
            return;
        }
        if (min_heap_.empty()) {
            max_evicted = std::max(max_evicted, e.freq);
            return;
        }
        std::size_t weakest = min_heap_[0];
        if (evict_before(e, entry_of(weakest))) {
            max_evicted = std::max(max_evicted, e.freq);
            return;
        }
        max_evicted = std::max(max_evicted, slots_[weakest].freq);
        remove_slot(weakest);
        add_slot(e);
    }

    void remove_if_freq_below(std::uint64_t min_freq) {
        std::vector<bigram> doomed;
        for (auto [key, idx] : map_)
            if (slots_[idx].freq < min_freq) doomed.push_back(slots_[idx].bg);
        for (bigram bg : doomed) erase(bg);
    }

    void push_unchecked(freq_entry e) {
        assert(map_.size() < capacity_);
        assert(map_.find(pair_key(e.bg)) == map_.end());
        add_slot(e);
    }

  private:
    struct slot {
        bigram bg;
        std::uint64_t freq;
        std::size_t in_max;
        std::size_t in_min;
    };

    freq_entry entry_of(std::size_t idx) const { return {slots_[idx].bg, slots_[idx].freq}; }

    bool above(bool is_max, std::size_t a, std::size_t b) const {
        return is_max ? pick_before(entry_of(a), entry_of(b)) : evict_before(entry_of(a), entry_of(b));
    }

    std::vector<std::size_t>& heap(bool is_max) { return is_max ? max_heap_ : min_heap_; }

    void set_pos(bool is_max, std::size_t slot_idx, std::size_t heap_pos) {
        if (is_max)
            slots_[slot_idx].in_max = heap_pos;
        else
            slots_[slot_idx].in_min = heap_pos;
    }

    void sift_up(bool is_max, std::size_t hi) {
        auto& h = heap(is_max);
        while (hi > 0) {
            std::size_t parent = (hi - 1) / 2;
            if (!above(is_max, h[hi], h[parent])) break;
            std::swap(h[hi], h[parent]);
            set_pos(is_max, h[hi], hi);
            set_pos(is_max, h[parent], parent);
            hi = parent;
        }
    }

    void sift_down(bool is_max, std::size_t hi) {
        auto& h = heap(is_max);
        for (;;) {
            std::size_t best = hi;
            std::size_t l = 2 * hi + 1, r = 2 * hi + 2;
            if (l < h.size() && above(is_max, h[l], h[best])) best = l;
            if (r < h.size() && above(is_max, h[r], h[best])) best = r;
            if (best == hi) break;
            std::swap(h[hi], h[best]);
            set_pos(is_max, h[hi], hi);
            set_pos(is_max, h[best], best);
            hi = best;
        }
    }

    void heap_remove(bool is_max, std::size_t heap_pos) {
        auto& h = heap(is_max);
        std::size_t last = h.size() - 1;
        if (heap_pos != last) {
            h[heap_pos] = h[last];
            set_pos(is_max, h[heap_pos], heap_pos);
        }
        h.pop_back();
        if (heap_pos < h.size()) {
            sift_down(is_max, heap_pos);
            sift_up(is_max, heap_pos);
        }
    }

    void add_slot(freq_entry e) {
        std::size_t idx;
        if (!free_.empty()) {
            idx = free_.back();
            free_.pop_back();
            slots_[idx] = {e.bg, e.freq, 0, 0};
        } else {
            idx = slots_.size();
            slots_.push_back({e.bg, e.freq, 0, 0});
        }
        map_[pair_key(e.bg)] = idx;
        max_heap_.push_back(idx);
        set_pos(true, idx, max_heap_.size() - 1);
        sift_up(true, max_heap_.size() - 1);
        min_heap_.push_back(idx);
        set_pos(false, idx, min_heap_.size() - 1);
        sift_up(false, min_heap_.size() - 1);
    }

    void remove_slot(std::size_t idx) {
        heap_remove(true, slots_[idx].in_max);
        heap_remove(false, slots_[idx].in_min);
        map_.erase(pair_key(slots_[idx].bg));
        free_.push_back(idx);
    }

    std::size_t capacity_ = 0;
    std::vector<slot> slots_;
    std::vector<std::size_t> free_;
    std::vector<std::size_t> max_heap_;
    std::vector<std::size_t> min_heap_;
    std::unordered_map<std::uint64_t, std::size_t> map_;
    mutable freq_entry scratch_;
};

}  // namespace rpss

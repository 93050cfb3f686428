#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <vector>

#include "symbols.hpp"

namespace rpss {

// Fixed-width cell array over a flat bit string, cell 0 in the low bits of
// word 0.  Cells may straddle word boundaries; one guard word past the end
// keeps the two-word read/write paths branch-light.
class packed_text {
  public:
    packed_text() = default;

    packed_text(unsigned width, std::size_t size) { reset(width, size); }

    template <symbol_text Src>
    static packed_text pack(const Src& src, unsigned width) {
        packed_text t(width, src.size());
        for (std::size_t i = 0; i < src.size(); ++i) t.set(i, symbol_type(src[i]));
        return t;
    }

    void reset(unsigned width, std::size_t size) {
        assert(width >= 1 && width <= 32);
        width_ = width;
        len_ = size;
        freed_ = 0;
        words_.assign(words_needed(size, width), 0);
    }

    std::size_t size() const { return len_; }
    // slots ever allocated to the sequence; stays constant across compaction
    std::size_t slots() const { return len_ + freed_; }
    std::size_t freed() const { return freed_; }
    unsigned width() const { return width_; }
    std::uint64_t cell_mask() const { return mask_bits(width_); }

    symbol_type get(std::size_t i) const {
        assert(i < len_);
        std::size_t off = i * width_;
        std::uint64_t lo = words_[off >> 6] >> (off & 63);
        std::uint64_t hi = (off & 63) ? words_[(off >> 6) + 1] << (64 - (off & 63)) : 0;
        return symbol_type((lo | hi) & cell_mask());
    }

    symbol_type operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, symbol_type v) {
        assert(i < len_);
        assert(std::uint64_t(v) <= cell_mask());
        write_bits(i * width_, width_, v);
    }

    // Up to 64 bits worth of consecutive cells in one register, LSB-first.
    std::uint64_t load_cells(std::size_t pos, unsigned count) const {
        assert(count >= 1 && count * width_ <= 64);
        assert(pos + count <= len_);
        std::size_t off = pos * width_;
        std::uint64_t lo = words_[off >> 6] >> (off & 63);
        std::uint64_t hi = (off & 63) ? words_[(off >> 6) + 1] << (64 - (off & 63)) : 0;
        return (lo | hi) & mask_bits(count * width_);
    }

    void store_cells(std::size_t pos, unsigned count, std::uint64_t bits) {
        assert(count >= 1 && count * width_ <= 64);
        assert(pos + count <= len_);
        write_bits(pos * width_, count * width_, bits & mask_bits(count * width_));
    }

    // Grow the cell width in place.  Walking back to front is safe because
    // cell i's new slot starts at i*new_width >= i*width_, so it never
    // overwrites a not-yet-moved cell.  Must not be called with dead cells
    // pending (compact first).
    void widen(unsigned new_width) {
        assert(new_width >= width_ && new_width <= 32);
        if (new_width == width_) return;
        unsigned old_width = width_;
        words_.resize(words_needed(len_, new_width), 0);
        for (std::size_t i = len_; i-- > 0;) {
            std::size_t off = i * old_width;
            std::uint64_t lo = words_[off >> 6] >> (off & 63);
            std::uint64_t hi = (off & 63) ? words_[(off >> 6) + 1] << (64 - (off & 63)) : 0;
            std::uint64_t v = (lo | hi) & mask_bits(old_width);
            write_bits(i * new_width, new_width, v);
        }
        width_ = new_width;
    }

    // Drop every cell holding the all-ones sentinel and close the gaps.
    void compact() {
        std::uint64_t dead = cell_mask();
        std::size_t w = 0;
        for (std::size_t r = 0; r < len_; ++r) {
            std::uint64_t v = get(r);
            if (v == dead) continue;
            if (w != r) write_bits(w * width_, width_, v);
            ++w;
        }
        freed_ += len_ - w;
        len_ = w;
    }

    // Shrink the live length after an external compacting pass.
    void set_live(std::size_t new_len) {
        assert(new_len <= len_);
        freed_ += len_ - new_len;
        len_ = new_len;
    }

    std::vector<symbol_type> to_vector() const {
        std::vector<symbol_type> out(len_);
        for (std::size_t i = 0; i < len_; ++i) out[i] = get(i);
        return out;
    }

  private:
    static std::uint64_t mask_bits(unsigned bits) {
        return bits >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << bits) - 1;
    }

    static std::size_t words_needed(std::size_t cells, unsigned width) {
        return (cells * width + 63) / 64 + 1;  // +1 guard word
    }

    void write_bits(std::size_t off, unsigned bits, std::uint64_t v) {
        std::uint64_t m = mask_bits(bits);
        std::size_t wi = off >> 6;
        unsigned sh = off & 63;
        words_[wi] = (words_[wi] & ~(m << sh)) | (v << sh);
        if (sh + bits > 64) {
            unsigned spill = sh + bits - 64;
            std::uint64_t m2 = mask_bits(spill);
            words_[wi + 1] = (words_[wi + 1] & ~m2) | (v >> (bits - spill));
        }
    }

    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
    std::size_t freed_ = 0;
    unsigned width_ = 8;
};

}  // namespace rpss

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "variants.hpp"

namespace rpss {

struct format_error : std::runtime_error {
    std::size_t offset;
    format_error(const std::string& what, std::size_t off)
        : std::runtime_error(what + " at byte " + std::to_string(off)), offset(off) {}
};

struct corrupt_grammar : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const std::array<std::uint64_t, 256>& crc64_table() {
    static const std::array<std::uint64_t, 256> table = [] {
        std::array<std::uint64_t, 256> t{};
        for (std::uint64_t i = 0; i < 256; ++i) {
            std::uint64_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? (c >> 1) ^ 0xC96C5795D7870F42ull : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

}  // namespace detail

inline std::uint64_t crc64_xz(const std::uint8_t* p, std::size_t n) {
    const auto& table = detail::crc64_table();
    std::uint64_t c = ~0ull;
    for (std::size_t i = 0; i < n; ++i) c = table[(c ^ p[i]) & 0xff] ^ (c >> 8);
    return ~c;
}

inline std::uint64_t crc64_xz(const std::vector<std::uint8_t>& v) {
    return crc64_xz(v.data(), v.size());
}

inline void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(std::uint8_t(v) | 0x80);
        v >>= 7;
    }
    out.push_back(std::uint8_t(v));
}

namespace detail {

struct byte_reader {
    const std::uint8_t* p;
    std::size_t n;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= n) throw format_error("truncated input", pos);
        return p[pos++];
    }

    std::uint64_t varint() {
        std::uint64_t v = 0;
        unsigned shift = 0;
        std::size_t at = pos;
        for (;;) {
            std::uint8_t b = u8();
            if (shift >= 64 || (shift == 63 && (b & 0x7f) > 1))
                throw format_error("varint overflow", at);
            v |= std::uint64_t(b & 0x7f) << shift;
            if (!(b & 0x80)) return v;
            shift += 7;
        }
    }

    std::uint64_t u64le() {
        std::uint64_t v = 0;
        for (unsigned k = 0; k < 8; ++k) v |= std::uint64_t(u8()) << (8 * k);
        return v;
    }
};

}  // namespace detail

struct byte_alphabet {
    std::vector<std::uint8_t> table;            // sorted distinct byte values
    std::array<symbol_type, 256> to_symbol{};

    static byte_alphabet from_bytes(const std::uint8_t* p, std::size_t n) {
        std::array<bool, 256> seen{};
        for (std::size_t i = 0; i < n; ++i) seen[p[i]] = true;
        byte_alphabet ab;
        for (unsigned b = 0; b < 256; ++b) {
            if (!seen[b]) continue;
            ab.to_symbol[b] = symbol_type(ab.table.size());
            ab.table.push_back(std::uint8_t(b));
        }
        return ab;
    }
};

struct grammar_file {
    grammar g;  // terminals are dense indices into alphabet_table
    std::vector<std::uint8_t> alphabet_table;
    std::uint64_t original_len = 0;
    std::uint64_t crc = 0;
    std::uint8_t version = 1;
};

inline std::vector<std::uint8_t> encode_grammar(const grammar& g,
                                                const std::vector<std::uint8_t>& alphabet_table,
                                                std::uint64_t original_len, std::uint64_t crc) {
    assert(g.terminal_count == alphabet_table.size());
    bool all_pairs = true;
    for (const auto& r : g.rules)
        if (r.size() != 2) {
            all_pairs = false;
            break;
        }
    std::vector<std::uint8_t> out;
    out.push_back('R');
    out.push_back('P');
    out.push_back('S');
    out.push_back('S');
    out.push_back(all_pairs ? 1 : 2);
    put_varint(out, original_len);
    const std::size_t sigma = alphabet_table.size();
    put_varint(out, sigma);
    out.insert(out.end(), alphabet_table.begin(), alphabet_table.end());
    put_varint(out, g.rules.size());
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const std::uint64_t base = sigma + i;
        if (!all_pairs) put_varint(out, g.rules[i].size());
        for (symbol_type s : g.rules[i]) {
            assert(s < base);
            put_varint(out, base - s);
        }
    }
    put_varint(out, g.final_sequence.size());
    const std::uint64_t base = sigma + g.rules.size();
    for (symbol_type s : g.final_sequence) {
        assert(s < base);
        put_varint(out, base - s);
    }
    for (unsigned k = 0; k < 8; ++k) out.push_back(std::uint8_t(crc >> (8 * k)));
    return out;
}

inline grammar_file decode_grammar(const std::uint8_t* p, std::size_t n) {
    detail::byte_reader r{p, n};
    static const char magic[4] = {'R', 'P', 'S', 'S'};
    for (unsigned k = 0; k < 4; ++k) {
        std::size_t at = r.pos;
        if (r.u8() != std::uint8_t(magic[k])) throw format_error("bad magic", at);
    }
    grammar_file f;
    {
        std::size_t at = r.pos;
        f.version = r.u8();
        if (f.version != 1 && f.version != 2) throw format_error("unsupported version", at);
    }
    f.original_len = r.varint();
    std::size_t at_sigma = r.pos;
    std::uint64_t sigma = r.varint();
    if (sigma == 0 || sigma > 256) throw format_error("bad alphabet size", at_sigma);
    f.alphabet_table.resize(sigma);
    for (std::size_t i = 0; i < sigma; ++i) {
        std::size_t at = r.pos;
        f.alphabet_table[i] = r.u8();
        if (i > 0 && f.alphabet_table[i] <= f.alphabet_table[i - 1])
            throw format_error("alphabet not strictly increasing", at);
    }
    f.g.terminal_count = sigma;
    std::uint64_t m = r.varint();
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::uint64_t base = sigma + i;
        std::uint64_t len = 2;
        if (f.version == 2) {
            std::size_t at = r.pos;
            len = r.varint();
            if (len < 2) throw format_error("rule too short", at);
        }
        std::vector<symbol_type> rhs;
        rhs.reserve(len);
        for (std::uint64_t k = 0; k < len; ++k) {
            std::size_t at = r.pos;
            std::uint64_t d = r.varint();
            if (d == 0 || d > base) throw format_error("rule symbol out of range", at);
            rhs.push_back(symbol_type(base - d));
        }
        f.g.rules.push_back(std::move(rhs));
    }
    std::uint64_t final_len = r.varint();
    const std::uint64_t base = sigma + m;
    f.g.final_sequence.reserve(final_len);
    for (std::uint64_t k = 0; k < final_len; ++k) {
        std::size_t at = r.pos;
        std::uint64_t d = r.varint();
        if (d == 0 || d > base) throw format_error("sequence symbol out of range", at);
        f.g.final_sequence.push_back(symbol_type(base - d));
    }
    f.crc = r.u64le();
    if (r.pos != n) throw format_error("trailing bytes", r.pos);
    return f;
}

struct compress_result {
    std::vector<std::uint8_t> bytes;
    run_result run;
    std::size_t alphabet = 0;
};

inline compress_result compress_bytes_full(const std::vector<std::uint8_t>& data,
                                           const engine_config& cfg = {}) {
    if (data.empty()) throw std::invalid_argument("empty input");
    byte_alphabet ab = byte_alphabet::from_bytes(data.data(), data.size());
    std::vector<symbol_type> syms(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) syms[i] = ab.to_symbol[data[i]];
    compress_result out;
    out.run = run_strategy(syms, ab.table.size(), cfg);
    out.alphabet = ab.table.size();
    out.bytes = encode_grammar(out.run.g, ab.table, data.size(), crc64_xz(data));
    return out;
}

inline std::vector<std::uint8_t> compress_bytes(const std::vector<std::uint8_t>& data,
                                                const engine_config& cfg = {}) {
    return compress_bytes_full(data, cfg).bytes;
}

inline std::vector<std::uint8_t> decompress_bytes(const std::uint8_t* p, std::size_t n) {
    grammar_file f = decode_grammar(p, n);
    std::vector<symbol_type> syms = f.g.expand();
    if (syms.size() != f.original_len) throw corrupt_grammar("expanded length mismatch");
    std::vector<std::uint8_t> out(syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) {
        assert(syms[i] < f.alphabet_table.size());
        out[i] = f.alphabet_table[syms[i]];
    }
    if (crc64_xz(out) != f.crc) throw corrupt_grammar("checksum mismatch");
    return out;
}

inline std::vector<std::uint8_t> decompress_bytes(const std::vector<std::uint8_t>& data) {
    return decompress_bytes(data.data(), data.size());
}

}  // namespace rpss

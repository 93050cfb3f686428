#pragma once

#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include "codec.hpp"

namespace rpss {

struct bench_row {
    std::string dataset;
    std::size_t prefix_bytes = 0;
    double seconds = 0.0;  // CPU time of the compression run
    std::size_t turns = 0;
    std::size_t rounds = 0;
    std::size_t rules = 0;
    std::size_t grammar_size = 0;
    std::uint64_t peak_bits = 0;
};

inline constexpr const char* bench_csv_header =
    "dataset,prefix_bytes,seconds,turns,rounds,rules,grammar_size,peak_bits";

inline bench_row bench_one(const std::string& dataset, const std::vector<std::uint8_t>& data,
                           const engine_config& cfg = {}) {
    byte_alphabet ab = byte_alphabet::from_bytes(data.data(), data.size());
    std::vector<symbol_type> syms(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) syms[i] = ab.to_symbol[data[i]];
    std::clock_t t0 = std::clock();
    run_result res = run_strategy(syms, ab.table.size(), cfg);
    std::clock_t t1 = std::clock();
    bench_row row;
    row.dataset = dataset;
    row.prefix_bytes = data.size();
    row.seconds = double(t1 - t0) / CLOCKS_PER_SEC;
    row.turns = res.turns.size();
    row.rounds = res.round_count;
    row.rules = res.g.rules.size();
    row.grammar_size = res.g.size();
    row.peak_bits = res.peak_bits;
    return row;
}

inline std::string bench_csv_line(const bench_row& r) {
    char num[64];
    std::snprintf(num, sizeof num, "%.6f", r.seconds);
    std::string s = r.dataset;
    s += ',';
    s += std::to_string(r.prefix_bytes);
    s += ',';
    s += num;
    s += ',';
    s += std::to_string(r.turns);
    s += ',';
    s += std::to_string(r.rounds);
    s += ',';
    s += std::to_string(r.rules);
    s += ',';
    s += std::to_string(r.grammar_size);
    s += ',';
    s += std::to_string(r.peak_bits);
    return s;
}

}  // namespace rpss

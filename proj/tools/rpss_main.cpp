#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <rpss/rpss.hpp>

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::size_t parse_size(const std::string& s) {
    if (s.empty()) throw std::runtime_error("empty size");
    std::size_t mult = 1;
    std::string digits = s;
    char suffix = s.back();
    if (suffix == 'K' || suffix == 'k') {
        mult = 1024;
        digits.pop_back();
    } else if (suffix == 'M' || suffix == 'm') {
        mult = 1024 * 1024;
        digits.pop_back();
    }
    std::size_t pos = 0;
    unsigned long long v = std::stoull(digits, &pos);
    if (pos != digits.size() || v == 0) throw std::runtime_error("bad size: " + s);
    return std::size_t(v) * mult;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start );
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar compressor with working-space-bounded pair replacement"};
    app.require_subcommand(1);

    std::string in_path, out_path, orig_path, dataset;
    std::string prefixes = "1K,2K,4K";
    rpss::engine_config cfg;
    bool audit = true;

    const std::map<std::string, rpss::strategy> smap{
        {"smallspace", rpss::strategy::smallspace},
        {"naive", rpss::strategy::naive},
        {"bitparallel", rpss::strategy::bitparallel},
        {"hybrid", rpss::strategy::hybrid},
        {"mr", rpss::strategy::mr}};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--strategy", cfg.strat, "replacement strategy")
            ->transform(CLI::CheckedTransformer(smap, CLI::ignore_case));
        sub->add_option("--c", cfg.policy.c, "working-space budget constant");
        sub->add_option("--f0", cfg.policy.f0, "first-round table capacity");
        sub->add_flag("--audit,!--no-audit", audit, "enforce the working-space budget");
    };

    auto* cmd_compress = app.add_subcommand("compress", "compress a file into a grammar file");
    cmd_compress->add_option("input", in_path, "input file")->required();
    cmd_compress->add_option("output", out_path, "output grammar file")->required();
    add_common(cmd_compress);

    auto* cmd_decompress = app.add_subcommand("decompress", "restore a file from a grammar file");
    cmd_decompress->add_option("input", in_path, "grammar file")->required();
    cmd_decompress->add_option("output", out_path, "output file")->required();

    auto* cmd_stats = app.add_subcommand("stats", "compress and report grammar statistics");
    cmd_stats->add_option("input", in_path, "input file")->required();
    add_common(cmd_stats);

    auto* cmd_verify =
        app.add_subcommand("verify", "decompress a grammar file and compare with the original");
    cmd_verify->add_option("input", in_path, "grammar file")->required();
    cmd_verify->add_option("original", orig_path, "original file")->required();

    auto* cmd_bench = app.add_subcommand("bench", "time compression over growing prefixes (CSV)");
    cmd_bench->add_option("dataset", dataset, "input file, or 'unary' for a generated run")
        ->required();
    cmd_bench->add_option("--prefixes", prefixes, "comma list of prefix sizes (K/M suffixes)")
        ->capture_default_str();
    add_common(cmd_bench);

    CLI11_PARSE(app, argc, argv);
    cfg.audit = audit;

    try {
        if (app.got_subcommand(cmd_compress)) {
            auto data = read_file(in_path);
            auto res = rpss::compress_bytes_full(data, cfg);
            write_file(out_path, res.bytes);
            std::cout << "compressed " << data.size() << " -> " << res.bytes.size() << " bytes ("
                      << res.run.g.rules.size() << " rules)\n";
        } else if (app.got_subcommand(cmd_decompress)) {
            auto data = read_file(in_path);
            auto out = rpss::decompress_bytes(data);
            write_file(out_path, out);
            std::cout << "decompressed " << data.size() << " -> " << out.size() << " bytes\n";
        } else if (app.got_subcommand(cmd_stats)) {
            auto data = read_file(in_path);
            auto res = rpss::compress_bytes_full(data, cfg);
            std::cout << "input: " << in_path << " (" << data.size() << " bytes, alphabet "
                      << res.alphabet << ")\n";
            std::cout << "compressed: " << res.bytes.size() << " bytes\n";
            std::cout << "m=" << res.run.g.rules.size() << "\n";
            std::cout << "turns=" << res.run.turns.size() << "\n";
            std::cout << "rounds=" << res.run.round_count << "\n";
            std::cout << "grammar_size=" << res.run.g.size() << "\n";
            std::cout << "final_len=" << res.run.g.final_sequence.size() << "\n";
            std::cout << "peak_bits=" << res.run.peak_bits << "\n";
            std::cout << "budget_bits=" << res.run.budget_bits << "\n";
        } else if (app.got_subcommand(cmd_verify)) {
            auto data = read_file(in_path);
            auto orig = read_file(orig_path);
            auto out = rpss::decompress_bytes(data);
            if (out != orig) {
                std::cerr << "verify failed: content mismatch\n";
                return 1;
            }
            std::cout << "ok: " << out.size() << " bytes round-trip\n";
        } else if (app.got_subcommand(cmd_bench)) {
            std::vector<std::uint8_t> data;
            std::string name;
            if (dataset == "unary") {
                name = "unary";
            } else {
                data = read_file(dataset);
                name = std::filesystem::path(dataset).filename().string();
            }
            std::cout << rpss::bench_csv_header << "\n";
            for (const auto& ps : split_commas(prefixes)) {
                std::size_t want = parse_size(ps);
                std::vector<std::uint8_t> slice;
                if (dataset == "unary") {
                    slice.assign(want, std::uint8_t('a'));
                } else {
                    if (want > data.size())
                        throw std::runtime_error("prefix " + ps + " larger than dataset");
                    slice.assign(data.begin(), data.begin() + std::ptrdiff_t(want));
                }
                std::cout << rpss::bench_csv_line(rpss::bench_one(name, slice, cfg)) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}

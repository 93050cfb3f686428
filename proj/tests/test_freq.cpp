#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include <rpss/capacity.hpp>
#include <rpss/freq.hpp>
#include <rpss/frequency_index.hpp>
#include <rpss/memory_accountant.hpp>

#include "test_util.hpp"

using rpss::bigram;
using rpss::freq_entry;
using rpss::symbol_type;

TEST_CASE("greedy bigram counting tiles runs from the left") {
    auto aaaa = testutil::dense("aaaa");
    REQUIRE(rpss::bigram_frequency(aaaa.syms, {0, 0}) == 2);
    auto aaa = testutil::dense("aaa");
    REQUIRE(rpss::bigram_frequency(aaa.syms, {0, 0}) == 1);
    auto ababab = testutil::dense("ababab");
    REQUIRE(rpss::bigram_frequency(ababab.syms, {0, 1}) == 3);
    REQUIRE(rpss::bigram_frequency(ababab.syms, {1, 0}) == 2);
    REQUIRE(rpss::bigram_frequency(ababab.syms, {1, 1}) == 0);
}

TEST_CASE("counts on the worked example text") {
    auto d = testutil::dense("cabaacabcabaacaaabcab");
    symbol_type a = d.id.at('a'), b = d.id.at('b'), c = d.id.at('c');
    REQUIRE(rpss::bigram_frequency(d.syms, {a, b}) == 5);
    REQUIRE(rpss::bigram_frequency(d.syms, {c, a}) == 5);
    REQUIRE(rpss::bigram_frequency(d.syms, {a, a}) == 3);
}

TEST_CASE("all_frequencies equals the brute-force per-pair count") {
    testutil::rng64 rng(20);
    for (int rep = 0; rep < 600; ++rep) {
        std::size_t sigma = 1 + rng.below(5);
        std::size_t n = 1 + rng.below(150);
        auto text = testutil::random_text(rng, n, sigma);
        if (rep % 3 == 0) {
            std::size_t at = rng.below(n);
            std::size_t len = std::min(n - at, std::size_t(rng.below(80)));
            symbol_type s = symbol_type(rng.below(sigma));
            for (std::size_t k = 0; k < len; ++k) text[at + k] = s;
        }
        auto got = rpss::all_frequencies(text);
        auto want = testutil::brute_all_counts(text);
        REQUIRE(got.size() == want.size());
        for (const auto& e : got) {
            auto it = want.find({e.bg.left, e.bg.right});
            REQUIRE(it != want.end());
            REQUIRE(e.freq == it->second);
        }
    }
}

TEST_CASE("pick and evict orders are mirrors") {
    freq_entry lo{{3, 3}, 2}, hi{{0, 0}, 9}, hi_lex{{0, 1}, 9};
    REQUIRE(rpss::pick_before(hi, lo));
    REQUIRE(rpss::pick_before(hi, hi_lex));
    REQUIRE(rpss::evict_before(lo, hi));
    REQUIRE(rpss::evict_before(hi_lex, hi));
    // strict total order: exactly one direction holds for distinct entries
    testutil::rng64 rng(22);
    for (int rep = 0; rep < 300; ++rep) {
        freq_entry a{{symbol_type(rng.below(3)), symbol_type(rng.below(3))}, rng.below(4)};
        freq_entry b{{symbol_type(rng.below(3)), symbol_type(rng.below(3))}, rng.below(4)};
        if (a.bg == b.bg && a.freq == b.freq) {
            REQUIRE(!rpss::pick_before(a, b));
            REQUIRE(!rpss::evict_before(a, b));
        } else {
            REQUIRE(rpss::pick_before(a, b) != rpss::pick_before(b, a));
            REQUIRE(rpss::evict_before(a, b) == rpss::pick_before(b, a));
        }
    }
}

TEST_CASE("frequency_table keeps the strongest entries and reports evictions") {
    rpss::frequency_table t(2);
    std::uint64_t max_evicted = 0;
    t.insert({{0, 1}, 5}, max_evicted);
    t.insert({{1, 0}, 7}, max_evicted);
    REQUIRE(max_evicted == 0);
    // weaker than both residents: dropped, its own freq recorded
    t.insert({{2, 2}, 3}, max_evicted);
    REQUIRE(max_evicted == 3);
    REQUIRE(t.find({2, 2}) == nullptr);
    // stronger: weakest resident goes
    t.insert({{2, 0}, 9}, max_evicted);
    REQUIRE(max_evicted == 5);
    REQUIRE(t.find({0, 1}) == nullptr);
    REQUIRE(t.find({2, 0}) != nullptr);
    // equal freq, lex-later than the weakest resident: newcomer loses
    t.insert({{3, 3}, 7}, max_evicted);
    REQUIRE(t.find({3, 3}) == nullptr);
    REQUIRE(max_evicted == 7);
    // equal freq, lex-earlier: resident {1,0} freq 7 is evicted
    t.insert({{0, 0}, 7}, max_evicted);
    REQUIRE(t.find({0, 0}) != nullptr);
    REQUIRE(t.find({1, 0}) == nullptr);

    auto m = t.max();
    REQUIRE(m.has_value());
    REQUIRE(m->bg == bigram{2, 0});
    t.decrement({2, 0});
    REQUIRE(t.find({2, 0})->freq == 8);
    t.decrement({2, 0}, 100);
    REQUIRE(t.find({2, 0})->freq == 0);
    t.remove_if_freq_below(2);
    REQUIRE(t.size() == 1);
    t.erase({0, 0});
    REQUIRE(t.empty());
}

TEST_CASE("insert on an existing bigram replaces its count") {
    rpss::frequency_table t(2);
    std::uint64_t me = 0;
    t.insert({{1, 2}, 4}, me);
    t.insert({{1, 2}, 9}, me);
    REQUIRE(t.size() == 1);
    REQUIRE(t.find({1, 2})->freq == 9);
    REQUIRE(me == 0);
}

TEST_CASE("count_candidates matches per-candidate greedy counts") {
    testutil::rng64 rng(23);
    for (int rep = 0; rep < 300; ++rep) {
        std::size_t sigma = 1 + rng.below(4);
        std::size_t n = 2 + rng.below(120);
        auto text = testutil::random_text(rng, n, sigma);
        if (rep % 2 == 0) {
            std::size_t at = rng.below(n);
            std::size_t len = std::min(n - at, std::size_t(rng.below(60)));
            for (std::size_t k = 0; k < len; ++k) text[at + k] = 0;
        }
        std::vector<bigram> cands;
        for (int k = 0; k < 6; ++k)
            cands.push_back({symbol_type(rng.below(sigma)), symbol_type(rng.below(sigma))});
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        auto freqs = rpss::detail::count_candidates(text, cands);
        for (std::size_t i = 0; i < cands.size(); ++i)
            REQUIRE(freqs[i] == testutil::brute_greedy_count(text, cands[i]));
    }
}

TEST_CASE("top_d_tradeoff finds the exact top d in both regimes") {
    testutil::rng64 rng(24);
    for (int rep = 0; rep < 400; ++rep) {
        std::size_t sigma = 1 + rng.below(5);
        std::size_t n = 2 + rng.below(140);
        std::size_t d = 1 + rng.below(rep % 5 == 0 ? n + 4 : 7);  // sometimes d >= n-1
        auto text = testutil::random_text(rng, n, sigma);
        if (rep % 3 == 0) {
            std::size_t at = rng.below(n);
            std::size_t len = std::min(n - at, std::size_t(rng.below(100)));
            symbol_type s = symbol_type(rng.below(sigma));
            for (std::size_t k = 0; k < len; ++k) text[at + k] = s;
        }
        auto got = rpss::top_d_tradeoff(text, d, 16).entries();
        std::vector<freq_entry> want;
        for (const auto& kv : testutil::brute_all_counts(text))
            want.push_back({{kv.first.first, kv.first.second}, kv.second});
        std::sort(want.begin(), want.end(), rpss::pick_before);
        if (want.size() > d) want.resize(d);
        auto by_bg = [](const freq_entry& a, const freq_entry& b) { return a.bg < b.bg; };
        std::sort(got.begin(), got.end(), by_bg);
        std::sort(want.begin(), want.end(), by_bg);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].bg == want[i].bg);
            REQUIRE(got[i].freq == want[i].freq);
        }
    }
}

TEST_CASE("frequency_index mirrors frequency_table step for step") {
    testutil::rng64 rng(25);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t cap = 1 + rng.below(6);
        rpss::frequency_table tab(cap);
        rpss::frequency_index idx(cap);
        std::uint64_t me_t = 0, me_i = 0;
        for (int op = 0; op < 150; ++op) {
            unsigned what = unsigned(rng.below(100));
            bigram bg{symbol_type(rng.below(4)), symbol_type(rng.below(4))};
            if (what < 45) {
                freq_entry e{bg, 1 + rng.below(9)};
                tab.insert(e, me_t);
                idx.insert(e, me_i);
            } else if (what < 70) {
                tab.decrement(bg);
                idx.decrement(bg);
            } else if (what < 80) {
                tab.erase(bg);
                idx.erase(bg);
            } else if (what < 90) {
                std::uint64_t th = rng.below(6);
                tab.remove_if_freq_below(th);
                idx.remove_if_freq_below(th);
            } else {
                const freq_entry* a = tab.find(bg);
                const freq_entry* b = idx.find(bg);
                REQUIRE((a == nullptr) == (b == nullptr));
                if (a) {
                    REQUIRE(a->bg == b->bg);
                    REQUIRE(a->freq == b->freq);
                }
            }
            REQUIRE(me_t == me_i);
            auto ea = tab.entries();
            auto eb = idx.entries();
            auto by_bg = [](const freq_entry& u, const freq_entry& v) { return u.bg < v.bg; };
            std::sort(ea.begin(), ea.end(), by_bg);
            std::sort(eb.begin(), eb.end(), by_bg);
            REQUIRE(ea.size() == eb.size());
            for (std::size_t i = 0; i < ea.size(); ++i) {
                REQUIRE(ea[i].bg == eb[i].bg);
                REQUIRE(ea[i].freq == eb[i].freq);
            }
            auto ma = tab.max();
            auto mb = idx.max();
            REQUIRE(ma.has_value() == mb.has_value());
            if (ma) {
                REQUIRE(ma->bg == mb->bg);
                REQUIRE(ma->freq == mb->freq);
            }
            auto mf = idx.min_freq();
            if (ea.empty()) {
                REQUIRE(!mf.has_value());
            } else {
                std::uint64_t lo = ~std::uint64_t(0);
                for (const auto& e : ea) lo = std::min(lo, e.freq);
                REQUIRE(mf.has_value());
                REQUIRE(*mf == lo);
            }
        }
    }
}

TEST_CASE("table entry cost covers the square alphabet times half the text") {
    REQUIRE(rpss::table_entry_bits(1, 4) == 1);                  // lg 2
    REQUIRE(rpss::table_entry_bits(2, 8) == 4);                  // lg 16
    REQUIRE(rpss::table_entry_bits(256, 1 << 20) == 35);         // lg(2^35)
    REQUIRE(rpss::table_entry_bits(~std::uint64_t(0) >> 16, 2) == 64);  // clipped
}

TEST_CASE("next round capacity on the pinned cases") {
    rpss::capacity_policy p{4, 1.0, 3};
    // sigma_next=1, n_i=4 makes delta 1 and alpha*beta exactly 1
    REQUIRE(rpss::capacity_beta(4, 1, 1, 4) == 1.0);
    REQUIRE(rpss::capacity_gamma(1.0, 1.0) == Catch::Approx(1.4));
    std::uint64_t big = 1 << 30;
    REQUIRE(rpss::next_capacity(p, 5, 1, 4, 4, big) == 7);
    REQUIRE(rpss::next_capacity(p, 1, 1, 4, 4, big) == 3);
    // the remaining-budget cap bites but progress is still guaranteed
    REQUIRE(rpss::next_capacity(p, 5, 1, 4, 4, 3) == 6);
    // the geometric floor dominates once the additive step is tiny
    rpss::capacity_policy slow{4, 100.0, 3};
    std::uint64_t f = 100;
    std::uint64_t nxt = rpss::next_capacity(slow, f, 1, 4, 4, big);
    double gamma = rpss::capacity_gamma(100.0, rpss::capacity_beta(4, 1, 1, 4));
    REQUIRE(nxt >= std::uint64_t(std::ceil(gamma * double(f))));
    REQUIRE(nxt > f);
}

TEST_CASE("working-space budget grows with the alphabet and enforces itself") {
    rpss::memory_accountant acct(1024, 4, 1, true);
    REQUIRE(acct.budget_bits() == (1024 / 4) * 10 + 64 * 10);
    acct.note_alphabet(4);
    REQUIRE(acct.budget_bits() == 2560 + 640);  // text term still smaller
    acct.note_alphabet(256);
    REQUIRE(acct.budget_bits() == 1024 * 8 + 640);
    acct.note_alphabet(2);  // never shrinks
    REQUIRE(acct.budget_bits() == 1024 * 8 + 640);

    acct.charge(8832, "fill");
    REQUIRE(acct.charged_bits() == 8832);
    REQUIRE(acct.peak_bits() == 8832);
    REQUIRE_THROWS_AS(acct.charge(1, "overflow"), rpss::budget_exceeded);
    try {
        acct.charge(1, "again");
    } catch (const rpss::budget_exceeded& e) {
        REQUIRE(e.label == "again");
        REQUIRE(e.charged > e.budget);
    }
    acct.discharge(~std::uint64_t(0));
    REQUIRE(acct.charged_bits() == 0);

    rpss::memory_accountant lax(16, 4, 1, false);
    lax.charge(1 << 20, "huge");
    REQUIRE(lax.peak_bits() == 1 << 20);

    {
        rpss::memory_accountant::scoped_charge guard(&acct, 100, "scoped");
        REQUIRE(acct.charged_bits() == 100);
    }
    REQUIRE(acct.charged_bits() == 0);
    { rpss::memory_accountant::scoped_charge guard(nullptr, 100, "null"); }
}

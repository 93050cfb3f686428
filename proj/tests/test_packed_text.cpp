#include <catch2/catch_amalgamated.hpp>

#include <rpss/packed_text.hpp>

#include "test_util.hpp"

using rpss::packed_text;
using rpss::symbol_type;

TEST_CASE("set and get round-trip across widths") {
    testutil::rng64 rng(1);
    for (unsigned width = 1; width <= 32; ++width) {
        const std::size_t n = 200 + rng.below(100);
        const std::uint64_t top = width >= 32 ? 0xffffffffull : (1ull << width) - 1;
        packed_text t(width, n);
        std::vector<symbol_type> ref(n, 0);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(t.get(i) == 0);
        for (int pass = 0; pass < 3; ++pass) {
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t i = rng.below(n);
                symbol_type v = symbol_type(rng.next() & top);
                t.set(i, v);
                ref[i] = v;
            }
            for (std::size_t i = 0; i < n; ++i) REQUIRE(t.get(i) == ref[i]);
        }
    }
}

TEST_CASE("pack copies a vector") {
    std::vector<symbol_type> src{3, 1, 4, 1, 5, 9, 2, 6};
    auto t = packed_text::pack(src, 4);
    REQUIRE(t.size() == src.size());
    REQUIRE(t.to_vector() == src);
}

TEST_CASE("load_cells matches per-cell gets") {
    testutil::rng64 rng(2);
    for (unsigned width : {1u, 3u, 5u, 7u, 8u, 11u, 16u, 21u, 32u}) {
        const std::size_t n = 150;
        const std::uint64_t top = width >= 32 ? 0xffffffffull : (1ull << width) - 1;
        packed_text t(width, n);
        for (std::size_t i = 0; i < n; ++i) t.set(i, symbol_type(rng.next() & top));
        unsigned q = 64 / width;
        for (std::size_t pos = 0; pos + 1 <= n; pos += 1 + rng.below(3)) {
            unsigned count = unsigned(1 + rng.below(q));
            if (pos + count > n) count = unsigned(n - pos);
            std::uint64_t bits = t.load_cells(pos, count);
            for (unsigned k = 0; k < count; ++k) {
                std::uint64_t cell =
                    (bits >> (k * width)) & (width >= 64 ? ~0ull : ((1ull << width) - 1));
                REQUIRE(cell == t.get(pos + k));
            }
        }
    }
}

TEST_CASE("store_cells matches per-cell sets") {
    testutil::rng64 rng(3);
    for (unsigned width : {2u, 3u, 6u, 9u, 13u, 16u}) {
        const std::size_t n = 120;
        packed_text a(width, n), b(width, n);
        const std::uint64_t top = (1ull << width) - 1;
        for (std::size_t i = 0; i < n; ++i) {
            symbol_type v = symbol_type(rng.next() & top);
            a.set(i, v);
            b.set(i, v);
        }
        unsigned q = 64 / width;
        for (int rep = 0; rep < 200; ++rep) {
            std::size_t pos = rng.below(n - 1);
            unsigned count = unsigned(1 + rng.below(q));
            if (pos + count > n) count = unsigned(n - pos);
            std::uint64_t bits = 0;
            for (unsigned k = 0; k < count; ++k) {
                symbol_type v = symbol_type(rng.next() & top);
                bits |= std::uint64_t(v) << (k * width);
                b.set(pos + k, v);
            }
            a.store_cells(pos, count, bits);
        }
        REQUIRE(a.to_vector() == b.to_vector());
    }
}

TEST_CASE("widen preserves contents") {
    testutil::rng64 rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        unsigned w1 = unsigned(1 + rng.below(16));
        unsigned w2 = unsigned(w1 + rng.below(33 - w1));
        const std::size_t n = 1 + rng.below(300);
        packed_text t(w1, n);
        const std::uint64_t top = (1ull << w1) - 1;
        std::vector<symbol_type> ref(n);
        for (std::size_t i = 0; i < n; ++i) {
            ref[i] = symbol_type(rng.next() & top);
            t.set(i, ref[i]);
        }
        t.widen(w2);
        REQUIRE(t.width() == w2);
        REQUIRE(t.to_vector() == ref);
    }
}

TEST_CASE("compact removes sentinel cells and keeps slots") {
    packed_text t(3, 9);
    std::vector<symbol_type> vals{1, 7, 2, 7, 7, 3, 4, 7, 5};
    for (std::size_t i = 0; i < vals.size(); ++i) t.set(i, vals[i]);
    REQUIRE(t.slots() == 9);
    t.compact();
    REQUIRE(t.to_vector() == std::vector<symbol_type>{1, 2, 3, 4, 5});
    REQUIRE(t.size() == 5);
    REQUIRE(t.freed() == 4);
    REQUIRE(t.slots() == 9);
}

TEST_CASE("set_live truncates and records freed slots") {
    packed_text t(4, 10);
    for (std::size_t i = 0; i < 10; ++i) t.set(i, symbol_type(i));
    t.set_live(6);
    REQUIRE(t.size() == 6);
    REQUIRE(t.slots() == 10);
    REQUIRE(t.to_vector() == std::vector<symbol_type>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("cells straddling word boundaries stay intact") {
    // width 5: cell 12 straddles bits 60..64
    packed_text t(5, 30);
    t.set(12, 0b10101);
    t.set(11, 0);
    t.set(13, 0);
    REQUIRE(t.get(12) == 0b10101);
    t.set(12, 0b01010);
    REQUIRE(t.get(12) == 0b01010);
}
